#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mirage/judge.hpp"
#include "mirage/maps.hpp"
#include "mirage/metric_score.hpp"
#include "mirage/text.hpp"
#include "mirage/types.hpp"

namespace mirage {

// Importance weighting for the Info metrics. Weighted scores are normalized
// by the weight sum so they stay proportions; with every weight 1.0 the fold
// is bit-identical to the unweighted mean.
struct WeightSpec {
    bool weighted = false;
    const std::map<std::string, double>* overrides = nullptr;

    double weight_for(const Subclaim& c) const {
        if (!weighted) return 1.0;
        if (overrides) {
            auto it = overrides->find(c.id);
            if (it != overrides->end()) return it->second;
        }
        return c.importance;
    }
};

// Source-quality weighting for the Cite metrics: per-claim contributions are
// multiplied by the quality of the sources involved (argmax source in
// max-style scoring, mean quality of the judged set otherwise).
struct SourceQuality {
    const std::map<std::string, double>* weights = nullptr;

    bool active() const { return weights != nullptr; }

    double of(const std::string& source_id) const {
        if (!weights) return 1.0;
        auto it = weights->find(source_id);
        return it == weights->end() ? 1.0 : it->second;
    }

    double mean_of(const std::vector<std::string>& ids) const {
        if (!weights || ids.empty()) return 1.0;
        double sum = 0.0;
        for (const auto& id : ids) sum += of(id);
        return sum / static_cast<double>(ids.size());
    }
};

namespace detail {

inline JudgeRequest claim_request(const ClaimSet& owner, const Subclaim& c, Task task,
                                  Hypothesis hypothesis) {
    JudgeRequest req;
    req.task = task;
    req.claim_text = c.text;
    req.claim_context = owner.context_for(c);
    req.hypothesis = std::move(hypothesis);
    req.subject_id = c.id;
    return req;
}

// Support of one claim against a set of sources: multi mode issues one joint
// judgment under the downsampling loop; single mode takes the max over plain
// per-source judgments at 1 fps.
inline ClaimContribution support_against_sources(const ClaimSet& owner, const Subclaim& c,
                                                 const std::vector<std::string>& source_ids,
                                                 SourceMode mode, Judge& judge, Backend& backend,
                                                 const SourceQuality& quality = {}) {
    ClaimContribution out;
    if (source_ids.empty()) {
        out.score = 0.0;
        out.note = "empty_citations";
        return out;
    }
    if (mode == SourceMode::multi) {
        JudgeRequest req =
            claim_request(owner, c, Task::claim_vs_video, Hypothesis::of_sources(source_ids));
        SupportJudgment j = judge.score_with_downsampling(req, backend);
        out.score = j.score * quality.mean_of(source_ids);
        if (quality.active()) out.note = "source_quality=" + format_double(quality.mean_of(source_ids));
        return out;
    }
    bool first = true;
    double best = 0.0;
    std::string best_source;
    for (const auto& sid : source_ids) {
        JudgeRequest req =
            claim_request(owner, c, Task::claim_vs_video, Hypothesis::of_sources({sid}));
        req.params["fps"] = "1";
        double s = judge.score(req, backend).score * quality.of(sid);
        if (first || s > best) {
            best = s;
            best_source = sid;
            first = false;
        }
    }
    out.score = best;
    out.chosen_source = best_source;
    return out;
}

// Support of one claim against a body of text; empty text is an immediate 0
// with no backend traffic.
inline ClaimContribution support_against_text(const ClaimSet& owner, const Subclaim& c,
                                              const std::string& text, Judge& judge,
                                              Backend& backend) {
    ClaimContribution out;
    if (trim(text).empty()) {
        out.score = 0.0;
        out.note = "empty_hypothesis";
        return out;
    }
    JudgeRequest req = claim_request(owner, c, Task::claim_vs_text, Hypothesis::of_text(text));
    out.score = judge.score(req, backend).score;
    return out;
}

}  // namespace detail

// Proportion of predicted subclaims supported by the evidence collection.
inline MetricScore info_precision_collection(const ClaimSet& claims, const Topic& topic,
                                             SourceMode mode, Judge& judge, Backend& backend,
                                             const WeightSpec& weights = {}) {
    if (claims.claims.empty()) {
        throw PreconditionError("info precision requires a non-empty claim set");
    }
    if (topic.sources.empty()) {
        throw PreconditionError("collection precision requires a topic with sources");
    }
    MetricScore score;
    score.variant = {MetricKind::info_p, Basis::collection, mode, weights.weighted};
    detail::MeanFold fold;
    std::vector<std::string> all_ids = topic.source_ids();
    for (const auto& c : claims.claims) {
        ClaimContribution contrib =
            detail::support_against_sources(claims, c, all_ids, mode, judge, backend);
        contrib.weight = weights.weight_for(c);
        fold.add(contrib.score, contrib.weight);
        score.per_claim[c.id] = std::move(contrib);
    }
    score.value = fold.value();
    return score;
}

// Proportion of predicted subclaims supported by the reference text.
inline MetricScore info_precision_reference(const ClaimSet& claims, const Document& reference,
                                            Judge& judge, Backend& backend,
                                            const WeightSpec& weights = {}) {
    if (claims.claims.empty()) {
        throw PreconditionError("info precision requires a non-empty claim set");
    }
    MetricScore score;
    score.variant = {MetricKind::info_p, Basis::reference, SourceMode::none, weights.weighted};
    const std::string ref_text = reference.text();
    detail::MeanFold fold;
    for (const auto& c : claims.claims) {
        ClaimContribution contrib =
            detail::support_against_text(claims, c, ref_text, judge, backend);
        contrib.weight = weights.weight_for(c);
        fold.add(contrib.score, contrib.weight);
        score.per_claim[c.id] = std::move(contrib);
    }
    score.value = fold.value();
    return score;
}

// Coverage of reference subclaims by the prediction.
inline MetricScore info_recall(const ClaimSet& ref_claims, const Document& prediction,
                               Judge& judge, Backend& backend, const WeightSpec& weights = {}) {
    if (ref_claims.claims.empty()) {
        throw PreconditionError("info recall requires a non-empty reference claim set");
    }
    MetricScore score;
    score.variant = {MetricKind::info_r, Basis::reference, SourceMode::none, weights.weighted};
    const std::string pred_text = prediction.text();
    detail::MeanFold fold;
    for (const auto& c : ref_claims.claims) {
        ClaimContribution contrib =
            detail::support_against_text(ref_claims, c, pred_text, judge, backend);
        contrib.weight = weights.weight_for(c);
        fold.add(contrib.score, contrib.weight);
        score.per_claim[c.id] = std::move(contrib);
    }
    score.value = fold.value();
    return score;
}

// Proportion of predicted subclaims supported by their cited sources.
// Claims whose sentences cite nothing stay in the denominator at score 0.
inline MetricScore cite_precision_collection(const ClaimSet& claims, const CitationMap& cmap,
                                             SourceMode mode, Judge& judge, Backend& backend,
                                             const SourceQuality& quality = {}) {
    if (claims.claims.empty()) {
        throw PreconditionError("cite precision requires a non-empty claim set");
    }
    MetricScore score;
    score.variant = {MetricKind::cite_p, Basis::collection, mode, quality.active()};
    detail::MeanFold fold;
    for (const auto& c : claims.claims) {
        const std::vector<std::string>* cited = cmap.find(c.id);
        if (!cited) {
            throw PreconditionError("citation map has no entry for claim '" + c.id + "'");
        }
        ClaimContribution contrib =
            detail::support_against_sources(claims, c, *cited, mode, judge, backend, quality);
        fold.add(contrib.score, contrib.weight);
        score.per_claim[c.id] = std::move(contrib);
    }
    score.value = fold.value();
    return score;
}

// Reference variant of citation support: every predicted claim is judged
// against the reference subclaims grounded in any source it cites.
inline MetricScore cite_precision_reference(const ClaimSet& claims, const CitationMap& cmap,
                                            const GroundingMap& gmap, const ClaimSet& ref_claims,
                                            Judge& judge, Backend& backend,
                                            const SourceQuality& quality = {}) {
    if (claims.claims.empty()) {
        throw PreconditionError("cite precision requires a non-empty claim set");
    }
    MetricScore score;
    score.variant = {MetricKind::cite_p, Basis::reference, SourceMode::none, quality.active()};
    detail::MeanFold fold;
    for (const auto& c : claims.claims) {
        const std::vector<std::string>* cited = cmap.find(c.id);
        if (!cited) {
            throw PreconditionError("citation map has no entry for claim '" + c.id + "'");
        }
        // Proxy text: reference subclaims grounded in any cited source,
        // in reference order.
        std::vector<std::string> proxy;
        for (const auto& rc : ref_claims.claims) {
            const std::vector<std::string>* grounded = gmap.find(rc.id);
            if (!grounded) continue;
            bool overlaps = false;
            for (const auto& sid : *grounded) {
                for (const auto& cid : *cited) {
                    if (sid == cid) {
                        overlaps = true;
                        break;
                    }
                }
                if (overlaps) break;
            }
            if (overlaps) proxy.push_back(rc.text);
        }
        ClaimContribution contrib;
        if (proxy.empty()) {
            contrib.score = 0.0;
            contrib.note = cited->empty() ? "empty_citations" : "empty_proxy";
        } else {
            JudgeRequest req = detail::claim_request(claims, c, Task::claim_vs_claimlist,
                                                     Hypothesis::of_claims(proxy));
            contrib.score = judge.score(req, backend).score * quality.mean_of(*cited);
            if (quality.active()) {
                contrib.note = "source_quality=" + format_double(quality.mean_of(*cited));
            }
        }
        fold.add(contrib.score, contrib.weight);
        score.per_claim[c.id] = std::move(contrib);
    }
    score.value = fold.value();
    return score;
}

struct CiteRecallOptions {
    // Exclude reference claims with empty grounding sets from the denominator
    // (for corpora where empty grounding means "annotation missing").
    bool drop_ungrounded = false;
    SourceQuality quality;
};

// Proper attribution: for each reference claim, the best support offered by
// the prediction sentences citing any source that attests the claim.
inline MetricScore cite_recall(const ClaimSet& ref_claims, const GroundingMap& gmap,
                               const Document& prediction, const CitedSentenceMap& csmap,
                               Judge& judge, Backend& backend,
                               const CiteRecallOptions& options = {}) {
    if (ref_claims.claims.empty()) {
        throw PreconditionError("cite recall requires a non-empty reference claim set");
    }
    MetricScore score;
    score.variant = {MetricKind::cite_r, Basis::none, SourceMode::none, options.quality.active()};
    detail::MeanFold fold;
    for (const auto& c : ref_claims.claims) {
        const std::vector<std::string>* grounded = gmap.find(c.id);
        if (!grounded || grounded->empty()) {
            if (options.drop_ungrounded) continue;
            ClaimContribution contrib;
            contrib.score = 0.0;
            contrib.note = "ungrounded";
            fold.add(contrib.score, contrib.weight);
            score.per_claim[c.id] = std::move(contrib);
            continue;
        }
        bool first = true;
        double best = 0.0;
        std::string best_source;
        for (const auto& v : *grounded) {
            // Text of the prediction sentences citing v, in document order.
            std::string cited_text;
            if (const std::vector<int>* ordinals = csmap.find(v)) {
                for (int ord : *ordinals) {
                    if (const Sentence* s = prediction.find_sentence(ord)) {
                        if (!cited_text.empty()) cited_text.push_back(' ');
                        cited_text.append(s->text);
                    }
                }
            }
            double candidate = 0.0;
            if (!trim(cited_text).empty()) {
                JudgeRequest req = detail::claim_request(ref_claims, c, Task::claim_vs_text,
                                                         Hypothesis::of_text(cited_text));
                candidate = judge.score(req, backend).score;
            }
            candidate *= options.quality.of(v);
            if (first || candidate > best) {
                best = candidate;
                best_source = v;
                first = false;
            }
        }
        ClaimContribution contrib;
        contrib.score = best;
        contrib.chosen_source = best_source;
        fold.add(contrib.score, contrib.weight);
        score.per_claim[c.id] = std::move(contrib);
    }
    if (score.per_claim.empty()) {
        score.details["flag"] = "all_claims_dropped";
    }
    score.value = fold.value();
    return score;
}

}  // namespace mirage
