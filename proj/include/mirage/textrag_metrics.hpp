#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirage/embedding.hpp"
#include "mirage/judge.hpp"
#include "mirage/metric_score.hpp"
#include "mirage/mirage_metrics.hpp"
#include "mirage/segment.hpp"
#include "mirage/types.hpp"

namespace mirage {

// ---- ALCE -------------------------------------------------------------

// ALCE Claim Recall is InfoR under another label; kept as an alias so
// reports can carry both names for the same numbers.
inline MetricScore alce_claim_recall(const ClaimSet& ref_claims, const Document& prediction,
                                     Judge& judge, Backend& backend,
                                     const WeightSpec& weights = {}) {
    MetricScore score = info_recall(ref_claims, prediction, judge, backend, weights);
    score.variant.kind = MetricKind::alce_claim_recall;
    return score;
}

struct SentenceCitationRecord {
    bool supported_by_all = false;
    std::vector<std::string> irrelevant_citations;
    std::string error;  // non-empty when judging this sentence failed
};

struct CitationQualityResult {
    double recall = 0.0;
    double precision = 0.0;
    std::map<int, SentenceCitationRecord> per_sentence;
    bool empty = false;    // no sentence carried a citation
    bool partial = false;  // at least one sentence errored and was skipped

    nlohmann::json to_json() const {
        nlohmann::json ps = nlohmann::json::object();
        for (const auto& [ord, rec] : per_sentence) {
            nlohmann::json rj{{"supported_by_all", rec.supported_by_all},
                              {"irrelevant_citations", rec.irrelevant_citations}};
            if (!rec.error.empty()) rj["error"] = rec.error;
            ps[std::to_string(ord)] = rj;
        }
        return nlohmann::json{{"recall", recall},
                              {"precision", precision},
                              {"per_sentence", ps},
                              {"empty", empty},
                              {"partial", partial}};
    }
};

namespace detail {

inline SupportJudgment judge_sentence_vs_sources(const Sentence& s,
                                                 const std::vector<std::string>& ids,
                                                 Judge& judge, Backend& backend,
                                                 bool downsample) {
    JudgeRequest req;
    req.task = Task::sentence_vs_videos;
    req.claim_text = s.text;
    req.hypothesis = Hypothesis::of_sources(ids);
    req.subject_id = "sentence " + std::to_string(s.index);
    if (downsample) return judge.score_with_downsampling(req, backend);
    req.params["fps"] = "1";
    return judge.score(req, backend);
}

}  // namespace detail

// ALCE Citation Quality. Recall: the concatenated cited sources fully
// support the citing sentence. Precision: a citation d is irrelevant iff the
// full set supports the sentence, the set minus d still does, and d alone
// does not. Sentences with one citation skip the removal test, so their
// citation is always relevant. Set-level judgments run under the
// downsampling loop. Per-sentence judge failures flag the result partial
// instead of scoring zero.
inline CitationQualityResult alce_citation_quality(const Document& prediction, const Topic& topic,
                                                   Judge& judge, Backend& backend) {
    CitationQualityResult result;
    std::vector<const Sentence*> citing;
    for (const auto& s : prediction.sentences) {
        for (const auto& cid : s.citations) {
            if (!topic.find_source(cid)) {
                throw FormatError("sentence " + std::to_string(s.index) +
                                  " cites unknown source '" + cid + "'");
            }
        }
        if (!s.citations.empty()) citing.push_back(&s);
    }
    if (citing.empty()) {
        result.empty = true;
        return result;
    }
    int recalled = 0, judged_sentences = 0;
    int total_citations = 0, irrelevant = 0;
    for (const Sentence* s : citing) {
        SentenceCitationRecord rec;
        try {
            bool full_support =
                detail::judge_sentence_vs_sources(*s, s->citations, judge, backend, true).score >=
                0.5;
            rec.supported_by_all = full_support;
            for (const auto& d : s->citations) {
                bool d_irrelevant = false;
                if (full_support && s->citations.size() > 1) {
                    std::vector<std::string> minus_d;
                    for (const auto& other : s->citations) {
                        if (other != d) minus_d.push_back(other);
                    }
                    bool still_supported =
                        detail::judge_sentence_vs_sources(*s, minus_d, judge, backend, true)
                            .score >= 0.5;
                    bool solo_supports =
                        detail::judge_sentence_vs_sources(*s, {d}, judge, backend, true).score >=
                        0.5;
                    d_irrelevant = still_supported && !solo_supports;
                }
                if (d_irrelevant) rec.irrelevant_citations.push_back(d);
            }
        } catch (const Error& e) {
            rec.error = e.what();
            result.partial = true;
            result.per_sentence[s->index] = std::move(rec);
            continue;
        }
        ++judged_sentences;
        if (rec.supported_by_all) ++recalled;
        total_citations += static_cast<int>(s->citations.size());
        irrelevant += static_cast<int>(rec.irrelevant_citations.size());
        result.per_sentence[s->index] = std::move(rec);
    }
    result.recall =
        judged_sentences > 0 ? static_cast<double>(recalled) / judged_sentences : 0.0;
    result.precision =
        total_citations > 0 ? 1.0 - static_cast<double>(irrelevant) / total_citations : 0.0;
    return result;
}

// ---- ARGUE ------------------------------------------------------------

struct NuggetCoverageResult {
    std::map<std::string, bool> covered;
    double coverage = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json c = nlohmann::json::object();
        for (const auto& [id, b] : covered) c[id] = b;
        return nlohmann::json{{"covered", c}, {"coverage", coverage}};
    }
};

// Proportion of nugget questions the prediction answers consistently with
// their answer claims. ref_claims resolves answer-claim ids to texts.
inline NuggetCoverageResult argue_nugget_coverage(const std::vector<Nugget>& nuggets,
                                                  const ClaimSet& ref_claims,
                                                  const Document& prediction, Judge& judge,
                                                  Backend& backend) {
    if (nuggets.empty()) {
        throw PreconditionError("nugget coverage requires a non-empty nugget list");
    }
    NuggetCoverageResult result;
    const std::string pred_text = prediction.text();
    int covered = 0;
    for (const auto& n : nuggets) {
        const Subclaim* answer = ref_claims.find(n.answer_claim);
        if (!answer) {
            throw PreconditionError("nugget '" + n.id + "' answers unknown claim '" +
                                    n.answer_claim + "'");
        }
        JudgeRequest req;
        req.task = Task::nugget_answered;
        req.claim_text = n.question;
        req.claim_context = answer->text;
        req.hypothesis = Hypothesis::of_text(pred_text);
        req.subject_id = n.id;
        bool is_covered = judge.score(req, backend).score >= 0.5;
        result.covered[n.id] = is_covered;
        if (is_covered) ++covered;
    }
    result.coverage = static_cast<double>(covered) / static_cast<double>(nuggets.size());
    return result;
}

// Proportion of citing sentences attested by each of their citations,
// judged one citation at a time. A sentence is supported iff every pair
// answers yes.
inline MetricScore argue_sentence_support(const Document& prediction, Judge& judge,
                                          Backend& backend) {
    std::vector<const Sentence*> citing;
    for (const auto& s : prediction.sentences) {
        if (!s.citations.empty()) citing.push_back(&s);
    }
    if (citing.empty()) {
        throw PreconditionError("sentence support requires at least one citing sentence");
    }
    MetricScore score;
    score.variant = {MetricKind::argue_sentence_support, Basis::collection, SourceMode::single,
                     false};
    detail::MeanFold fold;
    for (const Sentence* s : citing) {
        bool supported = true;
        for (const auto& d : s->citations) {
            if (detail::judge_sentence_vs_sources(*s, {d}, judge, backend, false).score < 0.5) {
                supported = false;
            }
        }
        ClaimContribution contrib;
        contrib.score = supported ? 1.0 : 0.0;
        fold.add(contrib.score, contrib.weight);
        score.per_claim["s" + std::to_string(s->index)] = std::move(contrib);
    }
    score.value = fold.value();
    return score;
}

// ---- RAGAS ------------------------------------------------------------

// Faithfulness: per claim, the max single-source judgment across the sources
// used in generation. Shares the single-mode fold with InfoP-collection, so
// the two coincide exactly when the generation context equals the topic's
// source set.
inline MetricScore ragas_faithfulness(const ClaimSet& claims,
                                      const std::vector<SourceRef>& generation_context,
                                      Judge& judge, Backend& backend) {
    if (claims.claims.empty()) {
        throw PreconditionError("faithfulness requires a non-empty claim set");
    }
    if (generation_context.empty()) {
        throw PreconditionError("faithfulness requires a non-empty generation context");
    }
    MetricScore score;
    score.variant = {MetricKind::ragas_faithfulness, Basis::collection, SourceMode::single, false};
    std::vector<std::string> ids;
    ids.reserve(generation_context.size());
    for (const auto& s : generation_context) ids.push_back(s.id);
    detail::MeanFold fold;
    for (const auto& c : claims.claims) {
        ClaimContribution contrib =
            detail::support_against_sources(claims, c, ids, SourceMode::single, judge, backend);
        fold.add(contrib.score, contrib.weight);
        score.per_claim[c.id] = std::move(contrib);
    }
    score.value = fold.value();
    return score;
}

// Answer relevance: the backend reconstructs a plausible query from the
// prediction; score is the cosine between real and predicted query
// embeddings mapped from [-1,1] to [0,1]. The raw cosine is kept in details.
inline MetricScore ragas_answer_relevance(const Document& prediction, const std::string& query,
                                          Judge& judge, Backend& gen_backend,
                                          EmbeddingBackend& embed_backend) {
    const std::string pred_text = prediction.text();
    if (trim(pred_text).empty()) {
        throw PreconditionError("answer relevance requires a non-empty prediction");
    }
    JudgeRequest req;
    req.task = Task::query_generation;
    req.claim_text = pred_text;
    req.hypothesis = Hypothesis::of_text(pred_text);
    req.subject_id = prediction.system_id;
    GenerationResult gen = judge.generate(req, gen_backend);
    std::string predicted_query = trim(gen.text);

    std::vector<EmbeddingVector> vecs = embed_backend.embed({query, predicted_query});
    if (vecs.size() != 2) {
        throw ConfigError("embedding backend returned " + std::to_string(vecs.size()) +
                          " vectors for 2 inputs");
    }
    double cos = cosine(vecs[0], vecs[1]);

    MetricScore score;
    score.variant = {MetricKind::ragas_answer_relevance, Basis::none, SourceMode::none, false};
    score.value = (cos + 1.0) / 2.0;
    ClaimContribution contrib;
    contrib.score = score.value;
    score.per_claim["query"] = contrib;
    score.details["raw_cosine"] = format_double(cos);
    score.details["predicted_query"] = predicted_query;
    return score;
}

// The literal backoff phrase the extraction prompt asks for.
inline bool is_insufficient_information(const std::string& response) {
    std::string t = to_lower(trim(response));
    // Tolerate surrounding quotes and a trailing period.
    while (!t.empty() && (t.front() == '\'' || t.front() == '"')) t.erase(t.begin());
    while (!t.empty() && (t.back() == '\'' || t.back() == '"' || t.back() == '.')) t.pop_back();
    return trim(t) == "insufficient information";
}

// Context relevance of one source: sentences extracted as relevant to the
// query over sentences of a detailed summary of the source. The extraction
// backoff phrase zeroes the numerator; a degenerate denominator zeroes the
// score; ratios above 1 clamp.
inline MetricScore ragas_context_relevance(const SourceRef& source, const std::string& query,
                                           Judge& judge, Backend& backend) {
    JudgeRequest num_req;
    num_req.task = Task::extract_relevant;
    num_req.claim_text = query;
    num_req.hypothesis = Hypothesis::of_sources({source.id});
    num_req.params["fps"] = "1";
    num_req.subject_id = source.id;
    GenerationResult extraction = judge.generate(num_req, backend);

    JudgeRequest den_req;
    den_req.task = Task::detailed_summary;
    den_req.hypothesis = Hypothesis::of_sources({source.id});
    den_req.params["fps"] = "1";
    den_req.subject_id = source.id;
    GenerationResult summary = judge.generate(den_req, backend);

    size_t numerator = is_insufficient_information(extraction.text)
                           ? 0
                           : split_sentences(extraction.text).size();
    size_t denominator = split_sentences(summary.text).size();

    MetricScore score;
    score.variant = {MetricKind::ragas_context_relevance, Basis::collection, SourceMode::single,
                     false};
    score.details["extracted_sentences"] = std::to_string(numerator);
    score.details["summary_sentences"] = std::to_string(denominator);
    if (denominator == 0) {
        score.value = 0.0;
        score.details["flag"] = "degenerate_denominator";
    } else {
        double ratio = static_cast<double>(numerator) / static_cast<double>(denominator);
        if (ratio > 1.0) {
            score.value = 1.0;
            score.details["flag"] = "clamped";
        } else {
            score.value = ratio;
        }
    }
    ClaimContribution contrib;
    contrib.score = score.value;
    contrib.chosen_source = source.id;
    score.per_claim[source.id] = contrib;
    return score;
}

}  // namespace mirage
