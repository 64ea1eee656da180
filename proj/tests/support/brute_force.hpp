#pragma once

// Independent brute-force evaluation of the MiRAGE precision/recall
// definitions, straight from truth-table lookups and plain loops. Shares no
// aggregation or canonicalization code with the library implementation.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mirage::testsupport {

// (claim text, hypothesis key) -> supported. Keys are built locally so any
// drift in the library's canonicalization shows up as an oracle miss.
using TruthTable = std::map<std::pair<std::string, std::string>, bool>;

inline std::string bf_sources_key(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    std::string out = "sources:";
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ",";
        out += ids[i];
    }
    return out;
}

inline std::string bf_text_key(const std::string& text) { return "text:" + text; }

inline std::string bf_claims_key(const std::vector<std::string>& claims) {
    std::string out = "claims:";
    for (size_t i = 0; i < claims.size(); ++i) {
        if (i) out += "\x1e";
        out += claims[i];
    }
    return out;
}

inline double bf_lookup(const TruthTable& table, const std::string& claim,
                        const std::string& key) {
    auto it = table.find({claim, key});
    if (it == table.end()) {
        throw std::runtime_error("brute force: no truth entry for '" + claim + "' vs " + key);
    }
    return it->second ? 1.0 : 0.0;
}

struct BfClaim {
    std::string id;
    std::string text;
    double weight = 1.0;
};

struct BfSentence {
    std::string text;
    std::vector<std::string> citations;
};

inline std::string bf_join_sentences(const std::vector<BfSentence>& sentences) {
    std::string out;
    for (size_t i = 0; i < sentences.size(); ++i) {
        if (i) out.push_back(' ');
        out.append(sentences[i].text);
    }
    return out;
}

inline double bf_weighted_mean(const std::vector<std::pair<double, double>>& score_weight) {
    double num = 0.0, den = 0.0;
    for (const auto& [s, w] : score_weight) {
        num += w * s;
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

// Collection precision: mean over claims of their support in the evidence;
// single mode takes the max over per-source judgments instead of one joint
// judgment.
inline double bf_info_precision_collection(const TruthTable& table,
                                           const std::vector<BfClaim>& claims,
                                           const std::vector<std::string>& source_ids,
                                           bool single_mode) {
    std::vector<std::pair<double, double>> contributions;
    for (const auto& c : claims) {
        double s = 0.0;
        if (single_mode) {
            for (const auto& sid : source_ids) {
                s = std::max(s, bf_lookup(table, c.text, bf_sources_key({sid})));
            }
        } else {
            s = bf_lookup(table, c.text, bf_sources_key(source_ids));
        }
        contributions.emplace_back(s, c.weight);
    }
    return bf_weighted_mean(contributions);
}

inline double bf_info_precision_reference(const TruthTable& table,
                                          const std::vector<BfClaim>& claims,
                                          const std::string& reference_text) {
    std::vector<std::pair<double, double>> contributions;
    for (const auto& c : claims) {
        double s = reference_text.empty() ? 0.0
                                          : bf_lookup(table, c.text, bf_text_key(reference_text));
        contributions.emplace_back(s, c.weight);
    }
    return bf_weighted_mean(contributions);
}

// Recall: mean over reference claims of their support in the prediction.
inline double bf_info_recall(const TruthTable& table, const std::vector<BfClaim>& ref_claims,
                             const std::string& prediction_text) {
    std::vector<std::pair<double, double>> contributions;
    for (const auto& c : ref_claims) {
        double s = prediction_text.empty()
                       ? 0.0
                       : bf_lookup(table, c.text, bf_text_key(prediction_text));
        contributions.emplace_back(s, c.weight);
    }
    return bf_weighted_mean(contributions);
}

// Citation precision: mean over claims of support by their cited source
// sets; empty citation sets score 0.
inline double bf_cite_precision_collection(
    const TruthTable& table,
    const std::vector<std::pair<BfClaim, std::vector<std::string>>>& claims_with_citations,
    bool single_mode) {
    std::vector<std::pair<double, double>> contributions;
    for (const auto& [c, cited] : claims_with_citations) {
        double s = 0.0;
        if (!cited.empty()) {
            if (single_mode) {
                for (const auto& sid : cited) {
                    s = std::max(s, bf_lookup(table, c.text, bf_sources_key({sid})));
                }
            } else {
                s = bf_lookup(table, c.text, bf_sources_key(cited));
            }
        }
        contributions.emplace_back(s, c.weight);
    }
    return bf_weighted_mean(contributions);
}

// Reference citation precision: each predicted claim against the reference
// claims grounded in any source it cites; empty proxy lists score 0.
inline double bf_cite_precision_reference(
    const TruthTable& table,
    const std::vector<std::pair<BfClaim, std::vector<std::string>>>& claims_with_citations,
    const std::vector<BfClaim>& ref_claims,
    const std::map<std::string, std::vector<std::string>>& grounding) {
    std::vector<std::pair<double, double>> contributions;
    for (const auto& [c, cited] : claims_with_citations) {
        std::vector<std::string> proxy;
        for (const auto& rc : ref_claims) {
            auto git = grounding.find(rc.id);
            if (git == grounding.end()) continue;
            bool overlap = false;
            for (const auto& g : git->second) {
                if (std::find(cited.begin(), cited.end(), g) != cited.end()) overlap = true;
            }
            if (overlap) proxy.push_back(rc.text);
        }
        double s = proxy.empty() ? 0.0 : bf_lookup(table, c.text, bf_claims_key(proxy));
        contributions.emplace_back(s, c.weight);
    }
    return bf_weighted_mean(contributions);
}

// Citation recall: per reference claim, max over its grounded sources of
// the support given by the prediction sentences citing that source.
// Enumerates every (claim, source, citing-sentence-set) triple directly.
inline double bf_cite_recall(const TruthTable& table, const std::vector<BfClaim>& ref_claims,
                             const std::map<std::string, std::vector<std::string>>& grounding,
                             const std::vector<BfSentence>& prediction_sentences,
                             bool drop_ungrounded = false) {
    std::vector<std::pair<double, double>> contributions;
    for (const auto& c : ref_claims) {
        auto git = grounding.find(c.id);
        if (git == grounding.end() || git->second.empty()) {
            if (!drop_ungrounded) contributions.emplace_back(0.0, c.weight);
            continue;
        }
        double best = 0.0;
        for (const auto& v : git->second) {
            std::string cited_text;
            for (const auto& s : prediction_sentences) {
                bool cites = std::find(s.citations.begin(), s.citations.end(), v) !=
                             s.citations.end();
                if (cites) {
                    if (!cited_text.empty()) cited_text.push_back(' ');
                    cited_text.append(s.text);
                }
            }
            double candidate =
                cited_text.empty() ? 0.0 : bf_lookup(table, c.text, bf_text_key(cited_text));
            best = std::max(best, candidate);
        }
        contributions.emplace_back(best, c.weight);
    }
    return bf_weighted_mean(contributions);
}

}  // namespace mirage::testsupport
