#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirage/embedding.hpp"
#include "mirage/errors.hpp"
#include "mirage/segment.hpp"
#include "mirage/text.hpp"

namespace mirage {

struct SimilarityScore {
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
    bool degenerate = false;  // empty after tokenization

    nlohmann::json to_json() const {
        nlohmann::json j{{"precision", precision}, {"recall", recall}, {"f", f}};
        if (degenerate) j["degenerate"] = true;
        return j;
    }
};

namespace detail {

inline size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                cur[j] = prev[j - 1] + 1;
            } else {
                cur[j] = std::max(prev[j], cur[j - 1]);
            }
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// Positions in `ref` matched by one LCS against `cand` (standard backtrace,
// preferring the reference-side move on ties).
inline std::set<size_t> lcs_ref_positions(const std::vector<std::string>& ref,
                                          const std::vector<std::string>& cand) {
    if (ref.empty() || cand.empty()) return {};
    const size_t n = ref.size(), m = cand.size();
    std::vector<std::vector<size_t>> dp(n + 1, std::vector<size_t>(m + 1, 0));
    for (size_t i = 1; i <= n; ++i) {
        for (size_t j = 1; j <= m; ++j) {
            dp[i][j] = ref[i - 1] == cand[j - 1] ? dp[i - 1][j - 1] + 1
                                                 : std::max(dp[i - 1][j], dp[i][j - 1]);
        }
    }
    std::set<size_t> positions;
    size_t i = n, j = m;
    while (i > 0 && j > 0) {
        if (ref[i - 1] == cand[j - 1]) {
            positions.insert(i - 1);
            --i;
            --j;
        } else if (dp[i - 1][j] >= dp[i][j - 1]) {
            --i;
        } else {
            --j;
        }
    }
    return positions;
}

inline double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace detail

struct RougeOptions {
    // Summary-level union LCS over sentence pairs instead of one whole-text LCS.
    bool summary_level = false;
};

// ROUGE-L. Tokens are lowercased alphanumeric runs. R = LCS/|ref|,
// P = LCS/|pred|, F their harmonic mean. Empty sides degenerate to 0.
inline SimilarityScore rouge_l(const std::string& prediction, const std::string& reference,
                               const RougeOptions& options = {}) {
    std::vector<std::string> pred = tokenize(prediction);
    std::vector<std::string> ref = tokenize(reference);
    SimilarityScore s;
    if (pred.empty() || ref.empty()) {
        s.degenerate = true;
        return s;
    }
    size_t lcs = 0;
    if (!options.summary_level) {
        lcs = detail::lcs_length(pred, ref);
    } else {
        // Union-LCS: per reference sentence, the union of positions matched
        // by its LCS with each prediction sentence.
        std::vector<std::vector<std::string>> ref_sents, pred_sents;
        for (const auto& rs : split_sentences(reference)) ref_sents.push_back(tokenize(rs));
        for (const auto& ps : split_sentences(prediction)) pred_sents.push_back(tokenize(ps));
        for (const auto& rtoks : ref_sents) {
            std::set<size_t> unioned;
            for (const auto& ptoks : pred_sents) {
                auto matched = detail::lcs_ref_positions(rtoks, ptoks);
                unioned.insert(matched.begin(), matched.end());
            }
            lcs += unioned.size();
        }
    }
    s.precision = static_cast<double>(lcs) / static_cast<double>(pred.size());
    s.recall = static_cast<double>(lcs) / static_cast<double>(ref.size());
    s.f = detail::harmonic(s.precision, s.recall);
    return s;
}

// BERTScore-style greedy matching: precision is the mean over prediction
// tokens of the max cosine to any reference token, recall symmetric, F
// harmonic. No idf weighting, no baseline rescaling.
inline SimilarityScore embed_similarity(const std::string& prediction,
                                        const std::string& reference,
                                        EmbeddingBackend& embed_backend) {
    std::vector<std::string> pred = tokenize(prediction);
    std::vector<std::string> ref = tokenize(reference);
    SimilarityScore s;
    if (pred.empty() || ref.empty()) {
        s.degenerate = true;
        return s;
    }
    std::vector<std::string> all = pred;
    all.insert(all.end(), ref.begin(), ref.end());
    std::vector<EmbeddingVector> vecs = embed_backend.embed(all);
    if (vecs.size() != all.size()) {
        throw ConfigError("embedding backend returned " + std::to_string(vecs.size()) +
                          " vectors for " + std::to_string(all.size()) + " tokens");
    }
    auto pred_vec = [&](size_t i) -> const EmbeddingVector& { return vecs[i]; };
    auto ref_vec = [&](size_t j) -> const EmbeddingVector& { return vecs[pred.size() + j]; };

    double psum = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        double best = -1.0;
        for (size_t j = 0; j < ref.size(); ++j) {
            best = std::max(best, cosine(pred_vec(i), ref_vec(j)));
        }
        psum += best;
    }
    double rsum = 0.0;
    for (size_t j = 0; j < ref.size(); ++j) {
        double best = -1.0;
        for (size_t i = 0; i < pred.size(); ++i) {
            best = std::max(best, cosine(ref_vec(j), pred_vec(i)));
        }
        rsum += best;
    }
    s.precision = psum / static_cast<double>(pred.size());
    s.recall = rsum / static_cast<double>(ref.size());
    s.f = detail::harmonic(s.precision, s.recall);
    return s;
}

}  // namespace mirage
