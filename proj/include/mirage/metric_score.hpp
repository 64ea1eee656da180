#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirage/errors.hpp"
#include "mirage/text.hpp"

namespace mirage {

enum class MetricKind {
    info_p,
    info_r,
    cite_p,
    cite_r,
    alce_claim_recall,
    alce_citation_quality,
    argue_nugget_coverage,
    argue_sentence_support,
    ragas_faithfulness,
    ragas_answer_relevance,
    ragas_context_relevance,
    rouge_l,
    embed_sim,
};

inline std::string to_string(MetricKind k) {
    switch (k) {
        case MetricKind::info_p: return "info-p";
        case MetricKind::info_r: return "info-r";
        case MetricKind::cite_p: return "cite-p";
        case MetricKind::cite_r: return "cite-r";
        case MetricKind::alce_claim_recall: return "alce-claim-recall";
        case MetricKind::alce_citation_quality: return "alce-citation-quality";
        case MetricKind::argue_nugget_coverage: return "argue-nugget-coverage";
        case MetricKind::argue_sentence_support: return "argue-sentence-support";
        case MetricKind::ragas_faithfulness: return "ragas-faithfulness";
        case MetricKind::ragas_answer_relevance: return "ragas-answer-relevance";
        case MetricKind::ragas_context_relevance: return "ragas-context-relevance";
        case MetricKind::rouge_l: return "rouge-l";
        case MetricKind::embed_sim: return "embed-sim";
    }
    return "info-p";
}

// Judged against the topic's sources directly, or against the human
// reference standing in for them. `none` for metrics where the split does
// not apply.
enum class Basis { collection, reference, none };

inline std::string to_string(Basis b) {
    switch (b) {
        case Basis::collection: return "collection";
        case Basis::reference: return "reference";
        case Basis::none: return "none";
    }
    return "none";
}

inline Basis basis_from_string(const std::string& s) {
    if (s == "collection") return Basis::collection;
    if (s == "reference") return Basis::reference;
    if (s == "none" || s.empty()) return Basis::none;
    throw ConfigError("unknown variant basis: " + s);
}

// multi: one judgment against all sources jointly. single: per-source
// judgments, max taken (the computationally feasible fallback).
enum class SourceMode { multi, single, none };

inline std::string to_string(SourceMode m) {
    switch (m) {
        case SourceMode::multi: return "multi";
        case SourceMode::single: return "single";
        case SourceMode::none: return "none";
    }
    return "none";
}

inline SourceMode source_mode_from_string(const std::string& s) {
    if (s == "multi") return SourceMode::multi;
    if (s == "single") return SourceMode::single;
    if (s == "none" || s.empty()) return SourceMode::none;
    throw ConfigError("unknown source mode: " + s);
}

struct Variant {
    MetricKind kind = MetricKind::info_p;
    Basis basis = Basis::none;
    SourceMode mode = SourceMode::none;
    bool weighted = false;

    std::string label() const {
        std::string out = to_string(kind);
        if (basis != Basis::none) out += "/" + to_string(basis);
        if (mode != SourceMode::none) out += "/" + to_string(mode);
        if (weighted) out += "/weighted";
        return out;
    }

    bool operator==(const Variant& other) const {
        return kind == other.kind && basis == other.basis && mode == other.mode &&
               weighted == other.weighted;
    }
};

// Per-claim provenance behind an aggregated score.
struct ClaimContribution {
    double score = 0.0;
    std::optional<std::string> chosen_source;  // argmax source in single mode
    double weight = 1.0;
    std::string note;  // e.g. "empty_citations", "empty_hypothesis"
};

struct MetricScore {
    double value = 0.0;
    Variant variant;
    std::map<std::string, ClaimContribution> per_claim;
    std::map<std::string, std::string> details;  // flags and free-form provenance

    // The documented aggregation of the per-claim records; value must always
    // equal this up to float roundoff from fold order.
    double recompute() const {
        double num = 0.0, den = 0.0;
        for (const auto& [id, c] : per_claim) {
            num += c.weight * c.score;
            den += c.weight;
        }
        return den > 0.0 ? num / den : 0.0;
    }

    nlohmann::json to_json() const {
        nlohmann::json pc = nlohmann::json::object();
        for (const auto& [id, c] : per_claim) {
            nlohmann::json cj{{"score", c.score}, {"weight", c.weight}};
            if (c.chosen_source) cj["chosen_source"] = *c.chosen_source;
            if (!c.note.empty()) cj["note"] = c.note;
            pc[id] = cj;
        }
        nlohmann::json j{{"value", value},
                         {"variant", variant.label()},
                         {"per_claim", pc}};
        if (!details.empty()) {
            nlohmann::json d = nlohmann::json::object();
            for (const auto& [k, v] : details) d[k] = v;
            j["details"] = d;
        }
        return j;
    }
};

struct F1Score {
    MetricScore precision;
    MetricScore recall;
    double f1 = 0.0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"precision", precision.to_json()},
                              {"recall", recall.to_json()},
                              {"f1", f1}};
    }
};

namespace detail {

// Single fold shared by weighted and unweighted aggregation, in claim order.
// With all weights 1.0 this is bit-identical to a plain mean.
struct MeanFold {
    double num = 0.0;
    double den = 0.0;

    void add(double score, double weight) {
        num += weight * score;
        den += weight;
    }

    double value() const { return den > 0.0 ? num / den : 0.0; }
};

}  // namespace detail

// Harmonic mean of compatible precision/recall scores; 0 when both vanish.
inline F1Score f1(const MetricScore& p, const MetricScore& r) {
    bool p_info = p.variant.kind == MetricKind::info_p;
    bool r_info = r.variant.kind == MetricKind::info_r ||
                  r.variant.kind == MetricKind::alce_claim_recall;
    bool p_cite = p.variant.kind == MetricKind::cite_p;
    bool r_cite = r.variant.kind == MetricKind::cite_r;
    if (!((p_info && r_info) || (p_cite && r_cite))) {
        throw ConfigError("f1 requires matching precision/recall variants, got " +
                          p.variant.label() + " and " + r.variant.label());
    }
    F1Score out;
    out.precision = p;
    out.recall = r;
    double sum = p.value + r.value;
    out.f1 = sum > 0.0 ? 2.0 * p.value * r.value / sum : 0.0;
    return out;
}

}  // namespace mirage
