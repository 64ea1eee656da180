#pragma once

#include <string>

#include "mirage/corpus.hpp"
#include "mirage/run_config.hpp"

namespace mirage {

namespace detail {

inline void require_input(bool present, const std::string& what, const std::string& topic_id,
                          const MetricSelection& sel, ValidationReport& report) {
    if (!present) {
        report.violations.push_back(
            {"topic " + topic_id, sel.label() + " requires " + what + ", which is missing"});
    }
}

}  // namespace detail

// Cross-checks the selected metrics against each topic's available inputs.
// Every violation is reported; nothing throws.
inline void check_metric_prerequisites(const Corpus& corpus,
                                       const std::vector<MetricSelection>& metrics,
                                       const EmbeddingConfig& embedding,
                                       ValidationReport& report) {
    for (const auto& [topic_id, tc] : corpus.topics) {
        bool has_reference = tc.reference() != nullptr;
        bool has_ref_claims = tc.claims.count("reference") > 0;
        bool has_grounding = tc.grounding.has_value();
        bool has_systems = !tc.system_ids().empty();
        if (!has_systems) {
            report.violations.push_back({"topic " + topic_id, "no system documents to evaluate"});
            continue;
        }
        bool system_claims_complete = true;
        for (const auto& sys : tc.system_ids()) {
            if (!tc.claims.count(sys)) system_claims_complete = false;
        }

        for (const auto& sel : metrics) {
            switch (sel.kind) {
                case MetricKind::info_p:
                    detail::require_input(system_claims_complete, "claims for every system",
                                          topic_id, sel, report);
                    if (sel.basis == Basis::collection) {
                        detail::require_input(!tc.topic.sources.empty(), "topic sources",
                                              topic_id, sel, report);
                    } else {
                        detail::require_input(has_reference, "a reference document", topic_id,
                                              sel, report);
                    }
                    break;
                case MetricKind::info_r:
                case MetricKind::alce_claim_recall:
                    detail::require_input(has_ref_claims, "reference claims", topic_id, sel,
                                          report);
                    break;
                case MetricKind::cite_p:
                    detail::require_input(system_claims_complete, "claims for every system",
                                          topic_id, sel, report);
                    if (sel.basis == Basis::reference) {
                        detail::require_input(has_grounding, "a grounding file", topic_id, sel,
                                              report);
                        detail::require_input(has_ref_claims, "reference claims", topic_id, sel,
                                              report);
                    }
                    break;
                case MetricKind::cite_r:
                    detail::require_input(has_grounding, "a grounding file", topic_id, sel,
                                          report);
                    detail::require_input(has_ref_claims, "reference claims", topic_id, sel,
                                          report);
                    break;
                case MetricKind::argue_nugget_coverage:
                    detail::require_input(!tc.nuggets.empty() || has_ref_claims,
                                          "a nuggets file or reference claims", topic_id, sel,
                                          report);
                    break;
                case MetricKind::argue_sentence_support:
                case MetricKind::alce_citation_quality:
                    break;  // empty citation sets degrade gracefully at run time
                case MetricKind::ragas_faithfulness:
                    detail::require_input(system_claims_complete, "claims for every system",
                                          topic_id, sel, report);
                    detail::require_input(!tc.topic.sources.empty(), "topic sources", topic_id,
                                          sel, report);
                    break;
                case MetricKind::ragas_answer_relevance:
                    detail::require_input(!tc.topic.query.empty(), "a topic query", topic_id, sel,
                                          report);
                    detail::require_input(!embedding.kind.empty(), "an embedding backend",
                                          topic_id, sel, report);
                    break;
                case MetricKind::ragas_context_relevance:
                    detail::require_input(!tc.topic.sources.empty(), "topic sources", topic_id,
                                          sel, report);
                    break;
                case MetricKind::rouge_l:
                case MetricKind::embed_sim:
                    detail::require_input(has_reference, "a reference document", topic_id, sel,
                                          report);
                    break;
            }
        }
    }
}

// Full validation pass: parse everything, resolve cross-references, check
// the per-metric prerequisite matrix. Report-based; never throws on data.
inline ValidationReport validate(const RunConfig& config) {
    ValidationReport report;
    Corpus corpus = load_corpus(config.corpus_dir, config.strict_json, report);
    check_metric_prerequisites(corpus, config.metrics, config.embedding, report);
    return report;
}

}  // namespace mirage
