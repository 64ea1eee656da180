#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirage/backends.hpp"
#include "mirage/errors.hpp"
#include "mirage/judgments.hpp"
#include "mirage/maps.hpp"
#include "mirage/metric_score.hpp"
#include "mirage/mirage_metrics.hpp"

namespace mirage {

// Systems ranked 1 = best; exact score ties share the midrank of the
// positions they occupy.
struct SystemRanking {
    std::string topic_id;
    std::map<std::string, double> entries;  // system id -> rank
};

inline SystemRanking rank_systems(const std::map<std::string, double>& scores,
                                  const std::string& topic_id = "") {
    if (scores.size() < 2) {
        throw PreconditionError("ranking requires at least two systems, got " +
                                std::to_string(scores.size()));
    }
    std::vector<std::pair<std::string, double>> ordered(scores.begin(), scores.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    SystemRanking ranking;
    ranking.topic_id = topic_id;
    size_t i = 0;
    while (i < ordered.size()) {
        size_t j = i;
        while (j < ordered.size() && ordered[j].second == ordered[i].second) ++j;
        // Positions i+1 .. j occupied by this tie group; midrank is their mean.
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (size_t k = i; k < j; ++k) ranking.entries[ordered[k].first] = midrank;
        i = j;
    }
    return ranking;
}

// Kendall's tau-b between two rankings over the same systems:
// (C - D) / sqrt((C + D + Ta)(C + D + Tb)), with Ta/Tb the pairs tied only
// in a / only in b. All-tied sides leave it undefined, which is an error
// rather than a zero.
inline double kendall_tau(const SystemRanking& a, const SystemRanking& b) {
    if (a.entries.size() != b.entries.size()) {
        throw PreconditionError("rankings cover different system sets");
    }
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(a.entries.size());
    for (const auto& [sys, ra] : a.entries) {
        auto it = b.entries.find(sys);
        if (it == b.entries.end()) {
            throw PreconditionError("rankings cover different system sets: '" + sys +
                                    "' missing from one side");
        }
        pairs.emplace_back(ra, it->second);
    }
    if (pairs.size() < 2) {
        throw PreconditionError("kendall_tau requires at least two systems");
    }
    long long concordant = 0, discordant = 0, tied_a_only = 0, tied_b_only = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
        for (size_t j = i + 1; j < pairs.size(); ++j) {
            double da = pairs[i].first - pairs[j].first;
            double db = pairs[i].second - pairs[j].second;
            if (da == 0.0 && db == 0.0) continue;  // tied in both: drops out
            if (da == 0.0) {
                ++tied_a_only;
            } else if (db == 0.0) {
                ++tied_b_only;
            } else if (da * db > 0.0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    double na = static_cast<double>(concordant + discordant + tied_b_only);
    double nb = static_cast<double>(concordant + discordant + tied_a_only);
    // Note: pairs not tied in a = C + D + (tied only in b), and vice versa.
    double denom = std::sqrt(na * nb);
    if (denom == 0.0) {
        throw UndefinedResultError("kendall tau undefined: all ranks tied on one side");
    }
    return static_cast<double>(concordant - discordant) / denom;
}

// ---- Human-backed MiRAGE ----------------------------------------------

// Everything needed to re-run the MiRAGE aggregations for one (topic,
// system) with a human-judgment backend in place of the model.
struct TopicStructures {
    Topic topic;
    Document prediction;
    ClaimSet pred_claims;
    Document reference;
    ClaimSet ref_claims;
    CitationMap citation_map;
};

struct HumanMirageResult {
    std::optional<F1Score> info_f1;     // from ICJ sets (both directions)
    std::optional<MetricScore> cite_p;  // from GJ sets
};

namespace detail {

inline void require_complete(const HumanJudgmentBackend& backend, const ClaimSet& claims,
                             bool icj, const std::string& what) {
    std::vector<std::string> missing;
    for (const auto& c : claims.claims) {
        bool present = icj ? backend.has_icj(c.id) : backend.has_gj(c.id);
        if (!present) missing.push_back(c.id);
    }
    if (!missing.empty()) {
        std::string msg = what + " judgments missing for " + std::to_string(missing.size()) +
                          " claim(s):";
        for (const auto& id : missing) msg += " " + id;
        throw DataCompletenessError(msg, missing);
    }
}

}  // namespace detail

// Re-runs the MiRAGE aggregations with a human-judgment backend substituted
// for the model backend. ICJ sets (one per direction) produce InfoF1-Ref;
// GJ sets produce CiteP-collection in single mode.
inline HumanMirageResult human_mirage(const std::vector<HumanJudgmentSet>& judgments,
                                      const TopicStructures& structures) {
    HumanMirageResult result;

    HumanJudgmentBackend icj_backend("human-icj");
    HumanJudgmentBackend gj_backend("human-gj");
    bool have_precision_icj = false, have_recall_icj = false, have_gj = false;
    for (const auto& set : judgments) {
        if (set.kind == JudgmentKind::icj) {
            icj_backend.add(set);
            if (set.direction == IcjDirection::predicted_vs_reference) have_precision_icj = true;
            if (set.direction == IcjDirection::reference_vs_predicted) have_recall_icj = true;
        } else if (set.kind == JudgmentKind::gj) {
            gj_backend.add(set);
            have_gj = true;
        }
    }

    if (have_precision_icj && have_recall_icj) {
        detail::require_complete(icj_backend, structures.pred_claims, true, "ICJ (predicted)");
        detail::require_complete(icj_backend, structures.ref_claims, true, "ICJ (reference)");
        Judge judge;
        MetricScore p = info_precision_reference(structures.pred_claims, structures.reference,
                                                 judge, icj_backend);
        MetricScore r = info_recall(structures.ref_claims, structures.prediction, judge,
                                    icj_backend);
        result.info_f1 = f1(p, r);
    } else if (have_precision_icj || have_recall_icj) {
        throw DataCompletenessError(
            "human InfoF1 needs ICJ sets for both directions (predicted_vs_reference and "
            "reference_vs_predicted)",
            {});
    }

    if (have_gj) {
        detail::require_complete(gj_backend, structures.pred_claims, false, "grounding");
        Judge judge;
        result.cite_p = cite_precision_collection(structures.pred_claims,
                                                  structures.citation_map, SourceMode::single,
                                                  judge, gj_backend);
    }

    return result;
}

// ---- Agreement tables ---------------------------------------------------

// One named score per (topic, system), e.g. a metric or a human judgment
// collapsed to numbers.
struct ScoreSeries {
    std::string name;
    std::map<std::string, std::map<std::string, double>> values;  // topic -> system -> score
};

enum class TauAggregation { per_topic_mean, pooled_pairs };

struct AgreementCell {
    std::string judgment;  // e.g. "EQJ/1"
    std::string metric;
    std::optional<double> tau;
    int topics_used = 0;
    int undefined_count = 0;
    int missing_count = 0;
    std::map<std::string, std::optional<double>> per_topic;
};

struct AgreementTable {
    std::vector<AgreementCell> cells;

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& c : cells) {
            nlohmann::json row{{"judgment", c.judgment},
                               {"metric", c.metric},
                               {"topics_used", c.topics_used},
                               {"undefined_count", c.undefined_count},
                               {"missing_count", c.missing_count}};
            row["tau"] = c.tau ? nlohmann::json(*c.tau) : nlohmann::json(nullptr);
            nlohmann::json pt = nlohmann::json::object();
            for (const auto& [topic, tau] : c.per_topic) {
                pt[topic] = tau ? nlohmann::json(*tau) : nlohmann::json(nullptr);
            }
            row["per_topic"] = pt;
            rows.push_back(row);
        }
        return nlohmann::json{{"rows", rows}};
    }

    std::string to_text() const {
        size_t jw = 8, mw = 6;
        for (const auto& c : cells) {
            jw = std::max(jw, c.judgment.size());
            mw = std::max(mw, c.metric.size());
        }
        std::ostringstream out;
        out << pad("judgment", jw) << "  " << pad("metric", mw) << "  " << pad("tau", 10) << "  "
            << pad("topics", 6) << "  undef" << "\n";
        for (const auto& c : cells) {
            std::string tau = c.tau ? format_double(*c.tau) : "null";
            if (tau.size() > 10) tau = tau.substr(0, 10);
            out << pad(c.judgment, jw) << "  " << pad(c.metric, mw) << "  " << pad(tau, 10)
                << "  " << pad(std::to_string(c.topics_used), 6) << "  "
                << c.undefined_count << "\n";
        }
        return out.str();
    }

private:
    static std::string pad(const std::string& s, size_t width) {
        return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
    }
};

namespace detail {

struct PairCounts {
    long long concordant = 0, discordant = 0, tied_a_only = 0, tied_b_only = 0;
};

inline std::optional<PairCounts> count_pairs(const std::map<std::string, double>& a,
                                             const std::map<std::string, double>& b) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& [sys, va] : a) {
        auto it = b.find(sys);
        if (it != b.end()) pairs.emplace_back(va, it->second);
    }
    if (pairs.size() < 2) return std::nullopt;
    PairCounts c;
    for (size_t i = 0; i < pairs.size(); ++i) {
        for (size_t j = i + 1; j < pairs.size(); ++j) {
            double da = pairs[i].first - pairs[j].first;
            double db = pairs[i].second - pairs[j].second;
            if (da == 0.0 && db == 0.0) continue;
            if (da == 0.0) {
                ++c.tied_a_only;
            } else if (db == 0.0) {
                ++c.tied_b_only;
            } else if (da * db > 0.0) {
                ++c.concordant;
            } else {
                ++c.discordant;
            }
        }
    }
    return c;
}

}  // namespace detail

// Tau between every (human judgment, metric) series pair, per topic,
// aggregated either as an equal-weight mean over topics or from pooled pair
// counts. Undefined per-topic taus are excluded and counted; topics missing
// from either series are counted as missing.
inline AgreementTable agreement_table(const std::vector<ScoreSeries>& metrics,
                                      const std::vector<ScoreSeries>& judgments,
                                      TauAggregation aggregation = TauAggregation::per_topic_mean) {
    AgreementTable table;
    for (const auto& human : judgments) {
        for (const auto& metric : metrics) {
            AgreementCell cell;
            cell.judgment = human.name;
            cell.metric = metric.name;
            double tau_sum = 0.0;
            detail::PairCounts pooled;
            for (const auto& [topic, human_scores] : human.values) {
                auto mt = metric.values.find(topic);
                if (mt == metric.values.end()) {
                    ++cell.missing_count;
                    cell.per_topic[topic] = std::nullopt;
                    continue;
                }
                // Intersect on systems scored by both series.
                std::map<std::string, double> h, m;
                for (const auto& [sys, v] : human_scores) {
                    auto found = mt->second.find(sys);
                    if (found != mt->second.end()) {
                        h[sys] = v;
                        m[sys] = found->second;
                    }
                }
                if (h.size() < 2) {
                    ++cell.missing_count;
                    cell.per_topic[topic] = std::nullopt;
                    continue;
                }
                try {
                    double tau = kendall_tau(rank_systems(m, topic), rank_systems(h, topic));
                    cell.per_topic[topic] = tau;
                    tau_sum += tau;
                    ++cell.topics_used;
                } catch (const UndefinedResultError&) {
                    ++cell.undefined_count;
                    cell.per_topic[topic] = std::nullopt;
                }
                if (auto counts = detail::count_pairs(m, h)) {
                    pooled.concordant += counts->concordant;
                    pooled.discordant += counts->discordant;
                    pooled.tied_a_only += counts->tied_a_only;
                    pooled.tied_b_only += counts->tied_b_only;
                }
            }
            if (aggregation == TauAggregation::per_topic_mean) {
                if (cell.topics_used > 0) cell.tau = tau_sum / cell.topics_used;
            } else {
                double na =
                    static_cast<double>(pooled.concordant + pooled.discordant + pooled.tied_b_only);
                double nb =
                    static_cast<double>(pooled.concordant + pooled.discordant + pooled.tied_a_only);
                double denom = std::sqrt(na * nb);
                if (denom > 0.0) {
                    cell.tau = static_cast<double>(pooled.concordant - pooled.discordant) / denom;
                }
            }
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

}  // namespace mirage
