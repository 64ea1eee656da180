// Acceptance suite: every criterion below runs at its stated tolerance and
// prints one pass/fail line. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mirage/mirage.hpp"
#include "support/brute_force.hpp"
#include "support/fixtures.hpp"
#include "support/random_fixture.hpp"

using namespace mirage;
using namespace mirage::testsupport;
namespace fs = std::filesystem;

namespace {

struct Checker {
    int failures = 0;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ++failures;
            if (failures <= 5) detail << "\n    failed: " << what;
        }
    }
};

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path data_dir() { return fs::path(MIRAGE_TEST_DATA_DIR); }

// ---- criteria 1-3: randomized MiRAGE fixtures vs brute force ---------------

constexpr int kFixtureCount = 220;
constexpr double kTol = 1e-12;

void criterion_oracle_equivalence(Checker& c) {
    auto start = std::chrono::steady_clock::now();
    for (unsigned seed = 0; seed < kFixtureCount; ++seed) {
        MirageFixture fx = make_random_fixture(seed);
        Judge judge;
        auto close = [&](double a, double b, const std::string& what) {
            c.expect(std::abs(a - b) <= kTol,
                     what + " seed " + std::to_string(seed) + ": " + format_double(a) + " vs " +
                         format_double(b));
        };
        close(info_precision_collection(fx.pred_claims, fx.topic, SourceMode::multi, judge,
                                        fx.oracle)
                  .value,
              bf_info_precision_collection(fx.table, fx.bf_pred_claims(false),
                                           fx.topic.source_ids(), false),
              "info-p/collection/multi");
        close(info_precision_collection(fx.pred_claims, fx.topic, SourceMode::single, judge,
                                        fx.oracle)
                  .value,
              bf_info_precision_collection(fx.table, fx.bf_pred_claims(false),
                                           fx.topic.source_ids(), true),
              "info-p/collection/single");
        close(info_precision_reference(fx.pred_claims, fx.reference, judge, fx.oracle).value,
              bf_info_precision_reference(fx.table, fx.bf_pred_claims(false),
                                          fx.reference.text()),
              "info-p/reference");
        close(info_recall(fx.ref_claims, fx.prediction, judge, fx.oracle).value,
              bf_info_recall(fx.table, fx.bf_ref_claims(false), fx.prediction.text()),
              "info-r");
        close(cite_precision_collection(fx.pred_claims, fx.cmap, SourceMode::multi, judge,
                                        fx.oracle)
                  .value,
              bf_cite_precision_collection(fx.table, fx.bf_claims_with_citations(), false),
              "cite-p/collection/multi");
        close(cite_precision_collection(fx.pred_claims, fx.cmap, SourceMode::single, judge,
                                        fx.oracle)
                  .value,
              bf_cite_precision_collection(fx.table, fx.bf_claims_with_citations(), true),
              "cite-p/collection/single");
        close(cite_precision_reference(fx.pred_claims, fx.cmap, fx.gmap, fx.ref_claims, judge,
                                       fx.oracle)
                  .value,
              bf_cite_precision_reference(fx.table, fx.bf_claims_with_citations(),
                                          fx.bf_ref_claims(false), fx.gmap.entries),
              "cite-p/reference");
        close(cite_recall(fx.ref_claims, fx.gmap, fx.prediction, fx.csmap, judge, fx.oracle)
                  .value,
              bf_cite_recall(fx.table, fx.bf_ref_claims(false), fx.gmap.entries,
                             fx.bf_prediction_sentences()),
              "cite-r");
    }
    double secs = elapsed_seconds(start);
    c.expect(secs < 10.0, "runtime " + format_double(secs) + "s exceeds 10s");
    c.detail << " [" << kFixtureCount << " fixtures, " << format_double(secs) << "s]";
}

void criterion_single_source_max(Checker& c) {
    for (unsigned seed = 0; seed < kFixtureCount; ++seed) {
        MirageFixture fx = make_random_fixture(seed);
        Judge judge;
        MetricScore single = info_precision_collection(fx.pred_claims, fx.topic,
                                                       SourceMode::single, judge, fx.oracle);
        for (const auto& claim : fx.pred_claims.claims) {
            double expected = 0.0;
            for (const auto& sid : fx.topic.source_ids()) {
                expected = std::max(expected,
                                    bf_lookup(fx.table, claim.text, bf_sources_key({sid})));
            }
            c.expect(single.per_claim.at(claim.id).score == expected,
                     "claim " + claim.id + " seed " + std::to_string(seed));
        }
    }
}

void criterion_weighted_reduction(Checker& c) {
    for (unsigned seed = 0; seed < kFixtureCount; ++seed) {
        MirageFixture fx = make_random_fixture(seed);
        Judge judge;
        std::map<std::string, double> ones;
        for (const auto& claim : fx.pred_claims.claims) ones[claim.id] = 1.0;
        for (const auto& claim : fx.ref_claims.claims) ones[claim.id] = 1.0;
        WeightSpec unit_weights;
        unit_weights.weighted = true;
        unit_weights.overrides = &ones;

        for (SourceMode mode : {SourceMode::multi, SourceMode::single}) {
            double unweighted =
                info_precision_collection(fx.pred_claims, fx.topic, mode, judge, fx.oracle)
                    .value;
            double weighted = info_precision_collection(fx.pred_claims, fx.topic, mode, judge,
                                                        fx.oracle, unit_weights)
                                  .value;
            c.expect(weighted == unweighted, "info-p seed " + std::to_string(seed));
        }
        double ru = info_recall(fx.ref_claims, fx.prediction, judge, fx.oracle).value;
        double rw = info_recall(fx.ref_claims, fx.prediction, judge, fx.oracle, unit_weights)
                        .value;
        c.expect(rw == ru, "info-r seed " + std::to_string(seed));
        double pu = info_precision_reference(fx.pred_claims, fx.reference, judge, fx.oracle)
                        .value;
        double pw = info_precision_reference(fx.pred_claims, fx.reference, judge, fx.oracle,
                                             unit_weights)
                        .value;
        c.expect(pw == pu, "info-p/reference seed " + std::to_string(seed));
    }
}

void criterion_cite_recall_max_rule(Checker& c) {
    // A reference claim grounded in two sources whose citing-sentence support
    // differs {0,1} must contribute exactly 1.
    Document pred = make_document("t", "sys",
                                  {{"Weak support sentence.", {"v1"}},
                                   {"Strong support sentence.", {"v2"}}});
    Document ref = make_document("t", "reference", {{"R.", {}}});
    ClaimSet ref_claims = make_claims(ref, ClaimOrigin::reference, {{"r1", "the claim", 0}});
    GroundingMap gmap;
    gmap.entries["r1"] = {"v1", "v2"};
    CitedSentenceMap csmap = build_cited_sentence_map(pred);
    OracleBackend oracle;
    oracle.set_support_text("the claim", "Weak support sentence.", false);
    oracle.set_support_text("the claim", "Strong support sentence.", true);
    Judge judge;
    MetricScore score = cite_recall(ref_claims, gmap, pred, csmap, judge, oracle);
    c.expect(score.per_claim.at("r1").score == 1.0, "max over {0,1} is not 1");
    c.expect(score.value == 1.0, "aggregate is not 1");

    // And the mirrored order.
    OracleBackend flipped;
    flipped.set_support_text("the claim", "Weak support sentence.", true);
    flipped.set_support_text("the claim", "Strong support sentence.", false);
    MetricScore score2 = cite_recall(ref_claims, gmap, pred, csmap, judge, flipped);
    c.expect(score2.per_claim.at("r1").score == 1.0, "max over {1,0} is not 1");
}

// ---- criterion 5: TextRAG ports ---------------------------------------------

void criterion_textrag_ports(Checker& c) {
    // (a) alce_claim_recall is info_recall, bitwise.
    for (unsigned seed = 0; seed < 50; ++seed) {
        MirageFixture fx = make_random_fixture(seed);
        Judge judge;
        MetricScore recall = info_recall(fx.ref_claims, fx.prediction, judge, fx.oracle);
        MetricScore alias = alce_claim_recall(fx.ref_claims, fx.prediction, judge, fx.oracle);
        c.expect(alias.value == recall.value, "alias value seed " + std::to_string(seed));
        for (const auto& [id, contrib] : recall.per_claim) {
            c.expect(alias.per_claim.at(id).score == contrib.score,
                     "alias per-claim " + id + " seed " + std::to_string(seed));
        }
    }

    // (b) sentence-support conjunction: all four outcomes for two citations.
    for (int mask = 0; mask < 4; ++mask) {
        bool v1 = mask & 1, v2 = mask & 2;
        Document pred = make_document("t", "sys", {{"S.", {"v1", "v2"}}});
        OracleBackend oracle;
        oracle.set_support("S.", Hypothesis::of_sources({"v1"}), v1);
        oracle.set_support("S.", Hypothesis::of_sources({"v2"}), v2);
        Judge judge;
        double got = argue_sentence_support(pred, judge, oracle).value;
        double expected = (v1 && v2) ? 1.0 : 0.0;
        c.expect(got == expected, "conjunction mask " + std::to_string(mask));
    }

    // (c) citation-precision three-condition rule, exhaustively enumerated
    // oracle outcomes for 2- and 3-citation sentences.
    auto run_citation_case = [&](int n_citations) {
        std::vector<std::string> ids;
        for (int i = 1; i <= n_citations; ++i) ids.push_back("v" + std::to_string(i));
        // Judged subsets: the full set, each minus-one set, each singleton.
        std::vector<std::vector<std::string>> subsets;
        subsets.push_back(ids);
        if (n_citations > 1) {
            for (int d = 0; d < n_citations; ++d) {
                std::vector<std::string> minus;
                for (int k = 0; k < n_citations; ++k) {
                    if (k != d) minus.push_back(ids[static_cast<size_t>(k)]);
                }
                if (minus.size() > 1) subsets.push_back(minus);
            }
            for (const auto& id : ids) subsets.push_back({id});
        }
        // Deduplicate subsets (for n=2 the minus-one sets are the singletons).
        std::map<std::string, std::vector<std::string>> unique;
        for (const auto& s : subsets) {
            std::vector<std::string> sorted = s;
            std::sort(sorted.begin(), sorted.end());
            unique[join(sorted, ",")] = s;
        }
        std::vector<std::vector<std::string>> judged;
        for (const auto& [key, subset] : unique) judged.push_back(subset);

        const int combos = 1 << judged.size();
        for (int mask = 0; mask < combos; ++mask) {
            std::map<std::string, bool> verdicts;
            OracleBackend oracle;
            for (size_t i = 0; i < judged.size(); ++i) {
                std::vector<std::string> sorted = judged[i];
                std::sort(sorted.begin(), sorted.end());
                bool verdict = (mask >> i) & 1;
                verdicts[join(sorted, ",")] = verdict;
                oracle.set_support("S.", Hypothesis::of_sources(judged[i]), verdict);
            }
            auto verdict_of = [&](std::vector<std::string> subset) {
                std::sort(subset.begin(), subset.end());
                return verdicts.at(join(subset, ","));
            };

            Topic topic = make_topic("t", ids);
            Document pred = make_document("t", "sys", {{"S.", ids}});
            Judge judge;
            CitationQualityResult got = alce_citation_quality(pred, topic, judge, oracle);

            // Independent application of the rule.
            bool full = verdict_of(ids);
            int irrelevant = 0;
            if (n_citations > 1 && full) {
                for (int d = 0; d < n_citations; ++d) {
                    std::vector<std::string> minus;
                    for (int k = 0; k < n_citations; ++k) {
                        if (k != d) minus.push_back(ids[static_cast<size_t>(k)]);
                    }
                    bool still = verdict_of(minus);
                    bool solo = verdict_of({ids[static_cast<size_t>(d)]});
                    if (still && !solo) ++irrelevant;
                }
            }
            double expected_recall = full ? 1.0 : 0.0;
            double expected_precision =
                1.0 - static_cast<double>(irrelevant) / static_cast<double>(n_citations);
            c.expect(got.recall == expected_recall,
                     "recall n=" + std::to_string(n_citations) + " mask " + std::to_string(mask));
            c.expect(got.precision == expected_precision,
                     "precision n=" + std::to_string(n_citations) + " mask " +
                         std::to_string(mask));
        }
    };
    run_citation_case(2);
    run_citation_case(3);
}

void criterion_faithfulness_equivalence(Checker& c) {
    for (unsigned seed = 0; seed < kFixtureCount; ++seed) {
        MirageFixture fx = make_random_fixture(seed);
        Judge judge;
        MetricScore info = info_precision_collection(fx.pred_claims, fx.topic,
                                                     SourceMode::single, judge, fx.oracle);
        MetricScore faith = ragas_faithfulness(fx.pred_claims, fx.topic.sources, judge,
                                               fx.oracle);
        c.expect(faith.value == info.value, "value seed " + std::to_string(seed));
        for (const auto& [id, contrib] : info.per_claim) {
            c.expect(faith.per_claim.at(id).score == contrib.score,
                     "per-claim " + id + " seed " + std::to_string(seed));
        }
    }
}

// ---- criterion 7: ROUGE-L vs brute-force LCS --------------------------------

// Subsequence enumeration, longest first. Masks are precomputed per
// (length, popcount) so the scan is linear in candidates.
struct SubsequenceLcs {
    std::vector<std::vector<std::vector<unsigned>>> masks;  // [n][k] -> masks

    SubsequenceLcs() {
        masks.assign(9, {});
        for (int n = 0; n <= 8; ++n) {
            masks[static_cast<size_t>(n)].assign(static_cast<size_t>(n) + 1, {});
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                masks[static_cast<size_t>(n)][static_cast<size_t>(__builtin_popcount(mask))]
                    .push_back(mask);
            }
        }
    }

    int lcs(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) const {
        const auto& s = a.size() <= b.size() ? a : b;
        const auto& l = a.size() <= b.size() ? b : a;
        int n = static_cast<int>(s.size());
        for (int k = n; k >= 1; --k) {
            for (unsigned mask : masks[static_cast<size_t>(n)][static_cast<size_t>(k)]) {
                size_t pos = 0;
                bool ok = true;
                for (int i = 0; i < n; ++i) {
                    if (!(mask & (1u << i))) continue;
                    while (pos < l.size() && l[pos] != s[i]) ++pos;
                    if (pos == l.size()) {
                        ok = false;
                        break;
                    }
                    ++pos;
                }
                if (ok) return k;
            }
        }
        return 0;
    }
};

struct SymbolSequences {
    std::vector<std::vector<std::uint8_t>> symbols;
    std::vector<std::string> texts;

    explicit SymbolSequences(int max_len) {
        static const char* words[] = {"aa", "bb", "cc"};
        for (int len = 1; len <= max_len; ++len) {
            long count = 1;
            for (int i = 0; i < len; ++i) count *= 3;
            for (long code = 0; code < count; ++code) {
                long rest = code;
                std::vector<std::uint8_t> seq;
                std::string text;
                for (int i = 0; i < len; ++i) {
                    auto sym = static_cast<std::uint8_t>(rest % 3);
                    rest /= 3;
                    seq.push_back(sym);
                    if (i) text.push_back(' ');
                    text += words[sym];
                }
                symbols.push_back(std::move(seq));
                texts.push_back(std::move(text));
            }
        }
    }
};

// A pair is canonical when symbols first appear in increasing order across
// the concatenation; every pair is a symbol relabeling of exactly one
// canonical pair, and both LCS routes treat symbols opaquely.
bool is_canonical_pair(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    int next = 0;
    int seen[3] = {-1, -1, -1};
    for (const auto* seq : {&a, &b}) {
        for (std::uint8_t sym : *seq) {
            if (seen[sym] == -1) {
                if (sym != next) return false;
                seen[sym] = next++;
            }
        }
    }
    return true;
}

void criterion_rouge_brute_force(Checker& c) {
    SubsequenceLcs oracle;

    // The pinned example first.
    SimilarityScore pinned = rouge_l("the cat sat", "the cat ate");
    c.expect(std::abs(pinned.f - 2.0 / 3.0) <= 1e-12, "the-cat-sat F");
    c.expect(std::abs(pinned.precision - 2.0 / 3.0) <= 1e-12, "the-cat-sat P");
    c.expect(std::abs(pinned.recall - 2.0 / 3.0) <= 1e-12, "the-cat-sat R");

    auto check_pair = [&](const SymbolSequences& seqs, size_t i, size_t j) {
        int lcs = oracle.lcs(seqs.symbols[i], seqs.symbols[j]);
        double p = static_cast<double>(lcs) / static_cast<double>(seqs.symbols[i].size());
        double r = static_cast<double>(lcs) / static_cast<double>(seqs.symbols[j].size());
        double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        SimilarityScore got = rouge_l(seqs.texts[i], seqs.texts[j]);
        bool ok = got.precision == p && got.recall == r && got.f == f;
        if (!ok) {
            c.expect(false, "pair '" + seqs.texts[i] + "' vs '" + seqs.texts[j] + "'");
        }
    };

    // Fully exhaustive sweep over every ordered pair of length <= 6.
    SymbolSequences small(6);
    for (size_t i = 0; i < small.symbols.size(); ++i) {
        for (size_t j = 0; j < small.symbols.size(); ++j) {
            check_pair(small, i, j);
        }
    }

    // Length <= 8: exhaustive up to symbol relabeling. Every ordered pair is
    // the relabeling of exactly one canonical pair checked here, and both
    // computations are invariant under relabeling.
    SymbolSequences full(8);
    long canonical_pairs = 0;
    for (size_t i = 0; i < full.symbols.size(); ++i) {
        for (size_t j = 0; j < full.symbols.size(); ++j) {
            if (!is_canonical_pair(full.symbols[i], full.symbols[j])) continue;
            ++canonical_pairs;
            check_pair(full, i, j);
        }
    }
    c.detail << " [" << small.symbols.size() * small.symbols.size()
             << " pairs len<=6, " << canonical_pairs << " canonical pairs len<=8]";
}

// ---- criterion 8: Kendall tau-b vs exhaustive pair counting ------------------

void criterion_kendall_exhaustive(Checker& c) {
    // Pinned examples.
    SystemRanking r123 = rank_systems({{"A", 3.0}, {"B", 2.0}, {"C", 1.0}});
    SystemRanking r132 = rank_systems({{"A", 3.0}, {"B", 1.0}, {"C", 2.0}});
    SystemRanking r321 = rank_systems({{"A", 1.0}, {"B", 2.0}, {"C", 3.0}});
    c.expect(kendall_tau(r123, r123) == 1.0, "identical is not 1");
    c.expect(kendall_tau(r123, r321) == -1.0, "reversed is not -1");
    c.expect(kendall_tau(r123, r132) == 1.0 / 3.0, "[1,2,3] vs [1,3,2] is not 1/3");

    // Exhaustive: every pair of rankings (weak orderings via rank vectors)
    // of n = 2..5 systems, ties included.
    for (int n = 2; n <= 5; ++n) {
        // All rank vectors reachable from score assignments {1..n}^n.
        std::set<std::vector<double>> rank_vectors;
        long total = 1;
        for (int i = 0; i < n; ++i) total *= n;
        for (long code = 0; code < total; ++code) {
            long rest = code;
            std::map<std::string, double> scores;
            for (int i = 0; i < n; ++i) {
                scores["s" + std::to_string(i)] = static_cast<double>(rest % n);
                rest /= n;
            }
            SystemRanking ranking = rank_systems(scores);
            std::vector<double> ranks;
            for (int i = 0; i < n; ++i) ranks.push_back(ranking.entries["s" + std::to_string(i)]);
            rank_vectors.insert(ranks);
        }

        std::vector<std::vector<double>> all(rank_vectors.begin(), rank_vectors.end());
        long checked = 0;
        for (const auto& ra : all) {
            for (const auto& rb : all) {
                // Oracle: classify every pair directly.
                long long conc = 0, disc = 0, tied_a = 0, tied_b = 0;
                for (int i = 0; i < n; ++i) {
                    for (int j = i + 1; j < n; ++j) {
                        double da = ra[static_cast<size_t>(i)] - ra[static_cast<size_t>(j)];
                        double db = rb[static_cast<size_t>(i)] - rb[static_cast<size_t>(j)];
                        if (da == 0 && db == 0) continue;
                        if (da == 0) {
                            ++tied_a;
                        } else if (db == 0) {
                            ++tied_b;
                        } else if (da * db > 0) {
                            ++conc;
                        } else {
                            ++disc;
                        }
                    }
                }
                double denom = std::sqrt(static_cast<double>(conc + disc + tied_a) *
                                         static_cast<double>(conc + disc + tied_b));
                SystemRanking a, b;
                for (int i = 0; i < n; ++i) {
                    a.entries["s" + std::to_string(i)] = ra[static_cast<size_t>(i)];
                    b.entries["s" + std::to_string(i)] = rb[static_cast<size_t>(i)];
                }
                if (denom == 0.0) {
                    try {
                        kendall_tau(a, b);
                        c.expect(false, "expected undefined tau");
                    } catch (const UndefinedResultError&) {
                    }
                } else {
                    double expected = static_cast<double>(conc - disc) / denom;
                    c.expect(kendall_tau(a, b) == expected,
                             "tau mismatch n=" + std::to_string(n));
                }
                ++checked;
            }
        }
        c.detail << " [n=" << n << ": " << checked << " ranking pairs]";
    }
}

// ---- criteria 9-10: downsampling and parsing ---------------------------------

void criterion_downsampling(Checker& c) {
    for (int k = 0; k <= 11; ++k) {
        OracleBackend inner;
        inner.set_support_sources("claim", {"v1"}, true);
        FaultInjectingBackend flaky(inner, FaultInjectingBackend::Kind::capacity, k);
        Judge judge;  // default max_halvings = 10
        JudgeRequest req;
        req.task = Task::claim_vs_video;
        req.claim_text = "claim";
        req.hypothesis = Hypothesis::of_sources({"v1"});
        if (k <= 10) {
            SupportJudgment j = judge.score_with_downsampling(req, flaky);
            double expected = std::pow(2.0, -k);
            c.expect(std::stod(j.params.at("fps")) == expected,
                     "fps for k=" + std::to_string(k));
        } else {
            try {
                judge.score_with_downsampling(req, flaky);
                c.expect(false, "expected capacity exhaustion at k=11");
            } catch (const CapacityExhaustedError& e) {
                c.expect(contains(e.what(), "claim"), "exhaustion names the request");
            }
        }
    }
}

void criterion_response_parsing(Checker& c) {
    c.expect(parse_response("<response>yes<response>") == YesNo::yes, "yes marker");
    c.expect(parse_response("I think <response> No <response>") == YesNo::no,
             "cased and padded no");
    try {
        parse_response("unsupported");
        c.expect(false, "missing markers should fail");
    } catch (const ParseError& e) {
        c.expect(e.raw_response == "unsupported", "raw response carried");
    }

    // The policy flag switches failure into score-zero.
    OracleBackend oracle;
    oracle.set_raw_response("claim", Hypothesis::of_sources({"v1"}), "unsupported");
    JudgeRequest req;
    req.task = Task::claim_vs_video;
    req.claim_text = "claim";
    req.hypothesis = Hypothesis::of_sources({"v1"});
    Judge failing;  // default policy: fail
    try {
        failing.score(req, oracle);
        c.expect(false, "default policy should throw");
    } catch (const ParseError&) {
    }
    JudgeOptions zero_options;
    zero_options.on_parse_error = ParseErrorPolicy::score_zero;
    Judge zeroing(zero_options);
    SupportJudgment j = zeroing.score(req, oracle);
    c.expect(j.score == 0.0, "score-zero policy");
    c.expect(j.params.at("parse_error") == "1", "parse-error flag");
}

// ---- criterion 11: human-backend substitution --------------------------------

void criterion_human_substitution(Checker& c) {
    TopicStructures ts;
    ts.topic = make_topic("t", {"v1", "v2", "v3"});
    ts.prediction = make_document("t", "sys",
                                  {{"P0.", {"v1"}}, {"P1.", {"v2", "v3"}}, {"P2.", {}}});
    ts.reference = make_document("t", "reference", {{"R0.", {}}, {"R1.", {}}});
    ts.pred_claims = make_claims(ts.prediction, ClaimOrigin::predicted,
                                 {{"p1", "pred one", 0}, {"p2", "pred two", 1},
                                  {"p3", "pred three", 2}});
    ts.ref_claims = make_claims(ts.reference, ClaimOrigin::reference,
                                {{"r1", "ref one", 0}, {"r2", "ref two", 1}});
    ts.citation_map =
        build_citation_map(ts.prediction, ts.pred_claims, CitationPolicy::first_mention);

    HumanJudgmentSet icj_p;
    icj_p.kind = JudgmentKind::icj;
    icj_p.topic_id = "t";
    icj_p.system_id = "sys";
    icj_p.direction = IcjDirection::predicted_vs_reference;
    icj_p.claim_judgments = {{"p1", true}, {"p2", false}, {"p3", true}};
    HumanJudgmentSet icj_r;
    icj_r.kind = JudgmentKind::icj;
    icj_r.topic_id = "t";
    icj_r.system_id = "sys";
    icj_r.direction = IcjDirection::reference_vs_predicted;
    icj_r.claim_judgments = {{"r1", true}, {"r2", false}};
    HumanJudgmentSet gj;
    gj.kind = JudgmentKind::gj;
    gj.topic_id = "t";
    gj.system_id = "sys";
    gj.grounding = {{"p1", {"v2"}}, {"p2", {"v2"}}, {"p3", {"v1"}}};

    HumanMirageResult human = human_mirage({icj_p, icj_r, gj}, ts);

    // Oracle whose truth table is the human file.
    OracleBackend icj_oracle;
    const std::string ref_text = ts.reference.text();
    const std::string pred_text = ts.prediction.text();
    icj_oracle.set_support_text("pred one", ref_text, true);
    icj_oracle.set_support_text("pred two", ref_text, false);
    icj_oracle.set_support_text("pred three", ref_text, true);
    icj_oracle.set_support_text("ref one", pred_text, true);
    icj_oracle.set_support_text("ref two", pred_text, false);
    Judge judge;
    F1Score expected_f1 = f1(
        info_precision_reference(ts.pred_claims, ts.reference, judge, icj_oracle),
        info_recall(ts.ref_claims, ts.prediction, judge, icj_oracle));

    OracleBackend gj_oracle;
    gj_oracle.set_support_sources("pred one", {"v1"}, false);   // grounded only in v2
    gj_oracle.set_support_sources("pred two", {"v2"}, true);
    gj_oracle.set_support_sources("pred two", {"v3"}, false);
    MetricScore expected_cite = cite_precision_collection(
        ts.pred_claims, ts.citation_map, SourceMode::single, judge, gj_oracle);

    c.expect(human.info_f1.has_value(), "ICJ produced no InfoF1");
    if (human.info_f1) {
        c.expect(human.info_f1->precision.value == expected_f1.precision.value,
                 "InfoP mismatch");
        c.expect(human.info_f1->recall.value == expected_f1.recall.value, "InfoR mismatch");
        c.expect(human.info_f1->f1 == expected_f1.f1, "InfoF1 mismatch");
    }
    c.expect(human.cite_p.has_value(), "GJ produced no CiteP");
    if (human.cite_p) {
        c.expect(human.cite_p->value == expected_cite.value, "CiteP mismatch");
        for (const auto& [id, contrib] : expected_cite.per_claim) {
            c.expect(human.cite_p->per_claim.at(id).score == contrib.score,
                     "CiteP per-claim " + id);
        }
    }
}

// ---- criterion 12: end-to-end reproducibility --------------------------------

void criterion_end_to_end(Checker& c) {
    auto start = std::chrono::steady_clock::now();
    fs::path out = fs::temp_directory_path() / "mirage-acceptance" / "run";
    fs::remove_all(out.parent_path());
    fs::create_directories(out);

    RunConfig config;
    config.corpus_dir = data_dir() / "golden_corpus";
    config.out_dir = out;
    config.cache_path = out.parent_path() / "cache.jsonl";
    for (const std::string m :
         {"info-p/reference", "info-p/collection/single", "info-r", "alce-claim-recall",
          "cite-p/collection/single", "cite-r", "alce-citation-quality",
          "argue-sentence-support", "argue-nugget-coverage", "ragas-faithfulness",
          "ragas-answer-relevance", "ragas-context-relevance", "rouge-l"}) {
        config.metrics.push_back(parse_metric_selection(m));
    }
    config.backend.kind = "oracle";
    config.backend.path = (data_dir() / "golden_backend" / "oracle.json").string();
    config.embedding.kind = "fixture";
    config.embedding.path = (data_dir() / "golden_backend" / "embeddings.json").string();

    RunOutcome first = run(config);
    write_report(out);
    c.expect(first.validation.ok(), "validation failed");
    c.expect(first.failed_cells == 0, "cells failed");
    c.expect(first.backend_calls > 0, "first run made no backend calls");

    std::map<std::string, std::string> first_files;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), out).string();
        if (rel == "timing.json") continue;
        first_files[rel] = io::read_file(entry.path());
    }

    RunOutcome second = run(config);
    write_report(out);
    c.expect(second.backend_calls == 0,
             "warm rerun made " + std::to_string(second.backend_calls) + " backend calls");

    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), out).string();
        if (rel == "timing.json") continue;
        auto it = first_files.find(rel);
        c.expect(it != first_files.end(), "new file appeared: " + rel);
        if (it != first_files.end()) {
            c.expect(io::read_file(entry.path()) == it->second, "byte mismatch in " + rel);
            ++compared;
        }
    }
    c.expect(compared == first_files.size(), "file set changed between runs");
    double secs = elapsed_seconds(start);
    c.expect(secs < 30.0, "runtime " + format_double(secs) + "s exceeds 30s");
    c.detail << " [" << compared << " files byte-compared, " << format_double(secs) << "s]";
}

struct Criterion {
    int id;
    std::string name;
    std::function<void(Checker&)> body;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "MiRAGE metrics match the brute-force evaluator on randomized fixtures",
         criterion_oracle_equivalence},
        {2, "single-source mode equals the max over per-source judgments",
         criterion_single_source_max},
        {3, "weighted scores with unit weights reduce to unweighted bitwise",
         criterion_weighted_reduction},
        {4, "cite recall takes the max over grounded sources", criterion_cite_recall_max_rule},
        {5, "TextRAG ports: recall alias, support conjunction, citation-precision rule",
         criterion_textrag_ports},
        {6, "faithfulness equals single-mode collection precision on the topic sources",
         criterion_faithfulness_equivalence},
        {7, "ROUGE-L matches the subsequence-enumeration oracle exhaustively",
         criterion_rouge_brute_force},
        {8, "Kendall tau-b matches exhaustive pair counting for up to five systems",
         criterion_kendall_exhaustive},
        {9, "capacity errors halve fps up to ten times, then exhaust", criterion_downsampling},
        {10, "response parsing follows the marker grammar and the error policy",
         criterion_response_parsing},
        {11, "human judgment files substitute for the model backend bitwise",
         criterion_human_substitution},
        {12, "end-to-end runs are byte-identical with a warm, silent cache",
         criterion_end_to_end},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        Checker checker;
        auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(checker);
        } catch (const std::exception& e) {
            checker.expect(false, std::string("unexpected exception: ") + e.what());
        }
        double secs = elapsed_seconds(start);
        bool ok = checker.failures == 0;
        if (!ok) ++failed;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
                  << criterion.name << " (" << format_double(secs) << "s)"
                  << checker.detail.str() << "\n";
    }
    std::cout << (criteria.size() - static_cast<size_t>(failed)) << "/" << criteria.size()
              << " acceptance criteria passed\n";
    return failed;
}
