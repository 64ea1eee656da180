#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mirage/agreement.hpp"
#include "mirage/backends.hpp"
#include "mirage/baselines.hpp"
#include "mirage/cache.hpp"
#include "mirage/corpus.hpp"
#include "mirage/decompose.hpp"
#include "mirage/judge.hpp"
#include "mirage/mirage_metrics.hpp"
#include "mirage/remote.hpp"
#include "mirage/run_config.hpp"
#include "mirage/textrag_metrics.hpp"
#include "mirage/validate.hpp"

namespace mirage {

// ---- Backend factories ---------------------------------------------------

inline OracleBackend oracle_backend_from_json(const json& j) {
    std::string id = j.contains("id") ? j["id"].get<std::string>() : "oracle";
    OracleBackend::MissPolicy miss = OracleBackend::MissPolicy::error;
    if (j.contains("miss_policy")) {
        std::string p = j["miss_policy"].get<std::string>();
        if (p == "no") {
            miss = OracleBackend::MissPolicy::answer_no;
        } else if (p == "yes") {
            miss = OracleBackend::MissPolicy::answer_yes;
        } else if (p != "error") {
            throw ConfigError("unknown oracle miss_policy: " + p);
        }
    }
    OracleBackend oracle(id, miss);
    auto hypothesis_of = [](const json& entry) {
        if (entry.contains("sources")) {
            std::vector<std::string> ids;
            for (const auto& s : entry["sources"]) ids.push_back(s.get<std::string>());
            return Hypothesis::of_sources(std::move(ids));
        }
        if (entry.contains("text")) return Hypothesis::of_text(entry["text"].get<std::string>());
        if (entry.contains("claims")) {
            std::vector<std::string> claims;
            for (const auto& c : entry["claims"]) claims.push_back(c.get<std::string>());
            return Hypothesis::of_claims(std::move(claims));
        }
        throw ConfigError("oracle entry needs one of sources/text/claims");
    };
    if (j.contains("support")) {
        for (const auto& entry : j["support"]) {
            oracle.set_support(entry["claim"].get<std::string>(), hypothesis_of(entry),
                               entry["supported"].get<bool>());
        }
    }
    if (j.contains("generations")) {
        for (const auto& entry : j["generations"]) {
            Task task = Task::query_generation;
            std::string name = entry["task"].get<std::string>();
            bool found = false;
            for (Task t : {Task::extract_relevant, Task::detailed_summary, Task::query_generation,
                           Task::decompose_sentence, Task::nugget_question}) {
                if (to_string(t) == name) {
                    task = t;
                    found = true;
                }
            }
            if (!found) throw ConfigError("oracle generation entry has unknown task " + name);
            std::string claim =
                entry.contains("claim") ? entry["claim"].get<std::string>() : std::string();
            oracle.set_generation(task, claim, hypothesis_of(entry),
                                  entry["response"].get<std::string>());
        }
    }
    return oracle;
}

inline std::unique_ptr<Backend> make_backend(const BackendConfig& config, const Corpus& corpus) {
    if (config.kind == "oracle") {
        if (config.path.empty()) {
            // Empty table: any judgment request fails loudly. Enough for
            // metrics that never consult the judge (rouge-l, embed-sim).
            return std::make_unique<OracleBackend>(config.id.empty() ? "oracle" : config.id);
        }
        return std::make_unique<OracleBackend>(
            oracle_backend_from_json(io::load_json_file(config.path)));
    }
    if (config.kind == "remote") {
        RemoteBackendConfig rc;
        rc.endpoint = config.endpoint;
        rc.model = config.model;
        rc.headers = config.headers;
        rc.capacity_status_codes.clear();
        for (int code : config.capacity_status_codes) rc.capacity_status_codes.insert(code);
        rc.capacity_error_substring = config.capacity_error_substring;
        rc.id = config.id.empty() ? "remote" : config.id;
        PromptLibrary prompts;
        if (!config.templates_dir.empty()) prompts.load_dir(config.templates_dir);
        auto backend = std::make_unique<RemoteBackend>(rc, prompts);
        for (const auto& [id, tc] : corpus.topics) backend->add_sources(tc.topic.sources);
        return backend;
    }
    if (config.kind == "human") {
        auto backend =
            std::make_unique<HumanJudgmentBackend>(config.id.empty() ? "human" : config.id);
        bool loaded = false;
        if (!config.path.empty() && std::filesystem::is_directory(config.path)) {
            for (const auto& entry : std::filesystem::directory_iterator(config.path)) {
                if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
                HumanJudgmentSet h = io::judgments_from_json(io::load_json_file(entry.path()));
                if (h.kind != JudgmentKind::eqj) {
                    backend->add(h);
                    loaded = true;
                }
            }
        }
        for (const auto& [id, tc] : corpus.topics) {
            for (const auto& h : tc.judgments) {
                if (h.kind != JudgmentKind::eqj) {
                    backend->add(h);
                    loaded = true;
                }
            }
        }
        if (!loaded) throw ConfigError("human backend found no ICJ/GJ judgment files");
        return backend;
    }
    throw ConfigError("unknown backend kind: " + config.kind);
}

inline std::unique_ptr<EmbeddingBackend> make_embedding_backend(const EmbeddingConfig& config) {
    if (config.kind == "fixture") {
        auto backend = std::make_unique<FixtureEmbeddingBackend>(
            config.id.empty() ? "embed-fixture" : config.id);
        if (!config.path.empty()) {
            json j = io::load_json_file(config.path);
            if (j.contains("vectors")) {
                for (auto it = j["vectors"].begin(); it != j["vectors"].end(); ++it) {
                    std::vector<double> values;
                    for (const auto& x : it.value()) values.push_back(x.get<double>());
                    backend->set(it.key(), std::move(values));
                }
            }
        }
        return backend;
    }
    if (config.kind == "remote") {
        RemoteEmbeddingConfig rc;
        rc.endpoint = config.endpoint;
        rc.model = config.model;
        rc.headers = config.headers;
        rc.id = config.id.empty() ? "remote-embed" : config.id;
        return std::make_unique<RemoteEmbeddingBackend>(rc);
    }
    throw ConfigError("unknown embedding backend kind: " + config.kind);
}

// ---- Per-cell metric computation ------------------------------------------

struct CellKey {
    std::string topic_id;
    std::string system_id;
    std::string metric_label;
};

struct CellResult {
    CellKey key;
    json payload;                      // full result with provenance
    std::map<std::string, double> series_values;  // series name -> scalar
    std::string error;                 // non-empty on failure
};

namespace detail {

inline std::vector<SourceRef> resolve_generation_context(const TopicCorpus& tc,
                                                         const std::string& system_id) {
    auto it = tc.generation_context.find(system_id);
    if (it == tc.generation_context.end()) return tc.topic.sources;
    std::vector<SourceRef> sources;
    for (const auto& sid : it->second) {
        const SourceRef* s = tc.topic.find_source(sid);
        if (!s) throw ConfigError("generation context names unknown source '" + sid + "'");
        sources.push_back(*s);
    }
    return sources;
}

inline const ClaimSet& require_claims(const TopicCorpus& tc, const std::string& owner) {
    auto it = tc.claims.find(owner);
    if (it == tc.claims.end()) {
        throw PreconditionError("no claims for '" + owner + "' in topic " + tc.topic.id);
    }
    return it->second;
}

inline const Document& require_document(const TopicCorpus& tc, const std::string& system_id) {
    auto it = tc.documents.find(system_id);
    if (it == tc.documents.end()) {
        throw PreconditionError("no document for '" + system_id + "' in topic " + tc.topic.id);
    }
    return *it->second;
}

inline WeightSpec weight_spec_for(const TopicCorpus& tc, const std::string& owner,
                                  bool weighted) {
    WeightSpec w;
    w.weighted = weighted;
    if (weighted) {
        auto it = tc.weights.find(owner);
        if (it != tc.weights.end()) w.overrides = &it->second;
    }
    return w;
}

}  // namespace detail

// Computes one (topic, system, metric) cell. Throws on failure; the caller
// isolates faults.
inline CellResult compute_cell(const MetricSelection& sel, const TopicCorpus& tc,
                               const std::string& system_id, const RunConfig& config,
                               Judge& judge, Backend& backend, EmbeddingBackend* embedding) {
    CellResult result;
    result.key = {tc.topic.id, system_id, sel.label()};
    const Document& prediction = detail::require_document(tc, system_id);
    CitationPolicy policy = citation_policy_from_string(config.citation_policy);

    auto emit = [&result](const MetricScore& score) {
        result.payload = score.to_json();
        result.series_values[score.variant.label()] = score.value;
    };

    switch (sel.kind) {
        case MetricKind::info_p: {
            const ClaimSet& claims = detail::require_claims(tc, system_id);
            WeightSpec weights = detail::weight_spec_for(tc, system_id, sel.weighted);
            if (sel.basis == Basis::collection) {
                emit(info_precision_collection(claims, tc.topic, sel.mode, judge, backend,
                                               weights));
            } else {
                auto reference = tc.reference();
                if (!reference) throw PreconditionError("no reference document");
                emit(info_precision_reference(claims, *reference, judge, backend, weights));
            }
            break;
        }
        case MetricKind::info_r: {
            const ClaimSet& ref_claims = detail::require_claims(tc, "reference");
            WeightSpec weights = detail::weight_spec_for(tc, "reference", sel.weighted);
            emit(info_recall(ref_claims, prediction, judge, backend, weights));
            break;
        }
        case MetricKind::alce_claim_recall: {
            const ClaimSet& ref_claims = detail::require_claims(tc, "reference");
            WeightSpec weights = detail::weight_spec_for(tc, "reference", sel.weighted);
            emit(alce_claim_recall(ref_claims, prediction, judge, backend, weights));
            break;
        }
        case MetricKind::cite_p: {
            const ClaimSet& claims = detail::require_claims(tc, system_id);
            CitationMap cmap = build_citation_map(prediction, claims, policy);
            if (sel.basis == Basis::collection) {
                emit(cite_precision_collection(claims, cmap, sel.mode, judge, backend));
            } else {
                if (!tc.grounding) throw PreconditionError("no grounding file");
                const ClaimSet& ref_claims = detail::require_claims(tc, "reference");
                emit(cite_precision_reference(claims, cmap, *tc.grounding, ref_claims, judge,
                                              backend));
            }
            break;
        }
        case MetricKind::cite_r: {
            if (!tc.grounding) throw PreconditionError("no grounding file");
            const ClaimSet& ref_claims = detail::require_claims(tc, "reference");
            CitedSentenceMap csmap = build_cited_sentence_map(prediction);
            CiteRecallOptions options;
            options.drop_ungrounded = config.drop_ungrounded;
            emit(cite_recall(ref_claims, *tc.grounding, prediction, csmap, judge, backend,
                             options));
            break;
        }
        case MetricKind::alce_citation_quality: {
            CitationQualityResult cq = alce_citation_quality(prediction, tc.topic, judge, backend);
            result.payload = cq.to_json();
            double f = cq.precision + cq.recall > 0
                           ? 2 * cq.precision * cq.recall / (cq.precision + cq.recall)
                           : 0.0;
            result.payload["f1"] = f;
            result.series_values["alce-citation-quality/f1"] = f;
            result.series_values["alce-citation-quality/precision"] = cq.precision;
            result.series_values["alce-citation-quality/recall"] = cq.recall;
            break;
        }
        case MetricKind::argue_nugget_coverage: {
            const ClaimSet& ref_claims = detail::require_claims(tc, "reference");
            std::vector<Nugget> nuggets = tc.nuggets;
            if (nuggets.empty()) {
                for (const auto& claim : ref_claims.claims) {
                    nuggets.push_back(
                        nuggetize(claim, judge, backend, ref_claims.context_for(claim)));
                }
            }
            NuggetCoverageResult nc =
                argue_nugget_coverage(nuggets, ref_claims, prediction, judge, backend);
            result.payload = nc.to_json();
            result.series_values["argue-nugget-coverage"] = nc.coverage;
            break;
        }
        case MetricKind::argue_sentence_support: {
            emit(argue_sentence_support(prediction, judge, backend));
            break;
        }
        case MetricKind::ragas_faithfulness: {
            const ClaimSet& claims = detail::require_claims(tc, system_id);
            std::vector<SourceRef> context = detail::resolve_generation_context(tc, system_id);
            emit(ragas_faithfulness(claims, context, judge, backend));
            break;
        }
        case MetricKind::ragas_answer_relevance: {
            if (!embedding) throw ConfigError("answer relevance requires an embedding backend");
            emit(ragas_answer_relevance(prediction, tc.topic.query, judge, backend, *embedding));
            break;
        }
        case MetricKind::ragas_context_relevance: {
            std::vector<SourceRef> context = detail::resolve_generation_context(tc, system_id);
            json per_source = json::object();
            double sum = 0.0;
            for (const auto& source : context) {
                MetricScore s = ragas_context_relevance(source, tc.topic.query, judge, backend);
                per_source[source.id] = s.to_json();
                sum += s.value;
            }
            double mean = context.empty() ? 0.0 : sum / static_cast<double>(context.size());
            result.payload = json{{"per_source", per_source}, {"mean", mean}};
            result.series_values["ragas-context-relevance"] = mean;
            break;
        }
        case MetricKind::rouge_l: {
            auto reference = tc.reference();
            if (!reference) throw PreconditionError("no reference document");
            RougeOptions options;
            options.summary_level = config.rouge_summary_level;
            SimilarityScore s = rouge_l(prediction.text(), reference->text(), options);
            result.payload = s.to_json();
            result.series_values["rouge-l"] = s.f;
            break;
        }
        case MetricKind::embed_sim: {
            if (!embedding) throw ConfigError("embed-sim requires an embedding backend");
            auto reference = tc.reference();
            if (!reference) throw PreconditionError("no reference document");
            SimilarityScore s = embed_similarity(prediction.text(), reference->text(), *embedding);
            result.payload = s.to_json();
            result.series_values["embed-sim"] = s.f;
            break;
        }
    }
    return result;
}

// ---- Run orchestration -----------------------------------------------------

struct RunOutcome {
    ValidationReport validation;
    json manifest;
    int failed_cells = 0;
    std::size_t backend_calls = 0;
    std::filesystem::path out_dir;
};

namespace detail {

inline json input_hashes(const std::filesystem::path& corpus_dir) {
    json hashes = json::object();
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(corpus_dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        hashes[std::filesystem::relative(f, corpus_dir).string()] =
            fnv1a64_hex(io::read_file(f));
    }
    return hashes;
}

}  // namespace detail

// Human-judgment score series: EQJ likerts directly; ICJ/GJ through the
// human-backend MiRAGE rerun per (topic, system).
inline std::vector<ScoreSeries> human_judgment_series(const Corpus& corpus, CitationPolicy policy,
                                                      std::vector<std::string>& errors) {
    std::map<std::string, ScoreSeries> by_name;
    for (const auto& [topic_id, tc] : corpus.topics) {
        // EQJ: one series per annotator.
        for (const auto& h : tc.judgments) {
            if (h.kind != JudgmentKind::eqj) continue;
            std::string name = "EQJ/" + (h.annotator.empty() ? "na" : h.annotator);
            by_name[name].name = name;
            for (const auto& [sys, v] : h.eqj_scores) {
                by_name[name].values[topic_id][sys] = static_cast<double>(v);
            }
        }
        // ICJ/GJ: group by (annotator, system), then rerun the aggregations.
        std::map<std::pair<std::string, std::string>, std::vector<HumanJudgmentSet>> icj_groups;
        std::map<std::pair<std::string, std::string>, std::vector<HumanJudgmentSet>> gj_groups;
        for (const auto& h : tc.judgments) {
            if (h.kind == JudgmentKind::icj) {
                icj_groups[{h.annotator, h.system_id}].push_back(h);
            } else if (h.kind == JudgmentKind::gj) {
                gj_groups[{h.annotator, h.system_id}].push_back(h);
            }
        }
        auto structures_for = [&](const std::string& system_id,
                                  TopicStructures& ts) -> bool {
            auto doc = tc.documents.find(system_id);
            auto ref = tc.reference();
            if (doc == tc.documents.end() || !ref || !tc.claims.count(system_id) ||
                !tc.claims.count("reference")) {
                return false;
            }
            ts.topic = tc.topic;
            ts.prediction = *doc->second;
            ts.pred_claims = tc.claims.at(system_id);
            ts.reference = *ref;
            ts.ref_claims = tc.claims.at("reference");
            ts.citation_map = build_citation_map(ts.prediction, ts.pred_claims, policy);
            return true;
        };
        for (const auto& [key, sets] : icj_groups) {
            TopicStructures ts;
            if (!structures_for(key.second, ts)) {
                errors.push_back("topic " + topic_id + ": ICJ judgments for '" + key.second +
                                 "' lack corpus structures");
                continue;
            }
            try {
                HumanMirageResult r = human_mirage(sets, ts);
                if (r.info_f1) {
                    std::string annotator = key.first.empty() ? "na" : key.first;
                    std::string name = "ICJ/" + annotator;
                    by_name[name].name = name;
                    by_name[name].values[topic_id][key.second] = r.info_f1->f1;
                    std::string pname = "ICJ-precision/" + annotator;
                    by_name[pname].name = pname;
                    by_name[pname].values[topic_id][key.second] = r.info_f1->precision.value;
                    std::string rname = "ICJ-recall/" + annotator;
                    by_name[rname].name = rname;
                    by_name[rname].values[topic_id][key.second] = r.info_f1->recall.value;
                }
            } catch (const Error& e) {
                errors.push_back("topic " + topic_id + ", system " + key.second + ": " + e.what());
            }
        }
        for (const auto& [key, sets] : gj_groups) {
            TopicStructures ts;
            if (!structures_for(key.second, ts)) {
                errors.push_back("topic " + topic_id + ": GJ judgments for '" + key.second +
                                 "' lack corpus structures");
                continue;
            }
            try {
                HumanMirageResult r = human_mirage(sets, ts);
                if (r.cite_p) {
                    std::string name = "GJ/" + (key.first.empty() ? "na" : key.first);
                    by_name[name].name = name;
                    by_name[name].values[topic_id][key.second] = r.cite_p->value;
                }
            } catch (const Error& e) {
                errors.push_back("topic " + topic_id + ", system " + key.second + ": " + e.what());
            }
        }
    }
    std::vector<ScoreSeries> out;
    for (auto& [name, series] : by_name) out.push_back(std::move(series));
    return out;
}

// End-to-end evaluation run: validate, score every (topic, system, metric)
// cell, build agreement tables, and write deterministic outputs plus a
// manifest. Wall-clock timings go to a separate file so outputs stay
// byte-comparable across runs. Overrides replace the configured backends
// (fault injection, call counting).
inline RunOutcome run(const RunConfig& config, Backend* backend_override = nullptr,
                      EmbeddingBackend* embedding_override = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    RunOutcome outcome;
    outcome.out_dir = config.out_dir;
    if (config.out_dir.empty()) throw ConfigError("run requires an out_dir");
    if (config.metrics.empty()) throw ConfigError("run requires at least one metric");

    outcome.validation = ValidationReport{};
    Corpus corpus = load_corpus(config.corpus_dir, config.strict_json, outcome.validation);
    check_metric_prerequisites(corpus, config.metrics, config.embedding, outcome.validation);
    io::write_json_file(config.out_dir / "validation.json", outcome.validation.to_json());
    if (!outcome.validation.ok()) return outcome;

    std::unique_ptr<Backend> inner_backend;
    if (!backend_override) inner_backend = make_backend(config.backend, corpus);
    CountingBackend backend(backend_override ? *backend_override : *inner_backend);
    std::unique_ptr<EmbeddingBackend> owned_embedding;
    EmbeddingBackend* embedding = embedding_override;
    if (!embedding && !config.embedding.kind.empty()) {
        owned_embedding = make_embedding_backend(config.embedding);
        embedding = owned_embedding.get();
    }

    std::unique_ptr<JudgeCache> cache;
    if (!config.cache_path.empty()) {
        cache = std::make_unique<JudgeCache>(config.cache_path);
    } else {
        cache = std::make_unique<JudgeCache>();
    }
    JudgeOptions judge_options;
    judge_options.on_parse_error = parse_error_policy_from_string(config.on_parse_error);
    judge_options.max_halvings = config.max_halvings;
    Judge judge(judge_options, *cache);

    // Cell enumeration in deterministic order.
    struct Cell {
        const TopicCorpus* tc;
        std::string system_id;
        MetricSelection sel;
    };
    std::vector<Cell> cells;
    for (const auto& [topic_id, tc] : corpus.topics) {
        for (const auto& system_id : tc.system_ids()) {
            for (const auto& sel : config.metrics) {
                cells.push_back({&tc, system_id, sel});
            }
        }
    }

    std::vector<CellResult> results(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            const Cell& cell = cells[i];
            try {
                results[i] = compute_cell(cell.sel, *cell.tc, cell.system_id, config, judge,
                                          backend, embedding);
            } catch (const std::exception& e) {
                results[i].key = {cell.tc->topic.id, cell.system_id, cell.sel.label()};
                results[i].error = e.what();
            }
        }
    };
    int n_threads = std::min<int>(config.concurrency, static_cast<int>(cells.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    auto t_scored = std::chrono::steady_clock::now();

    // Deterministic output pass.
    json outputs = json::array();
    json failures = json::array();
    std::map<std::string, ScoreSeries> series;
    for (const auto& r : results) {
        if (!r.error.empty()) {
            failures.push_back(json{{"topic", r.key.topic_id},
                                    {"system", r.key.system_id},
                                    {"metric", r.key.metric_label},
                                    {"error", r.error}});
            ++outcome.failed_cells;
            continue;
        }
        MetricSelection sel = parse_metric_selection(r.key.metric_label);
        std::filesystem::path out_file =
            config.out_dir / "scores" / r.key.topic_id / r.key.system_id / (sel.slug() + ".json");
        io::write_json_file(out_file, r.payload);
        outputs.push_back(std::filesystem::relative(out_file, config.out_dir).string());
        for (const auto& [name, value] : r.series_values) {
            series[name].name = name;
            series[name].values[r.key.topic_id][r.key.system_id] = value;
        }
    }

    // Derived F1 series when both parts are present.
    auto derive_f1 = [&series](const std::string& p_name, const std::string& r_name,
                               const std::string& f_name) {
        auto p = series.find(p_name);
        auto r = series.find(r_name);
        if (p == series.end() || r == series.end()) return;
        for (const auto& [topic, systems] : p->second.values) {
            auto rt = r->second.values.find(topic);
            if (rt == r->second.values.end()) continue;
            for (const auto& [sys, pv] : systems) {
                auto rv = rt->second.find(sys);
                if (rv == rt->second.end()) continue;
                double sum = pv + rv->second;
                series[f_name].name = f_name;
                series[f_name].values[topic][sys] = sum > 0 ? 2 * pv * rv->second / sum : 0.0;
            }
        }
    };
    derive_f1("info-p/reference", "info-r/reference", "info-f1/reference");
    derive_f1("info-p/collection/single", "info-r/reference", "info-f1/collection");
    derive_f1("info-p/collection/multi", "info-r/reference", "info-f1/collection-multi");
    derive_f1("cite-p/reference", "cite-r", "cite-f1/reference");
    derive_f1("cite-p/collection/single", "cite-r", "cite-f1/collection");
    derive_f1("cite-p/collection/multi", "cite-r", "cite-f1/collection-multi");

    json series_json = json::object();
    for (const auto& [name, s] : series) {
        json topics = json::object();
        for (const auto& [topic, systems] : s.values) {
            json sys_values = json::object();
            for (const auto& [sys, v] : systems) sys_values[sys] = v;
            topics[topic] = sys_values;
        }
        series_json[name] = topics;
    }
    io::write_json_file(config.out_dir / "series.json", series_json);

    // Agreement tables against the human judgments, when any exist.
    std::vector<std::string> agreement_errors;
    std::vector<ScoreSeries> humans = human_judgment_series(
        corpus, citation_policy_from_string(config.citation_policy), agreement_errors);
    if (!humans.empty()) {
        std::vector<ScoreSeries> metric_series;
        for (const auto& [name, s] : series) metric_series.push_back(s);
        TauAggregation agg = config.tau_aggregation == "pooled_pairs"
                                 ? TauAggregation::pooled_pairs
                                 : TauAggregation::per_topic_mean;
        AgreementTable table = agreement_table(metric_series, humans, agg);
        io::write_json_file(config.out_dir / "agreement.json", table.to_json());
        io::write_file(config.out_dir / "agreement.txt", table.to_text());
        outputs.push_back("agreement.json");
        outputs.push_back("agreement.txt");
    }
    for (const auto& e : agreement_errors) {
        failures.push_back(json{{"topic", ""}, {"system", ""}, {"metric", "human-judgments"},
                                {"error", e}});
        ++outcome.failed_cells;
    }

    json manifest{{"config", config.snapshot()},
                  {"inputs", detail::input_hashes(config.corpus_dir)},
                  {"backend_id", backend.id()},
                  {"outputs", outputs},
                  {"failures", failures}};
    if (embedding) manifest["embedding_id"] = embedding->id();
    io::write_json_file(config.out_dir / "manifest.json", manifest);
    outcome.manifest = manifest;
    outcome.backend_calls = backend.calls();

    auto t_end = std::chrono::steady_clock::now();
    json timing{{"scoring_ms", std::chrono::duration_cast<std::chrono::milliseconds>(t_scored - t0)
                                   .count()},
                {"total_ms",
                 std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t0).count()},
                {"backend_calls", backend.calls()},
                {"cache_hits", cache->hits()},
                {"cache_misses", cache->misses()}};
    io::write_json_file(config.out_dir / "timing.json", timing);
    return outcome;
}

}  // namespace mirage
