// mirage: claim-centric evaluation of multimodal RAG predictions.

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mirage/mirage.hpp"

namespace fs = std::filesystem;
using namespace mirage;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitPartial = 2;
constexpr int kExitFatal = 3;

struct BackendFlags {
    std::string spec = "oracle:";  // kind:path-or-endpoint
    std::string model;
    std::string templates_dir;
    std::string cache_path;
    std::string on_parse_error = "fail";
    int max_halvings = 10;

    void attach(CLI::App* cmd) {
        cmd->add_option("--backend", spec,
                        "judge backend: oracle:TABLE.json | remote:ENDPOINT | human:JUDGMENTS_DIR");
        cmd->add_option("--model", model, "model name for remote backends");
        cmd->add_option("--templates", templates_dir, "prompt template directory");
        cmd->add_option("--cache", cache_path, "judgment cache file (JSONL, persistent)");
        cmd->add_option("--on-parse-error", on_parse_error,
                        "policy for unparseable judge output: fail | score-zero")
            ->check(CLI::IsMember({"fail", "score-zero"}));
        cmd->add_option("--max-halvings", max_halvings,
                        "downsampling retries under capacity errors");
    }

    BackendConfig to_config() const {
        BackendConfig b;
        size_t colon = spec.find(':');
        b.kind = colon == std::string::npos ? spec : spec.substr(0, colon);
        std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
        if (b.kind == "oracle" || b.kind == "human") {
            b.path = arg;
        } else if (b.kind == "remote") {
            b.endpoint = arg;
        } else {
            throw ConfigError("unknown backend kind: " + b.kind);
        }
        b.model = model;
        b.templates_dir = templates_dir;
        return b;
    }
};

struct EmbeddingFlags {
    std::string spec;  // fixture:path | remote:endpoint
    std::string model;

    void attach(CLI::App* cmd) {
        cmd->add_option("--embedding", spec,
                        "embedding backend: fixture:VECTORS.json | remote:ENDPOINT");
        cmd->add_option("--embed-model", model, "model name for remote embedding backends");
    }

    EmbeddingConfig to_config() const {
        EmbeddingConfig e;
        if (spec.empty()) {
            e.kind = "";
            return e;
        }
        size_t colon = spec.find(':');
        e.kind = colon == std::string::npos ? spec : spec.substr(0, colon);
        std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
        if (e.kind == "fixture") {
            e.path = arg;
        } else if (e.kind == "remote") {
            e.endpoint = arg;
        } else {
            throw ConfigError("unknown embedding backend kind: " + e.kind);
        }
        e.model = model;
        return e;
    }
};

Judge make_judge(const BackendFlags& flags, std::unique_ptr<JudgeCache>& cache) {
    JudgeOptions options;
    options.on_parse_error = parse_error_policy_from_string(flags.on_parse_error);
    options.max_halvings = flags.max_halvings;
    if (!flags.cache_path.empty()) {
        cache = std::make_unique<JudgeCache>(fs::path(flags.cache_path));
        return Judge(options, *cache);
    }
    cache = std::make_unique<JudgeCache>();
    return Judge(options, *cache);
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        io::write_json_file(out_path, j);
    }
}

// ---- validate ---------------------------------------------------------

int cmd_validate(const std::string& config_path) {
    RunConfig config = load_run_config(config_path);
    ValidationReport report = validate(config);
    std::cout << report.to_json().dump(2) << "\n";
    return report.ok() ? kExitOk : kExitViolations;
}

// ---- decompose --------------------------------------------------------

int cmd_decompose(const std::string& topic_path, const std::string& document_path,
                  const std::string& out_path, const std::string& origin_name,
                  const std::string& dedup_name, const std::string& granularity_note,
                  const BackendFlags& backend_flags) {
    Topic topic = io::topic_from_json(io::load_json_file(topic_path));
    Document doc;
    if (fs::path(document_path).extension() == ".json") {
        doc = io::document_from_json(io::load_json_file(document_path));
        validate_document(doc, topic);
    } else {
        doc = segment_document(io::read_file(document_path), topic,
                               fs::path(document_path).stem().string());
    }
    Corpus corpus;  // backend factory wants one for source registration
    ValidationReport scratch;
    TopicCorpus tc;
    tc.topic = topic;
    corpus.topics.emplace(topic.id, std::move(tc));

    std::unique_ptr<Backend> backend = make_backend(backend_flags.to_config(), corpus);
    std::unique_ptr<JudgeCache> cache;
    Judge judge = make_judge(backend_flags, cache);

    DecompositionConfig config;
    config.granularity_note = granularity_note;
    config.dedup = dedup_mode_from_string(dedup_name);
    config.backend_id = backend->id();
    ClaimOrigin origin = claim_origin_from_string(origin_name);
    ClaimSet claims = decompose_document(doc, origin, config, judge, *backend);

    emit(io::to_json(claims), out_path);
    if (!out_path.empty()) {
        json manifest{{"granularity_note", config.granularity_note},
                      {"backend_id", config.backend_id},
                      {"dedup", dedup_name},
                      {"document", document_path},
                      {"topic", topic.id}};
        io::write_json_file(out_path + ".manifest.json", manifest);
    }
    return kExitOk;
}

// ---- score ------------------------------------------------------------

struct ScoreInputs {
    std::string topic_path;
    std::string prediction_path;
    std::string claims_path;
    std::string reference_path;
    std::string ref_claims_path;
    std::string grounding_path;
    std::string nuggets_path;
    std::string weights_path;
    std::vector<std::string> context_sources;
};

TopicCorpus assemble_topic(const ScoreInputs& in, std::string& system_id) {
    TopicCorpus tc;
    tc.topic = io::topic_from_json(io::load_json_file(in.topic_path));
    if (!in.prediction_path.empty()) {
        Document pred;
        if (fs::path(in.prediction_path).extension() == ".json") {
            pred = io::document_from_json(io::load_json_file(in.prediction_path));
        } else {
            pred = segment_document(io::read_file(in.prediction_path), tc.topic,
                                    fs::path(in.prediction_path).stem().string());
        }
        validate_document(pred, tc.topic);
        system_id = pred.system_id;
        tc.documents[system_id] = std::make_shared<Document>(std::move(pred));
    }
    if (!in.reference_path.empty()) {
        Document ref = io::document_from_json(io::load_json_file(in.reference_path));
        validate_document(ref, tc.topic);
        ref.system_id = "reference";
        tc.documents["reference"] = std::make_shared<Document>(std::move(ref));
    }
    if (!in.claims_path.empty()) {
        json j = io::load_json_file(in.claims_path);
        std::string owner = io::require_string(j, "owner", "claims");
        auto doc = tc.documents.find(owner);
        tc.claims[owner] = io::claims_from_json(
            j, true, doc == tc.documents.end() ? nullptr : doc->second);
    }
    if (!in.ref_claims_path.empty()) {
        json j = io::load_json_file(in.ref_claims_path);
        tc.claims["reference"] = io::claims_from_json(j, true, tc.reference());
        tc.claims["reference"].owner_id = "reference";
    }
    if (!in.grounding_path.empty()) {
        tc.grounding = io::grounding_from_json(io::load_json_file(in.grounding_path));
    }
    if (!in.nuggets_path.empty()) {
        json j = io::load_json_file(in.nuggets_path);
        for (const auto& nj : j["nuggets"]) tc.nuggets.push_back(io::nugget_from_json(nj));
    }
    if (!in.weights_path.empty() && !system_id.empty()) {
        json j = io::load_json_file(in.weights_path);
        std::map<std::string, double> w;
        for (auto it = j.begin(); it != j.end(); ++it) w[it.key()] = it.value().get<double>();
        tc.weights[system_id] = w;
        tc.weights["reference"] = std::move(w);
    }
    if (!in.context_sources.empty() && !system_id.empty()) {
        tc.generation_context[system_id] = in.context_sources;
    }
    return tc;
}

int cmd_score(const std::string& metric_name, const std::string& variant_name,
              const std::string& mode_name, bool weighted, const ScoreInputs& inputs,
              const BackendFlags& backend_flags, const EmbeddingFlags& embedding_flags,
              const std::string& citation_policy, bool drop_ungrounded,
              bool rouge_summary_level, const std::string& out_path) {
    std::string system_id;
    TopicCorpus tc = assemble_topic(inputs, system_id);
    Corpus corpus;
    std::string topic_id = tc.topic.id;
    corpus.topics.emplace(topic_id, std::move(tc));
    const TopicCorpus& topic_corpus = corpus.topics.at(topic_id);

    std::unique_ptr<Backend> backend = make_backend(backend_flags.to_config(), corpus);
    std::unique_ptr<JudgeCache> cache;
    Judge judge = make_judge(backend_flags, cache);
    std::unique_ptr<EmbeddingBackend> embedding;
    EmbeddingConfig embed_config = embedding_flags.to_config();
    if (!embed_config.kind.empty()) embedding = make_embedding_backend(embed_config);

    RunConfig config;
    config.citation_policy = citation_policy;
    config.drop_ungrounded = drop_ungrounded;
    config.rouge_summary_level = rouge_summary_level;
    config.on_parse_error = backend_flags.on_parse_error;
    config.max_halvings = backend_flags.max_halvings;

    auto selection = [&](const std::string& name) {
        std::string spec = name;
        if (!variant_name.empty()) spec += "/" + variant_name;
        if (!mode_name.empty()) spec += "/" + mode_name;
        if (weighted) spec += "/weighted";
        return parse_metric_selection(spec);
    };

    json result;
    if (metric_name == "info-f1" || metric_name == "cite-f1") {
        // F1 verbs compute both parts and combine.
        std::string p_name = metric_name == "info-f1" ? "info-p" : "cite-p";
        std::string r_name = metric_name == "info-f1" ? "info-r" : "cite-r";
        CellResult p = compute_cell(selection(p_name), topic_corpus, system_id, config, judge,
                                    *backend, embedding.get());
        CellResult r = compute_cell(parse_metric_selection(r_name), topic_corpus, system_id,
                                    config, judge, *backend, embedding.get());
        double pv = p.payload["value"].get<double>();
        double rv = r.payload["value"].get<double>();
        double sum = pv + rv;
        result = json{{"precision", p.payload},
                      {"recall", r.payload},
                      {"f1", sum > 0 ? 2 * pv * rv / sum : 0.0}};
    } else {
        CellResult cell = compute_cell(selection(metric_name), topic_corpus, system_id, config,
                                       judge, *backend, embedding.get());
        result = cell.payload;
    }
    emit(result, out_path);
    return kExitOk;
}

// ---- agree ------------------------------------------------------------

int cmd_agree(const std::string& scores_dir, const std::string& judgments_dir,
              const std::string& corpus_dir, const std::string& aggregation,
              const std::string& citation_policy, const std::string& out_path) {
    json series_json = io::load_json_file(fs::path(scores_dir) / "series.json");
    std::vector<ScoreSeries> metrics;
    for (auto mit = series_json.begin(); mit != series_json.end(); ++mit) {
        ScoreSeries s;
        s.name = mit.key();
        for (auto tit = mit.value().begin(); tit != mit.value().end(); ++tit) {
            for (auto sit = tit.value().begin(); sit != tit.value().end(); ++sit) {
                s.values[tit.key()][sit.key()] = sit.value().get<double>();
            }
        }
        metrics.push_back(std::move(s));
    }

    ValidationReport scratch;
    Corpus corpus;
    if (!corpus_dir.empty()) {
        corpus = load_corpus(corpus_dir, true, scratch);
        for (const auto& v : scratch.violations) {
            std::cerr << "warning: " << v.file << ": " << v.message << "\n";
        }
    }
    if (!judgments_dir.empty() && fs::is_directory(judgments_dir)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(judgments_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            HumanJudgmentSet h = io::judgments_from_json(io::load_json_file(file));
            auto it = corpus.topics.find(h.topic_id);
            if (it == corpus.topics.end()) {
                TopicCorpus tc;
                tc.topic.id = h.topic_id;
                it = corpus.topics.emplace(h.topic_id, std::move(tc)).first;
            }
            it->second.judgments.push_back(std::move(h));
        }
    }

    std::vector<std::string> errors;
    std::vector<ScoreSeries> humans =
        human_judgment_series(corpus, citation_policy_from_string(citation_policy), errors);
    for (const auto& e : errors) std::cerr << "warning: " << e << "\n";
    if (humans.empty()) {
        std::cerr << "no usable human judgment series\n";
        return kExitViolations;
    }
    TauAggregation agg = aggregation == "pooled_pairs" ? TauAggregation::pooled_pairs
                                                       : TauAggregation::per_topic_mean;
    AgreementTable table = agreement_table(metrics, humans, agg);
    emit(table.to_json(), out_path);
    if (!out_path.empty()) {
        fs::path txt = fs::path(out_path);
        txt.replace_extension(".txt");
        io::write_file(txt, table.to_text());
    } else {
        std::cout << table.to_text();
    }
    return errors.empty() ? kExitOk : kExitPartial;
}

// ---- run / report / cache ----------------------------------------------

int cmd_run(const std::string& config_path) {
    RunConfig config = load_run_config(config_path);
    RunOutcome outcome = run(config);
    if (!outcome.validation.ok()) {
        std::cout << outcome.validation.to_json().dump(2) << "\n";
        return kExitViolations;
    }
    write_report(config.out_dir);
    std::cout << "run complete: " << outcome.out_dir.string() << " (backend calls: "
              << outcome.backend_calls << ", failed cells: " << outcome.failed_cells << ")\n";
    return outcome.failed_cells > 0 ? kExitPartial : kExitOk;
}

int cmd_report(const std::string& run_dir) {
    write_report(run_dir);
    std::cout << io::read_file(fs::path(run_dir) / "report.txt");
    return kExitOk;
}

int cmd_cache_stats(const std::string& cache_path) {
    JudgeCache cache{fs::path(cache_path)};
    json stats{{"file", cache_path},
               {"entries", cache.size()},
               {"bytes", fs::exists(cache_path) ? fs::file_size(cache_path) : 0}};
    std::cout << stats.dump(2) << "\n";
    return kExitOk;
}

int cmd_cache_gc(const std::string& cache_path) {
    JudgeCache cache{fs::path(cache_path)};
    std::size_t removed = cache.gc();
    json stats{{"file", cache_path}, {"entries", cache.size()}, {"lines_removed", removed}};
    std::cout << stats.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"claim-centric evaluation for multimodal retrieval-augmented generation"};
    app.require_subcommand(1);

    // validate
    std::string validate_config;
    CLI::App* validate_cmd = app.add_subcommand("validate", "parse and cross-check a run config");
    validate_cmd->add_option("--config", validate_config, "run config JSON")->required();

    // decompose
    std::string d_topic, d_document, d_out, d_origin = "predicted", d_dedup = "off", d_note;
    BackendFlags d_backend;
    CLI::App* decompose_cmd =
        app.add_subcommand("decompose", "segment a document and decompose it into subclaims");
    decompose_cmd->add_option("--topic", d_topic, "topic JSON")->required();
    decompose_cmd->add_option("--document", d_document, "document JSON or raw .txt")->required();
    decompose_cmd->add_option("--out", d_out, "claims output file");
    decompose_cmd->add_option("--origin", d_origin, "claim origin: predicted | reference")
        ->check(CLI::IsMember({"predicted", "reference"}));
    decompose_cmd->add_option("--dedup", d_dedup, "off | normalized_text | judge_semantic");
    decompose_cmd->add_option("--granularity-note", d_note, "free-form note kept in the manifest");
    d_backend.attach(decompose_cmd);

    // score
    std::string s_metric, s_variant, s_mode, s_policy = "first_mention", s_out;
    bool s_weighted = false, s_drop_ungrounded = false, s_rouge_summary = false;
    ScoreInputs s_inputs;
    BackendFlags s_backend;
    EmbeddingFlags s_embedding;
    CLI::App* score_cmd = app.add_subcommand("score", "compute one metric for one prediction");
    score_cmd->add_option("--metric", s_metric, "metric name, e.g. info-p, cite-f1, rouge-l")
        ->required();
    score_cmd->add_option("--variant", s_variant, "collection | reference")
        ->check(CLI::IsMember({"", "collection", "reference"}));
    score_cmd->add_option("--mode", s_mode, "multi | single")
        ->check(CLI::IsMember({"", "multi", "single"}));
    score_cmd->add_flag("--weighted", s_weighted, "use importance weights");
    score_cmd->add_option("--weights", s_inputs.weights_path, "claim-id to weight JSON");
    score_cmd->add_option("--topic", s_inputs.topic_path, "topic JSON")->required();
    score_cmd->add_option("--prediction", s_inputs.prediction_path,
                          "prediction document JSON or raw .txt");
    score_cmd->add_option("--claims", s_inputs.claims_path, "prediction claims JSON");
    score_cmd->add_option("--reference", s_inputs.reference_path, "reference document JSON");
    score_cmd->add_option("--ref-claims", s_inputs.ref_claims_path, "reference claims JSON");
    score_cmd->add_option("--grounding", s_inputs.grounding_path, "grounding JSON");
    score_cmd->add_option("--nuggets", s_inputs.nuggets_path, "nuggets JSON");
    score_cmd->add_option("--context", s_inputs.context_sources,
                          "generation-context source ids (faithfulness, context relevance)");
    score_cmd->add_option("--citation-policy", s_policy, "first_mention | all_mentions");
    score_cmd->add_flag("--drop-ungrounded", s_drop_ungrounded,
                        "exclude ungrounded reference claims from the cite-r denominator");
    score_cmd->add_flag("--rouge-summary-level", s_rouge_summary,
                        "union-LCS over sentence pairs instead of whole-text LCS");
    score_cmd->add_option("--out", s_out, "output file (default stdout)");
    s_backend.attach(score_cmd);
    s_embedding.attach(score_cmd);

    // agree
    std::string a_scores, a_judgments, a_corpus, a_agg = "per_topic_mean",
                a_policy = "first_mention", a_out;
    CLI::App* agree_cmd =
        app.add_subcommand("agree", "Kendall tau agreement between metrics and human judgments");
    agree_cmd->add_option("--scores", a_scores, "run output dir containing series.json")
        ->required();
    agree_cmd->add_option("--judgments", a_judgments, "directory of judgment JSON files");
    agree_cmd->add_option("--corpus", a_corpus, "corpus dir (needed for ICJ/GJ judgments)");
    agree_cmd->add_option("--aggregation", a_agg, "per_topic_mean | pooled_pairs")
        ->check(CLI::IsMember({"per_topic_mean", "pooled_pairs"}));
    agree_cmd->add_option("--citation-policy", a_policy, "first_mention | all_mentions");
    agree_cmd->add_option("--out", a_out, "agreement table output file");

    // run
    std::string r_config;
    CLI::App* run_cmd = app.add_subcommand("run", "end-to-end evaluation over a corpus");
    run_cmd->add_option("--config", r_config, "run config JSON")->required();

    // report
    std::string rep_dir;
    CLI::App* report_cmd = app.add_subcommand("report", "render tables from a run directory");
    report_cmd->add_option("--run", rep_dir, "run output directory")->required();

    // cache
    CLI::App* cache_cmd = app.add_subcommand("cache", "judgment cache maintenance");
    cache_cmd->require_subcommand(1);
    std::string c_stats_path, c_gc_path;
    CLI::App* cache_stats_cmd = cache_cmd->add_subcommand("stats", "cache statistics");
    cache_stats_cmd->add_option("--cache", c_stats_path, "cache file")->required();
    CLI::App* cache_gc_cmd = cache_cmd->add_subcommand("gc", "compact the cache file");
    cache_gc_cmd->add_option("--cache", c_gc_path, "cache file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(validate_config);
        if (decompose_cmd->parsed()) {
            return cmd_decompose(d_topic, d_document, d_out, d_origin, d_dedup, d_note, d_backend);
        }
        if (score_cmd->parsed()) {
            return cmd_score(s_metric, s_variant, s_mode, s_weighted, s_inputs, s_backend,
                             s_embedding, s_policy, s_drop_ungrounded, s_rouge_summary, s_out);
        }
        if (agree_cmd->parsed()) {
            return cmd_agree(a_scores, a_judgments, a_corpus, a_agg, a_policy, a_out);
        }
        if (run_cmd->parsed()) return cmd_run(r_config);
        if (report_cmd->parsed()) return cmd_report(rep_dir);
        if (cache_cmd->parsed()) {
            if (cache_stats_cmd->parsed()) return cmd_cache_stats(c_stats_path);
            if (cache_gc_cmd->parsed()) return cmd_cache_gc(c_gc_path);
        }
    } catch (const DataCompletenessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitOk;
}
