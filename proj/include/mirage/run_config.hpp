#pragma once

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "mirage/errors.hpp"
#include "mirage/json_io.hpp"
#include "mirage/judge.hpp"
#include "mirage/maps.hpp"
#include "mirage/metric_score.hpp"
#include "mirage/text.hpp"

extern char** environ;

namespace mirage {

// One metric selection, parsed from "kind[/basis][/mode][/weighted]",
// e.g. "info-p/collection/single" or "cite-p/reference".
struct MetricSelection {
    MetricKind kind = MetricKind::info_p;
    Basis basis = Basis::none;
    SourceMode mode = SourceMode::none;
    bool weighted = false;

    std::string label() const {
        Variant v{kind, basis, mode, weighted};
        return v.label();
    }

    // File-name-safe form of the label.
    std::string slug() const {
        std::string s = label();
        for (char& c : s) {
            if (c == '/') c = '_';
        }
        return s;
    }
};

inline MetricKind metric_kind_from_string(const std::string& s) {
    for (MetricKind k :
         {MetricKind::info_p, MetricKind::info_r, MetricKind::cite_p, MetricKind::cite_r,
          MetricKind::alce_claim_recall, MetricKind::alce_citation_quality,
          MetricKind::argue_nugget_coverage, MetricKind::argue_sentence_support,
          MetricKind::ragas_faithfulness, MetricKind::ragas_answer_relevance,
          MetricKind::ragas_context_relevance, MetricKind::rouge_l, MetricKind::embed_sim}) {
        if (to_string(k) == s) return k;
    }
    // The F1 pseudo-kinds are handled by the CLI; everything else is unknown.
    throw ConfigError("unknown metric: " + s);
}

inline MetricSelection parse_metric_selection(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == '/') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    MetricSelection sel;
    sel.kind = metric_kind_from_string(parts[0]);
    for (size_t i = 1; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        if (p == "collection" || p == "reference") {
            sel.basis = basis_from_string(p);
        } else if (p == "multi" || p == "single") {
            sel.mode = source_mode_from_string(p);
        } else if (p == "weighted") {
            sel.weighted = true;
        } else {
            throw ConfigError("unknown metric qualifier '" + p + "' in " + spec);
        }
    }
    // Defaults where the metric has a basis/mode but none was given.
    if (sel.kind == MetricKind::info_p || sel.kind == MetricKind::cite_p) {
        if (sel.basis == Basis::none) sel.basis = Basis::collection;
        if (sel.basis == Basis::collection && sel.mode == SourceMode::none) {
            sel.mode = SourceMode::single;
        }
    }
    return sel;
}

struct BackendConfig {
    std::string kind = "oracle";  // oracle | remote | human
    std::string id;
    std::string path;      // oracle truth table or human judgments dir
    std::string endpoint;  // remote
    std::string model;
    std::map<std::string, std::string> headers;
    std::vector<int> capacity_status_codes = {413, 507};
    std::string capacity_error_substring = "out of memory";
    std::string templates_dir;
};

struct EmbeddingConfig {
    std::string kind = "fixture";  // fixture | remote
    std::string id;
    std::string path;
    std::string endpoint;
    std::string model;
    std::map<std::string, std::string> headers;
};

struct RunConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path out_dir;
    std::vector<MetricSelection> metrics;
    BackendConfig backend;
    EmbeddingConfig embedding;
    std::filesystem::path cache_path;  // empty = in-memory only
    int concurrency = 1;
    std::string on_parse_error = "fail";
    int max_halvings = 10;
    bool strict_json = true;
    std::string citation_policy = "first_mention";
    bool drop_ungrounded = false;
    bool rouge_summary_level = false;
    std::string tau_aggregation = "per_topic_mean";

    json snapshot() const {
        json backends{{"kind", backend.kind}};
        if (!backend.id.empty()) backends["id"] = backend.id;
        if (!backend.path.empty()) backends["path"] = backend.path;
        if (!backend.endpoint.empty()) backends["endpoint"] = backend.endpoint;
        if (!backend.model.empty()) backends["model"] = backend.model;
        json metric_list = json::array();
        for (const auto& m : metrics) metric_list.push_back(m.label());
        json embed{{"kind", embedding.kind}};
        if (!embedding.path.empty()) embed["path"] = embedding.path;
        if (!embedding.endpoint.empty()) embed["endpoint"] = embedding.endpoint;
        return json{{"corpus_dir", corpus_dir.string()},
                    {"out_dir", out_dir.string()},
                    {"metrics", metric_list},
                    {"backend", backends},
                    {"embedding", embed},
                    {"cache_path", cache_path.string()},
                    {"concurrency", concurrency},
                    {"on_parse_error", on_parse_error},
                    {"max_halvings", max_halvings},
                    {"strict_json", strict_json},
                    {"citation_policy", citation_policy},
                    {"drop_ungrounded", drop_ungrounded},
                    {"rouge_summary_level", rouge_summary_level},
                    {"tau_aggregation", tau_aggregation}};
    }
};

namespace detail {

inline void apply_string(const json& j, const std::string& key, std::string& out) {
    if (j.contains(key)) {
        if (!j[key].is_string()) throw ConfigError("config field '" + key + "' must be a string");
        out = j[key].get<std::string>();
    }
}

inline void apply_headers(const json& j, std::map<std::string, std::string>& out) {
    if (!j.contains("headers")) return;
    if (!j["headers"].is_object()) throw ConfigError("config 'headers' must be an object");
    for (auto it = j["headers"].begin(); it != j["headers"].end(); ++it) {
        out[it.key()] = it.value().get<std::string>();
    }
}

}  // namespace detail

inline BackendConfig backend_config_from_json(const json& j) {
    BackendConfig b;
    detail::apply_string(j, "kind", b.kind);
    detail::apply_string(j, "id", b.id);
    detail::apply_string(j, "path", b.path);
    detail::apply_string(j, "endpoint", b.endpoint);
    detail::apply_string(j, "model", b.model);
    detail::apply_string(j, "templates_dir", b.templates_dir);
    detail::apply_headers(j, b.headers);
    if (j.contains("capacity_status_codes")) {
        b.capacity_status_codes.clear();
        for (const auto& c : j["capacity_status_codes"]) {
            b.capacity_status_codes.push_back(c.get<int>());
        }
    }
    detail::apply_string(j, "capacity_error_substring", b.capacity_error_substring);
    return b;
}

inline EmbeddingConfig embedding_config_from_json(const json& j) {
    EmbeddingConfig e;
    detail::apply_string(j, "kind", e.kind);
    detail::apply_string(j, "id", e.id);
    detail::apply_string(j, "path", e.path);
    detail::apply_string(j, "endpoint", e.endpoint);
    detail::apply_string(j, "model", e.model);
    detail::apply_headers(j, e.headers);
    return e;
}

// Loads a run config from JSON, then applies MIRAGE_* environment overrides.
// Nesting uses double underscores: MIRAGE_BACKEND__ENDPOINT=... overrides
// backend.endpoint.
inline RunConfig run_config_from_json(json j) {
    // Environment overrides.
    for (char** env = environ; *env; ++env) {
        std::string entry(*env);
        if (!starts_with(entry, "MIRAGE_")) continue;
        size_t eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string key = entry.substr(7, eq - 7);
        std::string value = entry.substr(eq + 1);
        json* node = &j;
        size_t pos = 0;
        while (true) {
            size_t sep = key.find("__", pos);
            std::string part = to_lower(key.substr(pos, sep - pos));
            if (sep == std::string::npos) {
                (*node)[part] = value;
                break;
            }
            node = &(*node)[part];
            pos = sep + 2;
        }
    }

    RunConfig c;
    if (j.contains("corpus_dir")) c.corpus_dir = j["corpus_dir"].get<std::string>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("metrics")) {
        for (const auto& m : j["metrics"]) {
            c.metrics.push_back(parse_metric_selection(m.get<std::string>()));
        }
    }
    if (j.contains("backend")) c.backend = backend_config_from_json(j["backend"]);
    if (j.contains("embedding")) c.embedding = embedding_config_from_json(j["embedding"]);
    if (j.contains("cache_path")) c.cache_path = j["cache_path"].get<std::string>();
    if (j.contains("concurrency")) {
        c.concurrency = j["concurrency"].is_string()
                            ? std::stoi(j["concurrency"].get<std::string>())
                            : j["concurrency"].get<int>();
        if (c.concurrency < 1) throw ConfigError("concurrency must be at least 1");
    }
    if (j.contains("on_parse_error")) c.on_parse_error = j["on_parse_error"].get<std::string>();
    if (j.contains("max_halvings")) {
        c.max_halvings = j["max_halvings"].is_string()
                             ? std::stoi(j["max_halvings"].get<std::string>())
                             : j["max_halvings"].get<int>();
    }
    if (j.contains("strict_json")) {
        c.strict_json = j["strict_json"].is_string() ? j["strict_json"].get<std::string>() == "true"
                                                     : j["strict_json"].get<bool>();
    }
    if (j.contains("citation_policy")) {
        c.citation_policy = j["citation_policy"].get<std::string>();
    }
    if (j.contains("drop_ungrounded")) {
        c.drop_ungrounded = j["drop_ungrounded"].is_string()
                                ? j["drop_ungrounded"].get<std::string>() == "true"
                                : j["drop_ungrounded"].get<bool>();
    }
    if (j.contains("rouge_summary_level")) {
        c.rouge_summary_level = j["rouge_summary_level"].is_string()
                                    ? j["rouge_summary_level"].get<std::string>() == "true"
                                    : j["rouge_summary_level"].get<bool>();
    }
    if (j.contains("tau_aggregation")) {
        c.tau_aggregation = j["tau_aggregation"].get<std::string>();
    }
    parse_error_policy_from_string(c.on_parse_error);      // validate early
    citation_policy_from_string(c.citation_policy);        // validate early
    if (c.tau_aggregation != "per_topic_mean" && c.tau_aggregation != "pooled_pairs") {
        throw ConfigError("unknown tau_aggregation: " + c.tau_aggregation);
    }
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    return run_config_from_json(io::load_json_file(path));
}

}  // namespace mirage
