#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "mirage/embedding.hpp"
#include "mirage/errors.hpp"
#include "mirage/judge.hpp"
#include "mirage/prompts.hpp"
#include "mirage/types.hpp"

namespace mirage {

struct EndpointParts {
    std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
    std::string path;              // e.g. "/v1/judge"
};

inline EndpointParts parse_endpoint(const std::string& endpoint) {
    size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) {
        throw ConfigError("endpoint must include a scheme: " + endpoint);
    }
    size_t path_start = endpoint.find('/', scheme + 3);
    EndpointParts parts;
    if (path_start == std::string::npos) {
        parts.scheme_host_port = endpoint;
        parts.path = "/";
    } else {
        parts.scheme_host_port = endpoint.substr(0, path_start);
        parts.path = endpoint.substr(path_start);
    }
    return parts;
}

struct RemoteBackendConfig {
    std::string endpoint;  // full URL of the chat endpoint
    std::string model;
    std::map<std::string, std::string> headers;
    std::set<int> capacity_status_codes = {413, 507};
    std::string capacity_error_substring = "out of memory";
    int timeout_seconds = 300;
    std::string id = "remote";
};

// Chat-style JSON-over-HTTP judge. Requests carry the rendered prompt
// messages plus a media list resolving each hypothesis source id to its URI
// at the requested fps; the response body is {"text": ...}. Capacity
// pressure is recognized by status code or a substring of the error body
// and surfaces as CapacityError so the downsampling loop can retry.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(RemoteBackendConfig config, PromptLibrary prompts = {})
        : config_(std::move(config)), prompts_(std::move(prompts)) {
        if (config_.endpoint.empty()) throw ConfigError("remote backend requires an endpoint");
    }

    void add_source(const SourceRef& source) {
        std::lock_guard<std::mutex> lock(mu_);
        sources_[source.id] = source;
    }

    void add_sources(const std::vector<SourceRef>& sources) {
        for (const auto& s : sources) add_source(s);
    }

    std::string id() const override { return config_.id; }
    bool supports(Task) const override { return true; }

    std::string complete(const JudgeRequest& req) override {
        nlohmann::json body = build_request_body(req);
        EndpointParts parts = parse_endpoint(config_.endpoint);
        httplib::Client client(parts.scheme_host_port);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        httplib::Headers headers;
        for (const auto& [k, v] : config_.headers) headers.emplace(k, v);
        auto res = client.Post(parts.path, headers, body.dump(), "application/json");
        if (!res) {
            throw TransportError("backend '" + config_.id + "' unreachable at " +
                                 config_.endpoint + ": " + httplib::to_string(res.error()));
        }
        if (config_.capacity_status_codes.count(res->status)) {
            throw CapacityError("backend returned capacity status " +
                                std::to_string(res->status));
        }
        if (res->status != 200) {
            if (!config_.capacity_error_substring.empty() &&
                contains(to_lower(res->body), to_lower(config_.capacity_error_substring))) {
                throw CapacityError("backend error body signals capacity: " + res->body);
            }
            throw TransportError("backend returned status " + std::to_string(res->status) + ": " +
                                 res->body);
        }
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("text") ||
            !parsed["text"].is_string()) {
            throw ParseError("backend response is not a {\"text\": ...} object", res->body);
        }
        return parsed["text"].get<std::string>();
    }

    nlohmann::json build_request_body(const JudgeRequest& req) const {
        PromptTemplate rendered = prompts_.render(req);
        nlohmann::json messages = nlohmann::json::array();
        if (!rendered.system.empty()) {
            messages.push_back({{"role", "system"}, {"content", rendered.system}});
        }
        messages.push_back({{"role", "user"}, {"content", rendered.user}});
        nlohmann::json media = nlohmann::json::array();
        if (req.hypothesis.kind == HypothesisKind::sources) {
            std::string fps = "1";
            if (auto it = req.params.find("fps"); it != req.params.end()) fps = it->second;
            std::lock_guard<std::mutex> lock(mu_);
            for (const auto& sid : req.hypothesis.source_ids) {
                auto it = sources_.find(sid);
                if (it == sources_.end()) {
                    throw ConfigError("remote backend has no registered source '" + sid + "'");
                }
                media.push_back({{"source_id", sid}, {"uri", it->second.uri}, {"fps", fps}});
            }
        }
        return nlohmann::json{
            {"model", config_.model}, {"messages", messages}, {"media", media}};
    }

private:
    RemoteBackendConfig config_;
    PromptLibrary prompts_;
    mutable std::mutex mu_;
    std::map<std::string, SourceRef> sources_;
};

struct RemoteEmbeddingConfig {
    std::string endpoint;
    std::string model;
    std::map<std::string, std::string> headers;
    int timeout_seconds = 120;
    std::string id = "remote-embed";
};

// Embeddings over HTTP: {model, input:[strings]} -> {vectors:[[...], ...]}.
class RemoteEmbeddingBackend : public EmbeddingBackend {
public:
    explicit RemoteEmbeddingBackend(RemoteEmbeddingConfig config) : config_(std::move(config)) {
        if (config_.endpoint.empty()) throw ConfigError("embedding backend requires an endpoint");
    }

    std::string id() const override { return config_.id; }

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& inputs) override {
        nlohmann::json body{{"model", config_.model}, {"input", inputs}};
        EndpointParts parts = parse_endpoint(config_.endpoint);
        httplib::Client client(parts.scheme_host_port);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        httplib::Headers headers;
        for (const auto& [k, v] : config_.headers) headers.emplace(k, v);
        auto res = client.Post(parts.path, headers, body.dump(), "application/json");
        if (!res) {
            throw TransportError("embedding backend unreachable at " + config_.endpoint + ": " +
                                 httplib::to_string(res.error()));
        }
        if (res->status != 200) {
            throw TransportError("embedding backend returned status " +
                                 std::to_string(res->status) + ": " + res->body);
        }
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("vectors") ||
            !parsed["vectors"].is_array()) {
            throw ParseError("embedding response is not a {\"vectors\": ...} object", res->body);
        }
        std::vector<EmbeddingVector> out;
        for (const auto& vj : parsed["vectors"]) {
            EmbeddingVector v;
            v.model_id = config_.id;
            for (const auto& x : vj) v.values.push_back(x.get<double>());
            out.push_back(std::move(v));
        }
        return out;
    }

private:
    RemoteEmbeddingConfig config_;
};

}  // namespace mirage
