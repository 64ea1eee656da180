#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirage/errors.hpp"
#include "mirage/types.hpp"

namespace mirage {

using json = nlohmann::json;

namespace io {

inline json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw FormatError(what + ": invalid JSON");
    return j;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

inline void write_file(const std::filesystem::path& path, const std::string& data) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    out << data;
}

inline json load_json_file(const std::filesystem::path& path) {
    return parse_json(read_file(path), path.string());
}

// Serialized form is dump(2) + newline everywhere, so identical values give
// identical bytes.
inline void write_json_file(const std::filesystem::path& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

inline void check_fields(const json& j, const std::set<std::string>& known,
                         const std::set<std::string>& required, bool strict,
                         const std::string& what) {
    if (!j.is_object()) throw FormatError(what + ": expected a JSON object");
    for (const auto& f : required) {
        if (!j.contains(f)) throw FormatError(what + ": missing required field '" + f + "'");
    }
    if (strict) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!known.count(it.key())) {
                throw FormatError(what + ": unknown field '" + it.key() + "' (strict mode)");
            }
        }
    }
}

inline std::string require_string(const json& j, const std::string& field, const std::string& what) {
    if (!j.contains(field) || !j[field].is_string()) {
        throw FormatError(what + ": field '" + field + "' must be a string");
    }
    return j[field].get<std::string>();
}

// ---- Topic -----------------------------------------------------------------

inline json to_json(const SourceRef& s) {
    json meta = json::object();
    for (const auto& [k, v] : s.metadata) meta[k] = v;
    return json{{"id", s.id}, {"modality", to_string(s.modality)}, {"uri", s.uri}, {"metadata", meta}};
}

inline SourceRef source_from_json(const json& j, bool strict, const std::string& what) {
    check_fields(j, {"id", "modality", "uri", "metadata"}, {"id", "modality"}, strict, what);
    SourceRef s;
    s.id = require_string(j, "id", what);
    s.modality = modality_from_string(require_string(j, "modality", what));
    if (j.contains("uri")) s.uri = require_string(j, "uri", what);
    if (j.contains("metadata")) {
        if (!j["metadata"].is_object()) throw FormatError(what + ": metadata must be an object");
        for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it) {
            if (!it.value().is_string()) {
                throw FormatError(what + ": metadata values must be strings");
            }
            s.metadata[it.key()] = it.value().get<std::string>();
        }
    }
    return s;
}

inline json to_json(const Topic& t) {
    json sources = json::array();
    for (const auto& s : t.sources) sources.push_back(to_json(s));
    json j{{"id", t.id}, {"query", t.query}, {"sources", sources}};
    if (t.reference_id) j["reference_id"] = *t.reference_id;
    return j;
}

inline Topic topic_from_json(const json& j, bool strict = true) {
    const std::string what = "topic";
    check_fields(j, {"id", "query", "sources", "reference_id"}, {"id", "query", "sources"}, strict, what);
    Topic t;
    t.id = require_string(j, "id", what);
    t.query = require_string(j, "query", what);
    if (!j["sources"].is_array()) throw FormatError(what + ": sources must be an array");
    for (const auto& s : j["sources"]) {
        t.sources.push_back(source_from_json(s, strict, "topic " + t.id + " source"));
    }
    if (j.contains("reference_id")) t.reference_id = require_string(j, "reference_id", what);
    validate_topic(t);
    return t;
}

// ---- Document --------------------------------------------------------------

inline json to_json(const Sentence& s) {
    return json{{"index", s.index}, {"text", s.text}, {"citations", s.citations}};
}

inline json to_json(const Document& d) {
    json sentences = json::array();
    for (const auto& s : d.sentences) sentences.push_back(to_json(s));
    return json{{"topic_id", d.topic_id}, {"system_id", d.system_id}, {"sentences", sentences}};
}

inline Document document_from_json(const json& j, bool strict = true) {
    const std::string what = "document";
    check_fields(j, {"topic_id", "system_id", "sentences"}, {"topic_id", "system_id", "sentences"},
                 strict, what);
    Document d;
    d.topic_id = require_string(j, "topic_id", what);
    d.system_id = require_string(j, "system_id", what);
    if (!j["sentences"].is_array()) throw FormatError(what + ": sentences must be an array");
    for (const auto& sj : j["sentences"]) {
        check_fields(sj, {"index", "text", "citations"}, {"index", "text"}, strict,
                     "document " + d.system_id + " sentence");
        Sentence s;
        if (!sj["index"].is_number_integer()) {
            throw FormatError("document " + d.system_id + ": sentence index must be an integer");
        }
        s.index = sj["index"].get<int>();
        s.text = require_string(sj, "text", "sentence");
        if (sj.contains("citations")) {
            if (!sj["citations"].is_array()) {
                throw FormatError("document " + d.system_id + ": citations must be an array");
            }
            for (const auto& c : sj["citations"]) {
                if (!c.is_string()) {
                    throw FormatError("document " + d.system_id + ": citation ids must be strings");
                }
                s.citations.push_back(c.get<std::string>());
            }
        }
        d.sentences.push_back(std::move(s));
    }
    for (size_t i = 0; i < d.sentences.size(); ++i) {
        if (d.sentences[i].index != static_cast<int>(i)) {
            throw FormatError("document " + d.system_id + ": sentence indices must be contiguous from 0");
        }
    }
    return d;
}

// ---- Claims ----------------------------------------------------------------

inline json to_json(const Subclaim& c) {
    json j{{"id", c.id},
           {"text", c.text},
           {"parent_sentence", c.parent_sentence},
           {"origin", to_string(c.origin)}};
    if (c.importance != 1.0) j["importance"] = c.importance;
    return j;
}

inline json to_json(const ClaimSet& cs) {
    json claims = json::array();
    for (const auto& c : cs.claims) claims.push_back(to_json(c));
    return json{{"owner", cs.owner_id}, {"claims", claims}};
}

inline ClaimSet claims_from_json(const json& j, bool strict = true,
                                 std::shared_ptr<const Document> owner = nullptr) {
    const std::string what = "claims";
    check_fields(j, {"owner", "claims"}, {"owner", "claims"}, strict, what);
    ClaimSet cs;
    cs.owner_id = require_string(j, "owner", what);
    cs.owner = std::move(owner);
    if (!j["claims"].is_array()) throw FormatError(what + ": claims must be an array");
    for (const auto& cj : j["claims"]) {
        check_fields(cj, {"id", "text", "parent_sentence", "origin", "importance"},
                     {"id", "text", "parent_sentence", "origin"}, strict, "claim");
        Subclaim c;
        c.id = require_string(cj, "id", "claim");
        c.text = require_string(cj, "text", "claim");
        if (!cj["parent_sentence"].is_number_integer()) {
            throw FormatError("claim " + c.id + ": parent_sentence must be an integer");
        }
        c.parent_sentence = cj["parent_sentence"].get<int>();
        c.origin = claim_origin_from_string(require_string(cj, "origin", "claim"));
        if (cj.contains("importance")) {
            if (!cj["importance"].is_number()) {
                throw FormatError("claim " + c.id + ": importance must be a number");
            }
            c.importance = cj["importance"].get<double>();
        }
        cs.claims.push_back(std::move(c));
    }
    validate_claims(cs);
    return cs;
}

// ---- Grounding -------------------------------------------------------------

inline json to_json(const GroundingMap& g) {
    json entries = json::object();
    for (const auto& [claim_id, sources] : g.entries) entries[claim_id] = sources;
    return json{{"topic_id", g.topic_id}, {"entries", entries}};
}

inline GroundingMap grounding_from_json(const json& j, bool strict = true) {
    const std::string what = "grounding";
    check_fields(j, {"topic_id", "entries"}, {"topic_id", "entries"}, strict, what);
    GroundingMap g;
    g.topic_id = require_string(j, "topic_id", what);
    if (!j["entries"].is_object()) throw FormatError(what + ": entries must be an object");
    for (auto it = j["entries"].begin(); it != j["entries"].end(); ++it) {
        if (!it.value().is_array()) {
            throw FormatError(what + ": entry '" + it.key() + "' must be an array of source ids");
        }
        std::vector<std::string> sources;
        for (const auto& s : it.value()) {
            if (!s.is_string()) throw FormatError(what + ": source ids must be strings");
            sources.push_back(s.get<std::string>());
        }
        g.entries[it.key()] = std::move(sources);
    }
    return g;
}

// ---- Derived maps ----------------------------------------------------------

inline json to_json(const CitationMap& m) {
    json entries = json::object();
    for (const auto& [claim_id, sources] : m.entries) entries[claim_id] = sources;
    return json{{"entries", entries}};
}

inline json to_json(const CitedSentenceMap& m) {
    json entries = json::object();
    for (const auto& [source_id, ordinals] : m.entries) entries[source_id] = ordinals;
    return json{{"entries", entries}};
}

inline json to_json(const Nugget& n) {
    return json{{"id", n.id}, {"question", n.question}, {"answer_claim", n.answer_claim}};
}

inline Nugget nugget_from_json(const json& j, bool strict = true) {
    check_fields(j, {"id", "question", "answer_claim"}, {"id", "question", "answer_claim"}, strict,
                 "nugget");
    Nugget n;
    n.id = require_string(j, "id", "nugget");
    n.question = require_string(j, "question", "nugget");
    n.answer_claim = require_string(j, "answer_claim", "nugget");
    return n;
}

}  // namespace io

}  // namespace mirage
