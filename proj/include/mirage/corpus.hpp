#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/json_io.hpp"
#include "mirage/judgments.hpp"
#include "mirage/segment.hpp"
#include "mirage/types.hpp"

namespace mirage {

// One topic's worth of evaluation inputs, loaded from a corpus directory:
//
//   <corpus>/<topic-dir>/
//     topic.json
//     documents/<system>.json     pre-segmented documents ("reference" included)
//     raw/<system>.txt            raw text alternatives, segmented at load
//     claims/<system>.json        subclaims per document owner
//     grounding.json              reference-claim grounding (optional)
//     nuggets.json                {topic_id, nuggets:[...]} (optional)
//     weights/<system>.json       {claim_id: weight} (optional)
//     generation_context.json     {system: [source ids]} (optional)
//     judgments/*.json            EQJ/ICJ/GJ files (optional)
struct TopicCorpus {
    Topic topic;
    std::map<std::string, std::shared_ptr<const Document>> documents;  // by system id
    std::map<std::string, ClaimSet> claims;                            // by owner id
    std::optional<GroundingMap> grounding;
    std::vector<Nugget> nuggets;
    std::map<std::string, std::map<std::string, double>> weights;      // system -> claim -> w
    std::map<std::string, std::vector<std::string>> generation_context;  // system -> source ids
    std::vector<HumanJudgmentSet> judgments;

    std::shared_ptr<const Document> reference() const {
        auto it = documents.find("reference");
        return it == documents.end() ? nullptr : it->second;
    }

    std::vector<std::string> system_ids() const {
        std::vector<std::string> ids;
        for (const auto& [id, doc] : documents) {
            if (id != "reference") ids.push_back(id);
        }
        return ids;
    }
};

struct Corpus {
    std::map<std::string, TopicCorpus> topics;
};

struct Violation {
    std::string file;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    json to_json() const {
        json list = json::array();
        for (const auto& v : violations) {
            list.push_back(json{{"file", v.file}, {"message", v.message}});
        }
        return json{{"ok", ok()}, {"violations", list}};
    }
};

namespace detail {

inline std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir,
                                                       const std::string& extension) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) return files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace detail

// Loads one topic directory, collecting violations instead of throwing.
// Returns nothing if the topic file itself is unreadable.
inline std::optional<TopicCorpus> load_topic_dir(const std::filesystem::path& dir, bool strict,
                                                 ValidationReport& report) {
    namespace fs = std::filesystem;
    fs::path topic_file = dir / "topic.json";
    if (!fs::exists(topic_file)) {
        report.violations.push_back({topic_file.string(), "missing topic.json"});
        return std::nullopt;
    }
    TopicCorpus tc;
    try {
        tc.topic = io::topic_from_json(io::load_json_file(topic_file), strict);
    } catch (const Error& e) {
        report.violations.push_back({topic_file.string(), e.what()});
        return std::nullopt;
    }

    for (const auto& file : detail::sorted_files(dir / "documents", ".json")) {
        try {
            Document d = io::document_from_json(io::load_json_file(file), strict);
            validate_document(d, tc.topic);
            if (d.topic_id != tc.topic.id) {
                throw FormatError("document topic_id '" + d.topic_id + "' does not match topic '" +
                                  tc.topic.id + "'");
            }
            std::string system_id = d.system_id;
            tc.documents[system_id] = std::make_shared<Document>(std::move(d));
        } catch (const Error& e) {
            report.violations.push_back({file.string(), e.what()});
        }
    }
    for (const auto& file : detail::sorted_files(dir / "raw", ".txt")) {
        std::string system_id = file.stem().string();
        try {
            Document d = segment_document(io::read_file(file), tc.topic, system_id);
            tc.documents[system_id] = std::make_shared<Document>(std::move(d));
        } catch (const Error& e) {
            report.violations.push_back({file.string(), e.what()});
        }
    }

    for (const auto& file : detail::sorted_files(dir / "claims", ".json")) {
        try {
            json j = io::load_json_file(file);
            std::string owner = io::require_string(j, "owner", "claims");
            auto doc_it = tc.documents.find(owner);
            std::shared_ptr<const Document> owner_doc =
                doc_it == tc.documents.end() ? nullptr : doc_it->second;
            ClaimSet cs = io::claims_from_json(j, strict, owner_doc);
            if (!owner_doc) {
                report.violations.push_back(
                    {file.string(), "claims owner '" + owner + "' has no document in this topic"});
                continue;
            }
            tc.claims[owner] = std::move(cs);
        } catch (const Error& e) {
            report.violations.push_back({file.string(), e.what()});
        }
    }

    fs::path grounding_file = dir / "grounding.json";
    if (fs::exists(grounding_file)) {
        try {
            GroundingMap g = io::grounding_from_json(io::load_json_file(grounding_file), strict);
            auto ref_claims = tc.claims.find("reference");
            for (const auto& [claim_id, sources] : g.entries) {
                if (ref_claims != tc.claims.end() && !ref_claims->second.find(claim_id)) {
                    report.violations.push_back(
                        {grounding_file.string(),
                         "grounding entry for unknown reference claim '" + claim_id + "'"});
                }
                for (const auto& sid : sources) {
                    if (!tc.topic.find_source(sid)) {
                        report.violations.push_back(
                            {grounding_file.string(), "grounding for claim '" + claim_id +
                                                          "' names unknown source '" + sid + "'"});
                    }
                }
            }
            tc.grounding = std::move(g);
        } catch (const Error& e) {
            report.violations.push_back({grounding_file.string(), e.what()});
        }
    }

    fs::path nuggets_file = dir / "nuggets.json";
    if (fs::exists(nuggets_file)) {
        try {
            json j = io::load_json_file(nuggets_file);
            if (!j.contains("nuggets") || !j["nuggets"].is_array()) {
                throw FormatError("nuggets file must carry a 'nuggets' array");
            }
            for (const auto& nj : j["nuggets"]) {
                Nugget n = io::nugget_from_json(nj, strict);
                auto ref_claims = tc.claims.find("reference");
                if (ref_claims != tc.claims.end() && !ref_claims->second.find(n.answer_claim)) {
                    report.violations.push_back(
                        {nuggets_file.string(),
                         "nugget '" + n.id + "' answers unknown claim '" + n.answer_claim + "'"});
                }
                tc.nuggets.push_back(std::move(n));
            }
        } catch (const Error& e) {
            report.violations.push_back({nuggets_file.string(), e.what()});
        }
    }

    for (const auto& file : detail::sorted_files(dir / "weights", ".json")) {
        std::string system_id = file.stem().string();
        try {
            json j = io::load_json_file(file);
            if (!j.is_object()) throw FormatError("weights file must be a JSON object");
            std::map<std::string, double> w;
            for (auto it = j.begin(); it != j.end(); ++it) {
                double v = it.value().get<double>();
                if (v < 0) throw FormatError("weight for '" + it.key() + "' must be non-negative");
                w[it.key()] = v;
            }
            tc.weights[system_id] = std::move(w);
        } catch (const Error& e) {
            report.violations.push_back({file.string(), e.what()});
        }
    }

    fs::path context_file = dir / "generation_context.json";
    if (fs::exists(context_file)) {
        try {
            json j = io::load_json_file(context_file);
            for (auto it = j.begin(); it != j.end(); ++it) {
                std::vector<std::string> ids;
                for (const auto& sid : it.value()) {
                    std::string id = sid.get<std::string>();
                    if (!tc.topic.find_source(id)) {
                        report.violations.push_back(
                            {context_file.string(), "generation context for '" + it.key() +
                                                        "' names unknown source '" + id + "'"});
                    }
                    ids.push_back(id);
                }
                tc.generation_context[it.key()] = std::move(ids);
            }
        } catch (const Error& e) {
            report.violations.push_back({context_file.string(), e.what()});
        }
    }

    for (const auto& file : detail::sorted_files(dir / "judgments", ".json")) {
        try {
            HumanJudgmentSet h = io::judgments_from_json(io::load_json_file(file), strict);
            if (h.topic_id != tc.topic.id) {
                throw FormatError("judgment topic_id '" + h.topic_id + "' does not match topic '" +
                                  tc.topic.id + "'");
            }
            tc.judgments.push_back(std::move(h));
        } catch (const Error& e) {
            report.violations.push_back({file.string(), e.what()});
        }
    }

    return tc;
}

inline Corpus load_corpus(const std::filesystem::path& corpus_dir, bool strict,
                          ValidationReport& report) {
    namespace fs = std::filesystem;
    Corpus corpus;
    if (!fs::is_directory(corpus_dir)) {
        report.violations.push_back({corpus_dir.string(), "corpus directory does not exist"});
        return corpus;
    }
    std::vector<fs::path> topic_dirs;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.is_directory()) topic_dirs.push_back(entry.path());
    }
    std::sort(topic_dirs.begin(), topic_dirs.end());
    for (const auto& dir : topic_dirs) {
        if (auto tc = load_topic_dir(dir, strict, report)) {
            std::string id = tc->topic.id;
            if (corpus.topics.count(id)) {
                report.violations.push_back({dir.string(), "duplicate topic id '" + id + "'"});
                continue;
            }
            corpus.topics.emplace(id, std::move(*tc));
        }
    }
    return corpus;
}

}  // namespace mirage
