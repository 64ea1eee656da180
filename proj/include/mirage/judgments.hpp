#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirage/errors.hpp"
#include "mirage/json_io.hpp"

namespace mirage {

enum class JudgmentKind { eqj, icj, gj };

inline std::string to_string(JudgmentKind k) {
    switch (k) {
        case JudgmentKind::eqj: return "EQJ";
        case JudgmentKind::icj: return "ICJ";
        case JudgmentKind::gj: return "GJ";
    }
    return "EQJ";
}

enum class IcjDirection { predicted_vs_reference, reference_vs_predicted };

inline std::string to_string(IcjDirection d) {
    return d == IcjDirection::predicted_vs_reference ? "predicted_vs_reference"
                                                     : "reference_vs_predicted";
}

inline IcjDirection icj_direction_from_string(const std::string& s) {
    if (s == "predicted_vs_reference") return IcjDirection::predicted_vs_reference;
    if (s == "reference_vs_predicted") return IcjDirection::reference_vs_predicted;
    throw FormatError("unknown ICJ direction: " + s);
}

// One file's worth of human judgments for one topic.
//  EQJ: per-system 1-5 likert quality scores.
//  ICJ: claim-level support booleans mirroring InfoF1-Ref, one direction per set.
//  GJ:  per predicted claim, the sources grounding it (mirrors CiteP).
struct HumanJudgmentSet {
    JudgmentKind kind = JudgmentKind::eqj;
    std::string annotator;
    std::string topic_id;
    std::string system_id;  // which system's prediction was judged (ICJ/GJ)

    std::map<std::string, int> eqj_scores;  // system id -> likert 1..5

    IcjDirection direction = IcjDirection::predicted_vs_reference;
    std::map<std::string, bool> claim_judgments;  // claim id -> supported

    std::map<std::string, std::vector<std::string>> grounding;  // claim id -> sources
};

namespace io {

inline json to_json(const HumanJudgmentSet& h) {
    json j{{"kind", to_string(h.kind)}, {"topic_id", h.topic_id}};
    if (!h.annotator.empty()) j["annotator"] = h.annotator;
    switch (h.kind) {
        case JudgmentKind::eqj: {
            json scores = json::object();
            for (const auto& [sys, v] : h.eqj_scores) scores[sys] = v;
            j["scores"] = scores;
            break;
        }
        case JudgmentKind::icj: {
            j["system_id"] = h.system_id;
            j["direction"] = to_string(h.direction);
            json cj = json::object();
            for (const auto& [id, b] : h.claim_judgments) cj[id] = b;
            j["claim_judgments"] = cj;
            break;
        }
        case JudgmentKind::gj: {
            j["system_id"] = h.system_id;
            json entries = json::array();
            for (const auto& [id, sources] : h.grounding) {
                entries.push_back(json{{"claim_id", id}, {"supported_sources", sources}});
            }
            j["entries"] = entries;
            break;
        }
    }
    return j;
}

inline HumanJudgmentSet judgments_from_json(const json& j, bool strict = true) {
    const std::string what = "judgments";
    if (!j.is_object()) throw FormatError(what + ": expected a JSON object");
    HumanJudgmentSet h;
    std::string kind = require_string(j, "kind", what);
    h.topic_id = require_string(j, "topic_id", what);
    if (j.contains("annotator")) {
        if (j["annotator"].is_string()) {
            h.annotator = j["annotator"].get<std::string>();
        } else if (j["annotator"].is_number_integer()) {
            h.annotator = std::to_string(j["annotator"].get<int>());
        } else {
            throw FormatError(what + ": annotator must be a string");
        }
    }
    if (kind == "EQJ" || kind == "eqj") {
        h.kind = JudgmentKind::eqj;
        check_fields(j, {"kind", "topic_id", "annotator", "scores"}, {"scores"}, strict, what);
        if (!j["scores"].is_object()) throw FormatError(what + ": scores must be an object");
        for (auto it = j["scores"].begin(); it != j["scores"].end(); ++it) {
            if (!it.value().is_number_integer()) {
                throw FormatError("EQJ score for '" + it.key() + "' must be an integer likert");
            }
            int v = it.value().get<int>();
            if (v < 1 || v > 5) {
                throw FormatError("EQJ score for '" + it.key() + "' must be in 1..5, got " +
                                  std::to_string(v));
            }
            h.eqj_scores[it.key()] = v;
        }
    } else if (kind == "ICJ" || kind == "icj") {
        h.kind = JudgmentKind::icj;
        check_fields(j, {"kind", "topic_id", "annotator", "system_id", "direction", "claim_judgments"},
                     {"system_id", "direction", "claim_judgments"}, strict, what);
        h.system_id = require_string(j, "system_id", what);
        h.direction = icj_direction_from_string(require_string(j, "direction", what));
        if (!j["claim_judgments"].is_object()) {
            throw FormatError(what + ": claim_judgments must be an object");
        }
        for (auto it = j["claim_judgments"].begin(); it != j["claim_judgments"].end(); ++it) {
            if (!it.value().is_boolean()) {
                throw FormatError("ICJ judgment for '" + it.key() + "' must be a boolean");
            }
            h.claim_judgments[it.key()] = it.value().get<bool>();
        }
    } else if (kind == "GJ" || kind == "gj") {
        h.kind = JudgmentKind::gj;
        check_fields(j, {"kind", "topic_id", "annotator", "system_id", "entries"},
                     {"system_id", "entries"}, strict, what);
        h.system_id = require_string(j, "system_id", what);
        if (!j["entries"].is_array()) throw FormatError(what + ": entries must be an array");
        for (const auto& ej : j["entries"]) {
            check_fields(ej, {"claim_id", "supported_sources"}, {"claim_id", "supported_sources"},
                         strict, "GJ entry");
            std::string claim_id = require_string(ej, "claim_id", "GJ entry");
            std::vector<std::string> sources;
            for (const auto& s : ej["supported_sources"]) {
                if (!s.is_string()) throw FormatError("GJ supported_sources must be strings");
                sources.push_back(s.get<std::string>());
            }
            h.grounding[claim_id] = std::move(sources);
        }
    } else {
        throw FormatError(what + ": unknown kind '" + kind + "'");
    }
    return h;
}

}  // namespace io

}  // namespace mirage
