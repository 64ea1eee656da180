#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/text.hpp"

namespace mirage {

enum class Modality { video, text, image, audio };

inline std::string to_string(Modality m) {
    switch (m) {
        case Modality::video: return "video";
        case Modality::text: return "text";
        case Modality::image: return "image";
        case Modality::audio: return "audio";
    }
    return "video";
}

inline Modality modality_from_string(const std::string& s) {
    if (s == "video") return Modality::video;
    if (s == "text") return Modality::text;
    if (s == "image") return Modality::image;
    if (s == "audio") return Modality::audio;
    throw FormatError("unknown modality: " + s);
}

// A pointer to one evidence source. Content stays with the judge backend;
// the evaluator never decodes media itself.
struct SourceRef {
    std::string id;
    Modality modality = Modality::video;
    std::string uri;
    std::map<std::string, std::string> metadata;
};

// A query plus the multimodal sources identified for it.
struct Topic {
    std::string id;
    std::string query;
    std::vector<SourceRef> sources;
    std::optional<std::string> reference_id;

    const SourceRef* find_source(const std::string& source_id) const {
        for (const auto& s : sources) {
            if (s.id == source_id) return &s;
        }
        return nullptr;
    }

    std::vector<std::string> source_ids() const {
        std::vector<std::string> ids;
        ids.reserve(sources.size());
        for (const auto& s : sources) ids.push_back(s.id);
        return ids;
    }
};

struct Sentence {
    int index = 0;
    std::string text;
    std::vector<std::string> citations;  // source ids, in citation order

    bool cites(const std::string& source_id) const {
        for (const auto& c : citations) {
            if (c == source_id) return true;
        }
        return false;
    }
};

// A sentence-segmented prediction or reference. system_id is "reference"
// for reference documents.
struct Document {
    std::string topic_id;
    std::string system_id;
    std::vector<Sentence> sentences;

    // Raw text is derived: sentence texts joined by single spaces.
    std::string text() const {
        std::string out;
        for (size_t i = 0; i < sentences.size(); ++i) {
            if (i) out.push_back(' ');
            out.append(sentences[i].text);
        }
        return out;
    }

    const Sentence* find_sentence(int ordinal) const {
        if (ordinal < 0 || static_cast<size_t>(ordinal) >= sentences.size()) return nullptr;
        return &sentences[static_cast<size_t>(ordinal)];
    }

    bool has_citations() const {
        for (const auto& s : sentences) {
            if (!s.citations.empty()) return true;
        }
        return false;
    }
};

enum class ClaimOrigin { predicted, reference };

inline std::string to_string(ClaimOrigin o) {
    return o == ClaimOrigin::predicted ? "predicted" : "reference";
}

inline ClaimOrigin claim_origin_from_string(const std::string& s) {
    if (s == "predicted") return ClaimOrigin::predicted;
    if (s == "reference") return ClaimOrigin::reference;
    throw FormatError("unknown claim origin: " + s);
}

// An atomic declarative statement decomposed from a sentence.
struct Subclaim {
    std::string id;
    std::string text;
    int parent_sentence = 0;
    ClaimOrigin origin = ClaimOrigin::predicted;
    double importance = 1.0;
};

// Ordered subclaims of one document. `owner` (when bound) supplies the
// parent-sentence text used as decontextualization context in judge calls.
struct ClaimSet {
    std::string owner_id;  // document identifier, e.g. a system id or "reference"
    std::shared_ptr<const Document> owner;
    std::vector<Subclaim> claims;

    const Subclaim* find(const std::string& claim_id) const {
        for (const auto& c : claims) {
            if (c.id == claim_id) return &c;
        }
        return nullptr;
    }

    // Parent-sentence text for claim context; empty when no document bound.
    std::string context_for(const Subclaim& c) const {
        if (!owner) return "";
        const Sentence* s = owner->find_sentence(c.parent_sentence);
        return s ? s->text : "";
    }
};

// Predicted claim id -> source ids cited by the sentences expressing it.
struct CitationMap {
    std::map<std::string, std::vector<std::string>> entries;

    const std::vector<std::string>* find(const std::string& claim_id) const {
        auto it = entries.find(claim_id);
        return it == entries.end() ? nullptr : &it->second;
    }
};

// Reference claim id -> sources that attest the claim (grounding judgments).
// Empty sets are legal: the claim is unattested by any source.
struct GroundingMap {
    std::string topic_id;
    std::map<std::string, std::vector<std::string>> entries;

    const std::vector<std::string>* find(const std::string& claim_id) const {
        auto it = entries.find(claim_id);
        return it == entries.end() ? nullptr : &it->second;
    }
};

// Source id -> ordinals of prediction sentences citing it, in document order.
struct CitedSentenceMap {
    std::map<std::string, std::vector<int>> entries;

    const std::vector<int>* find(const std::string& source_id) const {
        auto it = entries.find(source_id);
        return it == entries.end() ? nullptr : &it->second;
    }
};

// A question whose answer is a reference subclaim.
struct Nugget {
    std::string id;
    std::string question;
    std::string answer_claim;  // reference claim id
};

inline void validate_topic(const Topic& t) {
    if (t.id.empty()) throw FormatError("topic id must be non-empty");
    std::set<std::string> seen;
    for (const auto& s : t.sources) {
        if (s.id.empty()) throw FormatError("topic " + t.id + ": source with empty id");
        if (!seen.insert(s.id).second) {
            throw FormatError("topic " + t.id + ": duplicate source id '" + s.id + "'");
        }
    }
}

// Checks ordinal contiguity and that citations resolve within the topic.
inline void validate_document(const Document& d, const Topic& topic) {
    for (size_t i = 0; i < d.sentences.size(); ++i) {
        const Sentence& s = d.sentences[i];
        if (s.index != static_cast<int>(i)) {
            throw FormatError("document " + d.system_id + ": sentence index " +
                              std::to_string(s.index) + " at position " + std::to_string(i) +
                              " is not contiguous");
        }
        for (const auto& cid : s.citations) {
            if (!topic.find_source(cid)) {
                throw FormatError("document " + d.system_id + ": sentence " +
                                  std::to_string(s.index) + " cites unknown source '" + cid + "'");
            }
        }
    }
}

inline void validate_claims(const ClaimSet& cs) {
    std::set<std::string> seen;
    for (const auto& c : cs.claims) {
        if (c.id.empty()) throw FormatError("claim set " + cs.owner_id + ": claim with empty id");
        if (!seen.insert(c.id).second) {
            throw FormatError("claim set " + cs.owner_id + ": duplicate claim id '" + c.id + "'");
        }
        if (c.importance < 0) {
            throw FormatError("claim " + c.id + ": importance must be non-negative");
        }
        if (cs.owner && !cs.owner->find_sentence(c.parent_sentence)) {
            throw FormatError("claim " + c.id + ": parent sentence " +
                              std::to_string(c.parent_sentence) + " does not exist in " +
                              cs.owner_id);
        }
    }
}

}  // namespace mirage
