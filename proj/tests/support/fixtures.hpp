#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mirage/types.hpp"

namespace mirage::testsupport {

inline Topic make_topic(const std::string& id, std::vector<std::string> source_ids,
                        const std::string& query = "what happened?") {
    Topic t;
    t.id = id;
    t.query = query;
    for (const auto& sid : source_ids) {
        SourceRef s;
        s.id = sid;
        s.modality = Modality::video;
        s.uri = "file:///corpus/" + sid + ".mp4";
        t.sources.push_back(std::move(s));
    }
    return t;
}

struct SentenceSpec {
    std::string text;
    std::vector<std::string> citations;
};

inline Document make_document(const std::string& topic_id, const std::string& system_id,
                              std::vector<SentenceSpec> sentences) {
    Document d;
    d.topic_id = topic_id;
    d.system_id = system_id;
    for (size_t i = 0; i < sentences.size(); ++i) {
        Sentence s;
        s.index = static_cast<int>(i);
        s.text = sentences[i].text;
        s.citations = sentences[i].citations;
        d.sentences.push_back(std::move(s));
    }
    return d;
}

struct ClaimSpec {
    std::string id;
    std::string text;
    int parent = 0;
    double importance = 1.0;
};

inline ClaimSet make_claims(const Document& owner, ClaimOrigin origin,
                            std::vector<ClaimSpec> specs) {
    ClaimSet cs;
    cs.owner_id = owner.system_id;
    cs.owner = std::make_shared<Document>(owner);
    for (auto& spec : specs) {
        Subclaim c;
        c.id = spec.id;
        c.text = spec.text;
        c.parent_sentence = spec.parent;
        c.origin = origin;
        c.importance = spec.importance;
        cs.claims.push_back(std::move(c));
    }
    return cs;
}

// Unowned claim set for ops that never need sentence context.
inline ClaimSet make_bare_claims(const std::string& owner_id, ClaimOrigin origin,
                                 std::vector<ClaimSpec> specs) {
    ClaimSet cs;
    cs.owner_id = owner_id;
    for (auto& spec : specs) {
        Subclaim c;
        c.id = spec.id;
        c.text = spec.text;
        c.parent_sentence = spec.parent;
        c.origin = origin;
        c.importance = spec.importance;
        cs.claims.push_back(std::move(c));
    }
    return cs;
}

}  // namespace mirage::testsupport
