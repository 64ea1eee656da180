#pragma once

#include <set>
#include <string>
#include <vector>

#include "mirage/backends.hpp"
#include "mirage/errors.hpp"
#include "mirage/judge.hpp"
#include "mirage/segment.hpp"
#include "mirage/text.hpp"
#include "mirage/types.hpp"

namespace mirage {

enum class DedupMode { off, normalized_text, judge_semantic };

inline DedupMode dedup_mode_from_string(const std::string& s) {
    if (s == "off") return DedupMode::off;
    if (s == "normalized_text" || s == "normalized-text") return DedupMode::normalized_text;
    if (s == "judge_semantic" || s == "judge-semantic") return DedupMode::judge_semantic;
    throw ConfigError("unknown dedup mode: " + s);
}

struct DecompositionConfig {
    std::string granularity_note;
    DedupMode dedup = DedupMode::off;
    std::string backend_id;
};

// Decomposes one sentence into self-contained declarative subclaims via the
// backend, one claim per non-empty response line. Contentless sentences
// (headings and the like) legally decompose to nothing.
inline std::vector<Subclaim> decompose(const Sentence& sentence,
                                       const std::string& document_context, ClaimOrigin origin,
                                       Judge& judge, Backend& backend) {
    if (trim(sentence.text).empty()) {
        throw PreconditionError("cannot decompose an empty sentence");
    }
    JudgeRequest req;
    req.task = Task::decompose_sentence;
    req.claim_text = sentence.text;
    req.claim_context = document_context;
    req.hypothesis = Hypothesis::of_text(document_context);
    req.subject_id = "sentence " + std::to_string(sentence.index);
    GenerationResult gen = judge.generate(req, backend);

    std::vector<Subclaim> claims;
    std::string line;
    size_t k = 0;
    auto flush = [&]() {
        std::string t = trim(line);
        if (starts_with(t, "- ")) t = trim(t.substr(2));
        if (!t.empty()) {
            Subclaim c;
            c.id = "s" + std::to_string(sentence.index) + "c" + std::to_string(k++);
            c.text = t;
            c.parent_sentence = sentence.index;
            c.origin = origin;
            claims.push_back(std::move(c));
        }
        line.clear();
    };
    for (char ch : gen.text) {
        if (ch == '\n') {
            flush();
        } else {
            line.push_back(ch);
        }
    }
    flush();
    return claims;
}

// Drops duplicate claims, keeping first occurrences and relative order.
// normalized_text compares canonical claim text; judge_semantic asks the
// backend whether each claim is entailed by the earlier survivors.
inline ClaimSet dedup(const ClaimSet& claims, const DecompositionConfig& config,
                      Judge* judge = nullptr, Backend* backend = nullptr) {
    ClaimSet out;
    out.owner_id = claims.owner_id;
    out.owner = claims.owner;
    if (config.dedup == DedupMode::off) {
        out.claims = claims.claims;
        return out;
    }
    if (config.dedup == DedupMode::normalized_text) {
        std::set<std::string> seen;
        for (const auto& c : claims.claims) {
            if (seen.insert(normalize_claim_text(c.text)).second) {
                out.claims.push_back(c);
            }
        }
        return out;
    }
    if (!judge || !backend) {
        throw ConfigError("judge_semantic dedup requires a configured backend");
    }
    std::vector<std::string> survivor_texts;
    for (const auto& c : claims.claims) {
        bool duplicate = false;
        if (!survivor_texts.empty()) {
            JudgeRequest req;
            req.task = Task::claim_vs_claimlist;
            req.claim_text = c.text;
            req.claim_context = claims.context_for(c);
            req.hypothesis = Hypothesis::of_claims(survivor_texts);
            req.subject_id = c.id;
            duplicate = judge->score(req, *backend).score >= 0.5;
        }
        if (!duplicate) {
            survivor_texts.push_back(c.text);
            out.claims.push_back(c);
        }
    }
    return out;
}

// Turns a reference subclaim into a question-answer nugget; the backend
// writes the question, the claim is its answer.
inline Nugget nuggetize(const Subclaim& claim, Judge& judge, Backend& backend,
                        const std::string& claim_context = "") {
    if (claim.origin != ClaimOrigin::reference) {
        throw PreconditionError("nuggets are built from reference claims; claim '" + claim.id +
                                "' is predicted");
    }
    if (trim(claim.text).empty()) {
        throw PreconditionError("cannot build a nugget from an empty claim");
    }
    JudgeRequest req;
    req.task = Task::nugget_question;
    req.claim_text = claim.text;
    req.claim_context = claim_context;
    req.hypothesis = Hypothesis::of_text(claim_context);
    req.subject_id = claim.id;
    GenerationResult gen = judge.generate(req, backend);
    Nugget n;
    n.id = "n:" + claim.id;
    n.question = trim(gen.text);
    n.answer_claim = claim.id;
    return n;
}

// Segments, decomposes every sentence, and applies the configured dedup.
inline ClaimSet decompose_document(const Document& doc, ClaimOrigin origin,
                                   const DecompositionConfig& config, Judge& judge,
                                   Backend& backend) {
    ClaimSet cs;
    cs.owner_id = doc.system_id;
    cs.owner = std::make_shared<Document>(doc);
    std::string context = doc.text();
    for (const auto& sentence : doc.sentences) {
        if (trim(sentence.text).empty()) continue;
        auto claims = decompose(sentence, context, origin, judge, backend);
        for (auto& c : claims) cs.claims.push_back(std::move(c));
    }
    return dedup(cs, config, &judge, &backend);
}

}  // namespace mirage
