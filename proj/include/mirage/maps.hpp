#pragma once

#include <map>
#include <string>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/text.hpp"
#include "mirage/types.hpp"

namespace mirage {

enum class CitationPolicy { first_mention, all_mentions };

inline CitationPolicy citation_policy_from_string(const std::string& s) {
    if (s == "first_mention" || s == "first-mention") return CitationPolicy::first_mention;
    if (s == "all_mentions" || s == "all-mentions") return CitationPolicy::all_mentions;
    throw ConfigError("unknown citation policy: " + s);
}

namespace detail {

inline void append_unique(std::vector<std::string>& dst, const std::vector<std::string>& src) {
    for (const auto& id : src) {
        bool present = false;
        for (const auto& existing : dst) {
            if (existing == id) {
                present = true;
                break;
            }
        }
        if (!present) dst.push_back(id);
    }
}

}  // namespace detail

// Maps every claim to the sources cited by the sentences expressing it.
// "Expressing" means normalized-text equality of subclaims: a claim repeated
// in several sentences is one mention chain. first_mention keeps the earliest
// sentence's citations; all_mentions unions citations over every mention,
// preserving first-seen order. Claims from uncited sentences map to {}.
inline CitationMap build_citation_map(const Document& prediction, const ClaimSet& claims,
                                      CitationPolicy policy) {
    for (const auto& s : prediction.sentences) {
        for (const auto& cid : s.citations) {
            if (cid.empty()) {
                throw FormatError("sentence " + std::to_string(s.index) +
                                  " carries an empty citation id");
            }
        }
    }

    // normalized claim text -> parent ordinals of every claim with that text
    std::map<std::string, std::vector<int>> mentions;
    for (const auto& c : claims.claims) {
        if (!prediction.find_sentence(c.parent_sentence)) {
            throw FormatError("claim " + c.id + ": parent sentence " +
                              std::to_string(c.parent_sentence) + " not in prediction");
        }
        mentions[normalize_claim_text(c.text)].push_back(c.parent_sentence);
    }
    for (auto& [text, ordinals] : mentions) {
        std::sort(ordinals.begin(), ordinals.end());
    }

    CitationMap cmap;
    for (const auto& c : claims.claims) {
        const auto& ordinals = mentions[normalize_claim_text(c.text)];
        std::vector<std::string> cited;
        if (policy == CitationPolicy::first_mention) {
            cited = prediction.sentences[static_cast<size_t>(ordinals.front())].citations;
            std::vector<std::string> unique;
            detail::append_unique(unique, cited);
            cited = std::move(unique);
        } else {
            for (int ord : ordinals) {
                detail::append_unique(cited, prediction.sentences[static_cast<size_t>(ord)].citations);
            }
        }
        cmap.entries[c.id] = std::move(cited);
    }
    return cmap;
}

// Inverse citation index: source id -> ordinals of sentences citing it.
// Ordinals are deduplicated; sources never cited are absent.
inline CitedSentenceMap build_cited_sentence_map(const Document& prediction) {
    CitedSentenceMap csmap;
    for (const auto& s : prediction.sentences) {
        for (const auto& cid : s.citations) {
            auto& ordinals = csmap.entries[cid];
            if (ordinals.empty() || ordinals.back() != s.index) {
                ordinals.push_back(s.index);
            }
        }
    }
    return csmap;
}

}  // namespace mirage
