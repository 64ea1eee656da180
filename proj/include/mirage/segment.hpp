#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/text.hpp"
#include "mirage/types.hpp"

namespace mirage {

namespace detail {

// Words whose trailing period does not end a sentence.
inline const std::vector<std::string>& abbreviation_guard_list() {
    static const std::vector<std::string> guards = {
        "dr",  "mr",   "mrs", "ms",  "prof", "st",  "jr",   "sr",  "vs",   "etc",
        "e.g", "i.e",  "fig", "eq",  "al",   "cf",  "vol",  "dept", "approx",
        "jan", "feb",  "mar", "apr", "jun",  "jul", "aug",  "sep", "sept", "oct",
        "nov", "dec",  "mt",  "ft",  "inc",  "ltd", "co",   "gen", "col",  "lt",
        "sgt", "capt", "u.s", "u.k", "a.m",  "p.m",
    };
    return guards;
}

// The word (letters, digits, periods) ending right before `pos`.
inline std::string word_before(std::string_view s, size_t pos) {
    size_t end = pos;
    size_t begin = end;
    while (begin > 0) {
        char c = s[begin - 1];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') {
            --begin;
        } else {
            break;
        }
    }
    return std::string(s.substr(begin, end - begin));
}

inline bool is_abbreviation(const std::string& word) {
    if (word.empty()) return false;
    std::string lower = to_lower(word);
    // Single letters read as initials ("J. Smith").
    if (lower.size() == 1 && std::isalpha(static_cast<unsigned char>(lower[0]))) return true;
    for (const auto& g : abbreviation_guard_list()) {
        if (lower == g) return true;
    }
    return false;
}

}  // namespace detail

// Splits text into sentences on terminal punctuation with an abbreviation
// guard. Total and deterministic; whitespace-only input yields no sentences.
inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        cur.push_back(c);
        bool boundary = false;
        if (c == '!' || c == '?') {
            boundary = true;
        } else if (c == '.') {
            std::string word = detail::word_before(text, i);
            if (!detail::is_abbreviation(word)) {
                // Decimal numbers: "3.5" keeps its period.
                bool decimal = i + 1 < text.size() && i > 0 &&
                               std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
                               std::isdigit(static_cast<unsigned char>(text[i + 1]));
                if (!decimal) boundary = true;
            }
        }
        if (boundary) {
            // Trailing quotes and brackets belong to the sentence.
            while (i + 1 < text.size() &&
                   (text[i + 1] == '"' || text[i + 1] == '\'' || text[i + 1] == ')' ||
                    text[i + 1] == ']')) {
                // Keep citation markers "[k]" attached: '[' is an opener, not a closer.
                if (text[i + 1] == ']') break;
                cur.push_back(text[++i]);
            }
            // A citation marker directly after the terminal belongs to the sentence.
            while (i + 1 < text.size() && text[i + 1] == ' ' && i + 2 < text.size() &&
                   text[i + 2] == '[') {
                size_t close = text.find(']', i + 2);
                bool numeric = close != std::string_view::npos && close > i + 3;
                for (size_t k = i + 3; numeric && k < close; ++k) {
                    if (!std::isdigit(static_cast<unsigned char>(text[k]))) numeric = false;
                }
                if (!numeric) break;
                for (size_t k = i + 1; k <= close; ++k) cur.push_back(text[k]);
                i = close;
            }
            std::string s = normalize_whitespace(cur);
            if (!s.empty()) out.push_back(std::move(s));
            cur.clear();
        }
    }
    std::string tail = normalize_whitespace(cur);
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
}

// Sentence segmentation with citation parsing. Bracketed markers "[k]" are
// 1-based indices into the topic's source ordering; they are stripped from
// the sentence text and recorded as citations in order of appearance,
// deduplicated. Out-of-range markers are format errors naming the sentence.
inline std::vector<Sentence> segment(const std::string& raw_text,
                                     const std::vector<SourceRef>& sources) {
    if (trim(raw_text).empty()) {
        throw FormatError("cannot segment empty text");
    }
    std::vector<std::string> parts = split_sentences(raw_text);
    std::vector<Sentence> sentences;
    sentences.reserve(parts.size());
    for (size_t ord = 0; ord < parts.size(); ++ord) {
        const std::string& part = parts[ord];
        Sentence s;
        s.index = static_cast<int>(ord);
        std::string cleaned;
        cleaned.reserve(part.size());
        for (size_t i = 0; i < part.size();) {
            if (part[i] == '[') {
                size_t close = part.find(']', i);
                if (close != std::string::npos && close > i + 1) {
                    bool numeric = true;
                    for (size_t k = i + 1; k < close; ++k) {
                        if (!std::isdigit(static_cast<unsigned char>(part[k]))) {
                            numeric = false;
                            break;
                        }
                    }
                    if (numeric) {
                        int marker = std::stoi(part.substr(i + 1, close - i - 1));
                        if (marker < 1 || static_cast<size_t>(marker) > sources.size()) {
                            throw FormatError("sentence " + std::to_string(ord) +
                                              ": citation marker [" + std::to_string(marker) +
                                              "] is out of range for " +
                                              std::to_string(sources.size()) + " sources");
                        }
                        const std::string& sid = sources[static_cast<size_t>(marker - 1)].id;
                        if (!s.cites(sid)) s.citations.push_back(sid);
                        i = close + 1;
                        continue;
                    }
                }
            }
            cleaned.push_back(part[i]);
            ++i;
        }
        // Marker removal can orphan a space before punctuation ("word [1]." ->
        // "word ."); close those gaps.
        std::string normalized = normalize_whitespace(cleaned);
        std::string text;
        text.reserve(normalized.size());
        for (char c : normalized) {
            if (!text.empty() && text.back() == ' ' &&
                (c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':')) {
                text.back() = c;
            } else {
                text.push_back(c);
            }
        }
        s.text = text;
        sentences.push_back(std::move(s));
    }
    return sentences;
}

// Builds a whole document from raw text.
inline Document segment_document(const std::string& raw_text, const Topic& topic,
                                 const std::string& system_id) {
    Document d;
    d.topic_id = topic.id;
    d.system_id = system_id;
    d.sentences = segment(raw_text, topic.sources);
    validate_document(d, topic);
    return d;
}

}  // namespace mirage
