#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mirage/cache.hpp"
#include "mirage/errors.hpp"
#include "mirage/text.hpp"

namespace mirage {

// Everything a backend can be asked to do. The first five are binary
// support judgments; the rest produce free text.
enum class Task {
    claim_vs_video,
    claim_vs_text,
    claim_vs_claimlist,
    sentence_vs_videos,
    nugget_answered,
    extract_relevant,
    detailed_summary,
    query_generation,
    decompose_sentence,
    nugget_question,
};

inline std::string to_string(Task t) {
    switch (t) {
        case Task::claim_vs_video: return "claim_vs_video";
        case Task::claim_vs_text: return "claim_vs_text";
        case Task::claim_vs_claimlist: return "claim_vs_claimlist";
        case Task::sentence_vs_videos: return "sentence_vs_videos";
        case Task::nugget_answered: return "nugget_answered";
        case Task::extract_relevant: return "extract_relevant";
        case Task::detailed_summary: return "detailed_summary";
        case Task::query_generation: return "query_generation";
        case Task::decompose_sentence: return "decompose_sentence";
        case Task::nugget_question: return "nugget_question";
    }
    return "claim_vs_video";
}

inline bool is_binary_task(Task t) {
    switch (t) {
        case Task::claim_vs_video:
        case Task::claim_vs_text:
        case Task::claim_vs_claimlist:
        case Task::sentence_vs_videos:
        case Task::nugget_answered:
            return true;
        default:
            return false;
    }
}

// Whether the request addresses media sources (and therefore carries an fps
// and participates in the downsampling retry loop).
inline bool is_media_task(Task t) {
    return t == Task::claim_vs_video || t == Task::sentence_vs_videos ||
           t == Task::extract_relevant || t == Task::detailed_summary;
}

enum class HypothesisKind { sources, text, claim_list };

// Exactly one kind is populated; which one is fixed at construction.
struct Hypothesis {
    HypothesisKind kind = HypothesisKind::text;
    std::vector<std::string> source_ids;
    std::string text;
    std::vector<std::string> claims;

    static Hypothesis of_sources(std::vector<std::string> ids) {
        Hypothesis h;
        h.kind = HypothesisKind::sources;
        h.source_ids = std::move(ids);
        return h;
    }

    static Hypothesis of_text(std::string t) {
        Hypothesis h;
        h.kind = HypothesisKind::text;
        h.text = std::move(t);
        return h;
    }

    static Hypothesis of_claims(std::vector<std::string> claim_texts) {
        Hypothesis h;
        h.kind = HypothesisKind::claim_list;
        h.claims = std::move(claim_texts);
        return h;
    }

    // Canonical form for cache keys: source ids are order-insensitive,
    // text and claim lists are not.
    std::string canonical() const {
        switch (kind) {
            case HypothesisKind::sources: {
                std::vector<std::string> sorted = source_ids;
                std::sort(sorted.begin(), sorted.end());
                return "sources:" + join(sorted, ",");
            }
            case HypothesisKind::text:
                return "text:" + text;
            case HypothesisKind::claim_list:
                return "claims:" + join(claims, "\x1e");
        }
        return "";
    }
};

struct JudgeRequest {
    Task task = Task::claim_vs_text;
    std::string claim_text;
    std::string claim_context;  // sentence the claim came from, for decontextualization
    Hypothesis hypothesis;
    std::map<std::string, std::string> params;  // e.g. fps
    // Identity of the judged unit (claim/nugget/sentence id). Used for error
    // attribution and by subject-keyed backends; not part of the content hash
    // unless the backend is subject-keyed.
    std::string subject_id;

    std::string canonical(const std::string& backend_id, bool keyed_by_subject) const {
        std::string p;
        for (const auto& [k, v] : params) {
            p += k;
            p += '=';
            p += v;
            p += ';';
        }
        std::string key = to_string(task);
        key += '\x1f';
        key += claim_text;
        key += '\x1f';
        key += claim_context;
        key += '\x1f';
        key += hypothesis.canonical();
        key += '\x1f';
        key += backend_id;
        key += '\x1f';
        key += p;
        if (keyed_by_subject) {
            key += '\x1f';
            key += "subject=" + subject_id;
        }
        return key;
    }
};

inline void validate_request(const JudgeRequest& req) {
    if (req.task == Task::claim_vs_video || req.task == Task::sentence_vs_videos) {
        if (req.hypothesis.kind != HypothesisKind::sources || req.hypothesis.source_ids.empty()) {
            throw PreconditionError(to_string(req.task) + " requires at least one source id");
        }
    }
    if (req.task == Task::claim_vs_claimlist && req.hypothesis.kind != HypothesisKind::claim_list) {
        throw PreconditionError("claim_vs_claimlist requires a claim-list hypothesis");
    }
    if (req.task == Task::claim_vs_text && req.hypothesis.kind != HypothesisKind::text) {
        throw PreconditionError("claim_vs_text requires a text hypothesis");
    }
}

// Binary support verdict from a backend.
struct SupportJudgment {
    double score = 0.0;  // binary backends emit exactly 0.0 or 1.0
    std::string backend_id;
    std::string raw_response;
    bool cached = false;
    std::map<std::string, std::string> params;  // final request params, e.g. fps
};

// Free-text result of a generative task.
struct GenerationResult {
    std::string text;
    std::string backend_id;
    bool cached = false;
};

// The scoring function s(premise, hypothesis), pluggable. complete() returns
// the raw model text; parsing and caching live in Judge.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string id() const = 0;
    virtual bool supports(Task t) const = 0;
    // Subject-keyed backends (human judgment tables) answer per judged unit,
    // not per content, so their cache keys include the subject id.
    virtual bool keyed_by_subject() const { return false; }
    virtual std::string complete(const JudgeRequest& req) = 0;
};

enum class YesNo { yes, no };

// Extracts the last marker-delimited yes/no from raw backend output. The
// wire format uses the literal "<response>" as both opener and closer;
// "</response>" closers are accepted too. Match is case-insensitive and
// whitespace around the verdict is ignored. Anything else is a parse error;
// the fallback policy belongs to the caller.
inline YesNo parse_response(const std::string& raw) {
    struct Marker {
        size_t pos;
        size_t len;
    };
    std::vector<Marker> markers;
    static const std::string open = "<response>";
    static const std::string close = "</response>";
    size_t i = 0;
    while (i < raw.size()) {
        if (raw.compare(i, open.size(), open) == 0) {
            markers.push_back({i, open.size()});
            i += open.size();
        } else if (raw.compare(i, close.size(), close) == 0) {
            markers.push_back({i, close.size()});
            i += close.size();
        } else {
            ++i;
        }
    }
    if (markers.size() < 2) {
        throw ParseError("no <response> marker pair in backend output", raw);
    }
    const Marker& a = markers[markers.size() - 2];
    const Marker& b = markers[markers.size() - 1];
    std::string content = to_lower(trim(raw.substr(a.pos + a.len, b.pos - (a.pos + a.len))));
    if (content == "yes") return YesNo::yes;
    if (content == "no") return YesNo::no;
    throw ParseError("backend verdict is neither yes nor no: '" + content + "'", raw);
}

enum class ParseErrorPolicy { fail, score_zero };

inline ParseErrorPolicy parse_error_policy_from_string(const std::string& s) {
    if (s == "fail") return ParseErrorPolicy::fail;
    if (s == "score-zero" || s == "score_zero") return ParseErrorPolicy::score_zero;
    throw ConfigError("unknown parse-error policy: " + s);
}

struct JudgeOptions {
    ParseErrorPolicy on_parse_error = ParseErrorPolicy::fail;
    int max_halvings = 10;
};

namespace detail {

template <typename E>
[[noreturn]] inline void rethrow_with_subject(const E& e, const std::string& subject_id) {
    throw E("[" + subject_id + "] " + e.what());
}

}  // namespace detail

// Routes judge requests through a backend with caching, yes/no parsing and
// the capacity-downsampling retry loop.
class Judge {
public:
    explicit Judge(JudgeOptions options = {}) : options_(options), owned_cache_(new JudgeCache()) {
        cache_ = owned_cache_.get();
    }

    Judge(JudgeOptions options, JudgeCache& cache) : options_(options), cache_(&cache) {}

    const JudgeOptions& options() const { return options_; }
    JudgeCache& cache() { return *cache_; }

    SupportJudgment score(const JudgeRequest& req, Backend& backend) {
        validate_request(req);
        if (!is_binary_task(req.task)) {
            throw ConfigError("score() requires a binary task, got " + to_string(req.task));
        }
        if (!backend.supports(req.task)) {
            throw ConfigError("backend '" + backend.id() + "' does not support task " +
                              to_string(req.task));
        }
        const std::string key = req.canonical(backend.id(), backend.keyed_by_subject());
        if (auto hit = cache_->find(key)) {
            SupportJudgment out;
            out.score = hit->score.value_or(0.0);
            out.backend_id = hit->backend_id;
            out.raw_response = hit->raw_response;
            out.cached = true;
            out.params = req.params;
            return out;
        }
        std::string raw;
        try {
            raw = backend.complete(req);
        } catch (const TransportError& e) {
            fail_with_subject(e, req);
        } catch (const CapacityError& e) {
            fail_with_subject(e, req);
        } catch (const DataCompletenessError& e) {
            if (req.subject_id.empty()) throw;
            throw DataCompletenessError("[" + req.subject_id + "] " + e.what(), e.missing_ids);
        }
        SupportJudgment out;
        out.backend_id = backend.id();
        out.raw_response = raw;
        out.cached = false;
        out.params = req.params;
        try {
            out.score = parse_response(raw) == YesNo::yes ? 1.0 : 0.0;
        } catch (const ParseError& e) {
            if (options_.on_parse_error == ParseErrorPolicy::fail) {
                if (req.subject_id.empty()) throw;
                throw ParseError("[" + req.subject_id + "] " + e.what(), e.raw_response);
            }
            out.score = 0.0;
            out.params["parse_error"] = "1";
        }
        cache_->put(key, CacheEntry{out.score, out.raw_response, out.backend_id});
        return out;
    }

    // Retries media judgments under capacity pressure, halving the framerate
    // each time, starting from 1 fps. The returned judgment records the fps
    // that finally succeeded. max_halvings < 0 means "use options".
    SupportJudgment score_with_downsampling(JudgeRequest req, Backend& backend,
                                            int max_halvings = -1) {
        if (!is_media_task(req.task) || req.hypothesis.kind != HypothesisKind::sources ||
            req.hypothesis.source_ids.empty()) {
            throw PreconditionError("score_with_downsampling requires a request addressing at "
                                    "least one media source");
        }
        if (max_halvings < 0) max_halvings = options_.max_halvings;
        double fps = 1.0;
        for (int halvings = 0;; ++halvings) {
            req.params["fps"] = format_double(fps);
            try {
                return score(req, backend);
            } catch (const CapacityError& e) {
                if (halvings >= max_halvings) {
                    std::string subject = req.subject_id.empty() ? req.claim_text : req.subject_id;
                    throw CapacityExhaustedError(
                        "capacity errors persisted through " + std::to_string(max_halvings) +
                        " downsampling retries for [" + subject + "] (last fps " +
                        format_double(fps) + "): " + e.what());
                }
                fps /= 2.0;
            }
        }
    }

    GenerationResult generate(const JudgeRequest& req, Backend& backend) {
        if (is_binary_task(req.task)) {
            throw ConfigError("generate() requires a generative task, got " + to_string(req.task));
        }
        if (!backend.supports(req.task)) {
            throw ConfigError("backend '" + backend.id() + "' does not support task " +
                              to_string(req.task));
        }
        const std::string key = req.canonical(backend.id(), backend.keyed_by_subject());
        if (auto hit = cache_->find(key)) {
            return GenerationResult{hit->raw_response, hit->backend_id, true};
        }
        std::string raw;
        try {
            raw = backend.complete(req);
        } catch (const TransportError& e) {
            fail_with_subject(e, req);
        } catch (const CapacityError& e) {
            fail_with_subject(e, req);
        }
        cache_->put(key, CacheEntry{std::nullopt, raw, backend.id()});
        return GenerationResult{raw, backend.id(), false};
    }

private:
    template <typename E>
    [[noreturn]] void fail_with_subject(const E& e, const JudgeRequest& req) {
        if (req.subject_id.empty()) throw e;
        detail::rethrow_with_subject(e, req.subject_id);
    }

    JudgeOptions options_;
    std::unique_ptr<JudgeCache> owned_cache_;
    JudgeCache* cache_ = nullptr;
};

}  // namespace mirage
