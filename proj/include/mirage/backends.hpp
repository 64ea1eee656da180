#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/judge.hpp"
#include "mirage/judgments.hpp"
#include "mirage/text.hpp"

namespace mirage {

inline std::string yes_response() { return "<response>yes<response>"; }
inline std::string no_response() { return "<response>no<response>"; }

// Deterministic backend driven by an explicit truth table. Binary entries are
// keyed by (claim text, canonical hypothesis); generative entries additionally
// by task. Emits the wire format the remote judges use, so the parse path is
// exercised end to end.
class OracleBackend : public Backend {
public:
    enum class MissPolicy { error, answer_no, answer_yes };

    explicit OracleBackend(std::string id = "oracle", MissPolicy miss = MissPolicy::error)
        : id_(std::move(id)), miss_(miss) {}

    std::string id() const override { return id_; }
    bool supports(Task) const override { return true; }

    void set_support(const std::string& claim_text, const Hypothesis& hypothesis, bool supported) {
        table_[std::make_pair(claim_text, hypothesis.canonical())] = supported;
    }

    void set_support_sources(const std::string& claim_text, std::vector<std::string> ids,
                             bool supported) {
        set_support(claim_text, Hypothesis::of_sources(std::move(ids)), supported);
    }

    void set_support_text(const std::string& claim_text, const std::string& text, bool supported) {
        set_support(claim_text, Hypothesis::of_text(text), supported);
    }

    void set_support_claims(const std::string& claim_text, std::vector<std::string> claims,
                            bool supported) {
        set_support(claim_text, Hypothesis::of_claims(std::move(claims)), supported);
    }

    void set_generation(Task task, const std::string& claim_text, const Hypothesis& hypothesis,
                        std::string response) {
        generations_[std::make_tuple(to_string(task), claim_text, hypothesis.canonical())] =
            std::move(response);
    }

    // Raw verbatim response for a binary entry, e.g. to exercise odd wire
    // formats ("</response>" closers, prose around the verdict).
    void set_raw_response(const std::string& claim_text, const Hypothesis& hypothesis,
                          std::string raw) {
        raw_overrides_[std::make_pair(claim_text, hypothesis.canonical())] = std::move(raw);
    }

    const std::map<std::pair<std::string, std::string>, bool>& table() const { return table_; }

    std::string complete(const JudgeRequest& req) override {
        if (is_binary_task(req.task)) {
            auto key = std::make_pair(req.claim_text, req.hypothesis.canonical());
            if (auto it = raw_overrides_.find(key); it != raw_overrides_.end()) return it->second;
            if (auto it = table_.find(key); it != table_.end()) {
                return it->second ? yes_response() : no_response();
            }
            switch (miss_) {
                case MissPolicy::answer_no: return no_response();
                case MissPolicy::answer_yes: return yes_response();
                case MissPolicy::error:
                    throw ConfigError("oracle '" + id_ + "' has no entry for claim '" +
                                      req.claim_text + "' vs " + req.hypothesis.canonical());
            }
        }
        auto gkey = std::make_tuple(to_string(req.task), req.claim_text, req.hypothesis.canonical());
        if (auto it = generations_.find(gkey); it != generations_.end()) return it->second;
        throw ConfigError("oracle '" + id_ + "' has no generation entry for task " +
                          to_string(req.task) + ", claim '" + req.claim_text + "'");
    }

private:
    std::string id_;
    MissPolicy miss_;
    std::map<std::pair<std::string, std::string>, bool> table_;
    std::map<std::pair<std::string, std::string>, std::string> raw_overrides_;
    std::map<std::tuple<std::string, std::string, std::string>, std::string> generations_;
};

// Text-only backend that answers yes iff the normalized claim occurs verbatim
// in the normalized hypothesis text (or in any claim of a claim list).
class SubstringBackend : public Backend {
public:
    explicit SubstringBackend(std::string id = "substring") : id_(std::move(id)) {}

    std::string id() const override { return id_; }

    bool supports(Task t) const override {
        return t == Task::claim_vs_text || t == Task::claim_vs_claimlist ||
               t == Task::nugget_answered;
    }

    std::string complete(const JudgeRequest& req) override {
        std::string needle = normalize_claim_text(req.claim_text);
        bool hit = false;
        if (req.hypothesis.kind == HypothesisKind::text) {
            hit = contains(normalize_claim_text(req.hypothesis.text), needle);
        } else if (req.hypothesis.kind == HypothesisKind::claim_list) {
            for (const auto& c : req.hypothesis.claims) {
                if (normalize_claim_text(c) == needle) {
                    hit = true;
                    break;
                }
            }
        }
        return hit ? yes_response() : no_response();
    }

private:
    std::string id_;
};

// Answers judge requests from human annotation files by claim-id lookup.
// ICJ sets answer claim_vs_text; GJ sets answer claim_vs_video, where a
// claim is supported by a source set iff any queried source grounds it.
// Missing claims are completeness errors, never silent negatives.
class HumanJudgmentBackend : public Backend {
public:
    explicit HumanJudgmentBackend(std::string id = "human") : id_(std::move(id)) {}

    void add(const HumanJudgmentSet& set) {
        if (set.kind == JudgmentKind::icj) {
            for (const auto& [claim_id, supported] : set.claim_judgments) {
                icj_[claim_id] = supported;
            }
        } else if (set.kind == JudgmentKind::gj) {
            for (const auto& [claim_id, sources] : set.grounding) {
                gj_[claim_id] = std::set<std::string>(sources.begin(), sources.end());
            }
        } else {
            throw ConfigError("human backend takes ICJ or GJ judgment sets, not EQJ");
        }
    }

    std::string id() const override { return id_; }

    bool supports(Task t) const override {
        return t == Task::claim_vs_text || t == Task::claim_vs_video;
    }

    bool keyed_by_subject() const override { return true; }

    std::string complete(const JudgeRequest& req) override {
        if (req.subject_id.empty()) {
            throw ConfigError("human backend requires a subject (claim) id on every request");
        }
        if (req.task == Task::claim_vs_text) {
            auto it = icj_.find(req.subject_id);
            if (it == icj_.end()) {
                throw DataCompletenessError("no ICJ judgment for claim", {req.subject_id});
            }
            return it->second ? yes_response() : no_response();
        }
        if (req.task == Task::claim_vs_video) {
            auto it = gj_.find(req.subject_id);
            if (it == gj_.end()) {
                throw DataCompletenessError("no grounding judgment for claim", {req.subject_id});
            }
            for (const auto& sid : req.hypothesis.source_ids) {
                if (it->second.count(sid)) return yes_response();
            }
            return no_response();
        }
        throw ConfigError("human backend cannot answer task " + to_string(req.task));
    }

    bool has_icj(const std::string& claim_id) const { return icj_.count(claim_id) > 0; }
    bool has_gj(const std::string& claim_id) const { return gj_.count(claim_id) > 0; }

private:
    std::string id_;
    std::map<std::string, bool> icj_;
    std::map<std::string, std::set<std::string>> gj_;
};

// Transparent wrapper counting backend traffic. Keeps the inner id so cache
// keys are unchanged; used to assert warm-cache runs make zero calls.
class CountingBackend : public Backend {
public:
    explicit CountingBackend(Backend& inner) : inner_(inner) {}

    std::string id() const override { return inner_.id(); }
    bool supports(Task t) const override { return inner_.supports(t); }
    bool keyed_by_subject() const override { return inner_.keyed_by_subject(); }

    std::string complete(const JudgeRequest& req) override {
        ++calls_;
        return inner_.complete(req);
    }

    std::size_t calls() const { return calls_.load(); }
    void reset() { calls_ = 0; }

private:
    Backend& inner_;
    std::atomic<std::size_t> calls_{0};
};

// Test double that fails the first `failures` completions with the given
// error kind, then delegates.
class FaultInjectingBackend : public Backend {
public:
    enum class Kind { capacity, transport };

    FaultInjectingBackend(Backend& inner, Kind kind, int failures)
        : inner_(inner), kind_(kind), remaining_(failures) {}

    // Selective variant: fail requests matching the predicate, always.
    FaultInjectingBackend(Backend& inner, Kind kind,
                          std::function<bool(const JudgeRequest&)> predicate)
        : inner_(inner), kind_(kind), remaining_(-1), predicate_(std::move(predicate)) {}

    std::string id() const override { return inner_.id(); }
    bool supports(Task t) const override { return inner_.supports(t); }
    bool keyed_by_subject() const override { return inner_.keyed_by_subject(); }

    std::string complete(const JudgeRequest& req) override {
        bool fail = false;
        if (predicate_) {
            fail = predicate_(req);
        } else if (remaining_ > 0) {
            --remaining_;
            fail = true;
        }
        if (fail) {
            if (kind_ == Kind::capacity) throw CapacityError("injected capacity failure");
            throw TransportError("injected transport failure");
        }
        return inner_.complete(req);
    }

private:
    Backend& inner_;
    Kind kind_;
    int remaining_;
    std::function<bool(const JudgeRequest&)> predicate_;
};

}  // namespace mirage
