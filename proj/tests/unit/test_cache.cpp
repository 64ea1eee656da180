#include <filesystem>

#include <catch2/catch_amalgamated.hpp>

#include "mirage/backends.hpp"
#include "mirage/cache.hpp"
#include "mirage/judge.hpp"

using namespace mirage;
namespace fs = std::filesystem;

namespace {

fs::path temp_cache_file(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "mirage-cache-tests";
    fs::create_directories(dir);
    fs::path file = dir / name;
    fs::remove(file);
    return file;
}

}  // namespace

TEST_CASE("cache survives process-style reopen") {
    fs::path file = temp_cache_file("reopen.jsonl");
    {
        JudgeCache cache(file);
        cache.put("key-a", CacheEntry{1.0, "<response>yes<response>", "oracle"});
        cache.put("key-b", CacheEntry{std::nullopt, "generated text", "oracle"});
    }
    JudgeCache reopened(file);
    auto a = reopened.find("key-a");
    REQUIRE(a.has_value());
    CHECK(a->score == 1.0);
    CHECK(a->backend_id == "oracle");
    auto b = reopened.find("key-b");
    REQUIRE(b.has_value());
    CHECK_FALSE(b->score.has_value());
    CHECK(b->raw_response == "generated text");
}

TEST_CASE("warm cache serves judge scores without backend traffic") {
    fs::path file = temp_cache_file("warm.jsonl");
    OracleBackend inner;
    inner.set_support_text("claim", "the reference", true);
    CountingBackend oracle(inner);

    JudgeRequest req;
    req.task = Task::claim_vs_text;
    req.claim_text = "claim";
    req.hypothesis = Hypothesis::of_text("the reference");

    double cold_score = 0.0;
    {
        JudgeCache cache(file);
        Judge judge({}, cache);
        cold_score = judge.score(req, oracle).score;
    }
    CHECK(oracle.calls() == 1);
    {
        JudgeCache cache(file);
        Judge judge({}, cache);
        SupportJudgment warm = judge.score(req, oracle);
        CHECK(warm.cached);
        CHECK(warm.score == cold_score);
    }
    CHECK(oracle.calls() == 1);
}

TEST_CASE("two handles on one file converge via append") {
    fs::path file = temp_cache_file("concurrent.jsonl");
    JudgeCache first(file);
    JudgeCache second(file);
    first.put("k1", CacheEntry{1.0, "r1", "b"});
    second.put("k2", CacheEntry{0.0, "r2", "b"});
    JudgeCache reread(file);
    CHECK(reread.find("k1").has_value());
    CHECK(reread.find("k2").has_value());
    CHECK(reread.size() == 2);
}

TEST_CASE("gc compacts duplicate and corrupt lines") {
    fs::path file = temp_cache_file("gc.jsonl");
    {
        JudgeCache cache(file);
        cache.put("k", CacheEntry{1.0, "r", "b"});
        cache.put("k", CacheEntry{1.0, "r", "b"});
    }
    {
        std::ofstream out(file, std::ios::app);
        out << "{corrupt json\n";
    }
    JudgeCache cache(file);
    CHECK(cache.size() == 1);
    std::size_t removed = cache.gc();
    CHECK(removed == 2);
    JudgeCache after(file);
    CHECK(after.size() == 1);
    CHECK(after.find("k").has_value());
}

TEST_CASE("hit and miss counters track lookups") {
    JudgeCache cache;
    cache.put("k", CacheEntry{1.0, "r", "b"});
    CHECK(cache.find("k").has_value());
    CHECK_FALSE(cache.find("missing").has_value());
    CHECK(cache.hits() == 1);
    CHECK(cache.misses() == 1);
}
