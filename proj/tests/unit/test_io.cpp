#include <catch2/catch_amalgamated.hpp>

#include "mirage/json_io.hpp"
#include "mirage/judgments.hpp"

using namespace mirage;

namespace {

json topic_json() {
    return json::parse(R"({
        "id": "t1",
        "query": "what happened at the dam?",
        "sources": [
            {"id": "v1", "modality": "video", "uri": "file:///a.mp4",
             "metadata": {"duration": "120", "language": "en"}},
            {"id": "v2", "modality": "text", "uri": "file:///b.txt"}
        ],
        "reference_id": "reference"
    })");
}

}  // namespace

TEST_CASE("topic round-trips through JSON") {
    Topic t = io::topic_from_json(topic_json());
    CHECK(t.id == "t1");
    CHECK(t.sources.size() == 2);
    CHECK(t.sources[0].metadata.at("duration") == "120");
    CHECK(t.sources[1].modality == Modality::text);
    REQUIRE(t.reference_id.has_value());
    Topic again = io::topic_from_json(io::to_json(t));
    CHECK(io::to_json(again).dump() == io::to_json(t).dump());
}

TEST_CASE("strict mode rejects unknown fields, lenient ignores them") {
    json j = topic_json();
    j["surprise"] = 1;
    CHECK_THROWS_AS(io::topic_from_json(j, true), FormatError);
    CHECK_NOTHROW(io::topic_from_json(j, false));
}

TEST_CASE("duplicate source ids are rejected") {
    json j = topic_json();
    j["sources"][1]["id"] = "v1";
    CHECK_THROWS_AS(io::topic_from_json(j), FormatError);
}

TEST_CASE("document parsing enforces contiguous indices") {
    json j = json::parse(R"({
        "topic_id": "t1", "system_id": "sys",
        "sentences": [
            {"index": 0, "text": "First.", "citations": ["v1"]},
            {"index": 2, "text": "Third.", "citations": []}
        ]
    })");
    CHECK_THROWS_AS(io::document_from_json(j), FormatError);
    j["sentences"][1]["index"] = 1;
    Document d = io::document_from_json(j);
    CHECK(d.sentences.size() == 2);
    CHECK(d.text() == "First. Third.");
}

TEST_CASE("claims file round-trips with importance defaulting to one") {
    json j = json::parse(R"({
        "owner": "sys",
        "claims": [
            {"id": "c1", "text": "a", "parent_sentence": 0, "origin": "predicted"},
            {"id": "c2", "text": "b", "parent_sentence": 0, "origin": "predicted",
             "importance": 2.5}
        ]
    })");
    ClaimSet cs = io::claims_from_json(j);
    CHECK(cs.claims[0].importance == 1.0);
    CHECK(cs.claims[1].importance == 2.5);
    CHECK(io::to_json(cs).dump() == io::to_json(io::claims_from_json(io::to_json(cs))).dump());
}

TEST_CASE("claims with negative importance or duplicate ids are rejected") {
    json j = json::parse(R"({
        "owner": "sys",
        "claims": [{"id": "c1", "text": "a", "parent_sentence": 0, "origin": "predicted",
                    "importance": -1.0}]
    })");
    CHECK_THROWS_AS(io::claims_from_json(j), FormatError);
    json dup = json::parse(R"({
        "owner": "sys",
        "claims": [
            {"id": "c1", "text": "a", "parent_sentence": 0, "origin": "predicted"},
            {"id": "c1", "text": "b", "parent_sentence": 0, "origin": "predicted"}
        ]
    })");
    CHECK_THROWS_AS(io::claims_from_json(dup), FormatError);
}

TEST_CASE("claims bound to an owner document validate parent sentences") {
    auto owner = std::make_shared<Document>();
    owner->topic_id = "t1";
    owner->system_id = "sys";
    Sentence s;
    s.index = 0;
    s.text = "Only sentence.";
    owner->sentences.push_back(s);
    json good = json::parse(R"({
        "owner": "sys",
        "claims": [{"id": "c1", "text": "a", "parent_sentence": 0, "origin": "predicted"}]
    })");
    CHECK_NOTHROW(io::claims_from_json(good, true, owner));
    json bad = good;
    bad["claims"][0]["parent_sentence"] = 3;
    CHECK_THROWS_AS(io::claims_from_json(bad, true, owner), FormatError);
}

TEST_CASE("grounding file round-trips") {
    json j = json::parse(R"({
        "topic_id": "t1",
        "entries": {"r1": ["v1", "v2"], "r2": []}
    })");
    GroundingMap g = io::grounding_from_json(j);
    CHECK(g.entries.at("r1").size() == 2);
    CHECK(g.entries.at("r2").empty());
    CHECK(io::to_json(g).dump() == io::to_json(io::grounding_from_json(io::to_json(g))).dump());
}

TEST_CASE("EQJ judgments enforce whole likert scores in range") {
    json j = json::parse(R"({
        "kind": "EQJ", "topic_id": "t1", "annotator": "1",
        "scores": {"sysA": 5, "sysB": 3}
    })");
    HumanJudgmentSet h = io::judgments_from_json(j);
    CHECK(h.kind == JudgmentKind::eqj);
    CHECK(h.eqj_scores.at("sysA") == 5);

    json out_of_range = j;
    out_of_range["scores"]["sysA"] = 6;
    CHECK_THROWS_AS(io::judgments_from_json(out_of_range), FormatError);
    json half = j;
    half["scores"]["sysA"] = 4.5;
    CHECK_THROWS_AS(io::judgments_from_json(half), FormatError);
}

TEST_CASE("ICJ judgments parse direction and claim booleans") {
    json j = json::parse(R"({
        "kind": "ICJ", "topic_id": "t1", "annotator": "2", "system_id": "sysA",
        "direction": "predicted_vs_reference",
        "claim_judgments": {"p1": true, "p2": false}
    })");
    HumanJudgmentSet h = io::judgments_from_json(j);
    CHECK(h.kind == JudgmentKind::icj);
    CHECK(h.direction == IcjDirection::predicted_vs_reference);
    CHECK(h.claim_judgments.at("p1"));
    CHECK_FALSE(h.claim_judgments.at("p2"));
}

TEST_CASE("GJ judgments parse per-claim grounded sources") {
    json j = json::parse(R"({
        "kind": "GJ", "topic_id": "t1", "system_id": "sysA",
        "entries": [
            {"claim_id": "p1", "supported_sources": ["v1", "v2"]},
            {"claim_id": "p2", "supported_sources": []}
        ]
    })");
    HumanJudgmentSet h = io::judgments_from_json(j);
    CHECK(h.kind == JudgmentKind::gj);
    CHECK(h.grounding.at("p1").size() == 2);
    CHECK(h.grounding.at("p2").empty());
}

TEST_CASE("judgment files reject unknown kinds") {
    json j = json::parse(R"({"kind": "XYZ", "topic_id": "t1"})");
    CHECK_THROWS_AS(io::judgments_from_json(j), FormatError);
}

TEST_CASE("json writer emits sorted keys deterministically") {
    json a{{"zebra", 1}, {"alpha", 2}};
    json b{{"alpha", 2}, {"zebra", 1}};
    CHECK(a.dump() == b.dump());
}
