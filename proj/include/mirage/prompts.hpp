#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "mirage/errors.hpp"
#include "mirage/judge.hpp"
#include "mirage/text.hpp"

namespace mirage {

// A chat prompt: optional system message plus a user message with
// placeholders. Template files hold the system text, a line of "---", then
// the user text; a file without the separator is all user text. Users may
// edit the files freely, e.g. to prepend few-shot exemplars.
struct PromptTemplate {
    std::string system;
    std::string user;
};

namespace detail {

inline std::map<Task, PromptTemplate> default_prompts() {
    std::map<Task, PromptTemplate> prompts;

    prompts[Task::claim_vs_video] = PromptTemplate{
        "You are an expert in evaluating and verifying claims. You will be given a video, a "
        "claim, and the context the claim came from. Your task is to determine if the claim is "
        "supported by the video. You will output <response>yes<response> if the claim is "
        "supported by the video, or <response>no<response> if the claim is not supported by the "
        "video.",
        "[VIDEO_HERE] Here is the context the claim came from: <claim_context> "
        "[PUT_CONTEXT_HERE] <claim_context>. Here is the claim: <claim> [PUT_CLAIM_HERE] "
        "<claim>. Only respond with <response>yes<response> or <response>no<response>. Is the "
        "claim: [PUT_CLAIM_HERE], supported by the video?"};

    prompts[Task::claim_vs_text] = PromptTemplate{
        "You are an expert in evaluating and verifying claims. You will be given a passage of "
        "text, a claim, and the context the claim came from. Your task is to determine if the "
        "claim is supported by the passage of text. You will output <response>yes<response> if "
        "the claim is supported by the passage, or <response>no<response> if the claim is not "
        "supported by the passage.",
        "Here is the passage: <verification_context> [PUT_VERIFICATION_CONTEXT_HERE] "
        "<verification_context>. Here is the context the claim came from: <claim_context> "
        "[PUT_CONTEXT_HERE] <claim_context>. Here is the claim: <claim> [PUT_CLAIM_HERE] "
        "<claim> Only respond with <response>yes<response> or <response>no<response>. Is the "
        "claim: [PUT_CLAIM_HERE], supported by the passage?"};

    prompts[Task::claim_vs_claimlist] = PromptTemplate{
        "You are an expert in evaluating and verifying claims. You will be given a a claim, the "
        "context the claim came from, and a list of claims to verify the claim against. Your "
        "task is to determine if the claim is supported by the list of claims. You will output "
        "<response>yes<response> if the claim is supported by the list of claims, or "
        "<response>no<response> if the claim is not supported by the list of claims.",
        "Here is the list of claims to verfiy against: <verification_context> "
        "[PUT_VERIFICATION_CONTEXT_HERE] <verification_context>. Here is the context the claim "
        "came from: <claim_context> [PUT_CONTEXT_HERE] <claim_context>. Here is the claim: "
        "<claim> [PUT_CLAIM_HERE] <claim> Only respond with <response>yes<response> or "
        "<response>no<response>. Is the claim: [PUT_CLAIM_HERE], supported by list of claims to "
        "verify against?"};

    prompts[Task::sentence_vs_videos] = PromptTemplate{
        "You are an expert at verifying information. You will be given a set of videos and a "
        "sentence. Your task is to determine if the sentence is fully supported by the videos. "
        "You will output <response>yes<response> if the sentence is fully supported by the "
        "videos, or <response>no<response> if the sentence is not fully supported by the "
        "videos.",
        "[VIDEOS_HERE] Sentence: [PUT_SENTENCE_HERE] Is the sentence fully supported by the "
        "videos? Only respond with <response>yes<response> or <response>no<response>."};

    prompts[Task::nugget_answered] = PromptTemplate{
        "You are an expert at evaluating reports. You will be given a report, a question, and "
        "the answer to the question. Your task is to determine if the report answers the "
        "question consistently with the given answer. You will output <response>yes<response> "
        "if the report answers the question consistently with the answer, or "
        "<response>no<response> if it does not.",
        "Here is the report: <verification_context> [PUT_VERIFICATION_CONTEXT_HERE] "
        "<verification_context>. Here is the question: [PUT_QUESTION_HERE] Here is the answer: "
        "<claim> [PUT_CLAIM_HERE] <claim> Only respond with <response>yes<response> or "
        "<response>no<response>. Does the report answer the question consistently with the "
        "answer?"};

    prompts[Task::extract_relevant] = PromptTemplate{
        "",
        "Please extract relevant sentences from the provided context that can potentially help "
        "answer the following question. If no relevant sentences are found, or if you believe "
        "the question cannot be answered from the given context, return the phrase "
        "'Insufficient Information'. The question is: [PUT_QUESTION_HERE]"};

    prompts[Task::detailed_summary] = PromptTemplate{
        "",
        "Describe the video in detail and extract all the information possible from it. This "
        "includes transcribing any on screen text (OCR) and describing any visual information "
        "beyond the summary."};

    prompts[Task::query_generation] = PromptTemplate{
        "",
        "Generate a possible query that was asked to generate the following response. Only "
        "output the query. Here is the response: [PUT_VERIFICATION_CONTEXT_HERE]"};

    prompts[Task::decompose_sentence] = PromptTemplate{
        "You are an expert at decomposing sentences into subclaims. A subclaim is a "
        "self-contained declarative statement expressing a single fact. You will be given a "
        "sentence and the document it came from. Decompose the sentence into subclaims, one per "
        "line. Output nothing for sentences that carry no factual content.",
        "Here is the document: <claim_context> [PUT_CONTEXT_HERE] <claim_context>. Decompose "
        "this sentence into subclaims, one per line: [PUT_SENTENCE_HERE]"};

    prompts[Task::nugget_question] = PromptTemplate{
        "You are an expert at writing questions. You will be given a claim. Write a single "
        "question whose answer is the claim. Only output the question.",
        "Here is the claim: <claim> [PUT_CLAIM_HERE] <claim> Write a single question whose "
        "answer is this claim."};

    return prompts;
}

}  // namespace detail

class PromptLibrary {
public:
    PromptLibrary() : prompts_(detail::default_prompts()) {}

    // Overrides defaults from <dir>/<task_name>.tmpl files.
    void load_dir(const std::filesystem::path& dir) {
        for (auto& [task, tmpl] : prompts_) {
            std::filesystem::path file = dir / (to_string(task) + ".tmpl");
            if (!std::filesystem::exists(file)) continue;
            std::ifstream in(file, std::ios::binary);
            std::string data((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            tmpl = parse_template(data);
        }
    }

    // Writes the current templates out as editable files.
    void save_dir(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir);
        for (const auto& [task, tmpl] : prompts_) {
            std::ofstream out(dir / (to_string(task) + ".tmpl"), std::ios::binary);
            if (!tmpl.system.empty()) out << tmpl.system << "\n---\n";
            out << tmpl.user << "\n";
        }
    }

    const PromptTemplate& for_task(Task t) const {
        auto it = prompts_.find(t);
        if (it == prompts_.end()) throw ConfigError("no prompt template for task " + to_string(t));
        return it->second;
    }

    // Fills the placeholders from a request. Media placeholders are removed
    // from the text; the transport attaches the sources separately.
    PromptTemplate render(const JudgeRequest& req) const {
        PromptTemplate t = for_task(req.task);
        std::string verification;
        if (req.hypothesis.kind == HypothesisKind::text) {
            verification = req.hypothesis.text;
        } else if (req.hypothesis.kind == HypothesisKind::claim_list) {
            verification = join(req.hypothesis.claims, "\n");
        }
        for (std::string* part : {&t.system, &t.user}) {
            *part = replace_all(*part, "[VIDEO_HERE] ", "");
            *part = replace_all(*part, "[VIDEOS_HERE] ", "");
            *part = replace_all(*part, "[VIDEO_HERE]", "");
            *part = replace_all(*part, "[VIDEOS_HERE]", "");
            *part = replace_all(*part, "[PUT_CLAIM_HERE]", req.claim_text);
            *part = replace_all(*part, "[PUT_SENTENCE_HERE]", req.claim_text);
            *part = replace_all(*part, "[PUT_QUESTION_HERE]", req.claim_text);
            *part = replace_all(*part, "[PUT_CONTEXT_HERE]", req.claim_context);
            *part = replace_all(*part, "[PUT_VERIFICATION_CONTEXT_HERE]", verification);
        }
        return t;
    }

private:
    static PromptTemplate parse_template(const std::string& data) {
        PromptTemplate t;
        size_t sep = data.find("\n---\n");
        if (sep == std::string::npos) {
            t.user = trim(data);
        } else {
            t.system = trim(data.substr(0, sep));
            t.user = trim(data.substr(sep + 5));
        }
        return t;
    }

    std::map<Task, PromptTemplate> prompts_;
};

}  // namespace mirage
