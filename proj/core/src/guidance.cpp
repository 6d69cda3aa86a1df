#include <chronos/guidance.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace chronos {

namespace {

const char* kGuidanceMeta =
    "You prepare retrieval guidance for an assistant that answers questions about a user's\n"
    "conversation history. Read the question and identify its targets: the entities involved,\n"
    "the attributes asked about, any temporal constraints, and the operation required\n"
    "(lookup, comparison, counting, latest-value selection).\n"
    "\n"
    "Output 1 to 5 concrete bullets, one per line, each starting with \"- \". Each bullet\n"
    "names information the assistant should watch for, phrased like:\n"
    "- Details about camera lens purchases, specifically the most recent purchase and the\n"
    "  lens type/model\n"
    "Output only the bullets, nothing else.\n"
    "\n"
    "Question: {{question}}\n";

const char* kCotGuidelines =
    "Think step by step before answering. Reason about what information you need, which\n"
    "calendar (turns or events) and which tool would surface it, and whether a date range\n"
    "should constrain the search. Dates matter: when facts conflict, prefer the most recent\n"
    "one unless the question asks about the past. When the question involves counting,\n"
    "enumerate the matching records explicitly before giving a number. If the history does\n"
    "not contain the answer, say so instead of guessing.\n";

constexpr const char* kGenericBullet =
    "Pay close attention to information relevant to the question, current and past.";

std::string judge_template(const char* focus) {
    std::string t =
        "You grade an assistant's answer about a user's conversation history.\n"
        "Question: {{question}}\n"
        "Reference answer: {{answer}}\n"
        "Assistant answer: {{hypothesis}}\n";
    t += focus;
    t += "\nReply with exactly one word: yes if the assistant answer is correct, no otherwise.\n";
    return t;
}

}  // namespace

PromptLibrary PromptLibrary::built_in() {
    PromptLibrary lib;
    lib.guidance_meta = kGuidanceMeta;
    lib.cot_guidelines = kCotGuidelines;
    lib.judge_prompts["KU"] = judge_template(
        "The question asks for the user's current state after updates. The assistant is correct "
        "only if it gives the latest value, not an outdated one.");
    lib.judge_prompts["MS"] = judge_template(
        "The answer draws on several sessions. Counts and enumerations must match the reference "
        "exactly; partial lists are incorrect.");
    lib.judge_prompts["SSA"] = judge_template(
        "The reference comes from something the assistant said in one session. Judge whether the "
        "answer conveys the same content.");
    lib.judge_prompts["SSP"] = judge_template(
        "The question is about a stated preference of the user. Paraphrases that preserve the "
        "preference are correct.");
    lib.judge_prompts["SSU"] = judge_template(
        "The reference is a fact the user stated in one session. Paraphrases that preserve the "
        "fact are correct.");
    lib.judge_prompts["TR"] = judge_template(
        "The question requires temporal reasoning. Dates, durations, and orderings must agree "
        "with the reference.");
    lib.judge_prompts["abstention"] = judge_template(
        "The conversation history does not contain the answer. The assistant is correct only if "
        "it declines to answer or states the information is unavailable; any confident factual "
        "answer is incorrect.");
    return lib;
}

PromptLibrary PromptLibrary::from_dir(const std::string& dir) {
    PromptLibrary lib = built_in();
    auto load = [](const std::string& path, std::string& into) {
        std::ifstream in(path);
        if (!in) return;
        std::ostringstream buf;
        buf << in.rdbuf();
        into = buf.str();
    };
    load(dir + "/guidance_meta.txt", lib.guidance_meta);
    load(dir + "/cot_guidelines.txt", lib.cot_guidelines);
    for (auto& [code, text] : lib.judge_prompts) {
        std::string name = code;
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        load(dir + "/judge_" + name + ".txt", text);
    }
    return lib;
}

RetrievalGuidance generate_guidance(const std::string& question, ChatProvider& provider,
                                    const PromptLibrary& prompts, const RetryPolicy& retry) {
    if (question.empty())
        throw std::invalid_argument("generate_guidance: question must be non-empty");

    RetrievalGuidance degraded;
    degraded.bullets = {kGenericBullet};
    degraded.degraded = true;

    std::string prompt = prompts.guidance_meta;
    auto pos = prompt.find("{{question}}");
    if (pos != std::string::npos)
        prompt.replace(pos, 12, question);
    else
        prompt += "\nQuestion: " + question + "\n";

    ChatReply reply;
    try {
        reply = with_retries(retry, [&] {
            return provider.complete({{"user", prompt}}, {});
        });
    } catch (const ProviderFailure&) {
        return degraded;
    }

    RetrievalGuidance out;
    std::istringstream is(reply.text);
    std::string line;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t at = line.find_first_not_of(" \t");
        if (at == std::string::npos) continue;
        line = line.substr(at);
        if (line.rfind("- ", 0) == 0) line = line.substr(2);
        else if (line.rfind("• ", 0) == 0) line = line.substr(4);
        if (line.empty()) continue;
        if (out.bullets.size() == 5) break;
        out.bullets.push_back(line);
    }
    if (!out.valid()) return degraded;
    return out;
}

std::string render_guidance_preamble(const RetrievalGuidance& guidance) {
    std::ostringstream os;
    os << "Pay close attention to the following information (current and past):\n";
    for (const auto& bullet : guidance.bullets) os << "- " << bullet << "\n";
    return os.str();
}

std::string assemble_system_prompt(const std::string& guidance_preamble,
                                   const std::string& cot_guidelines,
                                   const std::string& tool_descriptions,
                                   const std::string& context_block) {
    std::ostringstream os;
    bool first = true;
    for (const std::string* part :
         {&guidance_preamble, &cot_guidelines, &tool_descriptions, &context_block}) {
        if (part->empty()) continue;
        if (!first) os << "\n";
        os << *part;
        if (part->back() != '\n') os << "\n";
        first = false;
    }
    return os.str();
}

}  // namespace chronos
