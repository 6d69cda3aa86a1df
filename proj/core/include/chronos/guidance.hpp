#pragma once

#include <chronos/providers.hpp>
#include <chronos/types.hpp>

#include <map>
#include <string>
#include <vector>

namespace chronos {

/// Prompt texts the pipeline assembles from. Defaults are compiled in;
/// from_dir() overrides them with the editable files under prompts/.
struct PromptLibrary {
    std::string guidance_meta;    // meta-prompt for the guidance model
    std::string cot_guidelines;   // chain-of-thought guidelines for the agent
    /// Judge prompt per category code ("KU".."TR") plus "abstention".
    /// Placeholders: {{question}}, {{answer}}, {{hypothesis}}.
    std::map<std::string, std::string> judge_prompts;

    static PromptLibrary built_in();
    /// Loads guidance_meta.txt, cot_guidelines.txt, and judge_<code>.txt from
    /// `dir`; missing files keep their built-in text.
    static PromptLibrary from_dir(const std::string& dir);
};

/// Runs the guidance model once for the question and parses its reply into
/// 1..5 bullets. Provider failure (or an unusable reply) degrades to a single
/// generic bullet with the degraded flag set, never an exception.
RetrievalGuidance generate_guidance(const std::string& question, ChatProvider& provider,
                                    const PromptLibrary& prompts, const RetryPolicy& retry);

/// The guidance preamble exactly as it appears in the system prompt:
///   Pay close attention to the following information (current and past):
///   - <bullet>
///   ...
std::string render_guidance_preamble(const RetrievalGuidance& guidance);

/// Assembles the agent system prompt in fixed section order: guidance
/// preamble, chain-of-thought guidelines, tool descriptions, context block.
/// Empty parts are omitted wholesale (ablations pass empty strings); the
/// output is a pure function of its inputs.
std::string assemble_system_prompt(const std::string& guidance_preamble,
                                   const std::string& cot_guidelines,
                                   const std::string& tool_descriptions,
                                   const std::string& context_block);

}  // namespace chronos
