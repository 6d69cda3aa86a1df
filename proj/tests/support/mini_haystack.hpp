#pragma once

// A handcrafted 12-question benchmark (two per category) with fully scripted
// providers. Every provider reply is written against the haystack below, so a
// run is deterministic end to end and the checks can assert on trace shape,
// executed query ranges, and final answers, not just accuracy.
//
// The scripted agent keys its behavior off the system prompt: which tool lines
// are present tells it which ablation it is running under, and it picks a tool
// ladder accordingly (events search > turns search > grep > direct answer).

#include <chronos/eval.hpp>

#include <string>
#include <vector>

namespace mini {

/// The 12 questions with their haystacks, in fixed order.
std::vector<chronos::BenchmarkQuestion> make_benchmark();

/// Fresh scripted provider set. Build one per run: the agent scripts hold
/// per-entry reply cursors, so reuse across runs would leak state.
chronos::ProviderSet make_providers();

/// Runs the full eval over make_benchmark() with fresh providers.
std::vector<chronos::QuestionResult> run_mini(const std::string& ablation_flags,
                                              int workers = 1);

/// All 12 answered, judged, and correct; two judged per category; no run errors.
/// Returns human-readable violations, empty on success.
std::vector<std::string> check_correctness(const std::vector<chronos::QuestionResult>& results);

/// Baseline-run trace predicates: knowledge updates pick the latest value with
/// both candidates observed, counting runs date-filtered event queries with the
/// exact month/year bounds, temporal reasoning issues the anchored week range,
/// and the lexical-recovery scenario retries after an empty grep.
std::vector<std::string> check_category_behaviors(
    const std::vector<chronos::QuestionResult>& results);

/// The trace-level effect a single ablation flag must produce, checked against
/// a baseline run. `flag` is one of the seven AblationConfig names.
std::vector<std::string> check_ablation_effect(
    const std::string& flag, const std::vector<chronos::QuestionResult>& baseline,
    const std::vector<chronos::QuestionResult>& ablated);

}  // namespace mini
