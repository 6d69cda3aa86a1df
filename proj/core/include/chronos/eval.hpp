#pragma once

#include <chronos/agent.hpp>
#include <chronos/guidance.hpp>
#include <chronos/providers.hpp>
#include <chronos/retrieval.hpp>
#include <chronos/types.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chronos {

enum class Category { KU, MS, SSA, SSP, SSU, TR };

/// Fixed report order: KU, MS, SSA, SSP, SSU, TR.
const std::vector<Category>& all_categories();
std::string category_code(Category c);
/// Maps a benchmark question_type ("knowledge-update", ...) to its category.
std::optional<Category> category_from_question_type(const std::string& question_type);

struct BenchmarkQuestion {
    std::string question_id;
    std::string question;
    std::string answer;
    Category category = Category::KU;
    UtcTime question_date{};
    std::vector<Session> haystack;                      // chronological sessions
    std::map<std::string, std::string> session_dates;   // session id → YYYY-MM-DD

    /// Benchmark convention: ids ending in "_abs" expect the assistant to
    /// decline because the history lacks the answer.
    bool abstention() const;
};

struct AblationConfig {
    bool no_initial_retrieval = false;
    bool no_dynamic_prompting = false;
    bool no_rerank = false;
    bool no_date_filter = false;
    bool grep_only = false;
    bool vector_only = false;
    bool turns_only = false;

    /// Parses a comma-separated flag list; unknown names and the
    /// grep_only+vector_only combination are errors.
    static AblationConfig parse(const std::string& flags);
    std::string describe() const;  // canonical comma-separated form
};

struct BenchmarkLoad {
    std::vector<BenchmarkQuestion> questions;
    std::map<std::string, int> histogram;  // category code → count
};

/// Loads a benchmark file: a JSON array of records with question_id,
/// question_type, question, answer, question_date, haystack_dates,
/// haystack_session_ids, and haystack_sessions (each a turn list with role and
/// content). Turn timestamps derive from the session date, offset by turn
/// index so ordering is strict. Any malformed record fails the whole load
/// with its record index; nothing partial is returned.
BenchmarkLoad load_benchmark(const std::string& path);

/// Ids listed in an exclusion file; an entry matches ids equal to it or
/// prefixed by it. File format: {"excluded_ids": ["...", ...]}.
std::vector<std::string> load_exclusions(const std::string& path);
bool is_excluded(const std::string& question_id, const std::vector<std::string>& exclusions);

struct JudgeOutcome {
    bool judged = false;   // false: judge unavailable, excluded from accuracy
    bool correct = false;
    std::string raw;       // judge's raw output (or the mock's reasoning)
};

/// Routes to the category prompt (or the abstention prompt) and asks the
/// judge provider for yes/no. A null provider selects the offline judge:
/// case-folded, punctuation-stripped containment of the reference answer,
/// with a refusal-phrase rule for abstention questions.
JudgeOutcome judge_answer(const std::string& hypothesis, const BenchmarkQuestion& q,
                          ChatProvider* judge, const RetryPolicy& retry,
                          const PromptLibrary& prompts);

/// The offline containment judge on its own (also the fallback semantics
/// tests pin down).
JudgeOutcome mock_judge(const std::string& hypothesis, const BenchmarkQuestion& q);

/// Error taxonomy codes: retrieval_failure, counting_arithmetic, fabrication,
/// temporal, other.
const std::vector<std::string>& error_categories();

struct QuestionResult {
    std::string question_id;
    Category category = Category::KU;
    std::string hypothesis;
    bool judged = false;
    bool correct = false;
    std::string judge_raw;
    std::string error_category;       // set when judged incorrect
    bool run_error = false;           // pipeline failed; scored incorrect
    std::string error_text;
    AgentTrace trace;
    RetrievalLog retrieval;
    std::vector<ExecutedQuery> executed;
    std::vector<std::string> prompt_sections;  // which system-prompt parts ran
    bool guidance_degraded = false;
    bool budget_exhausted = false;

    nlohmann::json to_json() const;   // stable field order, no wall-clock data
};

/// Buckets an incorrect result: answer evidence absent from every observation
/// → retrieval_failure; counting question → counting_arithmetic; temporal
/// category → temporal; evidence present and the answer still confidently
/// wrong → fabrication; anything else (refusals included) → other.
std::string classify_error(const QuestionResult& result, const BenchmarkQuestion& q);

/// Runs the full pipeline for one question: per-question indices, guidance,
/// initial retrieval, agent loop, judgment, error bucketing. Honors every
/// ablation flag. Throws only std::bad_alloc-grade disasters; pipeline
/// failures come back as run_error results.
QuestionResult run_question(const BenchmarkQuestion& q, const AblationConfig& ablation,
                            ProviderSet& providers,
                            const PromptLibrary& prompts = PromptLibrary::built_in());

/// Runs `questions` through run_question on `workers` threads. Results keep
/// input order. `on_done` (optional) fires per finished question under a lock.
std::vector<QuestionResult> run_eval(
    const std::vector<BenchmarkQuestion>& questions, const AblationConfig& ablation,
    ProviderSet& providers, int workers = 1,
    const PromptLibrary& prompts = PromptLibrary::built_in(),
    const std::function<void(const QuestionResult&)>& on_done = nullptr);

/// Writes one JSON record per line, in result order; byte-stable given equal
/// results. load reverses it (trace and logs reduced to what to_json kept).
void write_results(const std::string& path, const std::vector<QuestionResult>& results);
std::vector<nlohmann::json> load_results(const std::string& path);

struct Report {
    int total = 0;
    int judged = 0;
    int correct = 0;
    std::map<std::string, int> category_total;    // code → n
    std::map<std::string, int> category_correct;
    std::map<std::string, int> error_counts;

    double overall_accuracy() const;              // percent over judged
    std::string human_table() const;              // category columns KU..TR
    nlohmann::json to_json() const;
};

Report aggregate_report(const std::vector<QuestionResult>& results);
/// Same aggregation over a loaded results file.
Report aggregate_report_json(const std::vector<nlohmann::json>& records);

/// Proportional stratified sample of size n: per-category quotas by largest
/// remainder (ties in report order), selection within a category by seeded
/// shuffle, output in benchmark order.
std::vector<BenchmarkQuestion> stratified_sample(const std::vector<BenchmarkQuestion>& questions,
                                                 std::size_t n, uint64_t seed);

}  // namespace chronos
