#pragma once

#include <chronos/calendar_store.hpp>
#include <chronos/providers.hpp>
#include <chronos/types.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chronos {

enum class ToolKind { search_turns, search_events, grep_turns, grep_events };

std::string to_string(ToolKind k);
std::optional<ToolKind> parse_tool_kind(const std::string& name);

/// A validated tool request. Search tools require k; grep tools take a
/// pattern and are capped by the agent config, not k. Date bounds are whole
/// days (from's 00:00:00 through to's 23:59:59) and must satisfy from ≤ to.
struct ToolCall {
    ToolKind tool = ToolKind::search_turns;
    std::string query_or_pattern;
    std::optional<int> k;
    std::optional<std::string> date_from;
    std::optional<std::string> date_to;
};

/// Parses a provider tool invocation. Returns an error string (sent back to
/// the model as an observation) instead of throwing: malformed arguments are
/// the model's problem to correct, not a crash.
std::variant<ToolCall, std::string> parse_tool_call(const ToolInvocation& invocation);

/// Which of the four tools exist for this run, and whether date bounds are
/// honored. Ablations shrink this; defaults give the full toolset.
struct ToolsetConfig {
    bool enable_search = true;   // search_turns / search_events
    bool enable_grep = true;     // grep_turns / grep_events
    bool enable_events = true;   // the two *_events tools
    bool apply_date_filter = true;

    std::vector<ToolKind> enabled() const;
};

/// Function schemas for the enabled tools, in the neutral wire format
/// {"name", "description", "parameters"} handed to the chat provider.
std::vector<nlohmann::json> tool_schemas(const ToolsetConfig& config);

/// Human-readable tool list for the system prompt's tool section.
std::string tool_descriptions_text(const ToolsetConfig& config);

/// Read-only view of one haystack's indexed state. `events` may be null when
/// the event calendar is disabled for the run.
struct MemorySnapshot {
    const CalendarIndex* turns = nullptr;
    const CalendarIndex* events = nullptr;
    const std::map<std::string, std::string>* session_dates = nullptr;
};

/// One store query as actually executed: after date-filter ablation, with the
/// effective range and k. The behavioral assertions in tests key off these.
struct ExecutedQuery {
    std::string tool;
    std::string query;
    std::optional<DatetimeRange> range_applied;
    std::optional<int> k;
};

struct AgentConfig {
    int step_budget = 10;
    std::size_t observation_record_cap = 2000;  // chars per rendered record
    std::size_t grep_limit = 50;
    ToolsetConfig tools;
    RetryPolicy retry;
};

/// Executes one validated tool call. Search tools embed the call's query,
/// pull a dense pool of up to 100 candidates, rerank them against the
/// ORIGINAL question, and truncate to the call's k. Grep tools run the
/// substring scan. Date bounds become a closed-interval range filter inside
/// the store call (dropped when the config disables date filtering).
std::string exec_tool(const ToolCall& call, const MemoryQuery& query,
                      const MemorySnapshot& snapshot, Embedder& embedder, Reranker& reranker,
                      const AgentConfig& config, ExecutedQuery* executed = nullptr);

struct AgentResult {
    std::string answer;
    AgentTrace trace;
    std::vector<ExecutedQuery> executed;
    bool budget_exhausted = false;
    bool failed = false;       // provider gave up mid-run
    std::string error;
};

/// The ReAct loop: repeatedly call the agent chat provider with the system
/// prompt, question, and accumulated observations; execute each emitted tool
/// call in order; stop on a final answer or after step_budget iterations, in
/// which case one forced tools-free "answer now" turn produces a best-effort
/// answer and the result is flagged.
AgentResult run_agent(const MemoryQuery& query, const MemorySnapshot& snapshot,
                      ChatProvider& agent_chat, Embedder& embedder, Reranker& reranker,
                      const AgentConfig& config, const std::string& system_prompt);

}  // namespace chronos
