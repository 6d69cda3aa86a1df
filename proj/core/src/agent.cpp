#include <chronos/agent.hpp>

#include <chronos/datetime.hpp>
#include <chronos/retrieval.hpp>

#include <algorithm>
#include <sstream>

namespace chronos {

std::string to_string(ToolKind k) {
    switch (k) {
        case ToolKind::search_turns: return "search_turns";
        case ToolKind::search_events: return "search_events";
        case ToolKind::grep_turns: return "grep_turns";
        case ToolKind::grep_events: return "grep_events";
    }
    return "?";
}

std::optional<ToolKind> parse_tool_kind(const std::string& name) {
    if (name == "search_turns") return ToolKind::search_turns;
    if (name == "search_events") return ToolKind::search_events;
    if (name == "grep_turns") return ToolKind::grep_turns;
    if (name == "grep_events") return ToolKind::grep_events;
    return std::nullopt;
}

std::vector<ToolKind> ToolsetConfig::enabled() const {
    std::vector<ToolKind> out;
    if (enable_search) out.push_back(ToolKind::search_turns);
    if (enable_search && enable_events) out.push_back(ToolKind::search_events);
    if (enable_grep) out.push_back(ToolKind::grep_turns);
    if (enable_grep && enable_events) out.push_back(ToolKind::grep_events);
    return out;
}

namespace {

bool is_search(ToolKind k) {
    return k == ToolKind::search_turns || k == ToolKind::search_events;
}

bool targets_events(ToolKind k) {
    return k == ToolKind::search_events || k == ToolKind::grep_events;
}

const char* tool_blurb(ToolKind k) {
    switch (k) {
        case ToolKind::search_turns:
            return "semantic search over raw conversation turns; returns the k most relevant "
                   "turns with their timestamps";
        case ToolKind::search_events:
            return "semantic search over extracted events (facts with resolved date ranges); "
                   "returns the k most relevant events";
        case ToolKind::grep_turns:
            return "exact case-insensitive substring match over conversation turns";
        case ToolKind::grep_events:
            return "exact case-insensitive substring match over events, aliases included";
    }
    return "";
}

}  // namespace

std::vector<nlohmann::json> tool_schemas(const ToolsetConfig& config) {
    std::vector<nlohmann::json> out;
    for (ToolKind k : config.enabled()) {
        nlohmann::json properties;
        std::vector<std::string> required;
        if (is_search(k)) {
            properties["query"] = {{"type", "string"}, {"description", "what to search for"}};
            properties["k"] = {{"type", "integer"},
                               {"description", "number of results to return"}};
            required = {"query", "k"};
        } else {
            properties["pattern"] = {{"type", "string"},
                                     {"description", "substring to match, case-insensitive"}};
            required = {"pattern"};
        }
        if (config.apply_date_filter) {
            properties["date_from"] = {{"type", "string"},
                                       {"description", "inclusive lower bound, YYYY-MM-DD"}};
            properties["date_to"] = {{"type", "string"},
                                     {"description", "inclusive upper bound, YYYY-MM-DD"}};
        }
        out.push_back({{"name", to_string(k)},
                       {"description", tool_blurb(k)},
                       {"parameters",
                        {{"type", "object"},
                         {"properties", properties},
                         {"required", required}}}});
    }
    return out;
}

std::string tool_descriptions_text(const ToolsetConfig& config) {
    auto kinds = config.enabled();
    if (kinds.empty()) return "";
    std::ostringstream os;
    os << "Available tools:\n";
    for (ToolKind k : kinds) {
        os << "- " << to_string(k) << "(";
        os << (is_search(k) ? "query, k" : "pattern");
        if (config.apply_date_filter) os << ", date_from?, date_to?";
        os << "): " << tool_blurb(k) << "\n";
    }
    return os.str();
}

std::variant<ToolCall, std::string> parse_tool_call(const ToolInvocation& invocation) {
    auto kind = parse_tool_kind(invocation.name);
    if (!kind) return "unknown tool: " + invocation.name;

    ToolCall call;
    call.tool = *kind;
    const auto& args = invocation.arguments;
    if (!args.is_object()) return "tool arguments must be a JSON object";

    const char* text_key = is_search(*kind) ? "query" : "pattern";
    if (!args.contains(text_key) || !args[text_key].is_string() ||
        args[text_key].get<std::string>().empty())
        return std::string("missing required string argument \"") + text_key + "\"";
    call.query_or_pattern = args[text_key].get<std::string>();

    if (is_search(*kind)) {
        if (!args.contains("k") || !args["k"].is_number_integer())
            return "search tools require an integer argument \"k\"";
        int k = args["k"].get<int>();
        if (k <= 0) return "\"k\" must be positive";
        call.k = k;
    }

    for (const char* key : {"date_from", "date_to"}) {
        if (!args.contains(key)) continue;
        if (!args[key].is_string()) return std::string("\"") + key + "\" must be a string date";
        std::string raw = args[key].get<std::string>();
        if (raw.empty()) continue;
        if (!parse_date(raw))
            return std::string("cannot parse \"") + key + "\" value \"" + raw +
                   "\" as YYYY-MM-DD";
        (key[5] == 'f' ? call.date_from : call.date_to) = raw;
    }
    if (call.date_from && call.date_to) {
        if (*parse_date(*call.date_from) > *parse_date(*call.date_to))
            return "date_from is after date_to";
    }
    return call;
}

namespace {

std::string truncate_record(const std::string& text, std::size_t cap) {
    if (text.size() <= cap) return text;
    return text.substr(0, cap) + "…[truncated]";
}

std::string render_turn_record(const CalendarIndex& index, const std::string& id, std::size_t cap) {
    const auto& rec = index.record(id);
    auto turn = ConversationTurn::from_json(rec.payload).value();
    std::ostringstream os;
    os << id << " [" << format_datetime(turn.timestamp) << "] [" << to_string(turn.role) << "] "
       << turn.text;
    return truncate_record(os.str(), cap);
}

std::string render_event_record(const CalendarIndex& index, const std::string& id,
                                std::size_t cap) {
    const auto& rec = index.record(id);
    auto ev = TemporalEvent::from_json(rec.payload).value();
    std::ostringstream os;
    os << id << " [" << format_datetime(ev.range.start) << " .. " << format_datetime(ev.range.end)
       << "] " << ev.subject << " " << ev.verb << " " << ev.object;
    if (!ev.aliases.empty()) {
        os << " (aliases: ";
        for (std::size_t i = 0; i < ev.aliases.size(); ++i)
            os << (i ? "; " : "") << ev.aliases[i];
        os << ")";
    }
    if (!ev.surface_text.empty()) os << " | " << ev.surface_text;
    return truncate_record(os.str(), cap);
}

}  // namespace

std::string exec_tool(const ToolCall& call, const MemoryQuery& query,
                      const MemorySnapshot& snapshot, Embedder& embedder, Reranker& reranker,
                      const AgentConfig& config, ExecutedQuery* executed) {
    const auto enabled = config.tools.enabled();
    if (std::find(enabled.begin(), enabled.end(), call.tool) == enabled.end())
        return "error: tool " + to_string(call.tool) + " is not available in this run";
    const bool events = targets_events(call.tool);
    const CalendarIndex* index = events ? snapshot.events : snapshot.turns;
    if (!index) return "error: tool " + to_string(call.tool) + " is not available in this run";

    std::optional<DatetimeRange> range;
    if (config.tools.apply_date_filter && (call.date_from || call.date_to)) {
        DatetimeRange r;
        r.start = call.date_from ? day_start(*parse_date(*call.date_from)) : UtcTime::min();
        r.end = call.date_to ? day_end(*parse_date(*call.date_to)) : UtcTime::max();
        r.granularity = Granularity::day;
        range = r;
    }
    if (executed) {
        executed->tool = to_string(call.tool);
        executed->query = call.query_or_pattern;
        executed->range_applied = range;
        executed->k = call.k;
    }

    std::ostringstream os;
    if (is_search(call.tool)) {
        // Dense pool of up to 100 from the call's query; rerank scores always
        // come from the original question; the agent's k cuts afterwards.
        auto query_vec = embedder.embed({call.query_or_pattern}).at(0);
        auto pool = index->vector_search(query_vec, kDensePoolSize, range);
        std::vector<std::string> ids, texts;
        for (const auto& s : pool) {
            ids.push_back(s.id);
            texts.push_back(index->record(s.id).text);
        }
        auto reranked = rerank_candidates(query.question, ids, texts, reranker);
        std::size_t keep = std::min<std::size_t>(reranked.size(),
                                                 static_cast<std::size_t>(call.k.value_or(10)));
        if (keep == 0) return "No results.";
        os << keep << " result" << (keep == 1 ? "" : "s") << ":\n";
        for (std::size_t i = 0; i < keep; ++i) {
            const auto& id = reranked[i].id;
            os << (events ? render_event_record(*index, id, config.observation_record_cap)
                          : render_turn_record(*index, id, config.observation_record_cap))
               << "\n";
        }
    } else {
        auto hits = index->grep(call.query_or_pattern, config.grep_limit, range);
        if (hits.empty()) return "No results.";
        os << hits.size() << " result" << (hits.size() == 1 ? "" : "s") << ":\n";
        for (const auto& hit : hits)
            os << (events ? render_event_record(*index, hit.id, config.observation_record_cap)
                          : render_turn_record(*index, hit.id, config.observation_record_cap))
               << "\n";
    }
    return os.str();
}

namespace {

std::string assistant_history_entry(const ChatReply& reply) {
    std::ostringstream os;
    if (!reply.thought.empty()) os << reply.thought << "\n";
    if (!reply.text.empty()) os << reply.text << "\n";
    for (const auto& call : reply.tool_calls)
        os << "call: " << call.name << " " << call.arguments.dump() << "\n";
    return os.str();
}

}  // namespace

AgentResult run_agent(const MemoryQuery& query, const MemorySnapshot& snapshot,
                      ChatProvider& agent_chat, Embedder& embedder, Reranker& reranker,
                      const AgentConfig& config, const std::string& system_prompt) {
    if (!query.valid()) throw std::invalid_argument("run_agent: invalid query");

    AgentResult result;
    auto schemas = tool_schemas(config.tools);

    std::vector<ChatMessage> messages;
    messages.push_back({"system", system_prompt});
    messages.push_back(
        {"user", "Question (" + format_date(query.question_date) + "): " + query.question});

    for (int step = 0; step < config.step_budget; ++step) {
        ChatReply reply;
        try {
            reply = with_retries(config.retry,
                                 [&] { return agent_chat.complete(messages, schemas); });
        } catch (const ProviderFailure& e) {
            result.failed = true;
            result.error = e.what();
            result.trace.add_answer("(run failed: " + result.error + ")");
            result.answer = "";
            return result;
        }

        if (!reply.thought.empty()) result.trace.add_thought(reply.thought);

        if (reply.tool_calls.empty()) {
            if (!reply.text.empty()) {
                result.answer = reply.text;
                result.trace.add_answer(reply.text);
                return result;
            }
            // Nothing actionable; note it and let the budget bound the loop.
            result.trace.add_thought("(provider returned an empty reply)");
            messages.push_back({"assistant", ""});
            continue;
        }

        messages.push_back({"assistant", assistant_history_entry(reply)});
        for (const auto& invocation : reply.tool_calls) {
            result.trace.add_tool_call(
                {{"tool", invocation.name}, {"arguments", invocation.arguments}});
            std::string observation;
            auto parsed = parse_tool_call(invocation);
            if (auto* err = std::get_if<std::string>(&parsed)) {
                observation = "error: " + *err;
            } else {
                ExecutedQuery log;
                observation = exec_tool(std::get<ToolCall>(parsed), query, snapshot, embedder,
                                        reranker, config, &log);
                if (observation.rfind("error:", 0) != 0) result.executed.push_back(log);
            }
            result.trace.add_observation(observation);
            messages.push_back({"tool", observation});
        }
    }

    // Budget exhausted: one forced tools-free turn for a best-effort answer.
    result.budget_exhausted = true;
    messages.push_back({"user",
                        "You have used your step budget. Give your best final answer now, in "
                        "plain text. Do not call tools."});
    try {
        ChatReply reply = with_retries(config.retry,
                                       [&] { return agent_chat.complete(messages, {}); });
        result.answer = reply.text.empty() ? "I could not determine the answer." : reply.text;
    } catch (const ProviderFailure& e) {
        result.failed = true;
        result.error = e.what();
        result.answer = "";
    }
    result.trace.add_answer(result.answer.empty() ? "(no answer)" : result.answer);
    return result;
}

}  // namespace chronos
