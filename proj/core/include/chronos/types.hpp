#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chronos/datetime.hpp"

namespace chronos {

using nlohmann::json;

enum class Role { user, assistant };

std::string to_string(Role r);
std::optional<Role> role_from_string(std::string_view s);

enum class Granularity { instant, day, week, month, year, window };

std::string to_string(Granularity g);
std::optional<Granularity> granularity_from_string(std::string_view s);

/// Inclusive UTC interval [start, end] with a granularity tag.
struct DatetimeRange {
    UtcTime start{};
    UtcTime end{};
    Granularity granularity = Granularity::day;

    bool valid() const {
        return start <= end && (granularity != Granularity::instant || start == end);
    }
    /// Closed-interval intersection.
    bool intersects(const DatetimeRange& other) const {
        return start <= other.end && other.start <= end;
    }
    bool operator==(const DatetimeRange&) const = default;

    static DatetimeRange instant(UtcTime t) { return {t, t, Granularity::instant}; }
    static DatetimeRange whole_day(Date d) { return {day_start(d), day_end(d), Granularity::day}; }

    json to_json() const;
    static std::optional<DatetimeRange> from_json(const json& j);
};

/// One user/assistant exchange; timestamp is the conversation time t_conv.
struct ConversationTurn {
    std::string session_id;
    int turn_index = 0;
    Role role = Role::user;
    std::string text;
    UtcTime timestamp{};

    bool operator==(const ConversationTurn&) const = default;

    json to_json() const;
    static std::optional<ConversationTurn> from_json(const json& j);
};

struct Session {
    std::string session_id;
    Date date{};
    std::vector<ConversationTurn> turns;
};

/// Sorts turns by index and checks the Session invariants; returns an error
/// description on violation.
std::optional<std::string> normalize_session(Session& s);

struct SourceRef {
    std::string session_id;
    int turn_index = 0;
    bool operator==(const SourceRef&) const = default;
    auto operator<=>(const SourceRef&) const = default;
};

/// SVO tuple with a resolved datetime range, lexical aliases for keyword
/// recall, and references to the turns it was extracted from.
struct TemporalEvent {
    std::string event_id;
    std::string subject;
    std::string verb;
    std::string object;
    DatetimeRange range;
    std::vector<std::string> aliases;  // 2..4, may be fewer when degraded
    std::vector<SourceRef> source;     // non-empty
    std::string surface_text;
    bool degraded = false;  // extractor produced fewer than 2 usable aliases

    bool operator==(const TemporalEvent&) const = default;

    json to_json() const;
    static std::optional<TemporalEvent> from_json(const json& j);
};

struct MemoryQuery {
    std::string question;
    Date question_date{};

    bool valid() const { return !question.empty() && question_date.ok(); }
};

/// Dynamic-prompting output: 1-5 retrieval guidance bullets.
struct RetrievalGuidance {
    std::vector<std::string> bullets;
    bool degraded = false;  // provider failure fallback

    bool valid() const;
};

enum class StepKind { thought, tool_call, observation, answer };

std::string to_string(StepKind k);

struct TraceStep {
    StepKind kind = StepKind::thought;
    std::string text;   // thought / observation / answer payload
    json tool_record;   // structured record for tool_call steps

    json to_json() const;
};

/// Ordered record of one agent run. Invariants: exactly one answer step and
/// it is last; every tool_call step is immediately followed by an observation.
struct AgentTrace {
    std::vector<TraceStep> steps;
    std::string final_answer;

    void add_thought(std::string text);
    void add_tool_call(json record);
    void add_observation(std::string text);
    void add_answer(std::string text);

    bool well_formed(std::string* why = nullptr) const;
    size_t count_kind(StepKind k) const;

    json to_json() const;
};

// ---- event validation ----

enum class RejectCode { missing_field, range_inverted, alias_count, no_source };

std::string to_string(RejectCode c);

struct Rejection {
    RejectCode code;
    std::string detail;
};

/// Raw extractor output before validation.
struct EventCandidate {
    std::string subject;
    std::string verb;
    std::string object;
    DatetimeRange range;
    std::vector<std::string> aliases;
    std::vector<SourceRef> source;
    std::string surface_text;
};

/// Validates a candidate against the event invariants. Events missing any
/// SVO component or with an inverted range are discarded. Alias lists are
/// repaired rather than rejected: empty or surface-identical aliases are
/// dropped, more than 4 are truncated to the first 4, fewer than 2 leaves
/// the event flagged degraded.
std::variant<TemporalEvent, Rejection> validate_event(const EventCandidate& candidate);

/// Strict invariant predicate over an already-built event; reports the first
/// violated rule (alias_count for a non-degraded event outside 2..4).
std::optional<Rejection> check_event(const TemporalEvent& e);

/// Deterministic content-derived event id.
std::string derive_event_id(const EventCandidate& c);

// ---- jsonl ----

/// One JSON object per line; the canonical on-disk record format.
std::vector<json> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<json>& records);

std::string fold_case(std::string_view s);

/// FNV-1a. Stable across runs and platforms, unlike std::hash.
uint64_t stable_hash(std::string_view s, uint64_t seed = 1469598103934665603ULL);

}  // namespace chronos
