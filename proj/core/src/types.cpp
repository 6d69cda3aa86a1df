#include "chronos/types.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chronos {

std::string to_string(Role r) { return r == Role::user ? "user" : "assistant"; }

std::optional<Role> role_from_string(std::string_view s) {
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    return std::nullopt;
}

std::string to_string(Granularity g) {
    switch (g) {
        case Granularity::instant: return "instant";
        case Granularity::day: return "day";
        case Granularity::week: return "week";
        case Granularity::month: return "month";
        case Granularity::year: return "year";
        case Granularity::window: return "window";
    }
    return "day";
}

std::optional<Granularity> granularity_from_string(std::string_view s) {
    if (s == "instant") return Granularity::instant;
    if (s == "day") return Granularity::day;
    if (s == "week") return Granularity::week;
    if (s == "month") return Granularity::month;
    if (s == "year") return Granularity::year;
    if (s == "window") return Granularity::window;
    return std::nullopt;
}

std::string fold_case(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

namespace {

std::string trim_copy(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

uint64_t stable_hash(std::string_view s, uint64_t seed) {
    uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---- DatetimeRange ----

json DatetimeRange::to_json() const {
    return json{{"start", format_datetime(start)},
                {"end", format_datetime(end)},
                {"granularity", chronos::to_string(granularity)}};
}

std::optional<DatetimeRange> DatetimeRange::from_json(const json& j) {
    if (!j.is_object()) return std::nullopt;
    auto s = parse_datetime(j.value("start", ""));
    auto e = parse_datetime(j.value("end", ""));
    auto g = granularity_from_string(j.value("granularity", ""));
    if (!s || !e || !g) return std::nullopt;
    return DatetimeRange{*s, *e, *g};
}

// ---- ConversationTurn ----

json ConversationTurn::to_json() const {
    return json{{"session_id", session_id},
                {"turn_index", turn_index},
                {"role", chronos::to_string(role)},
                {"text", text},
                {"timestamp", format_datetime(timestamp)}};
}

std::optional<ConversationTurn> ConversationTurn::from_json(const json& j) {
    if (!j.is_object()) return std::nullopt;
    ConversationTurn t;
    if (!j.contains("session_id") || !j["session_id"].is_string()) return std::nullopt;
    t.session_id = j["session_id"].get<std::string>();
    if (!j.contains("turn_index") || !j["turn_index"].is_number_integer()) return std::nullopt;
    t.turn_index = j["turn_index"].get<int>();
    if (t.turn_index < 0) return std::nullopt;
    auto role = role_from_string(j.value("role", ""));
    if (!role) return std::nullopt;
    t.role = *role;
    t.text = j.value("text", "");
    if (trim_copy(t.text).empty()) return std::nullopt;
    auto ts = parse_datetime(j.value("timestamp", ""));
    if (!ts) return std::nullopt;
    t.timestamp = *ts;
    return t;
}

std::optional<std::string> normalize_session(Session& s) {
    std::sort(s.turns.begin(), s.turns.end(),
              [](const ConversationTurn& a, const ConversationTurn& b) {
                  return a.turn_index < b.turn_index;
              });
    std::set<int> seen;
    for (const auto& t : s.turns) {
        if (t.session_id != s.session_id)
            return "turn session_id '" + t.session_id + "' does not match session '" +
                   s.session_id + "'";
        if (!seen.insert(t.turn_index).second)
            return "duplicate turn_index " + std::to_string(t.turn_index);
        if (trim_copy(t.text).empty())
            return "empty text at turn " + std::to_string(t.turn_index);
    }
    return std::nullopt;
}

// ---- TemporalEvent ----

json TemporalEvent::to_json() const {
    json src = json::array();
    for (const auto& r : source)
        src.push_back(json{{"session_id", r.session_id}, {"turn_index", r.turn_index}});
    return json{{"event_id", event_id},
                {"subject", subject},
                {"verb", verb},
                {"object", object},
                {"range", range.to_json()},
                {"aliases", aliases},
                {"source", src},
                {"surface_text", surface_text},
                {"degraded", degraded}};
}

std::optional<TemporalEvent> TemporalEvent::from_json(const json& j) {
    if (!j.is_object()) return std::nullopt;
    TemporalEvent e;
    e.event_id = j.value("event_id", "");
    e.subject = j.value("subject", "");
    e.verb = j.value("verb", "");
    e.object = j.value("object", "");
    if (!j.contains("range")) return std::nullopt;
    auto r = DatetimeRange::from_json(j["range"]);
    if (!r) return std::nullopt;
    e.range = *r;
    if (j.contains("aliases")) {
        if (!j["aliases"].is_array()) return std::nullopt;
        for (const auto& a : j["aliases"]) e.aliases.push_back(a.get<std::string>());
    }
    if (!j.contains("source") || !j["source"].is_array()) return std::nullopt;
    for (const auto& s : j["source"]) {
        SourceRef ref;
        ref.session_id = s.value("session_id", "");
        ref.turn_index = s.value("turn_index", -1);
        if (ref.session_id.empty() || ref.turn_index < 0) return std::nullopt;
        e.source.push_back(ref);
    }
    e.surface_text = j.value("surface_text", "");
    e.degraded = j.value("degraded", false);
    return e;
}

// ---- RetrievalGuidance ----

bool RetrievalGuidance::valid() const {
    if (bullets.empty() || bullets.size() > 5) return false;
    return std::all_of(bullets.begin(), bullets.end(),
                       [](const std::string& b) { return !trim_copy(b).empty(); });
}

// ---- AgentTrace ----

std::string to_string(StepKind k) {
    switch (k) {
        case StepKind::thought: return "thought";
        case StepKind::tool_call: return "tool_call";
        case StepKind::observation: return "observation";
        case StepKind::answer: return "answer";
    }
    return "thought";
}

json TraceStep::to_json() const {
    json j{{"kind", chronos::to_string(kind)}};
    if (kind == StepKind::tool_call)
        j["payload"] = tool_record;
    else
        j["payload"] = text;
    return j;
}

void AgentTrace::add_thought(std::string text) {
    steps.push_back({StepKind::thought, std::move(text), json{}});
}

void AgentTrace::add_tool_call(json record) {
    steps.push_back({StepKind::tool_call, "", std::move(record)});
}

void AgentTrace::add_observation(std::string text) {
    steps.push_back({StepKind::observation, std::move(text), json{}});
}

void AgentTrace::add_answer(std::string text) {
    final_answer = text;
    steps.push_back({StepKind::answer, std::move(text), json{}});
}

bool AgentTrace::well_formed(std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    size_t answers = count_kind(StepKind::answer);
    if (answers != 1) return fail("expected exactly one answer step, found " + std::to_string(answers));
    if (steps.empty() || steps.back().kind != StepKind::answer)
        return fail("answer step is not last");
    for (size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].kind == StepKind::tool_call) {
            if (i + 1 >= steps.size() || steps[i + 1].kind != StepKind::observation)
                return fail("tool_call at step " + std::to_string(i) +
                            " not followed by an observation");
        }
    }
    return true;
}

size_t AgentTrace::count_kind(StepKind k) const {
    return static_cast<size_t>(
        std::count_if(steps.begin(), steps.end(), [&](const TraceStep& s) { return s.kind == k; }));
}

json AgentTrace::to_json() const {
    json arr = json::array();
    for (const auto& s : steps) arr.push_back(s.to_json());
    return json{{"steps", arr}, {"final_answer", final_answer}};
}

// ---- validation ----

std::string to_string(RejectCode c) {
    switch (c) {
        case RejectCode::missing_field: return "MissingField";
        case RejectCode::range_inverted: return "RangeInverted";
        case RejectCode::alias_count: return "AliasCount";
        case RejectCode::no_source: return "NoSource";
    }
    return "MissingField";
}

std::string derive_event_id(const EventCandidate& c) {
    uint64_t h = stable_hash(c.subject);
    h = stable_hash("\x1f", h);
    h = stable_hash(c.verb, h);
    h = stable_hash("\x1f", h);
    h = stable_hash(c.object, h);
    h = stable_hash("\x1f", h);
    h = stable_hash(format_datetime(c.range.start), h);
    h = stable_hash(format_datetime(c.range.end), h);
    for (const auto& s : c.source) {
        h = stable_hash(s.session_id, h);
        h = stable_hash(std::to_string(s.turn_index), h);
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "ev-%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::variant<TemporalEvent, Rejection> validate_event(const EventCandidate& candidate) {
    if (trim_copy(candidate.subject).empty())
        return Rejection{RejectCode::missing_field, "subject"};
    if (trim_copy(candidate.verb).empty()) return Rejection{RejectCode::missing_field, "verb"};
    if (trim_copy(candidate.object).empty()) return Rejection{RejectCode::missing_field, "object"};
    if (candidate.range.start > candidate.range.end)
        return Rejection{RejectCode::range_inverted,
                         format_datetime(candidate.range.start) + " > " +
                             format_datetime(candidate.range.end)};
    if (candidate.source.empty()) return Rejection{RejectCode::no_source, "no source turns"};

    TemporalEvent e;
    e.subject = trim_copy(candidate.subject);
    e.verb = trim_copy(candidate.verb);
    e.object = trim_copy(candidate.object);
    e.range = candidate.range;
    if (e.range.granularity == Granularity::instant && e.range.start != e.range.end)
        e.range.granularity = Granularity::window;
    e.source = candidate.source;
    std::sort(e.source.begin(), e.source.end());
    e.source.erase(std::unique(e.source.begin(), e.source.end()), e.source.end());
    e.surface_text = candidate.surface_text;

    for (const auto& a : candidate.aliases) {
        std::string alias = trim_copy(a);
        if (alias.empty() || alias == candidate.surface_text) continue;
        if (std::find(e.aliases.begin(), e.aliases.end(), alias) != e.aliases.end()) continue;
        e.aliases.push_back(alias);
        if (e.aliases.size() == 4) break;
    }
    e.degraded = e.aliases.size() < 2;
    e.event_id = derive_event_id(candidate);
    return e;
}

std::optional<Rejection> check_event(const TemporalEvent& e) {
    if (e.subject.empty()) return Rejection{RejectCode::missing_field, "subject"};
    if (e.verb.empty()) return Rejection{RejectCode::missing_field, "verb"};
    if (e.object.empty()) return Rejection{RejectCode::missing_field, "object"};
    if (e.range.start > e.range.end)
        return Rejection{RejectCode::range_inverted, "start > end"};
    if (e.source.empty()) return Rejection{RejectCode::no_source, "no source turns"};
    if (e.aliases.size() > 4)
        return Rejection{RejectCode::alias_count, std::to_string(e.aliases.size())};
    if (!e.degraded && e.aliases.size() < 2)
        return Rejection{RejectCode::alias_count, std::to_string(e.aliases.size())};
    for (const auto& a : e.aliases) {
        if (a.empty() || a == e.surface_text)
            return Rejection{RejectCode::alias_count, "empty or surface-identical alias"};
    }
    return std::nullopt;
}

// ---- jsonl ----

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<json> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim_copy(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": invalid JSON");
        out.push_back(std::move(j));
    }
    return out;
}

void write_jsonl(const std::string& path, const std::vector<json>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& r : records) out << r.dump() << "\n";
}

}  // namespace chronos
