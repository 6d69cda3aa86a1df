#include "mini_haystack.hpp"

#include <chronos/datetime.hpp>
#include <chronos/mock_providers.hpp>
#include <chronos/temporal_resolver.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <memory>
#include <utility>

namespace mini {

using namespace chronos;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Haystack construction.

Session make_session(const std::string& id, int y, unsigned m, unsigned d,
                     std::vector<std::pair<Role, std::string>> turns) {
    Session s;
    s.session_id = id;
    s.date = Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    const UtcTime t0 = day_start(s.date) + std::chrono::hours{9};
    int i = 0;
    for (auto& [role, text] : turns) {
        ConversationTurn t;
        t.session_id = id;
        t.turn_index = i;
        t.role = role;
        t.text = std::move(text);
        t.timestamp = t0 + std::chrono::seconds{i};
        s.turns.push_back(std::move(t));
        ++i;
    }
    return s;
}

BenchmarkQuestion make_question(std::string id, Category cat, std::string question,
                                std::string answer, const std::string& question_date,
                                std::vector<Session> sessions) {
    BenchmarkQuestion q;
    q.question_id = std::move(id);
    q.category = cat;
    q.question = std::move(question);
    q.answer = std::move(answer);
    q.question_date = parse_datetime(question_date).value();
    for (auto& s : sessions) {
        q.session_dates[s.session_id] = format_date(s.date);
        q.haystack.push_back(std::move(s));
    }
    return q;
}

constexpr Role U = Role::user;
constexpr Role A = Role::assistant;

// ---------------------------------------------------------------------------
// Wire-format events for the scripted extractor.

json wire_day(const char* day) {
    Date d = parse_date(day).value();
    return {{"explicit_range",
             {{"start", format_datetime(day_start(d))},
              {"end", format_datetime(day_end(d))},
              {"granularity", "day"}}}};
}

json wire_range(const char* start, const char* end, const char* granularity) {
    return {{"explicit_range",
             {{"start", start}, {"end", end}, {"granularity", granularity}}}};
}

json wire_event(const char* verb, const char* object, std::vector<std::string> aliases,
                std::vector<int> sources, json time) {
    return {{"subject", "user"}, {"verb", verb},           {"object", object},
            {"aliases", aliases}, {"source_indices", sources}, {"time", std::move(time)}};
}

// ---------------------------------------------------------------------------
// Scripted agent replies.

ChatReply tool_reply(std::string thought, std::string tool, json args) {
    ChatReply r;
    r.thought = std::move(thought);
    r.tool_calls.push_back({std::move(tool), std::move(args)});
    return r;
}

ChatReply answer_reply(std::string thought, std::string text) {
    ChatReply r;
    r.thought = std::move(thought);
    r.text = std::move(text);
    return r;
}

// Tool-section markers the scripts condition on. Which lines the system prompt
// carries is exactly the enabled toolset, so the script can pick the ladder
// rung matching the active ablation.
const std::string kHasSearchEvents = "- search_events(";
const std::string kHasSearchTurns = "- search_turns(";
const std::string kHasGrepTurns = "- grep_turns(";
const std::string kHasGrepEvents = "- grep_events(";
const std::string kHasDateFilter = "date_from?";

ScriptEntry entry(std::string match, std::vector<std::string> contains,
                  std::vector<std::string> lacks, std::vector<ChatReply> replies) {
    ScriptEntry e;
    e.match = std::move(match);
    e.require_system_contains = std::move(contains);
    e.require_system_lacks = std::move(lacks);
    e.replies = std::move(replies);
    return e;
}

std::vector<ScriptEntry> agent_script() {
    std::vector<ScriptEntry> es;

    // --- ku_01: current employer -------------------------------------------
    {
        const std::string match = "Which company do I work for";
        const std::string answer =
            "You work at Globex Industries now; you started there in March 2024 after leaving "
            "Acme Corp.";
        es.push_back(entry(
            match, {kHasSearchEvents}, {},
            {tool_reply("Employment changes live on the event calendar; search it for job starts.",
                        "search_events",
                        {{"query", "started job company employer"}, {"k", 8}}),
             answer_reply("Two employers appear: Acme Corp starting the week of 2024-01-01 and "
                          "Globex Industries starting 2024-03-18. The later start date wins.",
                          answer)}));
        es.push_back(entry(
            match, {kHasSearchTurns}, {kHasSearchEvents},
            {tool_reply("No event calendar here; search the raw turns for job mentions.",
                        "search_turns", {{"query", "job company work started"}, {"k", 8}}),
             answer_reply("The 2024-03-20 session says the user left Acme Corp for Globex "
                          "Industries, which postdates the 2024-01-05 Acme start.",
                          answer)}));
        es.push_back(entry(
            match, {kHasGrepTurns}, {kHasSearchTurns},
            {tool_reply("Only grep is available; check both employer names.", "grep_turns",
                        {{"pattern", "Acme"}}),
             tool_reply("Now the other employer.", "grep_turns", {{"pattern", "Globex"}}),
             answer_reply("The Globex Industries mention is dated 2024-03-20, after the Acme "
                          "start in January.",
                          answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- ku_02: current phone ----------------------------------------------
    {
        const std::string match = "What phone do I use";
        const std::string answer =
            "You use a Pixel 9 these days; you bought it in June 2024 to replace the iPhone 12.";
        es.push_back(entry(
            match, {kHasSearchTurns}, {},
            {tool_reply("Search the turns for phone purchases and complaints.", "search_turns",
                        {{"query", "phone upgrade bought"}, {"k", 6}}),
             answer_reply("The iPhone 12 complaint is from 2023-11; the Pixel 9 purchase is from "
                          "2024-06. The later record is the current phone.",
                          answer)}));
        es.push_back(entry(
            match, {kHasGrepTurns}, {kHasSearchTurns},
            {tool_reply("Grep for both phone models.", "grep_turns", {{"pattern", "iPhone"}}),
             tool_reply("And the newer one.", "grep_turns", {{"pattern", "Pixel"}}),
             answer_reply("The Pixel 9 purchase in June 2024 postdates the iPhone 12 mentions.",
                          answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- ms_01: workouts in May 2024 ---------------------------------------
    {
        const std::string match = "How many workouts";
        const std::string answer =
            "You completed 3 workouts in May 2024: a 5k run, a spin class, and a 10k trail race.";
        es.push_back(entry(
            match, {kHasSearchEvents, kHasDateFilter}, {},
            {tool_reply("Count workout events inside May 2024 with a date-bounded event search.",
                        "search_events",
                        {{"query", "workout exercise run class"},
                         {"k", 20},
                         {"date_from", "2024-05-01"},
                         {"date_to", "2024-05-31"}}),
             answer_reply("Three events fall inside the May window.", answer)}));
        es.push_back(entry(
            match, {kHasSearchEvents}, {kHasDateFilter},
            {tool_reply("No date bounds available; pull workout events and filter by eye.",
                        "search_events", {{"query", "workout exercise run class"}, {"k", 20}}),
             answer_reply("The bike ride is dated 2024-04-21, outside May 2024, so it does not "
                          "count; the other three do.",
                          answer)}));
        es.push_back(entry(
            match, {kHasSearchTurns, kHasDateFilter}, {kHasSearchEvents},
            {tool_reply("No event calendar; date-bound a turn search to May 2024.", "search_turns",
                        {{"query", "workout ran spin class race"},
                         {"k", 10},
                         {"date_from", "2024-05-01"},
                         {"date_to", "2024-05-31"}}),
             answer_reply("The May sessions report a 5k run, a spin class, and a 10k trail race.",
                          answer)}));
        es.push_back(entry(
            match, {kHasGrepEvents, kHasDateFilter}, {kHasSearchEvents, kHasSearchTurns},
            {tool_reply("Grep completed events inside May.", "grep_events",
                        {{"pattern", "completed"},
                         {"date_from", "2024-05-01"},
                         {"date_to", "2024-05-31"}}),
             answer_reply("Three completed events fall in May 2024.", answer)}));
        es.push_back(entry(match, {}, {},
                           {answer_reply("The log shows a 5k run on 2024-05-04, a spin class on "
                                         "2024-05-17, and a 10k trail race on 2024-05-26.",
                                         answer)}));
    }

    // --- ms_02: books finished in 2024 -------------------------------------
    {
        const std::string match = "How many books";
        const std::string answer =
            "You finished 4 books in 2024: Project Hail Mary, Dune Messiah, The Pragmatic "
            "Programmer, and Piranesi.";
        es.push_back(entry(
            match, {kHasSearchEvents, kHasDateFilter}, {},
            {tool_reply("Count finished-book events across 2024 with year bounds.",
                        "search_events",
                        {{"query", "finished book read"},
                         {"k", 20},
                         {"date_from", "2024-01-01"},
                         {"date_to", "2024-12-31"}}),
             answer_reply("Four finished-book events land inside 2024.", answer)}));
        es.push_back(entry(
            match, {kHasSearchEvents}, {kHasDateFilter},
            {tool_reply("Pull finished-book events and filter by year manually.", "search_events",
                        {{"query", "finished book read"}, {"k", 20}}),
             answer_reply("The Silmarillion is dated 2023-12-28 and drops out; the other four "
                          "are 2024.",
                          answer)}));
        es.push_back(entry(
            match, {kHasSearchTurns, kHasDateFilter}, {kHasSearchEvents},
            {tool_reply("Date-bound a turn search to 2024.", "search_turns",
                        {{"query", "finished book reading"},
                         {"k", 10},
                         {"date_from", "2024-01-01"},
                         {"date_to", "2024-12-31"}}),
             answer_reply("The 2024 sessions mention Project Hail Mary, Dune Messiah, The "
                          "Pragmatic Programmer, and Piranesi.",
                          answer)}));
        es.push_back(entry(
            match, {kHasGrepEvents, kHasDateFilter}, {kHasSearchEvents, kHasSearchTurns},
            {tool_reply("Grep finished events inside 2024.", "grep_events",
                        {{"pattern", "finished"},
                         {"date_from", "2024-01-01"},
                         {"date_to", "2024-12-31"}}),
             answer_reply("Four finished events fall in 2024.", answer)}));
        es.push_back(entry(match, {}, {},
                           {answer_reply("Project Hail Mary (January), Dune Messiah and The "
                                         "Pragmatic Programmer (March), Piranesi (August); the "
                                         "Silmarillion was December 2023.",
                                         answer)}));
    }

    // --- ssa_01: recommended restaurant ------------------------------------
    {
        const std::string match = "Which restaurant did you recommend";
        const std::string answer =
            "I recommended Trattoria Roma on Harbor Lane for your anniversary dinner, with the "
            "terrace table.";
        es.push_back(entry(match, {kHasGrepTurns}, {},
                           {tool_reply("The word anniversary pins the session; grep for it.",
                                       "grep_turns", {{"pattern", "anniversary"}}),
                            answer_reply("", answer)}));
        es.push_back(entry(
            match, {kHasSearchTurns}, {kHasGrepTurns},
            {tool_reply("Search the turns for the recommendation.", "search_turns",
                        {{"query", "anniversary dinner restaurant recommendation"}, {"k", 5}}),
             answer_reply("", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- ssa_02: suggested novel -------------------------------------------
    {
        const std::string match = "Which novel did you suggest";
        const std::string answer =
            "I suggested The Midnight Library by Matt Haig for your long flight.";
        es.push_back(entry(
            match, {kHasSearchTurns}, {},
            {tool_reply("Search the turns for the reading suggestion.", "search_turns",
                        {{"query", "novel suggestion flight reading"}, {"k", 5}}),
             answer_reply("", answer)}));
        es.push_back(entry(match, {kHasGrepTurns}, {kHasSearchTurns},
                           {tool_reply("Grep for the word novel.", "grep_turns",
                                       {{"pattern", "novel"}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- ssp_01: coffee order ----------------------------------------------
    {
        const std::string match = "How do I take my coffee";
        const std::string answer =
            "You take an oat-milk latte with no sugar; dairy does not agree with you.";
        es.push_back(entry(match, {kHasGrepTurns}, {},
                           {tool_reply("Grep for coffee.", "grep_turns",
                                       {{"pattern", "coffee"}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {kHasSearchTurns}, {kHasGrepTurns},
                           {tool_reply("Search for the coffee preference.", "search_turns",
                                       {{"query", "coffee order preference"}, {"k", 5}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- ssp_02: steak preference ------------------------------------------
    {
        const std::string match = "How do I like my steak";
        const std::string answer = "You like your steak medium-rare with just salt.";
        es.push_back(entry(match, {kHasSearchTurns}, {},
                           {tool_reply("Search for the steak preference.", "search_turns",
                                       {{"query", "steak preference cooked"}, {"k", 5}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {kHasGrepTurns}, {kHasSearchTurns},
                           {tool_reply("Grep for steak.", "grep_turns", {{"pattern", "steak"}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- ssu_01: cat name (with a lexical miss first) ----------------------
    {
        const std::string match = "What is my cat's name";
        const std::string answer = "Your cat's name is Luna.";
        es.push_back(entry(
            match, {kHasGrepTurns}, {},
            {tool_reply("Try the word kitten first.", "grep_turns", {{"pattern", "kitten"}}),
             tool_reply("No kitten mentions; the user may have said cat.", "grep_turns",
                        {{"pattern", "cat"}}),
             answer_reply("", answer)}));
        es.push_back(entry(match, {kHasSearchTurns}, {kHasGrepTurns},
                           {tool_reply("Search for the adoption.", "search_turns",
                                       {{"query", "adopted cat name"}, {"k", 5}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- ssu_02: street ----------------------------------------------------
    {
        const std::string match = "Which street do I live on";
        const std::string answer = "You live on Maple Street; the new place has a tiny garden.";
        es.push_back(entry(match, {kHasGrepTurns}, {},
                           {tool_reply("Grep for street.", "grep_turns",
                                       {{"pattern", "street"}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {kHasSearchTurns}, {kHasGrepTurns},
                           {tool_reply("Search for the move.", "search_turns",
                                       {{"query", "moved new place street"}, {"k", 5}}),
                            answer_reply("", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- tr_01: race the week after the vacation ---------------------------
    {
        const std::string match = "What race did I run";
        const std::string answer =
            "A half marathon: the Riverside half marathon on March 12, 2024, the week after "
            "your beach vacation.";
        es.push_back(entry(
            match, {kHasSearchEvents, kHasDateFilter}, {},
            {tool_reply("First find when the beach vacation happened.", "search_events",
                        {{"query", "beach vacation"}, {"k", 5}}),
             tool_reply("The vacation ran 2024-03-04 through 2024-03-10, so the week after "
                        "spans 2024-03-11 through 2024-03-17. Search races in that window.",
                        "search_events",
                        {{"query", "race run marathon"},
                         {"k", 5},
                         {"date_from", "2024-03-11"},
                         {"date_to", "2024-03-17"}}),
             answer_reply("", answer)}));
        es.push_back(entry(
            match, {kHasSearchEvents}, {kHasDateFilter},
            {tool_reply("Find the vacation dates first.", "search_events",
                        {{"query", "beach vacation"}, {"k", 5}}),
             tool_reply("The vacation ended 2024-03-10; the following week is 2024-03-11 "
                        "through 2024-03-17. Pull races and match by date.",
                        "search_events", {{"query", "race run marathon"}, {"k", 5}}),
             answer_reply("The half marathon on 2024-03-12 falls in that week.", answer)}));
        es.push_back(entry(
            match, {kHasSearchTurns, kHasDateFilter}, {kHasSearchEvents},
            {tool_reply("Find the vacation in the turns.", "search_turns",
                        {{"query", "beach vacation"}, {"k", 5}}),
             tool_reply("The trip ran March 4 through March 10, so the week after is 2024-03-11 "
                        "through 2024-03-17.",
                        "search_turns",
                        {{"query", "race marathon"},
                         {"k", 5},
                         {"date_from", "2024-03-11"},
                         {"date_to", "2024-03-17"}}),
             answer_reply("", answer)}));
        es.push_back(entry(
            match, {kHasGrepEvents, kHasDateFilter}, {kHasSearchEvents, kHasSearchTurns},
            {tool_reply("Grep the vacation event.", "grep_events", {{"pattern", "vacation"}}),
             tool_reply("The vacation ended 2024-03-10; grep races the following week.",
                        "grep_events",
                        {{"pattern", "marathon"},
                         {"date_from", "2024-03-11"},
                         {"date_to", "2024-03-17"}}),
             answer_reply("", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    // --- tr_02: month the medication started -------------------------------
    {
        const std::string match = "In which month did I start my allergy";
        const std::string answer = "You started the allergy medication in January 2024.";
        es.push_back(entry(
            match, {kHasSearchEvents}, {},
            {tool_reply("The event calendar resolves relative dates; search it.", "search_events",
                        {{"query", "started allergy medication"}, {"k", 5}}),
             answer_reply("The event range spans 2024-01-01 through 2024-01-31, so it began in "
                          "January 2024.",
                          answer)}));
        es.push_back(entry(
            match, {kHasSearchTurns}, {kHasSearchEvents},
            {tool_reply("Search the turns for the medication mention.", "search_turns",
                        {{"query", "allergy medication started"}, {"k", 5}}),
             answer_reply("The user said last month in a session dated 2024-02-15, which points "
                          "to January 2024.",
                          answer)}));
        es.push_back(entry(
            match, {kHasGrepTurns}, {kHasSearchTurns},
            {tool_reply("Grep for the medication.", "grep_turns", {{"pattern", "medication"}}),
             answer_reply("Last month relative to 2024-02-15 is January 2024.", answer)}));
        es.push_back(entry(match, {}, {}, {answer_reply("", answer)}));
    }

    return es;
}

std::vector<ScriptedExtractionProvider::Entry> extractor_script() {
    std::vector<ScriptedExtractionProvider::Entry> es;
    auto add = [&es](const char* match, json events) {
        es.push_back({match, json{{"events", std::move(events)}}});
    };

    // ku_01
    add("offer letter",
        json::array({wire_event(
            "started", "a job at Acme Corp",
            {"began a job at Acme Corp", "joined Acme Corp"}, {0},
            wire_range("2024-01-01T00:00:00Z", "2024-01-07T23:59:59Z", "week"))}));
    add("Globex Industries",
        json::array(
            {wire_event("started", "a job at Globex Industries",
                        {"began at Globex Industries", "joined Globex Industries"}, {0},
                        wire_day("2024-03-18")),
             wire_event("quit", "the job at Acme Corp",
                        {"left Acme Corp", "resigned from Acme Corp"}, {0},
                        wire_day("2024-03-18"))}));

    // ms_01
    add("5k around the park",
        json::array({wire_event("completed", "a 5k run", {"went for a run", "did a 5k"}, {0},
                                wire_day("2024-05-04"))}));
    add("spin class",
        json::array({wire_event("completed", "a spin class",
                                {"took a spin class", "did a cycling workout"}, {0},
                                wire_day("2024-05-17"))}));
    add("10k trail race",
        json::array({wire_event("completed", "a 10k trail race",
                                {"finished a trail race", "ran a 10k"}, {0},
                                wire_day("2024-05-26"))}));
    add("long bike ride",
        json::array({wire_event("completed", "a long bike ride",
                                {"went cycling", "rode along the river trail"}, {0},
                                wire_day("2024-04-21"))}));

    // ms_02
    add("The Silmarillion",
        json::array({wire_event("finished", "The Silmarillion",
                                {"read The Silmarillion", "got through The Silmarillion"}, {0},
                                wire_day("2023-12-28"))}));
    add("finished Project Hail Mary",
        json::array({wire_event("finished", "Project Hail Mary",
                                {"read Project Hail Mary", "completed Project Hail Mary"}, {0},
                                wire_day("2024-01-20"))}));
    add("Dune Messiah",
        json::array(
            {wire_event("finished", "Dune Messiah",
                        {"read Dune Messiah", "completed Dune Messiah"}, {0},
                        wire_day("2024-03-03")),
             wire_event("finished", "The Pragmatic Programmer",
                        {"read The Pragmatic Programmer", "completed The Pragmatic Programmer"},
                        {2}, wire_day("2024-03-03"))}));
    add("Piranesi on the flight",
        json::array({wire_event("finished", "Piranesi",
                                {"read Piranesi", "completed Piranesi"}, {0},
                                wire_day("2024-08-11"))}));

    // ssu_01: the resolver turns "last Tuesday" (anchored at 2024-06-20, a
    // Thursday) into 2024-06-18.
    add("gray tabby named Luna",
        json::array({wire_event("adopted", "a cat",
                                {"took in a gray tabby", "got a kitten"}, {0},
                                json{{"expression", "last Tuesday"}})}));

    // ssu_02
    add("movers finally finished",
        json::array({wire_event("moved", "to a new place on Maple Street",
                                {"relocated to Maple Street", "changed address"}, {0},
                                wire_day("2024-07-09"))}));

    // tr_01
    add("beach vacation runs",
        json::array({wire_event(
            "took", "a beach vacation", {"a trip to the beach", "a seaside holiday"}, {0},
            wire_range("2024-03-04T00:00:00Z", "2024-03-10T23:59:59Z", "window"))}));
    add("Riverside half marathon",
        json::array({wire_event("ran", "the Riverside half marathon",
                                {"completed a half marathon", "raced a 21k"}, {0},
                                wire_day("2024-03-12"))}));

    // tr_02: resolved in-pipeline from the expression, anchored at the source
    // turn's 2024-02-15 timestamp; must come out as January 2024.
    add("allergy medication last month",
        json::array({wire_event("started", "allergy medication",
                                {"began allergy medication", "took up an antihistamine"}, {0},
                                json{{"expression", "last month"}})}));

    return es;
}

/// Judge that re-parses the filled judge prompt and applies normalized
/// containment, so the remote-judge code path (placeholder filling, yes/no
/// parsing) runs end to end without a live model.
ChatReply scripted_judge(const std::vector<ChatMessage>& messages) {
    const std::string& prompt = messages.back().content;
    auto line_after = [&prompt](const std::string& label) -> std::string {
        auto pos = prompt.find(label);
        if (pos == std::string::npos) return "";
        pos += label.size();
        auto end = prompt.find('\n', pos);
        return prompt.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    };
    auto normalize = [](const std::string& s) {
        std::string out;
        bool space = true;
        for (unsigned char ch : s) {
            if (std::isalnum(ch)) {
                out.push_back(static_cast<char>(std::tolower(ch)));
                space = false;
            } else if (!space && !out.empty()) {
                out.push_back(' ');
                space = true;
            } else {
                space = true;
            }
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        return out;
    };
    const std::string reference = normalize(line_after("Reference answer: "));
    const std::string hypothesis = normalize(line_after("Assistant answer: "));
    ChatReply r;
    r.text = (!reference.empty() && hypothesis.find(reference) != std::string::npos) ? "yes"
                                                                                     : "no";
    return r;
}

}  // namespace

std::vector<BenchmarkQuestion> make_benchmark() {
    std::vector<BenchmarkQuestion> qs;

    qs.push_back(make_question(
        "mini_ku_01", Category::KU, "Which company do I work for now?", "Globex Industries",
        "2024-04-02T11:00:00Z",
        {make_session("ku1_s1", 2024, 1, 5,
                      {{U, "Big news: I signed my offer letter and started a new job at Acme "
                           "Corp this week."},
                       {A, "Congratulations on the new role at Acme Corp."}}),
         make_session("ku1_s2", 2024, 3, 20,
                      {{U, "Update on work: I left Acme Corp and started at Globex Industries "
                           "on Monday."},
                       {A, "That's a big move. Hope Globex Industries treats you well."}})}));

    qs.push_back(make_question(
        "mini_ku_02", Category::KU, "What phone do I use these days?", "Pixel 9",
        "2024-07-15T08:30:00Z",
        {make_session("ku2_s1", 2023, 11, 12,
                      {{U, "My iPhone 12 screen cracked again today; this phone is on its last "
                           "legs."},
                       {A, "Sorry about the iPhone 12. A case might help until you replace "
                           "it."}}),
         make_session("ku2_s2", 2024, 6, 8,
                      {{U, "I finally bought a Pixel 9 this morning and moved everything over "
                           "from the old phone."},
                       {A, "Nice choice. Enjoy setting up the Pixel 9."}})}));

    qs.push_back(make_question(
        "mini_ms_01", Category::MS, "How many workouts did I complete in May 2024?", "3",
        "2024-06-03T10:00:00Z",
        {make_session("ms1_s4", 2024, 4, 21,
                      {{U, "I went for a long bike ride along the river trail this afternoon."},
                       {A, "Sounds like a lovely April outing."}}),
         make_session("ms1_s1", 2024, 5, 4,
                      {{U, "Workout log: I ran a 5k around the park this morning and felt "
                           "great."},
                       {A, "Great pace for a Saturday."}}),
         make_session("ms1_s2", 2024, 5, 17,
                      {{U, "I took a spin class at the new studio tonight; my legs are jelly."},
                       {A, "Spin will do that. Stretch before bed."}}),
         make_session("ms1_s3", 2024, 5, 29,
                      {{U, "Race report: I finished the 10k trail race on Sunday, mud "
                           "everywhere."},
                       {A, "Congrats on the trail race finish."}})}));

    qs.push_back(make_question(
        "mini_ms_02", Category::MS, "How many books did I finish in 2024?", "4",
        "2024-09-20T18:00:00Z",
        {make_session("ms2_s1", 2023, 12, 28,
                      {{U, "Over the holidays I finished The Silmarillion at last."},
                       {A, "A dense read; well done."}}),
         make_session("ms2_s2", 2024, 1, 20,
                      {{U, "I finished Project Hail Mary this week; the ending wrecked me."},
                       {A, "Project Hail Mary sticks with you."}}),
         make_session("ms2_s3", 2024, 3, 3,
                      {{U, "Book update: I finished Dune Messiah this morning."},
                       {A, "The middle arc gets better from here."},
                       {U, "Also finished The Pragmatic Programmer for the work book club."},
                       {A, "A classic worth rereading."}}),
         make_session("ms2_s4", 2024, 8, 11,
                      {{U, "Vacation reading: I finished Piranesi on the flight home."},
                       {A, "Piranesi is a gem."}})}));

    qs.push_back(make_question(
        "mini_ssa_01", Category::SSA,
        "Which restaurant did you recommend for our anniversary dinner?", "Trattoria Roma",
        "2024-04-02T09:15:00Z",
        {make_session("ssa1_s1", 2024, 2, 10,
                      {{U, "Our anniversary is coming up and I want somewhere special for "
                           "dinner. Any ideas?"},
                       {A, "For an anniversary dinner, book Trattoria Roma on Harbor Lane and "
                           "ask for the terrace table."},
                       {U, "That sounds perfect, thanks."},
                       {A, "Enjoy the evening."}})}));

    qs.push_back(make_question(
        "mini_ssa_02", Category::SSA, "Which novel did you suggest for my long flight?",
        "The Midnight Library", "2024-05-01T12:00:00Z",
        {make_session("ssa2_s1", 2024, 3, 15,
                      {{U, "I have a long flight on Friday and need something uplifting to "
                           "read. Any suggestions?"},
                       {A, "Try The Midnight Library by Matt Haig; it is exactly the kind of "
                           "uplifting novel you are after."},
                       {U, "I will grab a copy, thanks."},
                       {A, "Safe travels."}})}));

    qs.push_back(make_question(
        "mini_ssp_01", Category::SSP, "How do I take my coffee?", "oat-milk latte",
        "2024-03-12T07:45:00Z",
        {make_session("ssp1_s1", 2024, 1, 25,
                      {{U, "Coffee run before our meeting: I always get an oat-milk latte, no "
                           "sugar, since dairy does not agree with me."},
                       {A, "Noted, one oat-milk latte with no sugar."}})}));

    qs.push_back(make_question(
        "mini_ssp_02", Category::SSP, "How do I like my steak cooked?", "medium-rare",
        "2024-04-20T19:00:00Z",
        {make_session("ssp2_s1", 2024, 2, 2,
                      {{U, "Dinner plans: grilling tonight. I like my steak medium-rare with "
                           "just salt, nothing fancy."},
                       {A, "Medium-rare with salt it is."}})}));

    qs.push_back(make_question(
        "mini_ssu_01", Category::SSU, "What is my cat's name?", "Luna", "2024-08-05T14:00:00Z",
        {make_session("ssu1_s1", 2024, 6, 20,
                      {{U, "We adopted a cat last Tuesday, a gray tabby named Luna, and she "
                           "has taken over the sofa."},
                       {A, "Luna sounds like she owns the place already."}})}));

    qs.push_back(make_question(
        "mini_ssu_02", Category::SSU, "Which street do I live on?", "Maple Street",
        "2024-09-14T16:30:00Z",
        {make_session("ssu2_s1", 2024, 7, 9,
                      {{U, "The movers finally finished; our new place on Maple Street has a "
                           "tiny garden out back."},
                       {A, "A garden on Maple Street sounds lovely."}})}));

    qs.push_back(make_question(
        "mini_tr_01", Category::TR, "What race did I run the week after my beach vacation?",
        "half marathon", "2024-04-01T09:00:00Z",
        {make_session("tr1_s1", 2024, 3, 2,
                      {{U, "Trip booked: our beach vacation runs March 4 through March 10, "
                           "back Sunday night."},
                       {A, "Enjoy the beach; pack sunscreen."}}),
         make_session("tr1_s2", 2024, 3, 13,
                      {{U, "Back from the beach and straight into racing: I ran the Riverside "
                           "half marathon on Tuesday."},
                       {A, "A half marathon two days after a vacation is impressive."}})}));

    qs.push_back(make_question(
        "mini_tr_02", Category::TR, "In which month did I start my allergy medication?",
        "January 2024", "2024-04-10T10:30:00Z",
        {make_session("tr2_s1", 2024, 2, 15,
                      {{U, "Quick health note: I started my allergy medication last month and "
                           "the sneezing is finally under control."},
                       {A, "Glad the medication is working."}})}));

    return qs;
}

ProviderSet make_providers() {
    ProviderSet set;
    set.extractor = std::make_shared<ScriptedExtractionProvider>(extractor_script());
    set.guidance = std::make_shared<CallbackChatProvider>(
        [](const std::vector<ChatMessage>& messages, const std::vector<json>&) {
            return heuristic_guidance_reply(messages);
        });
    set.agent = std::make_shared<ScriptedChatProvider>(agent_script());
    set.judge = std::make_shared<CallbackChatProvider>(
        [](const std::vector<ChatMessage>& messages, const std::vector<json>&) {
            return scripted_judge(messages);
        });
    set.embedder = std::make_shared<HashEmbedder>(64, 4242);
    set.reranker = std::make_shared<TokenOverlapReranker>();
    return set;
}

std::vector<QuestionResult> run_mini(const std::string& ablation_flags, int workers) {
    auto questions = make_benchmark();
    auto providers = make_providers();
    auto ablation = AblationConfig::parse(ablation_flags);
    return run_eval(questions, ablation, providers, workers);
}

namespace {

const QuestionResult* find_result(const std::vector<QuestionResult>& results,
                                  const std::string& id) {
    for (const auto& r : results)
        if (r.question_id == id) return &r;
    return nullptr;
}

bool some_observation_contains_all(const QuestionResult& r,
                                   const std::vector<std::string>& markers) {
    for (const auto& step : r.trace.steps) {
        if (step.kind != StepKind::observation) continue;
        bool all = true;
        for (const auto& m : markers)
            if (step.text.find(m) == std::string::npos) all = false;
        if (all) return true;
    }
    return false;
}

bool executed_event_query_with_range(const QuestionResult& r, const std::string& start,
                                     const std::string& end) {
    for (const auto& e : r.executed) {
        if (e.tool != "search_events" && e.tool != "grep_events") continue;
        if (!e.range_applied) continue;
        if (format_datetime(e.range_applied->start) == start &&
            format_datetime(e.range_applied->end) == end)
            return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> check_correctness(const std::vector<QuestionResult>& results) {
    std::vector<std::string> violations;
    if (results.size() != 12) {
        violations.push_back("expected 12 results, got " + std::to_string(results.size()));
        return violations;
    }
    std::map<std::string, int> per_category;
    for (const auto& r : results) {
        if (r.run_error)
            violations.push_back(r.question_id + ": run error: " + r.error_text);
        if (!r.judged) violations.push_back(r.question_id + ": not judged");
        if (r.judged && !r.correct)
            violations.push_back(r.question_id + ": judged incorrect (" + r.judge_raw +
                                 "), answer was \"" + r.hypothesis + "\"");
        std::string why;
        if (!r.trace.well_formed(&why))
            violations.push_back(r.question_id + ": malformed trace: " + why);
        ++per_category[category_code(r.category)];
    }
    for (Category c : all_categories())
        if (per_category[category_code(c)] != 2)
            violations.push_back("category " + category_code(c) + ": expected 2 results, got " +
                                 std::to_string(per_category[category_code(c)]));
    return violations;
}

std::vector<std::string> check_category_behaviors(const std::vector<QuestionResult>& results) {
    std::vector<std::string> v;
    auto require = [&v](bool ok, const std::string& what) {
        if (!ok) v.push_back(what);
    };

    // Knowledge updates: both the stale and the current value were observed,
    // and the final answer carries the current one.
    if (const auto* r = find_result(results, "mini_ku_01")) {
        require(some_observation_contains_all(*r, {"Acme Corp", "Globex Industries"}),
                "ku_01: no observation shows both employers");
        require(r->hypothesis.find("Globex Industries") != std::string::npos,
                "ku_01: answer does not name the current employer");
    } else {
        v.push_back("ku_01 result missing");
    }
    if (const auto* r = find_result(results, "mini_ku_02")) {
        require(some_observation_contains_all(*r, {"iPhone 12", "Pixel 9"}),
                "ku_02: no observation shows both phones");
        require(r->hypothesis.find("Pixel 9") != std::string::npos,
                "ku_02: answer does not name the current phone");
    } else {
        v.push_back("ku_02 result missing");
    }

    // Multi-session counting: a date-bounded event query with the exact month
    // (or year) window ran.
    if (const auto* r = find_result(results, "mini_ms_01")) {
        require(executed_event_query_with_range(*r, "2024-05-01T00:00:00Z",
                                                "2024-05-31T23:59:59Z"),
                "ms_01: no event query bounded to May 2024 executed");
    } else {
        v.push_back("ms_01 result missing");
    }
    if (const auto* r = find_result(results, "mini_ms_02")) {
        require(executed_event_query_with_range(*r, "2024-01-01T00:00:00Z",
                                                "2024-12-31T23:59:59Z"),
                "ms_02: no event query bounded to 2024 executed");
    } else {
        v.push_back("ms_02 result missing");
    }

    // Temporal reasoning: the executed window must equal what the resolver
    // derives for "the week after" anchored at the vacation range.
    if (const auto* r = find_result(results, "mini_tr_01")) {
        DatetimeRange vacation{parse_datetime("2024-03-04T00:00:00Z").value(),
                               parse_datetime("2024-03-10T23:59:59Z").value(),
                               Granularity::window};
        auto expr = TemporalResolver::built_in().classify("the week after", vacation);
        if (!expr) {
            v.push_back("tr_01: resolver no longer classifies \"the week after\"");
        } else {
            auto expected = TemporalResolver::built_in().resolve(
                *expr, parse_datetime("2024-04-01T09:00:00Z").value());
            require(executed_event_query_with_range(*r, format_datetime(expected.start),
                                                    format_datetime(expected.end)),
                    "tr_01: no event query bounded to the anchored week " +
                        format_datetime(expected.start) + " .. " +
                        format_datetime(expected.end) + " executed");
        }
    } else {
        v.push_back("tr_01 result missing");
    }
    // The medication event's range was resolved from "last month" inside the
    // pipeline; the agent's observation must show the January window.
    if (const auto* r = find_result(results, "mini_tr_02")) {
        require(some_observation_contains_all(
                    *r, {"2024-01-01T00:00:00Z .. 2024-01-31T23:59:59Z"}),
                "tr_02: no observation shows the resolved January range");
    } else {
        v.push_back("tr_02 result missing");
    }

    // Lexical recovery: a miss ("No results.") followed by a hit.
    if (const auto* r = find_result(results, "mini_ssu_01")) {
        bool miss_seen = false;
        bool recovered = false;
        for (const auto& step : r->trace.steps) {
            if (step.kind != StepKind::observation) continue;
            if (step.text == "No results.") miss_seen = true;
            else if (miss_seen && step.text.find("Luna") != std::string::npos) recovered = true;
        }
        require(miss_seen, "ssu_01: the scripted lexical miss did not happen");
        require(recovered, "ssu_01: no successful observation after the miss");
    } else {
        v.push_back("ssu_01 result missing");
    }

    return v;
}

std::vector<std::string> check_ablation_effect(const std::string& flag,
                                               const std::vector<QuestionResult>& baseline,
                                               const std::vector<QuestionResult>& ablated) {
    std::vector<std::string> v;
    auto has_section = [](const QuestionResult& r, const std::string& name) {
        return std::find(r.prompt_sections.begin(), r.prompt_sections.end(), name) !=
               r.prompt_sections.end();
    };
    auto starts_with = [](const std::string& s, const char* prefix) {
        return s.rfind(prefix, 0) == 0;
    };
    auto ends_with = [](const std::string& s, const std::string& suffix) {
        return s.size() >= suffix.size() &&
               s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
    };

    if (flag == "no_initial_retrieval") {
        for (const auto& r : baseline)
            if (!has_section(r, "context_block"))
                v.push_back("baseline " + r.question_id + " lacks a context block");
        for (const auto& r : ablated) {
            if (has_section(r, "context_block"))
                v.push_back(r.question_id + ": context block present despite the ablation");
            if (!r.retrieval.dense_ids.empty() || !r.retrieval.seed_ids.empty())
                v.push_back(r.question_id + ": retrieval log non-empty despite the ablation");
        }
    } else if (flag == "no_dynamic_prompting") {
        for (const auto& r : baseline)
            if (!has_section(r, "guidance"))
                v.push_back("baseline " + r.question_id + " lacks a guidance section");
        for (const auto& r : ablated)
            if (has_section(r, "guidance"))
                v.push_back(r.question_id + ": guidance section present despite the ablation");
    } else if (flag == "no_rerank") {
        bool baseline_reordered = false;
        for (const auto& r : baseline)
            if (r.retrieval.rerank_ids != r.retrieval.dense_ids) baseline_reordered = true;
        if (!baseline_reordered)
            v.push_back("baseline rerank order never differs from dense order; the flag's "
                        "effect would be unobservable");
        for (const auto& r : ablated)
            if (r.retrieval.rerank_ids != r.retrieval.dense_ids)
                v.push_back(r.question_id + ": selection order differs from dense order "
                                            "despite the ablation");
    } else if (flag == "no_date_filter") {
        bool baseline_bounded = false;
        for (const auto& r : baseline)
            for (const auto& e : r.executed)
                if (e.range_applied) baseline_bounded = true;
        if (!baseline_bounded) v.push_back("baseline never executed a date-bounded query");
        for (const auto& r : ablated)
            for (const auto& e : r.executed)
                if (e.range_applied)
                    v.push_back(r.question_id + ": query on " + e.tool +
                                " carried date bounds despite the ablation");
    } else if (flag == "grep_only") {
        bool baseline_searched = false;
        for (const auto& r : baseline)
            for (const auto& e : r.executed)
                if (starts_with(e.tool, "search_")) baseline_searched = true;
        if (!baseline_searched) v.push_back("baseline never executed a vector search");
        for (const auto& r : ablated)
            for (const auto& e : r.executed)
                if (!starts_with(e.tool, "grep_"))
                    v.push_back(r.question_id + ": executed " + e.tool +
                                " despite the grep-only ablation");
    } else if (flag == "vector_only") {
        bool baseline_grepped = false;
        for (const auto& r : baseline)
            for (const auto& e : r.executed)
                if (starts_with(e.tool, "grep_")) baseline_grepped = true;
        if (!baseline_grepped) v.push_back("baseline never executed a grep");
        for (const auto& r : ablated)
            for (const auto& e : r.executed)
                if (!starts_with(e.tool, "search_"))
                    v.push_back(r.question_id + ": executed " + e.tool +
                                " despite the vector-only ablation");
    } else if (flag == "turns_only") {
        bool baseline_event_query = false;
        for (const auto& r : baseline)
            for (const auto& e : r.executed)
                if (ends_with(e.tool, "_events")) baseline_event_query = true;
        if (!baseline_event_query) v.push_back("baseline never queried the event calendar");
        for (const auto& r : ablated)
            for (const auto& e : r.executed)
                if (!ends_with(e.tool, "_turns"))
                    v.push_back(r.question_id + ": executed " + e.tool +
                                " despite the turns-only ablation");
    } else {
        v.push_back("unknown ablation flag: " + flag);
    }
    return v;
}

}  // namespace mini
