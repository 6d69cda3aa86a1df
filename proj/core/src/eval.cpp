#include <chronos/eval.hpp>

#include <chronos/calendar_store.hpp>
#include <chronos/datetime.hpp>
#include <chronos/extraction.hpp>
#include <chronos/mock_providers.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace chronos {

const std::vector<Category>& all_categories() {
    static const std::vector<Category> order = {Category::KU,  Category::MS,  Category::SSA,
                                                Category::SSP, Category::SSU, Category::TR};
    return order;
}

std::string category_code(Category c) {
    switch (c) {
        case Category::KU: return "KU";
        case Category::MS: return "MS";
        case Category::SSA: return "SSA";
        case Category::SSP: return "SSP";
        case Category::SSU: return "SSU";
        case Category::TR: return "TR";
    }
    return "?";
}

std::optional<Category> category_from_question_type(const std::string& question_type) {
    if (question_type == "knowledge-update") return Category::KU;
    if (question_type == "multi-session") return Category::MS;
    if (question_type == "single-session-assistant") return Category::SSA;
    if (question_type == "single-session-preference") return Category::SSP;
    if (question_type == "single-session-user") return Category::SSU;
    if (question_type == "temporal-reasoning") return Category::TR;
    return std::nullopt;
}

bool BenchmarkQuestion::abstention() const {
    return question_id.size() >= 4 &&
           question_id.compare(question_id.size() - 4, 4, "_abs") == 0;
}

AblationConfig AblationConfig::parse(const std::string& flags) {
    AblationConfig cfg;
    std::string token;
    std::istringstream is(flags);
    while (std::getline(is, token, ',')) {
        // Tolerate surrounding spaces.
        std::size_t a = token.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = token.find_last_not_of(" \t");
        token = token.substr(a, b - a + 1);
        if (token.empty()) continue;
        if (token == "no_initial_retrieval") cfg.no_initial_retrieval = true;
        else if (token == "no_dynamic_prompting") cfg.no_dynamic_prompting = true;
        else if (token == "no_rerank") cfg.no_rerank = true;
        else if (token == "no_date_filter") cfg.no_date_filter = true;
        else if (token == "grep_only") cfg.grep_only = true;
        else if (token == "vector_only") cfg.vector_only = true;
        else if (token == "turns_only") cfg.turns_only = true;
        else throw std::invalid_argument("unknown ablation flag: " + token);
    }
    if (cfg.grep_only && cfg.vector_only)
        throw std::invalid_argument("grep_only and vector_only are mutually exclusive");
    return cfg;
}

std::string AblationConfig::describe() const {
    std::vector<std::string> on;
    if (no_initial_retrieval) on.push_back("no_initial_retrieval");
    if (no_dynamic_prompting) on.push_back("no_dynamic_prompting");
    if (no_rerank) on.push_back("no_rerank");
    if (no_date_filter) on.push_back("no_date_filter");
    if (grep_only) on.push_back("grep_only");
    if (vector_only) on.push_back("vector_only");
    if (turns_only) on.push_back("turns_only");
    std::string out;
    for (const auto& flag : on) {
        if (!out.empty()) out += ",";
        out += flag;
    }
    return out;
}

namespace {

std::string stringify_answer(const nlohmann::json& answer) {
    if (answer.is_string()) return answer.get<std::string>();
    return answer.dump();
}

[[noreturn]] void record_error(std::size_t index, const std::string& what) {
    throw std::runtime_error("benchmark record " + std::to_string(index) + ": " + what);
}

}  // namespace

BenchmarkLoad load_benchmark(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open benchmark file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("benchmark file " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) throw std::runtime_error("benchmark file must be a JSON array");

    BenchmarkLoad load;
    for (Category c : all_categories()) load.histogram[category_code(c)] = 0;

    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        if (!rec.is_object()) record_error(i, "not an object");
        for (const char* key : {"question_id", "question_type", "question", "answer",
                                "question_date", "haystack_dates", "haystack_session_ids",
                                "haystack_sessions"})
            if (!rec.contains(key)) record_error(i, std::string("missing field ") + key);

        BenchmarkQuestion q;
        q.question_id = rec["question_id"].is_string() ? rec["question_id"].get<std::string>()
                                                       : rec["question_id"].dump();
        q.question = rec["question"].get<std::string>();
        q.answer = stringify_answer(rec["answer"]);

        auto category = category_from_question_type(rec["question_type"].get<std::string>());
        if (!category)
            record_error(i, "unknown question_type " + rec["question_type"].dump());
        q.category = *category;

        auto qdate = parse_datetime(rec["question_date"].get<std::string>());
        if (!qdate) record_error(i, "bad question_date: " + rec["question_date"].dump());
        q.question_date = *qdate;

        const auto& dates = rec["haystack_dates"];
        const auto& ids = rec["haystack_session_ids"];
        const auto& sessions = rec["haystack_sessions"];
        if (!dates.is_array() || !ids.is_array() || !sessions.is_array())
            record_error(i, "haystack fields must be arrays");
        if (dates.size() != sessions.size() || ids.size() != sessions.size())
            record_error(i, "haystack_dates, haystack_session_ids, haystack_sessions lengths "
                            "disagree");

        for (std::size_t s = 0; s < sessions.size(); ++s) {
            Session session;
            session.session_id = ids[s].is_string() ? ids[s].get<std::string>() : ids[s].dump();
            auto session_time = parse_datetime(dates[s].get<std::string>());
            if (!session_time)
                record_error(i, "session " + std::to_string(s) + " bad date: " + dates[s].dump());
            session.date = date_of(*session_time);
            if (!sessions[s].is_array())
                record_error(i, "session " + std::to_string(s) + " is not a turn array");
            int turn_index = 0;
            for (const auto& turn_json : sessions[s]) {
                ConversationTurn turn;
                turn.session_id = session.session_id;
                turn.turn_index = turn_index;
                auto role = role_from_string(turn_json.value("role", ""));
                if (!role)
                    record_error(i, "session " + std::to_string(s) + " turn " +
                                        std::to_string(turn_index) + " has bad role");
                turn.role = *role;
                turn.text = turn_json.value("content", "");
                // Strictly increasing in-session times: seconds offset by index.
                turn.timestamp = *session_time + std::chrono::seconds(turn_index);
                session.turns.push_back(std::move(turn));
                ++turn_index;
            }
            q.session_dates[session.session_id] = format_date(session.date);
            q.haystack.push_back(std::move(session));
        }

        ++load.histogram[category_code(q.category)];
        load.questions.push_back(std::move(q));
    }
    return load;
}

std::vector<std::string> load_exclusions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open exclusion file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    std::vector<std::string> out;
    if (doc.contains("excluded_ids"))
        for (const auto& id : doc["excluded_ids"]) out.push_back(id.get<std::string>());
    return out;
}

bool is_excluded(const std::string& question_id, const std::vector<std::string>& exclusions) {
    for (const auto& entry : exclusions)
        if (question_id == entry || question_id.rfind(entry, 0) == 0) return true;
    return false;
}

namespace {

/// Normalization the offline judge and the taxonomy share: case-folded,
/// punctuation stripped to spaces, whitespace collapsed.
std::string normalize_for_match(const std::string& s) {
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
}

bool is_refusal(const std::string& hypothesis) {
    static const std::vector<std::string> markers = {
        "i don t know",      "i do not know",        "don t have that information",
        "no information",    "not mentioned",        "never mentioned",
        "cannot find",       "could not find",       "can t find",
        "no record",         "unable to find",       "unable to determine",
        "not enough information", "wasn t mentioned", "was not mentioned",
        "i m not sure",      "i am not sure",        "does not contain",
        "doesn t contain",   "did not mention",      "didn t mention"};
    const std::string norm = normalize_for_match(hypothesis);
    for (const auto& m : markers)
        if (norm.find(m) != std::string::npos) return true;
    return false;
}

}  // namespace

JudgeOutcome mock_judge(const std::string& hypothesis, const BenchmarkQuestion& q) {
    JudgeOutcome out;
    out.judged = true;
    if (q.abstention()) {
        out.correct = is_refusal(hypothesis);
        out.raw = out.correct ? "abstention honored" : "expected refusal, got an answer";
        return out;
    }
    const std::string norm_h = normalize_for_match(hypothesis);
    const std::string norm_a = normalize_for_match(q.answer);
    out.correct = !norm_a.empty() && norm_h.find(norm_a) != std::string::npos;
    out.raw = out.correct ? "reference answer contained in hypothesis"
                          : "reference answer not found in hypothesis";
    return out;
}

JudgeOutcome judge_answer(const std::string& hypothesis, const BenchmarkQuestion& q,
                          ChatProvider* judge, const RetryPolicy& retry,
                          const PromptLibrary& prompts) {
    if (!judge) return mock_judge(hypothesis, q);

    const std::string key = q.abstention() ? "abstention" : category_code(q.category);
    auto it = prompts.judge_prompts.find(key);
    if (it == prompts.judge_prompts.end()) return mock_judge(hypothesis, q);

    std::string prompt = it->second;
    auto fill = [&prompt](const char* placeholder, const std::string& value) {
        auto pos = prompt.find(placeholder);
        if (pos != std::string::npos) prompt.replace(pos, std::strlen(placeholder), value);
    };
    fill("{{question}}", q.question);
    fill("{{answer}}", q.answer);
    fill("{{hypothesis}}", hypothesis);

    JudgeOutcome out;
    try {
        ChatReply reply = with_retries(retry, [&] {
            return judge->complete({{"user", prompt}}, {});
        });
        out.raw = reply.text;
        std::string norm = normalize_for_match(reply.text);
        if (norm.rfind("yes", 0) == 0) {
            out.judged = true;
            out.correct = true;
        } else if (norm.rfind("no", 0) == 0) {
            out.judged = true;
            out.correct = false;
        } else {
            out.judged = false;  // unparseable verdict: excluded with a warning
        }
    } catch (const ProviderFailure& e) {
        out.judged = false;
        out.raw = std::string("judge unavailable: ") + e.what();
    }
    return out;
}

const std::vector<std::string>& error_categories() {
    static const std::vector<std::string> cats = {"retrieval_failure", "counting_arithmetic",
                                                  "fabrication", "temporal", "other"};
    return cats;
}

std::string classify_error(const QuestionResult& result, const BenchmarkQuestion& q) {
    if (result.run_error) return "other";

    // Did any observation carry the reference answer's text?
    const std::string norm_answer = normalize_for_match(q.answer);
    bool evidence_seen = false;
    for (const auto& step : result.trace.steps) {
        if (step.kind != StepKind::observation) continue;
        if (!norm_answer.empty() &&
            normalize_for_match(step.text).find(norm_answer) != std::string::npos) {
            evidence_seen = true;
            break;
        }
    }
    if (!evidence_seen && !q.abstention()) return "retrieval_failure";

    const std::string norm_q = normalize_for_match(q.question);
    for (const char* marker : {"how many", "how often", "number of", "how much total"})
        if (norm_q.find(marker) != std::string::npos) return "counting_arithmetic";

    if (q.category == Category::TR) return "temporal";
    if (is_refusal(result.hypothesis)) return "other";
    return "fabrication";
}

nlohmann::json QuestionResult::to_json() const {
    nlohmann::json j;
    j["question_id"] = question_id;
    j["category"] = category_code(category);
    j["hypothesis"] = hypothesis;
    j["judged"] = judged;
    j["correct"] = correct;
    j["judge_raw"] = judge_raw;
    j["error_category"] = error_category;
    j["run_error"] = run_error;
    j["error_text"] = error_text;
    j["trace"] = trace.to_json();
    j["retrieval"] = {{"dense_ids", retrieval.dense_ids},
                      {"rerank_ids", retrieval.rerank_ids},
                      {"seed_ids", retrieval.seed_ids},
                      {"rerank_fallback", retrieval.rerank_fallback}};
    nlohmann::json executed_json = nlohmann::json::array();
    for (const auto& e : executed) {
        nlohmann::json one;
        one["tool"] = e.tool;
        one["query"] = e.query;
        if (e.range_applied)
            one["range"] = e.range_applied->to_json();
        else
            one["range"] = nullptr;
        if (e.k)
            one["k"] = *e.k;
        else
            one["k"] = nullptr;
        executed_json.push_back(std::move(one));
    }
    j["executed_queries"] = executed_json;
    j["prompt_sections"] = prompt_sections;
    j["guidance_degraded"] = guidance_degraded;
    j["budget_exhausted"] = budget_exhausted;
    return j;
}

QuestionResult run_question(const BenchmarkQuestion& q, const AblationConfig& ablation,
                            ProviderSet& providers, const PromptLibrary& prompts) {
    QuestionResult result;
    result.question_id = q.question_id;
    result.category = q.category;

    try {
        // Per-question indices; nothing shared crosses questions.
        std::vector<ConversationTurn> all_turns;
        for (const auto& session : q.haystack)
            for (const auto& turn : session.turns) all_turns.push_back(turn);
        CalendarIndex turn_index = index_turns(all_turns, *providers.embedder);

        std::optional<CalendarIndex> event_index;
        if (!ablation.turns_only) {
            std::vector<TemporalEvent> all_events;
            for (const auto& session : q.haystack) {
                auto events = extract_session(session, *providers.extractor,
                                              TemporalResolver::built_in(), providers.retry);
                for (auto& ev : events) all_events.push_back(std::move(ev));
            }
            event_index.emplace(index_events(all_events, *providers.embedder));
        }

        Reranker* reranker = providers.reranker.get();
        PassthroughReranker passthrough;
        if (ablation.no_rerank) reranker = &passthrough;

        MemoryQuery query{q.question, date_of(q.question_date)};

        std::string guidance_preamble;
        if (!ablation.no_dynamic_prompting) {
            auto guidance = generate_guidance(q.question, *providers.guidance, prompts,
                                              providers.retry);
            result.guidance_degraded = guidance.degraded;
            guidance_preamble = render_guidance_preamble(guidance);
            result.prompt_sections.push_back("guidance");
        }

        result.prompt_sections.push_back("cot_guidelines");

        AgentConfig agent_config;
        agent_config.retry = providers.retry;
        agent_config.tools.enable_search = !ablation.grep_only;
        agent_config.tools.enable_grep = !ablation.vector_only;
        agent_config.tools.enable_events = !ablation.turns_only;
        agent_config.tools.apply_date_filter = !ablation.no_date_filter;

        std::string tool_text = tool_descriptions_text(agent_config.tools);
        if (!tool_text.empty()) result.prompt_sections.push_back("tool_descriptions");

        std::string context_text;
        if (!ablation.no_initial_retrieval) {
            ContextBlock block = initial_retrieve(query, turn_index, q.session_dates,
                                                  *providers.embedder, *reranker,
                                                  &result.retrieval);
            context_text = block.render();
            result.prompt_sections.push_back("context_block");
        }

        std::string system_prompt = assemble_system_prompt(guidance_preamble,
                                                           prompts.cot_guidelines, tool_text,
                                                           context_text);

        MemorySnapshot snapshot;
        snapshot.turns = &turn_index;
        snapshot.events = event_index ? &*event_index : nullptr;
        snapshot.session_dates = &q.session_dates;

        AgentResult agent = run_agent(query, snapshot, *providers.agent, *providers.embedder,
                                      *reranker, agent_config, system_prompt);
        result.hypothesis = agent.answer;
        result.trace = std::move(agent.trace);
        result.executed = std::move(agent.executed);
        result.budget_exhausted = agent.budget_exhausted;
        if (agent.failed) {
            result.run_error = true;
            result.error_text = agent.error;
        }
    } catch (const std::exception& e) {
        result.run_error = true;
        result.error_text = e.what();
    }

    if (result.run_error) {
        result.judged = true;
        result.correct = false;
        result.judge_raw = "run failed before judgment";
    } else {
        auto judgment = judge_answer(result.hypothesis, q, providers.judge.get(),
                                     providers.retry, prompts);
        result.judged = judgment.judged;
        result.correct = judgment.judged && judgment.correct;
        result.judge_raw = judgment.raw;
    }
    if (result.judged && !result.correct) result.error_category = classify_error(result, q);
    return result;
}

std::vector<QuestionResult> run_eval(const std::vector<BenchmarkQuestion>& questions,
                                     const AblationConfig& ablation, ProviderSet& providers,
                                     int workers, const PromptLibrary& prompts,
                                     const std::function<void(const QuestionResult&)>& on_done) {
    std::vector<QuestionResult> results(questions.size());
    if (questions.empty()) return results;
    workers = std::max(1, std::min<int>(workers, static_cast<int>(questions.size())));

    std::atomic<std::size_t> next{0};
    std::mutex done_mu;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= questions.size()) return;
            results[i] = run_question(questions[i], ablation, providers, prompts);
            if (on_done) {
                std::lock_guard<std::mutex> lock(done_mu);
                on_done(results[i]);
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return results;
}

void write_results(const std::string& path, const std::vector<QuestionResult>& results) {
    std::vector<nlohmann::json> lines;
    lines.reserve(results.size());
    for (const auto& r : results) lines.push_back(r.to_json());
    write_jsonl(path, lines);
}

std::vector<nlohmann::json> load_results(const std::string& path) { return read_jsonl(path); }

double Report::overall_accuracy() const {
    return judged == 0 ? 0.0 : 100.0 * correct / judged;
}

std::string Report::human_table() const {
    std::ostringstream os;
    os << "Category-level accuracy (%)\n";
    char buf[96];
    for (Category c : all_categories()) {
        const std::string code = category_code(c);
        int t = category_total.count(code) ? category_total.at(code) : 0;
        int k = category_correct.count(code) ? category_correct.at(code) : 0;
        if (t == 0)
            std::snprintf(buf, sizeof(buf), "  %-4s     --  (0 questions)\n", code.c_str());
        else
            std::snprintf(buf, sizeof(buf), "  %-4s %6.2f  (%d/%d)\n", code.c_str(),
                          100.0 * k / t, k, t);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "  %-4s %6.2f  (%d/%d", "All", overall_accuracy(), correct,
                  judged);
    os << buf;
    if (judged != total) os << ", " << (total - judged) << " unjudged";
    os << ")\n";

    os << "Error taxonomy\n";
    for (const auto& cat : error_categories()) {
        int n = error_counts.count(cat) ? error_counts.at(cat) : 0;
        os << "  " << cat << ": " << n << "\n";
    }
    return os.str();
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["total"] = total;
    j["judged"] = judged;
    j["correct"] = correct;
    j["overall_accuracy"] = overall_accuracy();
    nlohmann::json cats = nlohmann::json::array();
    for (Category c : all_categories()) {
        const std::string code = category_code(c);
        int t = category_total.count(code) ? category_total.at(code) : 0;
        int k = category_correct.count(code) ? category_correct.at(code) : 0;
        cats.push_back({{"category", code},
                        {"total", t},
                        {"correct", k},
                        {"accuracy", t == 0 ? 0.0 : 100.0 * k / t}});
    }
    j["categories"] = cats;
    nlohmann::json errors;
    for (const auto& cat : error_categories())
        errors[cat] = error_counts.count(cat) ? error_counts.at(cat) : 0;
    j["errors"] = errors;
    return j;
}

Report aggregate_report(const std::vector<QuestionResult>& results) {
    Report report;
    for (const auto& r : results) {
        ++report.total;
        const std::string code = category_code(r.category);
        if (!r.judged) continue;
        ++report.judged;
        ++report.category_total[code];
        if (r.correct) {
            ++report.correct;
            ++report.category_correct[code];
        } else if (!r.error_category.empty()) {
            ++report.error_counts[r.error_category];
        }
    }
    return report;
}

Report aggregate_report_json(const std::vector<nlohmann::json>& records) {
    std::vector<QuestionResult> results;
    results.reserve(records.size());
    for (const auto& rec : records) {
        QuestionResult r;
        r.question_id = rec.value("question_id", "");
        const std::string code = rec.value("category", "KU");
        for (Category c : all_categories())
            if (category_code(c) == code) r.category = c;
        r.judged = rec.value("judged", false);
        r.correct = rec.value("correct", false);
        r.error_category = rec.value("error_category", "");
        results.push_back(std::move(r));
    }
    return aggregate_report(results);
}

std::vector<BenchmarkQuestion> stratified_sample(const std::vector<BenchmarkQuestion>& questions,
                                                 std::size_t n, uint64_t seed) {
    if (n >= questions.size()) return questions;

    std::map<std::string, std::vector<std::size_t>> by_cat;
    for (std::size_t i = 0; i < questions.size(); ++i)
        by_cat[category_code(questions[i].category)].push_back(i);

    // Largest-remainder allocation in report order.
    struct Alloc {
        std::string code;
        std::size_t quota;
        double remainder;
    };
    std::vector<Alloc> allocs;
    std::size_t assigned = 0;
    for (Category c : all_categories()) {
        const std::string code = category_code(c);
        if (!by_cat.count(code)) continue;
        double exact = static_cast<double>(n) * by_cat[code].size() / questions.size();
        std::size_t quota = static_cast<std::size_t>(exact);
        allocs.push_back({code, quota, exact - static_cast<double>(quota)});
        assigned += quota;
    }
    std::stable_sort(allocs.begin(), allocs.end(),
                     [](const Alloc& a, const Alloc& b) { return a.remainder > b.remainder; });
    for (std::size_t i = 0; assigned < n && i < allocs.size(); ++i, ++assigned)
        ++allocs[i].quota;

    std::vector<std::size_t> picked;
    for (const auto& alloc : allocs) {
        auto& pool = by_cat[alloc.code];
        std::mt19937_64 rng(seed ^ stable_hash(alloc.code));
        std::shuffle(pool.begin(), pool.end(), rng);
        std::size_t take = std::min(alloc.quota, pool.size());
        picked.insert(picked.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    }
    std::sort(picked.begin(), picked.end());

    std::vector<BenchmarkQuestion> out;
    out.reserve(picked.size());
    for (std::size_t i : picked) out.push_back(questions[i]);
    return out;
}

}  // namespace chronos
