// Command-line front end: ingest a haystack, build the calendar indices, ask
// one-off questions, or run the benchmark harness.

#include <CLI11.hpp>

#include <chronos/agent.hpp>
#include <chronos/calendar_store.hpp>
#include <chronos/config.hpp>
#include <chronos/datetime.hpp>
#include <chronos/eval.hpp>
#include <chronos/extraction.hpp>
#include <chronos/guidance.hpp>
#include <chronos/mock_providers.hpp>
#include <chronos/retrieval.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace chronos;

/// Haystack file for ingest: JSONL, one session per line:
///   {"session_id": "...", "date": "YYYY-MM-DD", "turns": [{"role", "text"}...]}
std::vector<Session> load_haystack(const std::string& path) {
    std::vector<Session> sessions;
    auto lines = read_jsonl(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& j = lines[i];
        Session s;
        s.session_id = j.value("session_id", "");
        auto date = parse_date(j.value("date", ""));
        if (s.session_id.empty() || !date)
            throw std::runtime_error(path + " line " + std::to_string(i + 1) +
                                     ": session needs session_id and date");
        s.date = *date;
        int index = 0;
        for (const auto& turn_json : j.value("turns", nlohmann::json::array())) {
            ConversationTurn turn;
            turn.session_id = s.session_id;
            turn.turn_index = index;
            auto role = role_from_string(turn_json.value("role", ""));
            if (!role)
                throw std::runtime_error(path + " line " + std::to_string(i + 1) + " turn " +
                                         std::to_string(index) + ": bad role");
            turn.role = *role;
            turn.text = turn_json.value("text", "");
            turn.timestamp = day_start(s.date) + std::chrono::seconds(index);
            s.turns.push_back(std::move(turn));
            ++index;
        }
        if (auto err = normalize_session(s))
            throw std::runtime_error(path + " line " + std::to_string(i + 1) + ": " + *err);
        sessions.push_back(std::move(s));
    }
    return sessions;
}

int cmd_ingest(const std::string& haystack, const std::string& store_dir, ProviderSet& providers) {
    auto sessions = load_haystack(haystack);
    std::filesystem::create_directories(store_dir);

    std::vector<nlohmann::json> turn_lines;
    std::vector<nlohmann::json> event_lines;
    std::map<std::string, std::string> session_dates;
    std::size_t failed_batches = 0;

    for (const auto& session : sessions) {
        session_dates[session.session_id] = format_date(session.date);
        for (const auto& turn : session.turns) turn_lines.push_back(turn.to_json());
        auto events = extract_session(session, *providers.extractor,
                                      TemporalResolver::built_in(), providers.retry,
                                      [&](const BatchExtraction& batch) {
                                          if (batch.failed) {
                                              ++failed_batches;
                                              std::cerr << "warning: batch "
                                                        << batch.batch_index << " of session "
                                                        << batch.session_id
                                                        << " failed: " << batch.error << "\n";
                                          }
                                      });
        for (const auto& ev : events) event_lines.push_back(ev.to_json());
    }

    write_jsonl(store_dir + "/turns.jsonl", turn_lines);
    write_jsonl(store_dir + "/events.jsonl", event_lines);
    std::ofstream out(store_dir + "/sessions.json");
    out << nlohmann::json(session_dates).dump(2) << "\n";

    std::cout << "ingested " << sessions.size() << " sessions: " << turn_lines.size()
              << " turns, " << event_lines.size() << " events";
    if (failed_batches) std::cout << " (" << failed_batches << " failed batches)";
    std::cout << "\nrun `chronos index` next to build the embedding sidecars\n";
    return 0;
}

int cmd_index(const std::string& store_dir, ProviderSet& providers) {
    auto turn_lines = read_jsonl(store_dir + "/turns.jsonl");
    auto event_lines = read_jsonl(store_dir + "/events.jsonl");

    std::vector<ConversationTurn> turns;
    for (std::size_t i = 0; i < turn_lines.size(); ++i) {
        auto turn = ConversationTurn::from_json(turn_lines[i]);
        if (!turn)
            throw std::runtime_error("turns.jsonl line " + std::to_string(i + 1) + " malformed");
        turns.push_back(std::move(*turn));
    }
    std::vector<TemporalEvent> events;
    for (std::size_t i = 0; i < event_lines.size(); ++i) {
        auto ev = TemporalEvent::from_json(event_lines[i]);
        if (!ev)
            throw std::runtime_error("events.jsonl line " + std::to_string(i + 1) + " malformed");
        events.push_back(std::move(*ev));
    }

    std::ifstream in(store_dir + "/sessions.json");
    if (!in) throw std::runtime_error("missing " + store_dir + "/sessions.json; ingest first");
    std::map<std::string, std::string> session_dates;
    for (const auto& [sid, date] : nlohmann::json::parse(in).items())
        session_dates[sid] = date.get<std::string>();

    auto turn_index = index_turns(turns, *providers.embedder);
    auto event_index = index_events(events, *providers.embedder);
    CalendarStore::save(store_dir, turn_index, event_index, session_dates);
    std::cout << "indexed " << turn_index.size() << " turns and " << event_index.size()
              << " events (dim " << turn_index.dim() << ")\n";
    return 0;
}

int cmd_ask(const std::string& question, const std::string& date_str,
            const std::string& store_dir, ProviderSet& providers, const PromptLibrary& prompts,
            bool show_trace) {
    auto date = parse_date(date_str);
    if (!date) throw std::runtime_error("cannot parse --date value: " + date_str);
    auto store = CalendarStore::load(store_dir);

    MemoryQuery query{question, *date};
    auto guidance = generate_guidance(question, *providers.guidance, prompts, providers.retry);

    RetrievalLog retrieval_log;
    ContextBlock block = initial_retrieve(query, store.turns(), store.session_dates(),
                                          *providers.embedder, *providers.reranker,
                                          &retrieval_log);

    AgentConfig agent_config;
    agent_config.retry = providers.retry;
    std::string system_prompt = assemble_system_prompt(
        render_guidance_preamble(guidance), prompts.cot_guidelines,
        tool_descriptions_text(agent_config.tools), block.render());

    MemorySnapshot snapshot;
    snapshot.turns = &store.turns();
    snapshot.events = &store.events();
    snapshot.session_dates = &store.session_dates();

    auto result = run_agent(query, snapshot, *providers.agent, *providers.embedder,
                            *providers.reranker, agent_config, system_prompt);
    if (result.failed) {
        std::cerr << "agent run failed: " << result.error << "\n";
        return 1;
    }
    if (show_trace) {
        for (const auto& step : result.trace.steps) {
            std::cout << "[" << to_string(step.kind) << "] ";
            if (step.kind == StepKind::tool_call)
                std::cout << step.tool_record.dump();
            else
                std::cout << step.text;
            std::cout << "\n";
        }
    }
    std::cout << result.answer << "\n";
    return 0;
}

int cmd_eval(const std::string& bench_path, const std::string& sample_spec, uint64_t seed,
             const std::string& ablate_spec, ProviderSet& providers,
             const PromptLibrary& prompts, int workers, const std::string& out_path,
             const std::string& report_json_path, const std::string& exclusions_path) {
    auto load = load_benchmark(bench_path);
    std::cout << "loaded " << load.questions.size() << " questions:";
    for (Category c : all_categories())
        std::cout << " " << category_code(c) << " " << load.histogram[category_code(c)];
    std::cout << "\n";

    auto questions = load.questions;
    if (!exclusions_path.empty()) {
        auto exclusions = load_exclusions(exclusions_path);
        std::vector<BenchmarkQuestion> kept;
        for (auto& q : questions)
            if (!is_excluded(q.question_id, exclusions)) kept.push_back(std::move(q));
        std::cout << "exclusion list removed " << (questions.size() - kept.size())
                  << " questions\n";
        questions = std::move(kept);
    }

    if (!sample_spec.empty()) {
        if (sample_spec.rfind("stratified:", 0) != 0)
            throw std::runtime_error("--sample expects stratified:<n>, got " + sample_spec);
        std::size_t n = std::stoul(sample_spec.substr(11));
        questions = stratified_sample(questions, n, seed);
        std::cout << "stratified sample of " << questions.size() << " questions (seed " << seed
                  << ")\n";
    }

    AblationConfig ablation = AblationConfig::parse(ablate_spec);
    std::size_t done = 0;
    auto results = run_eval(questions, ablation, providers, workers, prompts,
                            [&](const QuestionResult& r) {
                                ++done;
                                std::cout << "[" << done << "/" << questions.size() << "] "
                                          << r.question_id << " "
                                          << (r.judged ? (r.correct ? "correct" : "incorrect")
                                                       : "unjudged")
                                          << "\n";
                            });

    write_results(out_path, results);
    std::cout << "wrote " << results.size() << " results to " << out_path << "\n";

    auto report = aggregate_report(results);
    std::cout << report.human_table();
    if (!report_json_path.empty()) {
        std::ofstream out(report_json_path);
        out << report.to_json().dump(2) << "\n";
        std::cout << "report JSON written to " << report_json_path << "\n";
    }
    return 0;
}

int cmd_report(const std::string& results_path, const std::string& json_out) {
    auto records = load_results(results_path);
    auto report = aggregate_report_json(records);
    std::cout << report.human_table();
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        out << report.to_json().dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chronos: temporally grounded conversational memory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string providers_mode = "mock";
    std::string store_dir = "chronos_store";
    std::string prompts_dir = "prompts";
    app.add_option("--config", config_path, "config file (key = value lines)");
    app.add_option("--providers", providers_mode, "provider mode: mock or remote")
        ->check(CLI::IsMember({"mock", "remote"}));
    app.add_option("--store", store_dir, "calendar store directory");
    app.add_option("--prompts", prompts_dir, "prompt file directory");

    auto* ingest = app.add_subcommand("ingest", "extract events from a haystack of sessions");
    std::string haystack_path;
    ingest->add_option("haystack", haystack_path, "sessions file (JSONL)")->required();

    auto* index = app.add_subcommand("index", "embed the ingested store");

    auto* ask = app.add_subcommand("ask", "answer one question against the store");
    std::string question, ask_date;
    bool show_trace = false;
    ask->add_option("question", question, "the question")->required();
    ask->add_option("--date", ask_date, "question date (YYYY-MM-DD)")->required();
    ask->add_flag("--trace", show_trace, "print the agent trace");

    auto* eval = app.add_subcommand("eval", "run a benchmark file through the pipeline");
    std::string bench_path, sample_spec, ablate_spec, out_path = "results.jsonl";
    std::string report_json_path, exclusions_path;
    uint64_t sample_seed = 20240214;
    int workers = 1;
    eval->add_option("--bench", bench_path, "benchmark JSON file")->required();
    eval->add_option("--sample", sample_spec, "sampling mode, e.g. stratified:116");
    eval->add_option("--seed", sample_seed, "sampling seed");
    eval->add_option("--ablate", ablate_spec, "comma-separated ablation flags");
    eval->add_option("--workers", workers, "parallel question workers");
    eval->add_option("--out", out_path, "results file (JSONL)");
    eval->add_option("--report-json", report_json_path, "also write the report as JSON");
    eval->add_option("--exclusions", exclusions_path,
                     "exclusion file; only applied when this option is given");

    auto* report = app.add_subcommand("report", "aggregate a results file");
    std::string results_path, report_out;
    report->add_option("results", results_path, "results JSONL file")->required();
    report->add_option("--json", report_out, "write the report as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg;
        if (!config_path.empty()) cfg = Config::from_file(config_path);
        cfg.set("prompts.dir", prompts_dir);
        PromptLibrary prompts = PromptLibrary::from_dir(prompts_dir);

        if (report->parsed()) return cmd_report(results_path, report_out);

        ProviderSet providers = make_provider_set(cfg, providers_mode);
        if (ingest->parsed()) return cmd_ingest(haystack_path, store_dir, providers);
        if (index->parsed()) return cmd_index(store_dir, providers);
        if (ask->parsed())
            return cmd_ask(question, ask_date, store_dir, providers, prompts, show_trace);
        if (eval->parsed())
            return cmd_eval(bench_path, sample_spec, sample_seed, ablate_spec, providers,
                            prompts, workers, out_path, report_json_path, exclusions_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
