#include <chronos/config.hpp>

#include <chronos/mock_providers.hpp>
#include <chronos/remote_providers.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chronos {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value, got \"" + t + "\"");
        std::string key = trim(t.substr(0, eq));
        std::string value = unquote(trim(t.substr(eq + 1)));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stol(*v);
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + " is not an integer: " + *v);
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stod(*v);
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + " is not a number: " + *v);
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw std::runtime_error("config key " + key + " is not a boolean: " + *v);
}

std::optional<std::string> env_var(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

namespace {

std::string load_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open prompt file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ProviderSet make_mock_providers(const Config& cfg) {
    ProviderSet set;
    auto dim = static_cast<std::size_t>(cfg.get_int("embedding.dim", 64));
    auto seed = static_cast<uint64_t>(cfg.get_int("embedding.seed", 9107));
    set.embedder = std::make_shared<HashEmbedder>(dim, seed);
    set.reranker = std::make_shared<TokenOverlapReranker>();
    set.extractor = std::make_shared<RuleBasedMockExtractor>();
    set.guidance = std::make_shared<CallbackChatProvider>(
        [](const std::vector<ChatMessage>& messages, const std::vector<nlohmann::json>&) {
            return heuristic_guidance_reply(messages);
        });
    set.agent = std::make_shared<CallbackChatProvider>(heuristic_agent_reply);
    set.judge = nullptr;  // eval falls back to the string-match judge
    return set;
}

ProviderSet make_remote_providers(const Config& cfg) {
    auto openai_key = env_var("OPENAI_API_KEY");
    auto cohere_key = env_var("COHERE_API_KEY");
    if (!openai_key)
        throw std::runtime_error("remote providers requested but OPENAI_API_KEY is not set");
    if (!cohere_key)
        throw std::runtime_error("remote providers requested but COHERE_API_KEY is not set");

    RemoteEndpoint openai{cfg.get_string("remote.openai_base_url", "https://api.openai.com"),
                          *openai_key, static_cast<int>(cfg.get_int("remote.timeout_s", 60))};
    RemoteEndpoint cohere{cfg.get_string("remote.cohere_base_url", "https://api.cohere.com"),
                          *cohere_key, static_cast<int>(cfg.get_int("remote.timeout_s", 60))};

    auto limiter = std::make_shared<RateLimiter>(cfg.get_double("rate_limit.capacity", 8.0),
                                                 cfg.get_double("rate_limit.per_sec", 2.0));

    ProviderSet set;
    set.embedder = std::make_shared<OpenAiEmbedder>(
        openai, cfg.get_string("model.embedder", "text-embedding-3-large"),
        static_cast<std::size_t>(cfg.get_int("embedding.dim", 256)), limiter);
    set.reranker = std::make_shared<CohereReranker>(
        cohere, cfg.get_string("model.reranker", "rerank-english-v3.0"), limiter);

    auto extractor_chat = std::make_shared<OpenAiChatProvider>(
        openai, cfg.get_string("model.extractor", "gpt-4o-mini"), limiter);
    std::string prompts_dir = cfg.get_string("prompts.dir", "prompts");
    set.extractor = std::make_shared<RemoteExtractionProvider>(
        extractor_chat, load_text_file(prompts_dir + "/extractor.txt"));

    set.guidance = std::make_shared<OpenAiChatProvider>(
        openai, cfg.get_string("model.guidance", "gpt-4o-mini"), limiter);
    set.agent = std::make_shared<OpenAiChatProvider>(
        openai, cfg.get_string("model.agent", "gpt-4o"), limiter);
    set.judge = std::make_shared<OpenAiChatProvider>(
        openai, cfg.get_string("model.judge", "gpt-4o-mini"), limiter);
    return set;
}

}  // namespace

ProviderSet make_provider_set(const Config& cfg, const std::string& mode) {
    ProviderSet set;
    if (mode == "mock")
        set = make_mock_providers(cfg);
    else if (mode == "remote")
        set = make_remote_providers(cfg);
    else
        throw std::runtime_error("unknown provider mode: " + mode + " (expected mock or remote)");

    set.retry.attempts = static_cast<int>(cfg.get_int("retry.attempts", 3));
    set.retry.initial_backoff = std::chrono::milliseconds(cfg.get_int("retry.backoff_ms", 1000));
    return set;
}

}  // namespace chronos
