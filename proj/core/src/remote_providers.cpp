#include <chronos/remote_providers.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <sstream>
#include <thread>

namespace chronos {

RateLimiter::RateLimiter(double capacity, double refill_per_sec)
    : capacity_(capacity),
      refill_per_sec_(refill_per_sec),
      tokens_(capacity),
      last_(std::chrono::steady_clock::now()) {
    if (capacity <= 0 || refill_per_sec <= 0)
        throw std::invalid_argument("RateLimiter: capacity and refill rate must be positive");
}

void RateLimiter::acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    for (;;) {
        auto now = std::chrono::steady_clock::now();
        double elapsed = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        tokens_ = std::min(capacity_, tokens_ + elapsed * refill_per_sec_);
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        double wait_s = (1.0 - tokens_) / refill_per_sec_;
        cv_.wait_for(lock, std::chrono::duration<double>(wait_s));
    }
}

namespace {

struct ParsedUrl {
    std::string scheme_host;  // "https://api.openai.com" (scheme + authority)
    std::string path_prefix;  // "" or "/v1-compat" etc.
};

ParsedUrl split_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw std::runtime_error("remote endpoint base_url must include a scheme: " + base_url);
    auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

void check_endpoint(const RemoteEndpoint& ep, const char* who) {
    if (ep.api_key.empty())
        throw std::runtime_error(std::string(who) +
                                 ": missing API key; set the credential before constructing "
                                 "remote providers");
    if (ep.base_url.empty())
        throw std::runtime_error(std::string(who) + ": base_url is empty");
    split_url(ep.base_url);  // validates the scheme
}

/// Shared POST-JSON helper. Maps transport failures and 429/5xx to retryable
/// ProviderFailure, other HTTP errors to non-retryable.
nlohmann::json post_json(const RemoteEndpoint& ep, const std::string& path,
                         const nlohmann::json& body) {
    auto url = split_url(ep.base_url);
    httplib::Client cli(url.scheme_host);
    cli.set_connection_timeout(ep.timeout_seconds);
    cli.set_read_timeout(ep.timeout_seconds);
    cli.set_write_timeout(ep.timeout_seconds);
    cli.set_bearer_token_auth(ep.api_key);

    auto res = cli.Post(url.path_prefix + path, body.dump(), "application/json");
    if (!res)
        throw ProviderFailure("network error calling " + path + ": " +
                                  httplib::to_string(res.error()),
                              true);
    if (res->status == 429 || res->status >= 500)
        throw ProviderFailure("HTTP " + std::to_string(res->status) + " from " + path + ": " +
                                  res->body.substr(0, 300),
                              true);
    if (res->status < 200 || res->status >= 300)
        throw ProviderFailure("HTTP " + std::to_string(res->status) + " from " + path + ": " +
                                  res->body.substr(0, 300),
                              false);
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProviderFailure(std::string("unparseable response from ") + path + ": " + e.what(),
                              false);
    }
}

}  // namespace

struct OpenAiChatProvider::Impl {
    RemoteEndpoint endpoint;
    std::string model;
    std::shared_ptr<RateLimiter> limiter;
};

OpenAiChatProvider::OpenAiChatProvider(RemoteEndpoint endpoint, std::string model,
                                       std::shared_ptr<RateLimiter> limiter)
    : impl_(new Impl{std::move(endpoint), std::move(model), std::move(limiter)}) {
    check_endpoint(impl_->endpoint, "OpenAiChatProvider");
    if (impl_->model.empty()) throw std::runtime_error("OpenAiChatProvider: model name is empty");
}

OpenAiChatProvider::~OpenAiChatProvider() = default;

ChatReply OpenAiChatProvider::complete(const std::vector<ChatMessage>& messages,
                                       const std::vector<nlohmann::json>& tool_schemas) {
    if (impl_->limiter) impl_->limiter->acquire();

    nlohmann::json body;
    body["model"] = impl_->model;
    body["temperature"] = 0;
    auto msgs = nlohmann::json::array();
    for (const auto& m : messages) {
        // The wire protocol has no "tool" role without call ids; observations
        // travel as user messages tagged in-band.
        if (m.role == "tool")
            msgs.push_back({{"role", "user"}, {"content", "[tool result]\n" + m.content}});
        else
            msgs.push_back({{"role", m.role}, {"content", m.content}});
    }
    body["messages"] = msgs;
    if (!tool_schemas.empty()) {
        auto tools = nlohmann::json::array();
        for (const auto& schema : tool_schemas)
            tools.push_back({{"type", "function"}, {"function", schema}});
        body["tools"] = tools;
    }

    auto resp = post_json(impl_->endpoint, "/v1/chat/completions", body);
    if (!resp.contains("choices") || resp["choices"].empty())
        throw ProviderFailure("chat response has no choices", false);
    const auto& msg = resp["choices"][0]["message"];

    ChatReply reply;
    if (msg.contains("content") && msg["content"].is_string())
        reply.text = msg["content"].get<std::string>();
    if (msg.contains("tool_calls")) {
        for (const auto& tc : msg["tool_calls"]) {
            ToolInvocation inv;
            inv.name = tc["function"].value("name", "");
            const std::string raw = tc["function"].value("arguments", "{}");
            try {
                inv.arguments = nlohmann::json::parse(raw);
            } catch (const nlohmann::json::exception&) {
                inv.arguments = nlohmann::json{{"_raw", raw}};
            }
            reply.tool_calls.push_back(std::move(inv));
        }
    }
    return reply;
}

struct OpenAiEmbedder::Impl {
    RemoteEndpoint endpoint;
    std::string model;
    std::size_t dim;
    std::shared_ptr<RateLimiter> limiter;
};

OpenAiEmbedder::OpenAiEmbedder(RemoteEndpoint endpoint, std::string model, std::size_t dim,
                               std::shared_ptr<RateLimiter> limiter)
    : impl_(new Impl{std::move(endpoint), std::move(model), dim, std::move(limiter)}) {
    check_endpoint(impl_->endpoint, "OpenAiEmbedder");
    if (impl_->model.empty()) throw std::runtime_error("OpenAiEmbedder: model name is empty");
    if (dim == 0) throw std::runtime_error("OpenAiEmbedder: dim must be positive");
}

OpenAiEmbedder::~OpenAiEmbedder() = default;

std::size_t OpenAiEmbedder::dim() const { return impl_->dim; }

std::vector<std::vector<float>> OpenAiEmbedder::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) return {};
    if (impl_->limiter) impl_->limiter->acquire();

    nlohmann::json body;
    body["model"] = impl_->model;
    body["input"] = texts;
    body["dimensions"] = impl_->dim;

    auto resp = post_json(impl_->endpoint, "/v1/embeddings", body);
    if (!resp.contains("data") || !resp["data"].is_array())
        throw ProviderFailure("embeddings response has no data array", false);

    // Responses may arrive out of order; "index" restores input order.
    std::vector<std::vector<float>> out(texts.size());
    for (const auto& item : resp["data"]) {
        std::size_t idx = item.value("index", 0u);
        if (idx >= out.size()) throw ProviderFailure("embedding index out of range", false);
        out[idx] = item["embedding"].get<std::vector<float>>();
        if (out[idx].size() != impl_->dim)
            throw ProviderFailure("embedding dimensionality mismatch: expected " +
                                      std::to_string(impl_->dim) + ", got " +
                                      std::to_string(out[idx].size()),
                                  false);
    }
    return out;
}

struct CohereReranker::Impl {
    RemoteEndpoint endpoint;
    std::string model;
    std::shared_ptr<RateLimiter> limiter;
};

CohereReranker::CohereReranker(RemoteEndpoint endpoint, std::string model,
                               std::shared_ptr<RateLimiter> limiter)
    : impl_(new Impl{std::move(endpoint), std::move(model), std::move(limiter)}) {
    check_endpoint(impl_->endpoint, "CohereReranker");
    if (impl_->model.empty()) throw std::runtime_error("CohereReranker: model name is empty");
}

CohereReranker::~CohereReranker() = default;

std::vector<double> CohereReranker::rescore(const std::string& question,
                                            const std::vector<std::string>& docs) {
    if (docs.empty()) return {};
    if (impl_->limiter) impl_->limiter->acquire();

    nlohmann::json body;
    body["model"] = impl_->model;
    body["query"] = question;
    body["documents"] = docs;
    body["top_n"] = docs.size();

    auto resp = post_json(impl_->endpoint, "/v1/rerank", body);
    if (!resp.contains("results") || !resp["results"].is_array())
        throw ProviderFailure("rerank response has no results array", false);

    std::vector<double> scores(docs.size(), 0.0);
    for (const auto& item : resp["results"]) {
        std::size_t idx = item.value("index", 0u);
        if (idx >= scores.size()) throw ProviderFailure("rerank index out of range", false);
        scores[idx] = item.value("relevance_score", 0.0);
    }
    return scores;
}

RemoteExtractionProvider::RemoteExtractionProvider(std::shared_ptr<ChatProvider> chat,
                                                   std::string prompt_template)
    : chat_(std::move(chat)), prompt_template_(std::move(prompt_template)) {
    if (!chat_) throw std::runtime_error("RemoteExtractionProvider: chat provider is null");
    if (prompt_template_.find("{{input}}") == std::string::npos)
        throw std::runtime_error("RemoteExtractionProvider: prompt template lacks {{input}}");
}

nlohmann::json RemoteExtractionProvider::extract(const nlohmann::json& request) {
    std::string prompt = prompt_template_;
    auto pos = prompt.find("{{input}}");
    prompt.replace(pos, 9, request.dump(2));

    std::vector<ChatMessage> messages{{"user", prompt}};
    ChatReply reply = chat_->complete(messages, {});
    auto parsed = parse_embedded_json(reply.text);
    if (!parsed.is_object() || !parsed.contains("events") || !parsed["events"].is_array())
        throw ProviderFailure("extraction reply lacks an events array", false);
    return parsed;
}

nlohmann::json parse_embedded_json(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{' && text[i] != '[') continue;
        // Walk to the matching close bracket, respecting strings.
        char open = text[i], close = (open == '{') ? '}' : ']';
        int depth = 0;
        bool in_str = false, esc = false;
        for (std::size_t j = i; j < text.size(); ++j) {
            char c = text[j];
            if (esc) {
                esc = false;
            } else if (in_str) {
                if (c == '\\') esc = true;
                else if (c == '"') in_str = false;
            } else if (c == '"') {
                in_str = true;
            } else if (c == open) {
                ++depth;
            } else if (c == close) {
                if (--depth == 0) {
                    try {
                        return nlohmann::json::parse(text.substr(i, j - i + 1));
                    } catch (const nlohmann::json::exception&) {
                        break;  // keep scanning from the next candidate
                    }
                }
            }
        }
    }
    throw ProviderFailure("no parseable JSON found in model reply: " + text.substr(0, 200), false);
}

}  // namespace chronos
