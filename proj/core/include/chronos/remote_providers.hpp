#pragma once

#include <chronos/providers.hpp>

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>

namespace chronos {

/// Token-bucket rate limiter shared by remote providers. acquire() blocks the
/// calling thread until a token is available; safe for concurrent callers.
class RateLimiter {
public:
    /// `capacity` tokens maximum, refilled at `refill_per_sec` tokens per second.
    RateLimiter(double capacity, double refill_per_sec);

    void acquire();

private:
    double capacity_;
    double refill_per_sec_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
    std::mutex mu_;
    std::condition_variable cv_;
};

/// Connection settings shared by the remote implementations.
struct RemoteEndpoint {
    std::string base_url;   // e.g. "https://api.openai.com"
    std::string api_key;    // bearer token; constructors reject an empty key
    int timeout_seconds = 60;
};

/// Chat completions against an OpenAI-compatible API. Temperature is pinned
/// to 0 on every request. Tool schemas pass through as the "tools" array and
/// tool calls in the response surface as ChatReply::tool_calls.
class OpenAiChatProvider final : public ChatProvider {
public:
    OpenAiChatProvider(RemoteEndpoint endpoint, std::string model,
                       std::shared_ptr<RateLimiter> limiter = nullptr);
    ~OpenAiChatProvider() override;

    ChatReply complete(const std::vector<ChatMessage>& messages,
                       const std::vector<nlohmann::json>& tool_schemas) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Embeddings against an OpenAI-compatible API.
class OpenAiEmbedder final : public Embedder {
public:
    OpenAiEmbedder(RemoteEndpoint endpoint, std::string model, std::size_t dim,
                   std::shared_ptr<RateLimiter> limiter = nullptr);
    ~OpenAiEmbedder() override;

    std::size_t dim() const override;
    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Rerank endpoint in the Cohere wire format: returns one relevance score per
/// input document, aligned with input order.
class CohereReranker final : public Reranker {
public:
    CohereReranker(RemoteEndpoint endpoint, std::string model,
                   std::shared_ptr<RateLimiter> limiter = nullptr);
    ~CohereReranker() override;

    std::vector<double> rescore(const std::string& question,
                                const std::vector<std::string>& docs) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Extraction via a chat model: renders the extraction request into the
/// instruction prompt, asks for strict JSON, and parses the reply. The chat
/// provider owns transport and rate limiting.
class RemoteExtractionProvider final : public ExtractionProvider {
public:
    /// `prompt_template` must contain the placeholder "{{input}}".
    RemoteExtractionProvider(std::shared_ptr<ChatProvider> chat, std::string prompt_template);

    nlohmann::json extract(const nlohmann::json& request) override;

private:
    std::shared_ptr<ChatProvider> chat_;
    std::string prompt_template_;
};

/// Extracts the first JSON object or array embedded in `text` (models often wrap
/// JSON in prose or code fences). Throws ProviderFailure when none parses.
nlohmann::json parse_embedded_json(const std::string& text);

}  // namespace chronos
