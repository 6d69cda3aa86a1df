#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "chronos/types.hpp"

namespace chronos {

/// Raised by providers on transport, auth, or protocol errors. retryable
/// distinguishes transient failures (rate limits, network) from permanent
/// ones (bad credentials, malformed request).
class ProviderFailure : public std::runtime_error {
public:
    ProviderFailure(const std::string& what, bool retryable = true)
        : std::runtime_error(what), retryable_(retryable) {}
    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

struct ChatMessage {
    std::string role;  // "system", "user", "assistant", "tool"
    std::string content;
};

/// A raw tool invocation as emitted by a chat model.
struct ToolInvocation {
    std::string name;
    json arguments;

    json to_json() const { return json{{"name", name}, {"arguments", arguments}}; }
};

struct ChatReply {
    std::string text;     // final answer text; empty when tool calls are emitted
    std::string thought;  // optional reasoning text accompanying either
    std::vector<ToolInvocation> tool_calls;

    json to_json() const;
    static ChatReply from_json(const json& j);
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    /// tool_schemas: neutral function descriptions, may be empty.
    virtual ChatReply complete(const std::vector<ChatMessage>& messages,
                               const std::vector<json>& tool_schemas) = 0;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual size_t dim() const = 0;
    /// One vector per input text, all of dim() length.
    virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) = 0;
};

class Reranker {
public:
    virtual ~Reranker() = default;
    /// Relevance score per doc, aligned with the input order.
    virtual std::vector<double> rescore(const std::string& question,
                                        const std::vector<std::string>& docs) = 0;
};

/// Scored permutation of the input docs, descending score, ties keep input
/// order. Never introduces or drops indices.
struct RankedDoc {
    size_t index;
    double score;
};
std::vector<RankedDoc> rank_docs(Reranker& reranker, const std::string& question,
                                 const std::vector<std::string>& docs);

/// Turn batches go to the extractor in a fixed exchange format:
///   request  {"turns":[{"index","role","text","timestamp"}], "conversation_date"}
///   response {"events":[{"subject","verb","object",
///                        "time":{"explicit_range":{...}} | {"expression":"..."},
///                        "aliases":[...], "source_indices":[...]}]}
class ExtractionProvider {
public:
    virtual ~ExtractionProvider() = default;
    virtual json extract(const json& request) = 0;
};

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    double multiplier = 2.0;
};

/// Runs fn with the given retry policy; rethrows the last failure once the
/// budget is exhausted or immediately for non-retryable errors.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
    auto backoff = policy.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            return fn();
        } catch (const ProviderFailure& e) {
            if (!e.retryable() || attempt >= policy.attempts) throw;
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds{
                static_cast<long>(static_cast<double>(backoff.count()) * policy.multiplier)};
        }
    }
}

/// One independently bindable provider per model role. judge may be null;
/// the harness then uses the deterministic string-match judge.
struct ProviderSet {
    std::shared_ptr<ExtractionProvider> extractor;
    std::shared_ptr<ChatProvider> guidance;
    std::shared_ptr<ChatProvider> agent;
    std::shared_ptr<ChatProvider> judge;
    std::shared_ptr<Embedder> embedder;
    std::shared_ptr<Reranker> reranker;
    RetryPolicy retry;
};

}  // namespace chronos
