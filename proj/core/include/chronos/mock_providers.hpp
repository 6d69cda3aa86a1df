#pragma once

#include <chronos/providers.hpp>
#include <chronos/temporal_resolver.hpp>

#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace chronos {

/// Lowercase alphanumeric tokens of `text`, in order. Everything else is a separator.
std::vector<std::string> tokenize(const std::string& text);

/// Deterministic embedder: each text maps to a unit vector drawn from a PRNG
/// seeded with (seed ^ stable_hash(text)). Equal texts always embed equally,
/// across runs and platforms.
class HashEmbedder final : public Embedder {
public:
    explicit HashEmbedder(std::size_t dim = 64, uint64_t seed = 0x5eed);

    std::size_t dim() const override { return dim_; }
    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;

private:
    std::size_t dim_;
    uint64_t seed_;
};

/// Deterministic reranker: score = |Q ∩ D| / sqrt(|Q| * |D|) over unique tokens.
/// A document with no token overlap scores 0; score of a doc against itself is 1.
class TokenOverlapReranker final : public Reranker {
public:
    std::vector<double> rescore(const std::string& question,
                                const std::vector<std::string>& docs) override;
};

/// Scores by input position (first doc highest), so reranking preserves the
/// incoming dense order exactly. This is what the rerank ablation runs with.
class PassthroughReranker final : public Reranker {
public:
    std::vector<double> rescore(const std::string& question,
                                const std::vector<std::string>& docs) override;
};

/// One scripted exchange. The entry fires when the last user-role message of the
/// request contains `match` (and any system-prompt conditions hold); replies are
/// served in order, repeating the last one once exhausted.
struct ScriptEntry {
    std::string match;
    std::vector<std::string> require_system_contains;
    std::vector<std::string> require_system_lacks;
    std::vector<ChatReply> replies;
};

/// Chat provider that replays scripted transcripts. Entries are tried in order;
/// the first whose conditions hold answers. No matching entry is a hard error
/// (non-retryable ProviderFailure) so tests fail loudly instead of drifting.
class ScriptedChatProvider final : public ChatProvider {
public:
    ScriptedChatProvider() = default;
    explicit ScriptedChatProvider(std::vector<ScriptEntry> entries);

    void add_entry(ScriptEntry entry);
    /// Answers requests no entry matches; return nullopt to fall through to the error.
    void set_fallback(std::function<std::optional<ChatReply>(const std::vector<ChatMessage>&)> fb);
    /// Rewinds every entry's reply cursor.
    void reset();

    ChatReply complete(const std::vector<ChatMessage>& messages,
                       const std::vector<nlohmann::json>& tool_schemas) override;

private:
    std::vector<ScriptEntry> entries_;
    std::vector<std::size_t> cursors_;
    std::function<std::optional<ChatReply>(const std::vector<ChatMessage>&)> fallback_;
    std::mutex mu_;
};

/// Chat provider backed by a plain function, for tests that need full control.
class CallbackChatProvider final : public ChatProvider {
public:
    using Fn = std::function<ChatReply(const std::vector<ChatMessage>&,
                                       const std::vector<nlohmann::json>&)>;
    explicit CallbackChatProvider(Fn fn) : fn_(std::move(fn)) {}

    ChatReply complete(const std::vector<ChatMessage>& messages,
                       const std::vector<nlohmann::json>& tool_schemas) override {
        return fn_(messages, tool_schemas);
    }

private:
    Fn fn_;
};

/// Pattern-based stand-in for the LLM extraction pass. Recognizes first-person
/// statements ("I bought a Fitbit last week") in user turns, emits subject
/// "user", a normalized verb, the trailing object with any temporal phrase
/// stripped, alias variants from a small verb/object lexicon, and the temporal
/// expression text for local resolution. Deterministic by construction.
class RuleBasedMockExtractor final : public ExtractionProvider {
public:
    RuleBasedMockExtractor();
    nlohmann::json extract(const nlohmann::json& request) override;

private:
    const TemporalResolver* resolver_;
};

/// Extraction provider serving canned responses keyed by a substring of the
/// request's turn text. Falls back to an empty event list when nothing matches.
class ScriptedExtractionProvider final : public ExtractionProvider {
public:
    struct Entry {
        std::string match;           // substring looked for in any turn text
        nlohmann::json response;     // full wire-format response
    };

    explicit ScriptedExtractionProvider(std::vector<Entry> entries);
    nlohmann::json extract(const nlohmann::json& request) override;

private:
    std::vector<Entry> entries_;
};

/// Deterministic guidance reply used by mock provider sets: pulls salient
/// non-stopword tokens from the question into 1..5 bullets.
ChatReply heuristic_guidance_reply(const std::vector<ChatMessage>& messages);

/// Deterministic agent policy for offline smoke runs: one retrieval tool call,
/// then an answer summarizing the observation. Scripted transcripts, not this,
/// drive the handcrafted end-to-end scenarios.
ChatReply heuristic_agent_reply(const std::vector<ChatMessage>& messages,
                                const std::vector<nlohmann::json>& tool_schemas);

}  // namespace chronos
