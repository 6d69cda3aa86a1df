#pragma once

#include <chronos/providers.hpp>

#include <map>
#include <optional>
#include <string>

namespace chronos {

/// Flat key/value configuration. Accepts `key = value` lines, `#` comments,
/// and optional double quotes around values. No sections, no nesting.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    long get_int(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Environment variable lookup; empty values count as unset.
std::optional<std::string> env_var(const std::string& name);

/// Builds the provider bundle for `mode` ("mock" or "remote").
///
/// Mock mode is fully offline and deterministic: hash embedder, token-overlap
/// reranker, rule-based extractor, heuristic guidance and agent chat. Remote
/// mode reads credentials from OPENAI_API_KEY / COHERE_API_KEY and fails at
/// construction when they are missing, so a misconfigured run stops before any
/// work happens. Config keys (all optional, shown with defaults):
///
///     embedding.dim = 64          mock embedder width; remote requested dims
///     embedding.seed = 9107
///     remote.openai_base_url = https://api.openai.com
///     remote.cohere_base_url = https://api.cohere.com
///     model.extractor  = gpt-4o-mini
///     model.guidance   = gpt-4o-mini
///     model.agent      = gpt-4o
///     model.judge      = gpt-4o-mini
///     model.embedder   = text-embedding-3-large
///     model.reranker   = rerank-english-v3.0
///     rate_limit.capacity = 8
///     rate_limit.per_sec  = 2
///     retry.attempts = 3
///     retry.backoff_ms = 1000
ProviderSet make_provider_set(const Config& cfg, const std::string& mode);

}  // namespace chronos
