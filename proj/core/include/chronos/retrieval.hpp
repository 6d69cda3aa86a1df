#pragma once

#include <chronos/calendar_store.hpp>
#include <chronos/providers.hpp>
#include <chronos/types.hpp>

#include <string>
#include <vector>

namespace chronos {

inline constexpr std::size_t kDensePoolSize = 100;
inline constexpr std::size_t kRerankKeep = 15;

/// What the pre-agent retrieval stage actually did, kept for trace audits and
/// behavioral assertions. Ids are turn record ids.
struct RetrievalLog {
    std::vector<std::string> dense_ids;   // dense top-100, similarity order
    std::vector<std::string> rerank_ids;  // after rerank, score order
    std::vector<std::string> seed_ids;    // top-15 kept as expansion seeds
    bool rerank_fallback = false;         // reranker failed; dense order kept
};

struct ContextEntry {
    std::string role;
    std::string text;
    int turn_index = 0;
};

struct ContextSection {
    std::string session_id;
    int session_no = 0;      // chronological rank within the haystack
    std::string date;        // YYYY-MM-DD
    std::vector<ContextEntry> entries;  // ascending turn index
};

/// Date-grouped context handed to the agent. Renders to the exact text the
/// agent prompt embeds; rendering is part of the contract.
struct ContextBlock {
    std::vector<ContextSection> sections;  // ascending (date, session id)
    std::string question;
    std::string question_date;  // YYYY-MM-DD

    /// "Session <n> (<date>)" headers, "- [role] text" entries, blank line
    /// between sections, and a final "Question (<date>): <question>" line.
    std::string render() const;
};

/// Scores `candidates` (parallel ids/texts) against the question and returns
/// them in descending score order. Output ids are a permutation of the input;
/// on reranker failure the input order is kept and *fallback is set.
std::vector<ScoredId> rerank_candidates(const std::string& question,
                                        const std::vector<std::string>& ids,
                                        const std::vector<std::string>& texts, Reranker& reranker,
                                        bool* fallback = nullptr);

/// The full pre-agent stage: dense top-100 over the turn calendar, rerank
/// against the original question, keep top-15 as seeds, pull each seed's
/// same-session ±1 neighbors, dedupe, group by session date.
ContextBlock initial_retrieve(const MemoryQuery& query, const CalendarIndex& turn_index,
                              const std::map<std::string, std::string>& session_dates,
                              Embedder& embedder, Reranker& reranker,
                              RetrievalLog* log = nullptr);

}  // namespace chronos
