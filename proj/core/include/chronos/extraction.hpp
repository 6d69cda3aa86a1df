#pragma once

#include <chronos/providers.hpp>
#include <chronos/temporal_resolver.hpp>
#include <chronos/types.hpp>

#include <functional>
#include <string>
#include <vector>

namespace chronos {

/// One extraction unit: a contiguous slice of a session, at most 25 turns.
struct TurnBatch {
    std::string session_id;
    std::vector<ConversationTurn> turns;
    int batch_index = 0;
};

inline constexpr std::size_t kMaxBatchTurns = 25;
inline constexpr std::size_t kBatchOverlap = 5;
inline constexpr std::size_t kBatchStride = kMaxBatchTurns - kBatchOverlap;  // 20

/// Splits a session into ordered batches of at most 25 turns where each batch
/// after the first starts 20 turns after its predecessor, sharing exactly the
/// predecessor's last 5 turns (fewer only when the session runs out).
/// Sessions of ≤25 turns produce a single batch. Empty session throws.
std::vector<TurnBatch> chunk_session(const Session& session);

/// Outcome of extracting one batch. A failed batch (provider gave up after
/// retries) carries its error and zero events; ingestion continues past it.
struct BatchExtraction {
    std::string session_id;
    int batch_index = 0;
    std::vector<TemporalEvent> events;
    bool failed = false;
    std::string error;
    std::vector<Rejection> rejections;  // candidates the validator refused
};

/// Runs the extractor on one batch and post-processes the wire response:
/// candidate times arrive either as an explicit ISO range or as a raw temporal
/// expression, which is resolved locally against the source turn's timestamp
/// (falling back to the whole conversation day, second precision). Candidates
/// then pass validate_event; rejections are recorded, not fatal.
BatchExtraction extract_batch(const TurnBatch& batch, ExtractionProvider& extractor,
                              const TemporalResolver& resolver, const RetryPolicy& retry);

/// Merges duplicate extractions from overlapping batches: two events merge when
/// they share at least one source turn and their case-folded (subject, verb,
/// object) triples are equal. The surviving event keeps the union of sources
/// and aliases (aliases capped at 4), the earlier range, and a recomputed id.
std::vector<TemporalEvent> dedupe_overlap(const std::vector<TemporalEvent>& events);

/// Full ingestion of one session: chunk, extract every batch, dedupe.
/// `on_batch` (optional) observes each batch outcome, failed ones included.
std::vector<TemporalEvent> extract_session(
    const Session& session, ExtractionProvider& extractor, const TemporalResolver& resolver,
    const RetryPolicy& retry,
    const std::function<void(const BatchExtraction&)>& on_batch = nullptr);

/// Builds the wire-format request for one batch:
///   {"turns": [{"index", "role", "text", "timestamp"}...], "conversation_date": "YYYY-MM-DD"}
nlohmann::json extraction_request(const TurnBatch& batch);

}  // namespace chronos
