#pragma once

#include <chronos/providers.hpp>
#include <chronos/types.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace chronos {

enum class IndexKind { turns, events };

/// One indexed record: payload (a turn or event as JSON), the text grep and
/// vector search run over, its datetime range, and a pre-normalized embedding.
struct IndexRecord {
    nlohmann::json payload;
    std::string text;
    DatetimeRange range;
    std::vector<float> embedding;  // unit norm, dimensionality fixed per index
};

struct ScoredId {
    std::string id;
    double score;
};

struct GrepHit {
    std::string id;
    std::string matched_text;
};

/// Immutable snapshot of one calendar (turns or events). Build via index_turns /
/// index_events or load(); queries never mutate, so concurrent readers are safe.
class CalendarIndex {
public:
    CalendarIndex(IndexKind kind, std::size_t dim);

    IndexKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    bool contains(const std::string& id) const { return records_.count(id) != 0; }
    const IndexRecord& record(const std::string& id) const;
    /// Ids in ascending order (map order).
    std::vector<std::string> ids() const;

    /// Exact top-k by cosine similarity over records whose range intersects
    /// `range` (no filter when absent). Descending score, ties by ascending id.
    /// Throws std::invalid_argument on dimensionality mismatch or k == 0.
    std::vector<ScoredId> vector_search(const std::vector<float>& query_vec, std::size_t k,
                                        const std::optional<DatetimeRange>& range = {}) const;

    /// Case-insensitive substring hits over searchable text, filtered by range,
    /// ordered by record start datetime ascending (ties by ascending id),
    /// capped at `limit`. Empty pattern throws.
    std::vector<GrepHit> grep(const std::string& pattern, std::size_t limit,
                              const std::optional<DatetimeRange>& range = {}) const;

    /// Ids whose stored range intersects `range` (closed intervals), ascending.
    std::vector<std::string> range_filter(const DatetimeRange& range) const;

    /// Used by the builders below; rejects zero embeddings and wrong dims.
    void add_record(const std::string& id, IndexRecord rec);

private:
    IndexKind kind_;
    std::size_t dim_;
    std::map<std::string, IndexRecord> records_;  // ordered: determinism everywhere
};

/// Turn record id: "<session_id>#<5-digit zero-padded turn index>".
std::string turn_record_id(const std::string& session_id, int turn_index);

/// Searchable text for an event: surface text, "subject verb object", aliases.
std::string event_search_text(const TemporalEvent& ev);

/// Builds the turn calendar. A turn's range is its timestamp as an instant.
/// Embedder failures propagate; no partial index escapes.
CalendarIndex index_turns(const std::vector<ConversationTurn>& turns, Embedder& embedder);

/// Builds the event calendar over validated events.
CalendarIndex index_events(const std::vector<TemporalEvent>& events, Embedder& embedder);

/// On-disk store for one ingested haystack:
///   <dir>/turns.jsonl              one turn per line
///   <dir>/events.jsonl             one event per line
///   <dir>/turns.embeddings.bin     header u32 dim, u32 count; f32 LE, record order
///   <dir>/events.embeddings.bin    same layout
///   <dir>/sessions.json            session id → ISO date (for session numbering)
class CalendarStore {
public:
    /// Writes all files, overwriting existing ones. `session_dates` maps each
    /// session id in the haystack to its conversation date.
    static void save(const std::string& dir, const CalendarIndex& turns,
                     const CalendarIndex& events,
                     const std::map<std::string, std::string>& session_dates);

    static CalendarStore load(const std::string& dir);

    const CalendarIndex& turns() const { return *turns_; }
    const CalendarIndex& events() const { return *events_; }
    const std::map<std::string, std::string>& session_dates() const { return session_dates_; }

    /// 1-based chronological rank of a session among all sessions in the
    /// haystack, ordered by (date, session id). Unknown session → 0.
    int session_number(const std::string& session_id) const;

private:
    CalendarStore() = default;
    std::shared_ptr<CalendarIndex> turns_;
    std::shared_ptr<CalendarIndex> events_;
    std::map<std::string, std::string> session_dates_;
};

/// Session numbering helper shared by the store and in-memory pipelines.
int session_number_of(const std::map<std::string, std::string>& session_dates,
                      const std::string& session_id);

}  // namespace chronos
