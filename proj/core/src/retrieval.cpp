#include <chronos/retrieval.hpp>

#include <chronos/datetime.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace chronos {

std::string ContextBlock::render() const {
    std::ostringstream os;
    for (const auto& section : sections) {
        os << "Session " << section.session_no << " (" << section.date << ")\n";
        for (const auto& entry : section.entries)
            os << "- [" << entry.role << "] " << entry.text << "\n";
        os << "\n";
    }
    os << "Question (" << question_date << "): " << question << "\n";
    return os.str();
}

std::vector<ScoredId> rerank_candidates(const std::string& question,
                                        const std::vector<std::string>& ids,
                                        const std::vector<std::string>& texts, Reranker& reranker,
                                        bool* fallback) {
    if (ids.size() != texts.size())
        throw std::invalid_argument("rerank_candidates: ids/texts size mismatch");
    if (fallback) *fallback = false;
    if (ids.empty()) return {};

    std::vector<RankedDoc> ranked;
    try {
        ranked = rank_docs(reranker, question, texts);
    } catch (const ProviderFailure&) {
        // Dense order survives a reranker outage; the caller's trace records it.
        if (fallback) *fallback = true;
        std::vector<ScoredId> out;
        out.reserve(ids.size());
        double score = static_cast<double>(ids.size());
        for (const auto& id : ids) out.push_back({id, score--});
        return out;
    }

    std::vector<ScoredId> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked) out.push_back({ids[r.index], r.score});
    return out;
}

namespace {

struct TurnKey {
    std::string session_id;
    int turn_index;
    bool operator<(const TurnKey& o) const {
        if (session_id != o.session_id) return session_id < o.session_id;
        return turn_index < o.turn_index;
    }
};

}  // namespace

ContextBlock initial_retrieve(const MemoryQuery& query, const CalendarIndex& turn_index,
                              const std::map<std::string, std::string>& session_dates,
                              Embedder& embedder, Reranker& reranker, RetrievalLog* log) {
    if (!query.valid()) throw std::invalid_argument("initial_retrieve: invalid query");

    ContextBlock block;
    block.question = query.question;
    block.question_date = format_date(query.question_date);
    if (turn_index.empty()) {
        if (log) *log = {};
        return block;
    }

    auto query_vec = embedder.embed({query.question}).at(0);
    auto dense = turn_index.vector_search(query_vec, kDensePoolSize);

    std::vector<std::string> ids, texts;
    ids.reserve(dense.size());
    for (const auto& s : dense) {
        ids.push_back(s.id);
        texts.push_back(turn_index.record(s.id).text);
    }

    bool fell_back = false;
    auto reranked = rerank_candidates(query.question, ids, texts, reranker, &fell_back);

    std::vector<std::string> seeds;
    for (const auto& s : reranked) {
        if (seeds.size() == kRerankKeep) break;
        seeds.push_back(s.id);
    }

    if (log) {
        log->dense_ids = ids;
        log->rerank_ids.clear();
        for (const auto& s : reranked) log->rerank_ids.push_back(s.id);
        log->seed_ids = seeds;
        log->rerank_fallback = fell_back;
    }

    // Seeds plus their same-session ±1 neighbors, deduped.
    std::set<TurnKey> chosen;
    for (const auto& id : seeds) {
        auto turn = ConversationTurn::from_json(turn_index.record(id).payload).value();
        for (int delta : {-1, 0, 1}) {
            int idx = turn.turn_index + delta;
            if (idx < 0) continue;
            if (delta == 0 || turn_index.contains(turn_record_id(turn.session_id, idx)))
                chosen.insert({turn.session_id, idx});
        }
    }

    // Group by session, then order sections chronologically by (date, id).
    std::map<std::string, std::vector<ContextEntry>> by_session;
    for (const auto& key : chosen) {
        const auto& rec = turn_index.record(turn_record_id(key.session_id, key.turn_index));
        auto turn = ConversationTurn::from_json(rec.payload).value();
        by_session[key.session_id].push_back({to_string(turn.role), turn.text, turn.turn_index});
    }

    struct SectionKey {
        std::string date;
        std::string session_id;
        bool operator<(const SectionKey& o) const {
            if (date != o.date) return date < o.date;
            return session_id < o.session_id;
        }
    };
    std::map<SectionKey, ContextSection> ordered;
    for (auto& [sid, entries] : by_session) {
        std::sort(entries.begin(), entries.end(),
                  [](const ContextEntry& a, const ContextEntry& b) {
                      return a.turn_index < b.turn_index;
                  });
        auto it = session_dates.find(sid);
        std::string date = it != session_dates.end() ? it->second : "unknown";
        ContextSection section;
        section.session_id = sid;
        section.session_no = session_number_of(session_dates, sid);
        section.date = date;
        section.entries = std::move(entries);
        ordered[{date, sid}] = std::move(section);
    }
    for (auto& [key, section] : ordered) block.sections.push_back(std::move(section));
    return block;
}

}  // namespace chronos
