#include <chronos/calendar_store.hpp>

#include <chronos/datetime.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace chronos {

CalendarIndex::CalendarIndex(IndexKind kind, std::size_t dim) : kind_(kind), dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("CalendarIndex: dim must be positive");
}

const IndexRecord& CalendarIndex::record(const std::string& id) const {
    auto it = records_.find(id);
    if (it == records_.end()) throw std::out_of_range("no record with id " + id);
    return it->second;
}

std::vector<std::string> CalendarIndex::ids() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& [id, rec] : records_) out.push_back(id);
    return out;
}

void CalendarIndex::add_record(const std::string& id, IndexRecord rec) {
    if (rec.embedding.size() != dim_)
        throw std::invalid_argument("record " + id + " embedding has dim " +
                                    std::to_string(rec.embedding.size()) + ", index expects " +
                                    std::to_string(dim_));
    double norm2 = 0.0;
    for (float x : rec.embedding) {
        if (!std::isfinite(x)) throw std::invalid_argument("record " + id + " embedding not finite");
        norm2 += static_cast<double>(x) * x;
    }
    if (norm2 < 1e-12) throw std::invalid_argument("record " + id + " has a zero embedding");
    // Store pre-normalized so cosine reduces to a dot product.
    float inv = static_cast<float>(1.0 / std::sqrt(norm2));
    for (auto& x : rec.embedding) x *= inv;
    if (!rec.range.valid()) throw std::invalid_argument("record " + id + " has an inverted range");
    if (!records_.emplace(id, std::move(rec)).second)
        throw std::invalid_argument("duplicate record id " + id);
}

std::vector<ScoredId> CalendarIndex::vector_search(const std::vector<float>& query_vec,
                                                   std::size_t k,
                                                   const std::optional<DatetimeRange>& range) const {
    if (query_vec.size() != dim_)
        throw std::invalid_argument("query dim " + std::to_string(query_vec.size()) +
                                    " does not match index dim " + std::to_string(dim_));
    if (k == 0) throw std::invalid_argument("vector_search: k must be positive");

    double qnorm2 = 0.0;
    for (float x : query_vec) qnorm2 += static_cast<double>(x) * x;
    double qinv = qnorm2 > 1e-12 ? 1.0 / std::sqrt(qnorm2) : 0.0;

    std::vector<ScoredId> scored;
    scored.reserve(records_.size());
    for (const auto& [id, rec] : records_) {
        if (range && !rec.range.intersects(*range)) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            dot += static_cast<double>(query_vec[i]) * rec.embedding[i];
        scored.push_back({id, dot * qinv});
    }
    // Map iteration gives ascending id, so a stable sort on score alone leaves
    // ties in ascending-id order.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const ScoredId& a, const ScoredId& b) { return a.score > b.score; });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::vector<GrepHit> CalendarIndex::grep(const std::string& pattern, std::size_t limit,
                                         const std::optional<DatetimeRange>& range) const {
    if (pattern.empty()) throw std::invalid_argument("grep: pattern must be non-empty");
    if (limit == 0) throw std::invalid_argument("grep: limit must be positive");
    const std::string needle = lower(pattern);

    struct Hit {
        UtcTime start;
        std::string id;
        const std::string* text;
    };
    std::vector<Hit> hits;
    for (const auto& [id, rec] : records_) {
        if (range && !rec.range.intersects(*range)) continue;
        if (lower(rec.text).find(needle) == std::string::npos) continue;
        hits.push_back({rec.range.start, id, &rec.text});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.id < b.id;
    });
    if (hits.size() > limit) hits.resize(limit);

    std::vector<GrepHit> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back({h.id, *h.text});
    return out;
}

std::vector<std::string> CalendarIndex::range_filter(const DatetimeRange& range) const {
    if (!range.valid()) throw std::invalid_argument("range_filter: inverted range");
    std::vector<std::string> out;
    for (const auto& [id, rec] : records_)
        if (rec.range.intersects(range)) out.push_back(id);
    return out;
}

std::string turn_record_id(const std::string& session_id, int turn_index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%05d", turn_index);
    return session_id + buf;
}

std::string event_search_text(const TemporalEvent& ev) {
    std::string text = ev.surface_text;
    text += " \xE2\x8A\x95 " + ev.subject + " " + ev.verb + " " + ev.object;
    for (const auto& alias : ev.aliases) text += " \xE2\x8A\x95 " + alias;
    return text;
}

namespace {

CalendarIndex build_index(IndexKind kind, const std::vector<std::string>& ids,
                          const std::vector<nlohmann::json>& payloads,
                          const std::vector<std::string>& texts,
                          const std::vector<DatetimeRange>& ranges, Embedder& embedder) {
    // Embed everything before constructing the index: a provider failure here
    // propagates with no partially built index published.
    auto vectors = embedder.embed(texts);
    if (vectors.size() != ids.size())
        throw ProviderFailure("embedder returned " + std::to_string(vectors.size()) +
                                  " vectors for " + std::to_string(ids.size()) + " texts",
                              false);
    CalendarIndex index(kind, embedder.dim());
    for (std::size_t i = 0; i < ids.size(); ++i)
        index.add_record(ids[i], {payloads[i], texts[i], ranges[i], std::move(vectors[i])});
    return index;
}

}  // namespace

CalendarIndex index_turns(const std::vector<ConversationTurn>& turns, Embedder& embedder) {
    std::vector<std::string> ids, texts;
    std::vector<nlohmann::json> payloads;
    std::vector<DatetimeRange> ranges;
    for (const auto& t : turns) {
        ids.push_back(turn_record_id(t.session_id, t.turn_index));
        payloads.push_back(t.to_json());
        texts.push_back(t.text);
        ranges.push_back({t.timestamp, t.timestamp, Granularity::instant});
    }
    return build_index(IndexKind::turns, ids, payloads, texts, ranges, embedder);
}

CalendarIndex index_events(const std::vector<TemporalEvent>& events, Embedder& embedder) {
    std::vector<std::string> ids, texts;
    std::vector<nlohmann::json> payloads;
    std::vector<DatetimeRange> ranges;
    for (const auto& ev : events) {
        ids.push_back(ev.event_id);
        payloads.push_back(ev.to_json());
        texts.push_back(event_search_text(ev));
        ranges.push_back(ev.range);
    }
    return build_index(IndexKind::events, ids, payloads, texts, ranges, embedder);
}

namespace {

void write_embeddings_file(const std::string& path, const CalendarIndex& index) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    uint32_t dim = static_cast<uint32_t>(index.dim());
    uint32_t count = static_cast<uint32_t>(index.size());
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (const auto& id : index.ids()) {
        const auto& emb = index.record(id).embedding;
        out.write(reinterpret_cast<const char*>(emb.data()),
                  static_cast<std::streamsize>(emb.size() * sizeof(float)));
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<std::vector<float>> read_embeddings_file(const std::string& path,
                                                     std::size_t expected_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    uint32_t dim = 0, count = 0;
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(&count), 4);
    if (!in || dim == 0) throw std::runtime_error("corrupt embeddings header in " + path);
    if (count != expected_count)
        throw std::runtime_error(path + " holds " + std::to_string(count) + " vectors, expected " +
                                 std::to_string(expected_count));
    std::vector<std::vector<float>> out(count, std::vector<float>(dim));
    for (auto& v : out) {
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(dim * sizeof(float)));
        if (!in) throw std::runtime_error("truncated embeddings body in " + path);
    }
    return out;
}

}  // namespace

void CalendarStore::save(const std::string& dir, const CalendarIndex& turns,
                         const CalendarIndex& events,
                         const std::map<std::string, std::string>& session_dates) {
    std::vector<nlohmann::json> turn_lines, event_lines;
    for (const auto& id : turns.ids()) turn_lines.push_back(turns.record(id).payload);
    for (const auto& id : events.ids()) event_lines.push_back(events.record(id).payload);
    write_jsonl(dir + "/turns.jsonl", turn_lines);
    write_jsonl(dir + "/events.jsonl", event_lines);
    write_embeddings_file(dir + "/turns.embeddings.bin", turns);
    write_embeddings_file(dir + "/events.embeddings.bin", events);

    nlohmann::json sessions(session_dates);
    std::ofstream out(dir + "/sessions.json");
    if (!out) throw std::runtime_error("cannot write " + dir + "/sessions.json");
    out << sessions.dump(2) << "\n";
}

CalendarStore CalendarStore::load(const std::string& dir) {
    auto turn_lines = read_jsonl(dir + "/turns.jsonl");
    auto event_lines = read_jsonl(dir + "/events.jsonl");
    auto turn_vecs = read_embeddings_file(dir + "/turns.embeddings.bin", turn_lines.size());
    auto event_vecs = read_embeddings_file(dir + "/events.embeddings.bin", event_lines.size());

    std::size_t turn_dim = turn_vecs.empty() ? 1 : turn_vecs[0].size();
    std::size_t event_dim = event_vecs.empty() ? turn_dim : event_vecs[0].size();

    CalendarStore store;
    store.turns_ = std::make_shared<CalendarIndex>(IndexKind::turns, turn_dim);
    for (std::size_t i = 0; i < turn_lines.size(); ++i) {
        auto turn = ConversationTurn::from_json(turn_lines[i]);
        if (!turn)
            throw std::runtime_error(dir + "/turns.jsonl line " + std::to_string(i + 1) +
                                     ": malformed turn record");
        store.turns_->add_record(
            turn_record_id(turn->session_id, turn->turn_index),
            {turn_lines[i], turn->text,
             {turn->timestamp, turn->timestamp, Granularity::instant},
             std::move(turn_vecs[i])});
    }
    store.events_ = std::make_shared<CalendarIndex>(IndexKind::events, event_dim);
    for (std::size_t i = 0; i < event_lines.size(); ++i) {
        auto ev = TemporalEvent::from_json(event_lines[i]);
        if (!ev)
            throw std::runtime_error(dir + "/events.jsonl line " + std::to_string(i + 1) +
                                     ": malformed event record");
        store.events_->add_record(ev->event_id, {event_lines[i], event_search_text(*ev),
                                                 ev->range, std::move(event_vecs[i])});
    }

    std::ifstream in(dir + "/sessions.json");
    if (!in) throw std::runtime_error("cannot read " + dir + "/sessions.json");
    nlohmann::json sessions = nlohmann::json::parse(in);
    for (const auto& [sid, date] : sessions.items())
        store.session_dates_[sid] = date.get<std::string>();
    return store;
}

int session_number_of(const std::map<std::string, std::string>& session_dates,
                      const std::string& session_id) {
    auto it = session_dates.find(session_id);
    if (it == session_dates.end()) return 0;
    // Rank by (date, id); the map holds each session exactly once.
    int rank = 1;
    for (const auto& [sid, date] : session_dates) {
        if (sid == session_id) continue;
        if (date < it->second || (date == it->second && sid < session_id)) ++rank;
    }
    return rank;
}

int CalendarStore::session_number(const std::string& session_id) const {
    return session_number_of(session_dates_, session_id);
}

}  // namespace chronos
