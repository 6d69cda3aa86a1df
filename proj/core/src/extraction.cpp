#include <chronos/extraction.hpp>

#include <chronos/datetime.hpp>

#include <algorithm>
#include <map>

namespace chronos {

std::vector<TurnBatch> chunk_session(const Session& session) {
    if (session.turns.empty())
        throw std::invalid_argument("chunk_session: session " + session.session_id + " is empty");

    std::vector<TurnBatch> batches;
    const std::size_t n = session.turns.size();
    std::size_t start = 0;
    int index = 0;
    for (;;) {
        std::size_t end = std::min(n, start + kMaxBatchTurns);
        TurnBatch batch;
        batch.session_id = session.session_id;
        batch.batch_index = index++;
        batch.turns.assign(session.turns.begin() + static_cast<std::ptrdiff_t>(start),
                           session.turns.begin() + static_cast<std::ptrdiff_t>(end));
        batches.push_back(std::move(batch));
        if (end == n) break;
        start += kBatchStride;
    }
    return batches;
}

nlohmann::json extraction_request(const TurnBatch& batch) {
    nlohmann::json turns = nlohmann::json::array();
    for (const auto& t : batch.turns) {
        turns.push_back({{"index", t.turn_index},
                         {"role", to_string(t.role)},
                         {"text", t.text},
                         {"timestamp", format_datetime(t.timestamp)}});
    }
    std::string date =
        batch.turns.empty() ? "" : format_date(date_of(batch.turns.front().timestamp));
    return nlohmann::json{{"turns", turns}, {"conversation_date", date}};
}

namespace {

const ConversationTurn* find_turn(const TurnBatch& batch, int index) {
    for (const auto& t : batch.turns)
        if (t.turn_index == index) return &t;
    return nullptr;
}

/// Turns one wire-format event into a candidate, resolving its time.
EventCandidate to_candidate(const nlohmann::json& wire, const TurnBatch& batch,
                            const TemporalResolver& resolver) {
    EventCandidate c;
    c.subject = wire.value("subject", "");
    c.verb = wire.value("verb", "");
    c.object = wire.value("object", "");
    if (wire.contains("aliases"))
        for (const auto& a : wire["aliases"]) c.aliases.push_back(a.get<std::string>());

    const ConversationTurn* anchor = nullptr;
    if (wire.contains("source_indices")) {
        for (const auto& si : wire["source_indices"]) {
            int idx = si.get<int>();
            if (const auto* t = find_turn(batch, idx)) {
                c.source.push_back({batch.session_id, idx});
                if (!anchor) anchor = t;
            }
        }
    }
    if (!anchor && !batch.turns.empty()) anchor = &batch.turns.front();

    std::string surface;
    for (const auto& ref : c.source)
        if (const auto* t = find_turn(batch, ref.turn_index)) {
            if (!surface.empty()) surface += " ";
            surface += t->text;
        }
    c.surface_text = surface;

    const UtcTime ref_time = anchor ? anchor->timestamp : UtcTime{};
    bool have_range = false;
    if (wire.contains("time") && wire["time"].is_object()) {
        const auto& time = wire["time"];
        if (time.contains("explicit_range")) {
            if (auto r = DatetimeRange::from_json(time["explicit_range"])) {
                c.range = *r;
                have_range = true;
            }
        } else if (time.contains("expression")) {
            const std::string expr = time["expression"].get<std::string>();
            if (!expr.empty()) {
                if (auto parsed = resolver.classify(expr, std::nullopt)) {
                    c.range = resolver.resolve(*parsed, ref_time);
                    have_range = true;
                }
            }
        }
    }
    if (!have_range) c.range = TemporalResolver::fallback_day(ref_time);
    return c;
}

struct MergeKey {
    std::string svo;  // case-folded "s\x1fv\x1fo"
};

std::string fold_svo(const TemporalEvent& ev) {
    return fold_case(ev.subject) + "\x1f" + fold_case(ev.verb) + "\x1f" + fold_case(ev.object);
}

}  // namespace

BatchExtraction extract_batch(const TurnBatch& batch, ExtractionProvider& extractor,
                              const TemporalResolver& resolver, const RetryPolicy& retry) {
    BatchExtraction out;
    out.session_id = batch.session_id;
    out.batch_index = batch.batch_index;

    nlohmann::json response;
    try {
        const auto request = extraction_request(batch);
        response = with_retries(retry, [&] { return extractor.extract(request); });
    } catch (const ProviderFailure& e) {
        out.failed = true;
        out.error = e.what();
        return out;
    }

    if (!response.is_object() || !response.contains("events") || !response["events"].is_array()) {
        out.failed = true;
        out.error = "extractor response lacks an events array";
        return out;
    }

    for (const auto& wire : response["events"]) {
        EventCandidate candidate;
        try {
            candidate = to_candidate(wire, batch, resolver);
        } catch (const std::exception& e) {
            out.rejections.push_back({RejectCode::missing_field,
                                      std::string("malformed wire event: ") + e.what()});
            continue;
        }
        auto verdict = validate_event(candidate);
        if (auto* ev = std::get_if<TemporalEvent>(&verdict))
            out.events.push_back(std::move(*ev));
        else
            out.rejections.push_back(std::get<Rejection>(verdict));
    }
    return out;
}

std::vector<TemporalEvent> dedupe_overlap(const std::vector<TemporalEvent>& events) {
    std::vector<TemporalEvent> merged;
    // Index of merged events by folded SVO; only same-SVO events can merge, and
    // then only when they share a source turn.
    std::map<std::string, std::vector<std::size_t>> by_svo;

    for (const auto& ev : events) {
        const std::string key = fold_svo(ev);
        bool absorbed = false;
        for (std::size_t idx : by_svo[key]) {
            TemporalEvent& host = merged[idx];
            bool shares = false;
            for (const auto& ref : ev.source)
                if (std::find(host.source.begin(), host.source.end(), ref) != host.source.end()) {
                    shares = true;
                    break;
                }
            if (!shares) continue;

            for (const auto& ref : ev.source)
                if (std::find(host.source.begin(), host.source.end(), ref) == host.source.end())
                    host.source.push_back(ref);
            std::sort(host.source.begin(), host.source.end());
            for (const auto& alias : ev.aliases) {
                if (host.aliases.size() >= 4) break;
                if (std::find(host.aliases.begin(), host.aliases.end(), alias) ==
                    host.aliases.end())
                    host.aliases.push_back(alias);
            }
            // The earlier extraction's range wins; ids follow the merged content.
            EventCandidate c{host.subject, host.verb,       host.object, host.range,
                             host.aliases, host.source,     host.surface_text};
            host.event_id = derive_event_id(c);
            absorbed = true;
            break;
        }
        if (!absorbed) {
            by_svo[key].push_back(merged.size());
            merged.push_back(ev);
        }
    }
    return merged;
}

std::vector<TemporalEvent> extract_session(
    const Session& session, ExtractionProvider& extractor, const TemporalResolver& resolver,
    const RetryPolicy& retry, const std::function<void(const BatchExtraction&)>& on_batch) {
    std::vector<TemporalEvent> all;
    for (const auto& batch : chunk_session(session)) {
        auto result = extract_batch(batch, extractor, resolver, retry);
        if (on_batch) on_batch(result);
        for (auto& ev : result.events) all.push_back(std::move(ev));
    }
    return dedupe_overlap(all);
}

}  // namespace chronos
