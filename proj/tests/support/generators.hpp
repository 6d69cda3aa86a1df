#pragma once

// Seeded data generators for property tests. Every generator takes the engine
// by reference so a test controls the whole sequence from one seed.

#include <chronos/calendar_store.hpp>
#include <chronos/datetime.hpp>
#include <chronos/types.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace gen {

inline std::string word(std::mt19937_64& rng) {
    static const char* pool[] = {
        "river",  "lamp",    "garden", "ticket", "marble",  "coffee", "engine", "harbor",
        "violin", "pepper",  "cloud",  "ladder", "pocket",  "signal", "bridge", "candle",
        "museum", "blanket", "орех",   "庭",     "anchor",  "meadow", "sketch", "tunnel",
        "basket", "copper",  "mirror", "planet", "whistle", "fabric", "garlic", "shelf",
    };
    std::uniform_int_distribution<std::size_t> pick(0, std::size(pool) - 1);
    return pool[pick(rng)];
}

inline std::string sentence(std::mt19937_64& rng, int min_words = 3, int max_words = 12) {
    std::uniform_int_distribution<int> count(min_words, max_words);
    int n = count(rng);
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += word(rng);
    }
    out += '.';
    return out;
}

inline std::vector<float> raw_vector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<float> v(dim);
    for (auto& x : v) x = static_cast<float>(gauss(rng));
    return v;
}

/// A normalized conversation session: contiguous turn indices, alternating
/// roles starting with the user, timestamps one minute apart.
inline std::vector<chronos::ConversationTurn> session(std::mt19937_64& rng,
                                                      const std::string& session_id,
                                                      std::size_t turns,
                                                      chronos::UtcTime start) {
    std::vector<chronos::ConversationTurn> out;
    out.reserve(turns);
    for (std::size_t i = 0; i < turns; ++i) {
        chronos::ConversationTurn t;
        t.session_id = session_id;
        t.turn_index = static_cast<int>(i);
        t.role = i % 2 == 0 ? chronos::Role::user : chronos::Role::assistant;
        t.text = sentence(rng);
        t.timestamp = start + std::chrono::minutes{i};
        out.push_back(std::move(t));
    }
    return out;
}

inline chronos::Session full_session(
    std::mt19937_64& rng, const std::string& session_id, std::size_t turns,
    chronos::UtcTime start = chronos::day_start(chronos::Date{std::chrono::year{2024} / 3 / 5}) +
                             std::chrono::hours{9}) {
    chronos::Session s;
    s.session_id = session_id;
    s.date = chronos::date_of(start);
    s.turns = session(rng, session_id, turns, start);
    return s;
}

/// Random store records with distinct ids, spread over 2023-2025 day ranges.
/// Vectors are raw (the store normalizes on insert).
struct RawRecord {
    std::string id;
    std::string text;
    std::vector<float> vec;
    chronos::DatetimeRange range;
};

inline std::vector<RawRecord> corpus(std::mt19937_64& rng, std::size_t count, std::size_t dim) {
    using namespace std::chrono;
    std::vector<RawRecord> out;
    out.reserve(count);
    std::uniform_int_distribution<int> day_offset(0, 3 * 365 - 1);
    std::uniform_int_distribution<int> span_days(0, 20);
    const chronos::Date base = chronos::Date{year{2023} / January / 1};
    for (std::size_t i = 0; i < count; ++i) {
        RawRecord r;
        char buf[16];
        std::snprintf(buf, sizeof buf, "rec-%05zu", i);
        r.id = buf;
        r.text = sentence(rng);
        r.vec = raw_vector(rng, dim);
        chronos::Date start{sys_days{base} + days{day_offset(rng)}};
        chronos::Date end{sys_days{start} + days{span_days(rng)}};
        r.range.start = chronos::day_start(start);
        r.range.end = chronos::day_end(end);
        r.range.granularity = chronos::Granularity::window;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace gen
