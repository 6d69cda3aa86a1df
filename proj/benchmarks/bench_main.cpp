// Micro-benchmarks for the hot paths: dense search, temporal resolution,
// chunking, embedding, and the substring scan. Numbers here guard against
// accidental quadratic regressions, not absolute performance targets.

#include <benchmark/benchmark.h>

#include <chronos/calendar_store.hpp>
#include <chronos/extraction.hpp>
#include <chronos/mock_providers.hpp>
#include <chronos/temporal_resolver.hpp>

#include <random>
#include <string>
#include <vector>

namespace {

using namespace chronos;

std::string synthetic_text(std::mt19937_64& rng) {
    static const char* words[] = {"garden", "ticket",  "harbor", "violin", "engine",
                                  "coffee", "library", "trail",  "stereo", "window"};
    std::string out;
    for (int i = 0; i < 12; ++i) {
        if (i) out += ' ';
        out += words[rng() % 10];
    }
    return out;
}

const CalendarIndex& search_fixture() {
    static const CalendarIndex index = [] {
        std::mt19937_64 rng(99);
        HashEmbedder embedder(64, 4242);
        std::vector<ConversationTurn> turns;
        UtcTime base = day_start(Date{std::chrono::year{2024}, std::chrono::month{1},
                                      std::chrono::day{1}});
        for (int i = 0; i < 1000; ++i) {
            ConversationTurn t;
            t.session_id = "bench";
            t.turn_index = i;
            t.role = i % 2 ? Role::assistant : Role::user;
            t.text = synthetic_text(rng);
            t.timestamp = base + std::chrono::minutes{i};
            turns.push_back(std::move(t));
        }
        return index_turns(turns, embedder);
    }();
    return index;
}

void bm_vector_search(benchmark::State& state) {
    const CalendarIndex& index = search_fixture();
    HashEmbedder embedder(64, 4242);
    auto query = embedder.embed({"harbor ticket for the violin concert"})[0];
    for (auto _ : state) {
        auto hits = index.vector_search(query, 100);
        benchmark::DoNotOptimize(hits);
    }
}
BENCHMARK(bm_vector_search);

void bm_grep(benchmark::State& state) {
    const CalendarIndex& index = search_fixture();
    for (auto _ : state) {
        auto hits = index.grep("violin", 50);
        benchmark::DoNotOptimize(hits);
    }
}
BENCHMARK(bm_grep);

void bm_resolve_relative(benchmark::State& state) {
    const TemporalResolver& resolver = TemporalResolver::built_in();
    UtcTime ref = day_start(Date{std::chrono::year{2024}, std::chrono::month{2},
                                 std::chrono::day{15}}) +
                  std::chrono::hours{10};
    for (auto _ : state) {
        auto resolved = resolver.resolve("three weeks ago", ref);
        benchmark::DoNotOptimize(resolved);
    }
}
BENCHMARK(bm_resolve_relative);

void bm_resolve_explicit(benchmark::State& state) {
    const TemporalResolver& resolver = TemporalResolver::built_in();
    UtcTime ref = day_start(Date{std::chrono::year{2024}, std::chrono::month{2},
                                 std::chrono::day{15}});
    for (auto _ : state) {
        auto resolved = resolver.resolve("on March 5, 2024 at the market", ref);
        benchmark::DoNotOptimize(resolved);
    }
}
BENCHMARK(bm_resolve_explicit);

void bm_chunk_session(benchmark::State& state) {
    Session s;
    s.session_id = "bench";
    s.date = Date{std::chrono::year{2024}, std::chrono::month{3}, std::chrono::day{5}};
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        ConversationTurn t;
        t.session_id = "bench";
        t.turn_index = i;
        t.role = i % 2 ? Role::assistant : Role::user;
        t.text = synthetic_text(rng);
        t.timestamp = day_start(s.date) + std::chrono::seconds{i};
        s.turns.push_back(std::move(t));
    }
    for (auto _ : state) {
        auto batches = chunk_session(s);
        benchmark::DoNotOptimize(batches);
    }
}
BENCHMARK(bm_chunk_session);

void bm_embed_batch(benchmark::State& state) {
    HashEmbedder embedder(64, 4242);
    std::mt19937_64 rng(11);
    std::vector<std::string> texts;
    for (int i = 0; i < 25; ++i) texts.push_back(synthetic_text(rng));
    for (auto _ : state) {
        auto vecs = embedder.embed(texts);
        benchmark::DoNotOptimize(vecs);
    }
}
BENCHMARK(bm_embed_batch);

}  // namespace

BENCHMARK_MAIN();
