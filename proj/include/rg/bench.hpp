#pragma once

#include <chrono>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "rg/engine.hpp"

namespace rg {

struct BenchMode {
  enum class Kind { FixedCount, FixedDuration };
  Kind kind = Kind::FixedCount;
  uint64_t playouts = 10'000;  // FixedCount
  double seconds = 1.0;        // FixedDuration

  static BenchMode fixed_count(uint64_t n) { return BenchMode{Kind::FixedCount, n, 0.0}; }
  static BenchMode fixed_duration(double s) { return BenchMode{Kind::FixedDuration, 0, s}; }
};

struct BenchReport {
  std::string game;
  std::string mode;  // "fixed_count" | "fixed_duration"
  uint64_t playouts = 0;
  double seconds = 0.0;  // wall clock around the playout loop only
  double playouts_per_sec = 0.0;
  double states_per_sec = 0.0;
  double mean_play_length = 0.0;
  uint64_t seed = 0;
  unsigned workers = 1;
  uint64_t budget_exceeded = 0;  // counted per playout, not fatal
  std::string rng = kRngId;
  // goal assignment ("p1=s1,p2=s2") -> frequency; in fixed-count mode this is
  // identical for equal (game, count, seed) regardless of worker count
  std::map<std::string, uint64_t> histogram;
};

namespace detail {

struct WorkerTally {
  uint64_t playouts = 0;
  uint64_t moves = 0;
  uint64_t budget_exceeded = 0;
  std::map<std::string, uint64_t> histogram;
};

// Playout index i draws its own generator from the splitmix stream, making
// results independent of how indices are sharded across workers.
inline void run_playout_index(const CompiledGame& cg, const GameState& init, uint64_t master,
                              uint64_t index, TraversalCache& cache, WorkerTally& tally,
                              uint64_t max_plies) {
  Rng rng(splitmix64_at(master, index));
  try {
    PlayoutResult res = random_playout(cg, init, rng, cache, max_plies);
    ++tally.playouts;
    tally.moves += res.length;
    ++tally.histogram[goals_key(cg, res.final_obs)];
  } catch (const RgError& e) {
    if (e.code() == "BudgetExceeded") {
      ++tally.playouts;
      ++tally.budget_exceeded;
    } else {
      throw;
    }
  }
}

}  // namespace detail

// Flat Monte Carlo throughput: each worker owns its state, cache and
// generator; wall clock covers the playout loop only.
inline BenchReport benchmark(const CompiledGame& cg, const BenchMode& mode, uint64_t seed,
                             unsigned workers, std::string game_id = {},
                             uint64_t max_plies = 1'000'000,
                             uint64_t traversal_budget = 10'000'000) {
  if (workers == 0) workers = 1;
  BenchReport report;
  report.game = std::move(game_id);
  report.mode = mode.kind == BenchMode::Kind::FixedCount ? "fixed_count" : "fixed_duration";
  report.seed = seed;
  report.workers = workers;

  GameState init = cg.initial_state();
  std::vector<detail::WorkerTally> tallies(workers);

  auto t0 = std::chrono::steady_clock::now();
  if (mode.kind == BenchMode::Kind::FixedCount) {
    // contiguous index ranges; the per-index seeding keeps the aggregate
    // histogram independent of the split
    std::vector<std::thread> threads;
    uint64_t total = mode.playouts;
    uint64_t chunk = total / workers;
    uint64_t rem = total % workers;
    uint64_t next = 0;
    for (unsigned w = 0; w < workers; ++w) {
      uint64_t begin = next;
      uint64_t count = chunk + (w < rem ? 1 : 0);
      next += count;
      threads.emplace_back([&, w, begin, count] {
        TraversalCache cache;
        cache.config.budget = traversal_budget;
        for (uint64_t i = 0; i < count; ++i)
          detail::run_playout_index(cg, init, seed, begin + i, cache, tallies[w], max_plies);
      });
    }
    for (auto& t : threads) t.join();
  } else {
    std::vector<std::thread> threads;
    auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(mode.seconds));
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        TraversalCache cache;
        cache.config.budget = traversal_budget;
        uint64_t index = w;
        while (std::chrono::steady_clock::now() < deadline) {
          detail::run_playout_index(cg, init, seed, index, cache, tallies[w], max_plies);
          index += workers;
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  auto t1 = std::chrono::steady_clock::now();
  report.seconds = std::chrono::duration<double>(t1 - t0).count();

  uint64_t moves = 0;
  for (const auto& t : tallies) {
    report.playouts += t.playouts;
    moves += t.moves;
    report.budget_exceeded += t.budget_exceeded;
    for (const auto& [k, v] : t.histogram) report.histogram[k] += v;
  }
  if (report.seconds > 0) {
    report.playouts_per_sec = static_cast<double>(report.playouts) / report.seconds;
    report.states_per_sec = static_cast<double>(moves) / report.seconds;
  }
  if (report.playouts > 0)
    report.mean_play_length = static_cast<double>(moves) / static_cast<double>(report.playouts);
  return report;
}

struct CompareReport {
  BenchReport raw;
  BenchReport optimized;
  double ratio = 0.0;  // optimized playouts/sec over raw
};

// Equal-seed paired run. In fixed-count mode the two histograms must agree
// exactly; a mismatch means an optimization changed the game and is fatal.
inline CompareReport compare_bench(const CompiledGame& raw, const CompiledGame& optimized,
                                   const BenchMode& mode, uint64_t seed, unsigned workers = 1,
                                   std::string game_id = {}, uint64_t max_plies = 1'000'000,
                                   uint64_t traversal_budget = 10'000'000) {
  CompareReport out;
  out.raw = benchmark(raw, mode, seed, workers, game_id, max_plies, traversal_budget);
  out.optimized = benchmark(optimized, mode, seed, workers, game_id, max_plies, traversal_budget);
  if (mode.kind == BenchMode::Kind::FixedCount && out.raw.histogram != out.optimized.histogram)
    throw RgError("HistogramMismatch",
                  "optimized game produced a different goal distribution than the raw game");
  if (out.raw.playouts_per_sec > 0)
    out.ratio = out.optimized.playouts_per_sec / out.raw.playouts_per_sec;
  return out;
}

}  // namespace rg
