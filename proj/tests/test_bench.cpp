#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace rg;

TEST_CASE("fixed-count histograms are byte-identical for equal seeds") {
  auto cg = compile(load_corpus("coinflip.rg"));
  auto a = benchmark(cg, BenchMode::fixed_count(2000), 42, 1, "coinflip");
  auto b = benchmark(cg, BenchMode::fixed_count(2000), 42, 1, "coinflip");
  CHECK(a.playouts == 2000);
  CHECK(histogram_json(a) == histogram_json(b));

  auto c = benchmark(cg, BenchMode::fixed_count(2000), 43, 1, "coinflip");
  CHECK(histogram_json(a) != histogram_json(c));
}

TEST_CASE("worker count does not change the fixed-count histogram") {
  auto cg = compile(load_corpus("tictactoe.rg"));
  auto one = benchmark(cg, BenchMode::fixed_count(600), 7, 1, "ttt");
  auto four = benchmark(cg, BenchMode::fixed_count(600), 7, 4, "ttt");
  CHECK(one.playouts == four.playouts);
  CHECK(histogram_json(one) == histogram_json(four));
}

TEST_CASE("the minimal game plays out in one move") {
  auto cg = compile(load_corpus("minimal.rg"));
  auto rep = benchmark(cg, BenchMode::fixed_count(100), 1, 1, "minimal");
  CHECK(rep.mean_play_length == 1.0);
  REQUIRE(rep.histogram.size() == 1);
  CHECK(rep.histogram.begin()->first == "x=0");
  CHECK(rep.histogram.begin()->second == 100);
}

TEST_CASE("coin flips split roughly evenly") {
  auto cg = compile(load_corpus("coinflip.rg"));
  auto rep = benchmark(cg, BenchMode::fixed_count(20'000), 11, 2, "coinflip");
  REQUIRE(rep.histogram.count("gambler=100") == 1);
  double heads = static_cast<double>(rep.histogram.at("gambler=100")) / 20'000.0;
  CHECK(heads > 0.47);
  CHECK(heads < 0.53);
}

TEST_CASE("compare: identical games produce identical histograms") {
  Game g = load_corpus("tictactoe.rg");
  auto raw = compile(g);
  auto optimized = compile(run_pipeline(g, PipelineConfig::defaults()).game);
  auto rep = compare_bench(raw, optimized, BenchMode::fixed_count(400), 5, 2, "ttt");
  CHECK(histogram_json(rep.raw) == histogram_json(rep.optimized));
  CHECK(rep.ratio > 0.0);
}

TEST_CASE("compare flags a semantics break through the histogram") {
  auto heads_only = compile(load_text(R"(
type Player = {gambler};
type Score = {0, 100};
const win: Goals = {:100};
begin, f: player = random;
f, h: $ heads;
h, h2: goals = win;
h2, end: player = keeper;
)"));
  auto fair = compile(load_corpus("coinflip.rg"));
  CHECK_THROWS_AS(
      compare_bench(fair, heads_only, BenchMode::fixed_count(200), 3, 1, "broken"),
      RgError);
}

TEST_CASE("bench reports serialize with the documented fields") {
  auto cg = compile(load_corpus("minimal.rg"));
  auto rep = benchmark(cg, BenchMode::fixed_count(10), 9, 1, "minimal");
  Json j = bench_report_to_json(rep);
  CHECK(j["v"] == 1);
  CHECK(j["mode"] == "fixed_count");
  CHECK(j["playouts"] == 10);
  CHECK(j["seed"] == 9);
  CHECK(j["rng"] == kRngId);
  CHECK(j["histogram"]["x=0"] == 10);
}

TEST_CASE("fixed-count tic-tac-toe: full count and a sane mean play length") {
  auto cg = compile(load_corpus("tictactoe.rg"));
  auto rep = benchmark(cg, BenchMode::fixed_count(10'000), 42, 4, "ttt");
  CHECK(rep.playouts == 10'000);
  CHECK(rep.budget_exceeded == 0);
  CHECK(rep.mean_play_length >= 5.0);
  CHECK(rep.mean_play_length <= 9.0);
}
