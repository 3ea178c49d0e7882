// Command-line front end: check, optimize, perft, bench, play, dot.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rg/rg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitIo = 2;

struct IoFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure{"cannot open '" + path + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure{"cannot write '" + path + "'"};
  out << text;
}

uint64_t traversal_budget() {
  if (const char* env = std::getenv("RG_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed RG_BUDGET\n";
  }
  return 10'000'000;
}

void print_diagnostics(const rg::Diagnostics& diags) {
  for (const auto& d : diags) {
    std::cerr << (d.severity == rg::Severity::Error ? "error" : "warning") << "[" << d.code
              << "]";
    if (d.span.line > 0) std::cerr << " " << d.span.line << ":" << d.span.column;
    std::cerr << ": " << d.message << "\n";
  }
}

struct Loaded {
  rg::Game game;
  rg::Diagnostics diagnostics;
};

// Parse, inject builtins, run the static validators. Exits the process on
// errors the caller cannot act on.
Loaded load_game(const std::string& path, bool json) {
  Loaded out;
  auto parsed = rg::parse_game(read_file(path));
  out.game = std::move(parsed.game);
  out.diagnostics = std::move(parsed.diagnostics);
  if (rg::count_errors(out.diagnostics) == 0) {
    auto inject = rg::inject_implicit_definitions(out.game);
    out.diagnostics.insert(out.diagnostics.end(), inject.begin(), inject.end());
  }
  if (rg::count_errors(out.diagnostics) == 0) {
    auto statics = rg::validate_static(out.game);
    out.diagnostics.insert(out.diagnostics.end(), statics.begin(), statics.end());
  }
  if (rg::count_errors(out.diagnostics) > 0) {
    if (json) {
      rg::Json j{{"v", 1}, {"file", path}, {"diagnostics", rg::diagnostics_to_json(out.diagnostics)}};
      std::cout << j.dump(2) << "\n";
    } else {
      print_diagnostics(out.diagnostics);
    }
    std::exit(kExitDiagnostics);
  }
  return out;
}

rg::PipelineConfig parse_pass_list(const std::string& spec) {
  rg::PipelineConfig config;
  if (spec.empty() || spec == "default") return rg::PipelineConfig::defaults();
  if (spec == "none") return config;
  if (spec == "all") {
    for (const auto& p : rg::pass_catalog()) config.enabled.push_back(p.id);
    return config;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto id = rg::pass_by_name(item);
    if (!id) throw CLI::ValidationError("--passes", "unknown pass '" + item + "'");
    config.enabled.push_back(*id);
  }
  return config;
}

int cmd_check(const std::string& path, bool proper, uint64_t max_states, bool json) {
  Loaded loaded = load_game(path, json);
  rg::Json out{{"v", 1}, {"file", path},
               {"diagnostics", rg::diagnostics_to_json(loaded.diagnostics)}};
  bool ok = true;
  if (proper) {
    auto cg = rg::compile(loaded.game);
    rg::ProperBudget budget;
    budget.max_states = max_states;
    budget.transitions = traversal_budget() * 10;
    auto report = rg::check_proper(cg, budget);
    ok = report.all_pass();
    if (json) {
      out["proper"] = rg::proper_report_to_json(cg, report);
    } else {
      for (size_t i = 0; i < report.conditions.size(); ++i) {
        const auto& c = report.conditions[i];
        std::cout << "condition " << (i + 1) << ": " << rg::verdict_text(c.verdict);
        if (c.verdict == rg::Verdict::Fail) std::cout << " (" << c.note << ")";
        std::cout << "\n";
      }
    }
  }
  if (json) {
    out["ok"] = ok;
    std::cout << out.dump(2) << "\n";
  } else {
    print_diagnostics(loaded.diagnostics);
    std::cout << (ok ? "ok" : "not proper") << "\n";
  }
  return ok ? kExitOk : kExitDiagnostics;
}

int cmd_optimize(const std::string& path, const std::string& out_path,
                 const std::string& snapshot_dir, const std::string& passes, int max_iterations,
                 bool json) {
  Loaded loaded = load_game(path, json);
  rg::PipelineConfig config = parse_pass_list(passes);
  config.max_iterations = max_iterations;
  config.collect_snapshots = !snapshot_dir.empty();

  rg::PipelineResult result;
  try {
    result = rg::run_pipeline(loaded.game, config);
  } catch (const rg::RgError& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return kExitDiagnostics;
  }

  if (!snapshot_dir.empty()) {
    std::filesystem::create_directories(snapshot_dir);
    for (const auto& snap : result.snapshots)
      write_file(snapshot_dir + "/" + snap.label + ".rg", snap.text);
  }
  for (const auto& st : result.stats) {
    if (json)
      std::cout << rg::pass_stats_to_json(st).dump() << "\n";
    else
      std::cout << rg::pass_info(st.pass).name << ": nodes " << st.nodes_before << "->"
                << st.nodes_after << ", edges " << st.edges_before << "->" << st.edges_after
                << ", state bits " << st.state_size_bits << "\n";
  }

  std::string text = rg::render_game(result.game);
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

int cmd_perft(const std::string& path, size_t depth, bool json) {
  Loaded loaded = load_game(path, json);
  auto cg = rg::compile(loaded.game);
  rg::TraversalCache cache;
  cache.config.budget = traversal_budget();
  auto res = rg::perft(cg, cg.initial_state(), depth, cache);
  if (json) {
    rg::Json goals = rg::Json::object();
    for (const auto& [k, v] : res.terminal_goals) goals[k] = v;
    rg::Json j{{"v", 1},
               {"per_depth", res.per_depth},
               {"complete_plays", res.complete_plays},
               {"terminal_goals", std::move(goals)}};
    std::cout << j.dump(2) << "\n";
  } else {
    for (size_t i = 0; i < res.per_depth.size(); ++i)
      std::cout << (i ? " " : "") << res.per_depth[i];
    std::cout << "\n";
  }
  return kExitOk;
}

void print_bench_table(const rg::BenchReport& r) {
  std::cout << "game:             " << r.game << "\n"
            << "mode:             " << r.mode << "\n"
            << "playouts:         " << r.playouts << "\n"
            << "seconds:          " << r.seconds << "\n"
            << "playouts/sec:     " << r.playouts_per_sec << "\n"
            << "states/sec:       " << r.states_per_sec << "\n"
            << "mean play length: " << r.mean_play_length << "\n"
            << "seed:             " << r.seed << "\n"
            << "workers:          " << r.workers << "\n"
            << "rng:              " << r.rng << "\n"
            << "histogram:\n";
  for (const auto& [k, v] : r.histogram) std::cout << "  " << k << ": " << v << "\n";
}

int cmd_bench(const std::string& path, uint64_t playouts, double seconds, uint64_t seed,
              unsigned workers, bool compare, const std::string& format) {
  Loaded loaded = load_game(path, format == "json");
  auto cg = rg::compile(loaded.game);
  rg::BenchMode mode = seconds > 0 ? rg::BenchMode::fixed_duration(seconds)
                                   : rg::BenchMode::fixed_count(playouts);
  uint64_t budget = traversal_budget();
  if (compare) {
    auto optimized = rg::run_pipeline(loaded.game, rg::PipelineConfig::defaults());
    auto opt_cg = rg::compile(optimized.game);
    auto rep = rg::compare_bench(cg, opt_cg, mode, seed, workers, path, 1'000'000, budget);
    if (format == "json") {
      rg::Json j{{"v", 1},
                 {"raw", rg::bench_report_to_json(rep.raw)},
                 {"optimized", rg::bench_report_to_json(rep.optimized)},
                 {"ratio", rep.ratio}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "== raw ==\n";
      print_bench_table(rep.raw);
      std::cout << "== optimized ==\n";
      print_bench_table(rep.optimized);
      std::cout << "ratio: " << rep.ratio << "\n";
    }
    return kExitOk;
  }
  auto rep = rg::benchmark(cg, mode, seed, workers, path, 1'000'000, budget);
  if (format == "json")
    std::cout << rg::bench_report_to_json(rep).dump(2) << "\n";
  else
    print_bench_table(rep);
  return kExitOk;
}

int cmd_dot(const std::string& path, const std::string& out_path, bool json) {
  Loaded loaded = load_game(path, json);
  std::string text = rg::emit_dot(loaded.game, std::filesystem::path(path).stem().string());
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

std::string tags_text(const rg::CompiledGame& cg, const rg::Move& m) {
  if (m.empty()) return "(no tags)";
  std::string out;
  for (rg::NameId t : m) {
    if (!out.empty()) out += ' ';
    out += cg.desc.text(t);
  }
  return out;
}

int cmd_play(const std::string& path, const std::vector<std::string>& seat_specs, uint64_t seed) {
  Loaded loaded = load_game(path, false);
  auto cg = rg::compile(loaded.game);

  std::map<rg::NameId, std::string> seats;
  for (rg::NameId p : cg.players) seats[p] = "human";
  for (const std::string& spec : seat_specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --seat expects name=human|random\n";
      return kExitDiagnostics;
    }
    std::string name = spec.substr(0, eq);
    std::string policy = spec.substr(eq + 1);
    rg::NameId id = loaded.game.names.find(name);
    if (!id.valid() || !seats.count(id) || (policy != "human" && policy != "random")) {
      std::cerr << "error: unknown seat assignment '" << spec << "'\n";
      return kExitDiagnostics;
    }
    seats[id] = policy;
  }

  rg::Rng rng(seed);
  rg::TraversalCache cache;
  cache.config.budget = traversal_budget();
  rg::GameState state = cg.initial_state();
  std::map<rg::NameId, std::vector<rg::Move>> histories;
  for (rg::NameId p : cg.players) histories[p] = {};

  auto apply_and_record = [&](const rg::Move& m) {
    rg::MoveResult res = rg::apply_move(cg, state, m, cache);
    for (const auto& [p, view] : res.views) histories[p].push_back(view);
    state = std::move(res.next);
  };

  while (true) {
    rg::Observation obs = cg.observe(state);
    if (obs.terminal) {
      std::cout << "game over\n";
      for (const auto& [p, s] : obs.goals)
        std::cout << "  " << cg.desc.text(p) << ": " << cg.desc.text(s) << "\n";
      return kExitOk;
    }
    std::vector<rg::Move> moves = rg::legal_moves(cg, state, cache);
    if (moves.empty()) {
      std::cerr << "error[ImproperDescription]: no legal move in a non-terminal state\n";
      return kExitDiagnostics;
    }
    rg::NameId mover = obs.player;
    if (mover == cg.keeper_sym) {
      apply_and_record(moves.front());
      continue;
    }
    if (mover == cg.random_sym || seats[mover] == "random") {
      apply_and_record(moves[rng.below(moves.size())]);
      continue;
    }

    // human seat: only obfuscated information is shown
    std::cout << "--- " << cg.desc.text(mover) << " to move\n";
    std::cout << "your move history (as visible to you):\n";
    if (histories[mover].empty()) std::cout << "  (none)\n";
    for (const rg::Move& v : histories[mover]) std::cout << "  " << tags_text(cg, v) << "\n";
    std::cout << "legal moves:\n";
    for (size_t i = 0; i < moves.size(); ++i)
      std::cout << "  " << (i + 1) << ") " << tags_text(cg, moves[i]) << "\n";
    size_t choice = 0;
    while (true) {
      std::cout << "> " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        std::cout << "\n(end of input; aborting)\n";
        return kExitOk;
      }
      try {
        choice = std::stoul(line);
      } catch (...) {
        choice = 0;
      }
      if (choice >= 1 && choice <= moves.size()) break;
      std::cout << "enter a number between 1 and " << moves.size() << "\n";
    }
    apply_and_record(moves[choice - 1]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular Games toolchain: parse, validate, optimize, run and measure finite-automaton game descriptions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  std::string path;

  auto* check = app.add_subcommand("check", "parse and validate a description");
  bool proper = false;
  uint64_t max_states = 1'000'000;
  check->add_option("file", path, "description file")->required();
  check->add_flag("--proper", proper, "model-check the proper-description conditions");
  check->add_option("--budget", max_states, "state budget for --proper");

  auto* optimize = app.add_subcommand("optimize", "run the transformation pipeline");
  std::string out_path, snapshot_dir, passes = "default";
  int max_iterations = 20;
  optimize->add_option("file", path, "description file")->required();
  optimize->add_option("--out", out_path, "output file ('-' for stdout)");
  optimize->add_option("--emit-snapshots", snapshot_dir, "write one .rg per applied pass");
  optimize->add_option("--passes", passes, "default | none | all | comma-separated names");
  optimize->add_option("--max-iterations", max_iterations, "fixed-point iteration cap");

  auto* perft = app.add_subcommand("perft", "count legal move sequences per depth");
  size_t depth = 1;
  perft->add_option("file", path, "description file")->required();
  perft->add_option("depth", depth, "maximum depth")->required();

  auto* bench = app.add_subcommand("bench", "flat Monte Carlo playout throughput");
  uint64_t playouts = 10'000, seed = 0;
  double seconds = 0;
  unsigned workers = 1;
  bool compare = false;
  std::string format = "table";
  bench->add_option("file", path, "description file")->required();
  bench->add_option("--playouts", playouts, "fixed-count mode: number of playouts");
  bench->add_option("--seconds", seconds, "fixed-duration mode: seconds per run");
  bench->add_option("--seed", seed, "master seed");
  bench->add_option("--workers", workers, "parallel workers");
  bench->add_flag("--compare", compare, "also benchmark the optimized game and report the ratio");
  bench->add_option("--format", format, "table | json")
      ->check(CLI::IsMember({"table", "json"}));

  auto* play = app.add_subcommand("play", "interactive terminal session");
  std::vector<std::string> seat_specs;
  uint64_t play_seed = 0;
  play->add_option("file", path, "description file")->required();
  play->add_option("--seat", seat_specs, "seat assignment name=human|random");
  play->add_option("--seed", play_seed, "seed for random seats and the random player");

  auto* dot = app.add_subcommand("dot", "emit a Graphviz view of the automaton");
  std::string dot_out;
  dot->add_option("file", path, "description file")->required();
  dot->add_option("--out", dot_out, "output file ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(path, proper, max_states, json);
    if (optimize->parsed()) return cmd_optimize(path, out_path, snapshot_dir, passes,
                                                max_iterations, json);
    if (perft->parsed()) return cmd_perft(path, depth, json);
    if (bench->parsed()) return cmd_bench(path, playouts, seconds, seed, workers, compare,
                                          json ? "json" : format);
    if (play->parsed()) return cmd_play(path, seat_specs, play_seed);
    if (dot->parsed()) return cmd_dot(path, dot_out, json);
  } catch (const IoFailure& e) {
    std::cerr << "error[Io]: " << e.message << "\n";
    return kExitIo;
  } catch (const rg::RgError& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return kExitDiagnostics;
  }
  return kExitOk;
}
