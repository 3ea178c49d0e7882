#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rg/passes.hpp"
#include "rg/render.hpp"

namespace rg {

struct PipelineConfig {
  std::vector<PassId> enabled;  // empty = nothing runs
  int max_iterations = 20;
  bool collect_snapshots = true;

  static PipelineConfig defaults() {
    PipelineConfig c;
    for (const PassInfo& p : pass_catalog())
      if (p.default_enabled) c.enabled.push_back(p.id);
    return c;
  }

  [[nodiscard]] bool is_enabled(PassId id) const {
    for (PassId e : enabled)
      if (e == id) return true;
    return false;
  }
};

struct PassStats {
  PassId pass;
  size_t nodes_before = 0, nodes_after = 0;
  size_t edges_before = 0, edges_after = 0;
  uint64_t state_size_bits = 0;
  bool changed = false;
};

struct PipelineSnapshot {
  std::string label;  // "NN_passname"
  std::string text;   // rendered description after the pass
};

struct PipelineResult {
  Game game;
  std::vector<PipelineSnapshot> snapshots;
  std::vector<PassStats> stats;
  std::vector<std::string> applied;  // pass names, application order
  int iterations = 0;
  bool reached_fixed_point = true;
};

// Runs the enabled passes to a fixed point: normalizations and expansions
// once up front, the optimization loop until nothing changes or the
// iteration cap is hit, finalizers once at the very end. Every applied pass
// must leave a statically valid description; a violation is a pipeline bug
// and raises PassValidationFailed.
inline PipelineResult run_pipeline(const Game& input, const PipelineConfig& config) {
  PipelineResult res;
  res.game = input;

  auto apply = [&](PassId id) -> bool {
    if (!config.is_enabled(id)) return false;
    PassStats st;
    st.pass = id;
    st.nodes_before = res.game.node_set().size();
    st.edges_before = res.game.edges.size();
    st.changed = run_pass(res.game, id);
    st.nodes_after = res.game.node_set().size();
    st.edges_after = res.game.edges.size();
    st.state_size_bits = passes::state_size_bits(res.game);
    if (!st.changed) return false;
    res.stats.push_back(st);
    res.applied.emplace_back(pass_info(id).name);

    Diagnostics post = validate_static(res.game);
    if (count_errors(post) > 0)
      throw RgError("PassValidationFailed",
                    std::string("pass '") + pass_info(id).name + "' broke the description: " +
                        post.front().message);
    if (config.collect_snapshots) {
      char label[64];
      std::snprintf(label, sizeof label, "%02zu_%s", res.applied.size(), pass_info(id).name);
      res.snapshots.push_back(PipelineSnapshot{label, render_game(res.game)});
    }
    return true;
  };

  for (const PassInfo& p : pass_catalog())
    if (p.phase == PassPhase::Normalize) apply(p.id);

  for (res.iterations = 0; res.iterations < config.max_iterations; ++res.iterations) {
    bool any = false;
    for (const PassInfo& p : pass_catalog())
      if (p.phase == PassPhase::Loop) any |= apply(p.id);
    if (!any) break;
    if (res.iterations + 1 == config.max_iterations) res.reached_fixed_point = false;
  }

  for (const PassInfo& p : pass_catalog())
    if (p.phase == PassPhase::Final) apply(p.id);

  return res;
}

}  // namespace rg
