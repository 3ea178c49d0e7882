#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rg/engine.hpp"

namespace rg {

enum class Verdict { Pass, Fail, Unknown };

struct ConditionResult {
  Verdict verdict = Verdict::Pass;
  std::vector<Move> witness;  // play from the initial state to the violation
  Move detail_move;           // condition 2: the ambiguous move
  std::string note;
};

struct ProperReport {
  // conditions[k] is condition k+1: action validity, move unambiguity,
  // continuability, deterministic keeper, game finiteness
  std::array<ConditionResult, 5> conditions;
  bool budget_exhausted = false;
  uint64_t states_visited = 0;

  [[nodiscard]] bool all_pass() const {
    for (const auto& c : conditions)
      if (c.verdict != Verdict::Pass) return false;
    return true;
  }
};

struct ProperBudget {
  uint64_t max_states = 1'000'000;       // game states at move boundaries
  uint64_t transitions = 100'000'000;    // per move-enumeration query
};

// Sweeps the reachable game-state graph (every move explored, keeper states
// included) with checked evaluation, strict all-walks move enumeration and
// an exact-comparison cache, and decides the five proper-description
// conditions. Budget exhaustion downgrades unresolved conditions to Unknown,
// never to a false Pass or Fail.
inline ProperReport check_proper(const CompiledGame& cg, const ProperBudget& budget = {}) {
  ProperReport report;
  TraversalCache cache;
  cache.config.exact = true;
  cache.config.budget = budget.transitions;

  auto fail = [&](int cond, std::vector<Move> witness, Move detail, std::string note) {
    ConditionResult& c = report.conditions[static_cast<size_t>(cond - 1)];
    if (c.verdict == Verdict::Fail) return;  // keep the first witness
    c.verdict = Verdict::Fail;
    c.witness = std::move(witness);
    c.detail_move = std::move(detail);
    c.note = std::move(note);
  };

  struct Node {
    GameState state;
    std::vector<std::pair<Move, GameState>> succs;
    size_t next = 0;
    size_t depth;  // index into `path`
  };

  // exact visited map: 1 = on the current play path, 2 = fully swept
  struct Seen {
    GameState state;
    int color;
    size_t depth;
  };
  std::unordered_map<Fp, std::vector<Seen>, FpHasher> seen;

  auto state_fp = [](const GameState& st) {
    Fp f;
    f.a = mix64(st.h0 ^ (static_cast<uint64_t>(st.node) * 0x9e3779b97f4a7c15ULL));
    f.b = mix64(st.h1 + static_cast<uint64_t>(st.node));
    return f;
  };

  auto find_seen = [&](const GameState& st) -> Seen* {
    auto it = seen.find(state_fp(st));
    if (it == seen.end()) return nullptr;
    for (auto& s : it->second)
      if (cg.states_equal(s.state, st)) return &s;
    return nullptr;
  };

  std::vector<Node> stack;
  std::vector<Move> path;

  // Enumerates a state's moves and successors; returns false when the state
  // should be treated as a leaf (terminal, violation, or budget).
  auto open_state = [&](Node& node) -> bool {
    if (report.states_visited >= budget.max_states) {
      report.budget_exhausted = true;
      return false;
    }
    ++report.states_visited;

    Observation obs = cg.observe(node.state);
    if (obs.terminal) return false;

    std::vector<MoveOutcomes> moves;
    try {
      moves = legal_moves_strict(cg, node.state, cache, /*checked=*/true);
    } catch (const RgError& e) {
      if (e.code() == "BudgetExceeded") {
        report.budget_exhausted = true;
        return false;
      }
      // checked evaluation failed on an outgoing edge: condition 1
      fail(1, path, {}, std::string(e.code()) + ": " + e.what());
      return false;
    }

    for (const auto& mo : moves)
      if (mo.outcomes.size() > 1)
        fail(2, path, mo.move, "move has " + std::to_string(mo.outcomes.size()) +
                                   " distinct next states");
    if (moves.empty()) {
      fail(3, path, {}, "non-terminal state with no legal move");
      return false;
    }
    if (obs.player == cg.keeper_sym && moves.size() != 1)
      fail(4, path, {}, "keeper has " + std::to_string(moves.size()) + " legal moves");

    for (const auto& mo : moves)
      for (const auto& out : mo.outcomes) node.succs.emplace_back(mo.move, out);
    return true;
  };

  Node root{cg.initial_state(), {}, 0, 0};
  seen[state_fp(root.state)].push_back(Seen{root.state, 1, 0});
  if (open_state(root)) {
    stack.push_back(std::move(root));
  } else if (Seen* s = find_seen(root.state)) {
    s->color = 2;
  }

  while (!stack.empty()) {
    Node& top = stack.back();
    if (top.next >= top.succs.size()) {
      if (Seen* s = find_seen(top.state)) s->color = 2;
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    auto& [move, succ] = top.succs[top.next++];
    if (Seen* s = find_seen(succ)) {
      if (s->color == 1) {
        // back edge on the play path: a game state repeats along a play
        std::vector<Move> witness = path;
        witness.push_back(move);
        fail(5, std::move(witness), {},
             "game state repeats from play position " + std::to_string(s->depth));
      }
      continue;
    }
    path.push_back(move);
    Node child{succ, {}, 0, path.size()};
    seen[state_fp(child.state)].push_back(Seen{child.state, 1, path.size()});
    if (open_state(child)) {
      stack.push_back(std::move(child));
    } else {
      if (Seen* s = find_seen(child.state)) s->color = 2;
      path.pop_back();
    }
  }

  if (report.budget_exhausted)
    for (auto& c : report.conditions)
      if (c.verdict == Verdict::Pass) c.verdict = Verdict::Unknown;
  return report;
}

// Replays a witness play: applies the moves in order (keeper moves are part
// of the play) and returns every boundary state, initial state first.
inline std::vector<GameState> replay_witness(const CompiledGame& cg,
                                             const std::vector<Move>& play) {
  TraversalCache cache;
  std::vector<GameState> states{cg.initial_state()};
  for (const Move& m : play)
    states.push_back(apply_move(cg, states.back(), m, cache).next);
  return states;
}

}  // namespace rg
