#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rg/compile.hpp"
#include "rg/rng.hpp"

namespace rg {

using Move = std::vector<NameId>;

struct MoveResult {
  GameState next;
  // per real player (declaration order): the obfuscated view of this move
  std::vector<std::pair<NameId, Move>> views;
};

struct Fp {
  uint64_t a = 0, b = 0;
  friend bool operator==(const Fp& x, const Fp& y) { return x.a == y.a && x.b == y.b; }
};

struct FpHasher {
  size_t operator()(const Fp& f) const { return static_cast<size_t>(f.a ^ (f.b * 0x9e3779b97f4a7c15ULL)); }
};

// Scratch state for one top-level traversal. Never shared between concurrent
// queries; reset() is cheap and keeps allocated buckets.
struct TraversalCache {
  struct Config {
    uint64_t budget = 10'000'000;  // transitions per top-level query
    bool exact = false;            // verify fingerprint hits by full comparison
  };

  Config config;
  uint64_t transitions = 0;

  std::unordered_set<Fp, FpHasher> visited;                      // move-search contexts
  std::unordered_map<Fp, char, FpHasher> reach_memo;             // (reach, state) -> bool
  std::vector<std::unordered_set<Fp, FpHasher>> reach_visited_;  // pooled per nesting depth

  // exact mode: every fingerprint keeps the contexts it stands for
  struct ExactCtx {
    int node;
    std::vector<Value> vars;
    Move tags;
  };
  std::unordered_map<Fp, std::vector<ExactCtx>, FpHasher> exact_ctxs;
  std::unordered_map<Fp, std::vector<ExactCtx>, FpHasher> exact_reach_ctxs;

  void reset() {
    transitions = 0;
    clear_search();
    reach_memo.clear();
  }

  void clear_search() {
    visited.clear();
    exact_ctxs.clear();
    exact_reach_ctxs.clear();
    for (auto& s : reach_visited_) s.clear();
  }

  void charge() {
    if (++transitions > config.budget)
      throw RgError("BudgetExceeded", "traversal exceeded its transition budget");
  }
};

namespace detail {

inline Fp fingerprint(const GameState& st, int node, const Hash128& prefix) {
  Fp f;
  f.a = mix64(st.h0 ^ mix64(static_cast<uint64_t>(node) * 0x100000001b3ULL) ^ prefix.a);
  f.b = mix64(st.h1 + prefix.b + static_cast<uint64_t>(node));
  return f;
}

// Undo log for in-place semistate edits during traversal.
struct Trail {
  const CompiledGame& cg;
  GameState& st;
  std::vector<std::pair<int, Value>> entries;

  void write(int slot, Value v) {
    entries.emplace_back(slot, st.vars[static_cast<size_t>(slot)]);
    cg.set_var(st, slot, std::move(v));
  }

  [[nodiscard]] size_t mark() const { return entries.size(); }

  void undo_to(size_t mark) {
    while (entries.size() > mark) {
      cg.set_var(st, entries.back().first, std::move(entries.back().second));
      entries.pop_back();
    }
  }
};

class Traversal {
 public:
  Traversal(const CompiledGame& cg, GameState& st, TraversalCache& cache, bool checked)
      : cg_(cg), st_(st), cache_(cache), checked_(checked), trail_{cg, st, {}} {}

  // Explores every move walk from (st, st.node): a legal walk ending at its
  // first player assignment. `on_move(tags, next_node)` is invoked with the
  // semistate already holding the walk's effects (and rolled back after);
  // returning false aborts the whole search.
  template <typename F>
  void for_each_move_walk(F&& on_move) {
    // tags of the current partial walk; parallel stack of visibility events
    run_search(st_.node, [&](int to_node) { return on_move(tags_, to_node); });
  }

  [[nodiscard]] const Move& tags() const { return tags_; }
  [[nodiscard]] const std::vector<std::vector<bool>>& tag_visibility() const { return tag_vis_; }

  // Constrains tag edges to spell out `want` exactly (move application).
  void constrain(const Move* want) { want_ = want; }

  bool reach_eval(int reach_id) { return reach_eval_impl(reach_id, 0); }

 private:
  const CompiledGame& cg_;
  GameState& st_;
  TraversalCache& cache_;
  bool checked_;
  Trail trail_;
  Move tags_;
  std::vector<std::vector<bool>> tag_vis_;  // per recorded tag: visibility per real player
  std::vector<Hash128> prefix_stack_{Hash128{0x7461, 0x6773}};
  const Move* want_ = nullptr;

  struct Frame {
    int node;
    size_t next = 0;    // index into the adjacency list
    size_t trail_mark;  // undo point for the edge that entered this frame
    size_t tag_mark;    // prefix_stack_ always holds tag_mark + 1 hashes
  };

  bool seen_context(const Fp& fp, int node) {
    if (!cache_.config.exact) return !cache_.visited.insert(fp).second;
    auto& bucket = cache_.exact_ctxs[fp];
    for (const auto& c : bucket) {
      if (c.node != node || c.tags != tags_) continue;
      bool same = true;
      for (size_t i = 0; i < st_.vars.size() && same; ++i)
        same = structural_equal(c.vars[i], st_.vars[i]);
      if (same) return true;
    }
    bucket.push_back(TraversalCache::ExactCtx{node, st_.vars, tags_});
    return false;
  }

  // Evaluates one edge at the current semistate: returns true when legal and
  // applied (effects recorded on the trail). Player assignments are handled
  // by the caller and never reach here.
  bool try_action(const CompiledEdge& e) {
    const CompiledAction& a = e.act;
    switch (a.kind) {
      case Action::Kind::Empty:
        return true;
      case Action::Kind::Tag:
        return true;  // recorded by the caller
      case Action::Kind::Compare: {
        Value l = eval_compiled(cg_, a.lhs, st_, checked_);
        Value r = eval_compiled(cg_, a.rhs, st_, checked_);
        return value_equal(a.cmp_type, l, r) == a.equal;
      }
      case Action::Kind::Assign: {
        apply_assign(a);
        return true;
      }
      case Action::Kind::Reach: {
        bool found = reach_eval_impl(a.reach_id, 0);
        return found == a.positive;
      }
      default:
        throw RgError("Internal", "unexpected action kind in traversal");
    }
  }

  void apply_assign(const CompiledAction& a) {
    Value nv = eval_compiled(cg_, a.rhs, st_, checked_);
    if (a.keys.empty()) {
      if (checked_ && !value_matches_type(nv, cg_.var_types[static_cast<size_t>(a.slot)]))
        throw RgError("AssignOutsideDomain", "assigned value lies outside the variable's type");
      trail_.write(a.slot, std::move(nv));
      return;
    }
    std::vector<NameId> keys;
    keys.reserve(a.keys.size());
    for (const auto& k : a.keys) {
      Value kv = eval_compiled(cg_, k, st_, checked_);
      if (!kv.is_symbol())
        throw RgError("AssignOutsideDomain", "assignment key evaluated to a map");
      keys.push_back(kv.sym());
    }
    Value root = write_at(cg_.var_types[static_cast<size_t>(a.slot)],
                          st_.vars[static_cast<size_t>(a.slot)], keys, std::move(nv), checked_);
    trail_.write(a.slot, std::move(root));
  }

  void record_tag(NameId tag) {
    tags_.push_back(tag);
    const Value& vis = st_.vars[static_cast<size_t>(cg_.visible_slot)];
    std::vector<bool> bits(cg_.players.size());
    for (size_t i = 0; i < cg_.players.size(); ++i)
      bits[i] = map_lookup(vis, cg_.players[i]).is_symbol() &&
                map_lookup(vis, cg_.players[i]).sym() == cg_.one_sym;
    tag_vis_.push_back(std::move(bits));
    Hash128 h = prefix_stack_.back();
    prefix_stack_.push_back(hash_combine(h, static_cast<uint64_t>(tag.v)));
  }

  void pop_tags_to(size_t mark) {
    tags_.resize(mark);
    tag_vis_.resize(mark);
    prefix_stack_.resize(mark + 1);
  }

  template <typename F>
  void run_search(int root, F&& on_complete) {
    if (root == cg_.end_node) return;  // terminal states have no moves
    std::vector<Frame> stack;
    stack.push_back(Frame{root, 0, trail_.mark(), tags_.size()});
    Fp fp0 = fingerprint(st_, root, prefix_stack_.back());
    seen_context(fp0, root);

    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& out = cg_.adj[static_cast<size_t>(f.node)];
      if (f.next >= out.size()) {
        trail_.undo_to(f.trail_mark);
        pop_tags_to(f.tag_mark);
        stack.pop_back();
        continue;
      }
      const CompiledEdge& e = cg_.edges[static_cast<size_t>(out[f.next++])];
      cache_.charge();

      if (e.act.kind == Action::Kind::Assign && e.act.player_assign) {
        if (want_ && tags_.size() != want_->size()) continue;
        size_t m = trail_.mark();
        apply_assign(e.act);
        bool keep_going = on_complete(e.to);
        trail_.undo_to(m);
        if (!keep_going) {
          // unwind everything before returning
          trail_.undo_to(stack.front().trail_mark);
          pop_tags_to(stack.front().tag_mark);
          return;
        }
        continue;
      }

      if (e.act.kind == Action::Kind::Tag) {
        if (want_) {
          if (tags_.size() >= want_->size() || (*want_)[tags_.size()] != e.act.tag) continue;
        }
      }

      size_t m = trail_.mark();
      size_t tm = tags_.size();
      bool legal;
      try {
        legal = try_action(e);
      } catch (...) {
        trail_.undo_to(m);
        throw;
      }
      if (!legal) {
        trail_.undo_to(m);
        continue;
      }
      if (e.act.kind == Action::Kind::Tag) record_tag(e.act.tag);

      if (e.to == cg_.end_node) {
        // a walk may only finish end-bound through a player assignment
        trail_.undo_to(m);
        pop_tags_to(tm);
        continue;
      }
      Fp fp = fingerprint(st_, e.to, prefix_stack_.back());
      if (seen_context(fp, e.to)) {
        trail_.undo_to(m);
        pop_tags_to(tm);
        continue;
      }
      stack.push_back(Frame{e.to, 0, m, tm});
    }
  }

  // In exact mode fingerprint pruning and the reach memo are verified or
  // bypassed, trading speed for collision-free results.
  bool reach_seen(std::unordered_set<Fp, FpHasher>& visited, const Fp& fp, int node) {
    if (!cache_.config.exact) return !visited.insert(fp).second;
    visited.insert(fp);
    auto& bucket = cache_.exact_reach_ctxs[fp];
    for (const auto& c : bucket) {
      if (c.node != node) continue;
      bool same = true;
      for (size_t i = 0; i < st_.vars.size() && same; ++i)
        same = structural_equal(c.vars[i], st_.vars[i]);
      if (same) return true;
    }
    bucket.push_back(TraversalCache::ExactCtx{node, st_.vars, {}});
    return false;
  }

  bool reach_eval_impl(int reach_id, int depth) {
    const ReachSub& sub = cg_.reaches[static_cast<size_t>(reach_id)];
    if (sub.from == sub.to) return true;  // zero-length walk

    Fp memo_key;
    memo_key.a = mix64(st_.h0 ^ (static_cast<uint64_t>(reach_id) * 0x9e3779b97f4a7c15ULL));
    memo_key.b = mix64(st_.h1 + static_cast<uint64_t>(reach_id));
    if (!cache_.config.exact) {
      if (auto it = cache_.reach_memo.find(memo_key); it != cache_.reach_memo.end())
        return it->second != 0;
    }

    while (cache_.reach_visited_.size() <= static_cast<size_t>(depth))
      cache_.reach_visited_.emplace_back();
    auto& visited = cache_.reach_visited_[static_cast<size_t>(depth)];
    std::vector<Fp> inserted;

    struct RFrame {
      int node;
      size_t next = 0;
      size_t trail_mark;
    };
    std::vector<RFrame> stack;
    stack.push_back(RFrame{sub.from, 0, trail_.mark()});
    {
      Fp fp = fingerprint(st_, sub.from, Hash128{0x7263, static_cast<uint64_t>(reach_id)});
      reach_seen(visited, fp, sub.from);
      inserted.push_back(fp);
    }
    bool found = false;

    while (!stack.empty() && !found) {
      RFrame& f = stack.back();
      const auto& out = sub.adj[static_cast<size_t>(f.node)];
      if (f.next >= out.size()) {
        trail_.undo_to(f.trail_mark);
        stack.pop_back();
        continue;
      }
      const CompiledEdge& e = cg_.edges[static_cast<size_t>(out[f.next++])];
      cache_.charge();

      size_t m = trail_.mark();
      bool legal;
      if (e.act.kind == Action::Kind::Assign) {
        // inside a reachability walk, player assignments are ordinary writes
        try {
          apply_assign(e.act);
          legal = true;
        } catch (...) {
          trail_.undo_to(m);
          throw;
        }
      } else {
        try {
          legal = try_action_reach(e, depth);
        } catch (...) {
          trail_.undo_to(m);
          throw;
        }
      }
      if (!legal) {
        trail_.undo_to(m);
        continue;
      }
      if (e.to == sub.to) {
        trail_.undo_to(m);
        found = true;
        break;
      }
      if (e.to == cg_.end_node) {
        trail_.undo_to(m);
        continue;
      }
      Fp fp = fingerprint(st_, e.to, Hash128{0x7263, static_cast<uint64_t>(reach_id)});
      if (reach_seen(visited, fp, e.to)) {
        trail_.undo_to(m);
        continue;
      }
      inserted.push_back(fp);
      stack.push_back(RFrame{e.to, 0, m});
    }

    // roll back whatever the search still holds
    if (!stack.empty()) trail_.undo_to(stack.front().trail_mark);
    for (const Fp& fp : inserted) {
      visited.erase(fp);
      if (cache_.config.exact) cache_.exact_reach_ctxs.erase(fp);
    }
    if (!cache_.config.exact) cache_.reach_memo.emplace(memo_key, found ? 1 : 0);
    return found;
  }

  bool try_action_reach(const CompiledEdge& e, int depth) {
    const CompiledAction& a = e.act;
    switch (a.kind) {
      case Action::Kind::Empty:
      case Action::Kind::Tag:  // tags inside checks never label moves
        return true;
      case Action::Kind::Compare: {
        Value l = eval_compiled(cg_, a.lhs, st_, checked_);
        Value r = eval_compiled(cg_, a.rhs, st_, checked_);
        return value_equal(a.cmp_type, l, r) == a.equal;
      }
      case Action::Kind::Reach:
        return reach_eval_impl(a.reach_id, depth + 1) == a.positive;
      default:
        throw RgError("Internal", "unexpected action kind in reach walk");
    }
  }
};

}  // namespace detail

// --- public engine operations ------------------------------------------------

// All legal moves for a state: the distinct labelings of its move walks,
// sorted lexicographically by interned tag ids. Deterministic for equal
// states; never mutates `st`.
inline std::vector<Move> legal_moves(const CompiledGame& cg, const GameState& st,
                                     TraversalCache& cache, bool checked = false) {
  cache.reset();
  GameState work = st;
  std::set<Move> out;
  detail::Traversal tr(cg, work, cache, checked);
  tr.for_each_move_walk([&](const Move& tags, int) {
    out.insert(tags);
    return true;
  });
  return {out.begin(), out.end()};
}

// Strict enumeration: every move with the set of distinct outcome states its
// walks lead to (more than one marks a condition-2 violation).
struct MoveOutcomes {
  Move move;
  std::vector<GameState> outcomes;
};

inline std::vector<MoveOutcomes> legal_moves_strict(const CompiledGame& cg, const GameState& st,
                                                    TraversalCache& cache, bool checked = true) {
  cache.reset();
  GameState work = st;
  std::map<Move, std::vector<GameState>> found;
  detail::Traversal tr(cg, work, cache, checked);
  tr.for_each_move_walk([&](const Move& tags, int to_node) {
    GameState outcome = work;
    outcome.node = to_node;
    auto& bucket = found[tags];
    for (const auto& prev : bucket)
      if (cg.states_equal(prev, outcome)) return true;
    bucket.push_back(std::move(outcome));
    return true;
  });
  std::vector<MoveOutcomes> out;
  out.reserve(found.size());
  for (auto& [m, states] : found) out.push_back(MoveOutcomes{m, std::move(states)});
  return out;
}

// Applies a legal move by finding a walk labeled by it. Records, at each tag
// traversal, which players currently see the walk; the per-player views are
// the visible subsequences. Strict mode verifies all walks with this labeling
// agree on the next state.
inline MoveResult apply_move(const CompiledGame& cg, const GameState& st, const Move& move,
                             TraversalCache& cache, bool strict = false, bool checked = false) {
  cache.reset();
  GameState work = st;
  detail::Traversal tr(cg, work, cache, checked);
  tr.constrain(&move);

  std::vector<GameState> outcomes;
  std::vector<std::vector<std::vector<bool>>> vis_per_outcome;
  tr.for_each_move_walk([&](const Move& tags, int to_node) {
    (void)tags;
    GameState outcome = work;
    outcome.node = to_node;
    for (const auto& prev : outcomes)
      if (cg.states_equal(prev, outcome)) return true;
    outcomes.push_back(std::move(outcome));
    vis_per_outcome.push_back(tr.tag_visibility());
    return strict;  // first hit wins unless strict
  });

  if (outcomes.empty()) throw RgError("IllegalMove", "no move walk is labeled by this move");
  if (strict && outcomes.size() > 1)
    throw RgError("AmbiguousMove", "move walks with this labeling disagree on the next state");

  MoveResult res;
  res.next = std::move(outcomes.front());
  const auto& vis = vis_per_outcome.front();
  for (size_t p = 0; p < cg.players.size(); ++p) {
    Move view;
    for (size_t t = 0; t < move.size(); ++t)
      if (vis[t][p]) view.push_back(move[t]);
    res.views.emplace_back(cg.players[p], std::move(view));
  }
  return res;
}

// Standalone reachability query (`? from -> to` / `! from -> to`).
inline bool reach_check(const CompiledGame& cg, int reach_id, bool positive, const GameState& st,
                        TraversalCache& cache, bool checked = false) {
  cache.reset();
  GameState work = st;
  detail::Traversal tr(cg, work, cache, checked);
  return tr.reach_eval(reach_id) == positive;
}

// Advances through keeper moves until a real player is on move or the game
// ends. Uses first-walk search; in a proper game all keeper walks agree.
// `moves_made`, when given, counts the keeper moves applied.
inline GameState advance_keeper(const CompiledGame& cg, const GameState& st, TraversalCache& cache,
                                bool checked = false, uint64_t* moves_made = nullptr) {
  GameState cur = st;
  cache.reset();
  while (true) {
    Observation o = cg.observe(cur);
    if (o.terminal || o.player != cg.keeper_sym) return cur;

    cache.clear_search();
    GameState work = cur;
    detail::Traversal tr(cg, work, cache, checked);
    bool found = false;
    GameState next;
    tr.for_each_move_walk([&](const Move&, int to_node) {
      next = work;
      next.node = to_node;
      found = true;
      return false;  // first walk wins
    });
    if (!found) throw RgError("KeeperStuck", "keeper has no legal move");
    cur = std::move(next);
    if (moves_made) ++(*moves_made);
  }
}

// --- playouts and perft -------------------------------------------------------

struct PlayoutResult {
  Observation final_obs;
  uint64_t length = 0;  // moves applied, keeper moves included
};

// One flat Monte Carlo playout: keeper auto-advanced, every other player
// (random and real alike) draws uniformly among its legal moves.
inline PlayoutResult random_playout(const CompiledGame& cg, const GameState& start, Rng& rng,
                                    TraversalCache& cache, uint64_t max_plies = 1'000'000) {
  GameState cur = start;
  PlayoutResult res;
  while (true) {
    cur = advance_keeper(cg, cur, cache, false, &res.length);
    Observation o = cg.observe(cur);
    if (o.terminal) {
      res.final_obs = std::move(o);
      return res;
    }
    std::vector<Move> moves = legal_moves(cg, cur, cache);
    if (moves.empty())
      throw RgError("ImproperDescription", "non-terminal state with no legal move");
    const Move& pick = moves[rng.below(moves.size())];
    cur = apply_move(cg, cur, pick, cache).next;
    if (++res.length > max_plies)
      throw RgError("BudgetExceeded", "playout exceeded the ply bound");
  }
}

struct PerftResult {
  std::vector<uint64_t> per_depth;        // [k] = move sequences of length k+1
  uint64_t complete_plays = 0;            // plays ending at `end` within depth
  std::map<std::string, uint64_t> terminal_goals;  // rendered goals -> count
};

namespace detail {

inline std::string goals_key(const CompiledGame& cg, const Observation& o) {
  std::string key;
  for (const auto& [p, s] : o.goals) {
    if (!key.empty()) key += ',';
    key += cg.desc.text(p);
    key += '=';
    key += cg.desc.text(s);
  }
  return key;
}

inline void perft_walk(const CompiledGame& cg, const GameState& st, size_t depth, size_t limit,
                       TraversalCache& cache, PerftResult& out) {
  GameState cur = advance_keeper(cg, st, cache);
  Observation o = cg.observe(cur);
  if (o.terminal) {
    ++out.complete_plays;
    ++out.terminal_goals[goals_key(cg, o)];
    return;
  }
  if (depth == limit) return;
  std::vector<Move> moves = legal_moves(cg, cur, cache);
  out.per_depth[depth] += moves.size();
  for (const Move& m : moves)
    perft_walk(cg, apply_move(cg, cur, m, cache).next, depth + 1, limit, cache, out);
}

}  // namespace detail

// Counts legal move sequences per depth; keeper moves are auto-advanced and
// do not count as a ply. Terminal states are leaves and accumulate into the
// complete-play count and the terminal goals multiset.
inline PerftResult perft(const CompiledGame& cg, const GameState& st, size_t depth,
                         TraversalCache& cache) {
  PerftResult out;
  out.per_depth.assign(depth, 0);
  detail::perft_walk(cg, st, 0, depth, cache, out);
  return out;
}

}  // namespace rg
