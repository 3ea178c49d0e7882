#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rg/rng.hpp"
#include "rg/sema.hpp"

namespace rg {

// Knowledge flows along real edges and, because a reachability check starts
// walking at its pattern's entry node with the caller's semistate, along a
// synthetic identity edge from each check's source node to that entry.
struct FlowEdge {
  int from = -1, to = -1;
  const Edge* edge = nullptr;  // null for synthetic reach-entry edges
  size_t edge_index = 0;       // index into Game::edges when edge != null
};

struct FlowGraph {
  std::vector<NameId> nodes;
  std::vector<FlowEdge> edges;
  std::vector<std::vector<int>> out;  // per node: flow-edge indices
  int begin = -1;

  [[nodiscard]] int id(NameId n) const {
    auto it = ids_.find(n.v);
    return it == ids_.end() ? -1 : it->second;
  }

  static FlowGraph build(const Game& g) {
    FlowGraph fg;
    auto intern = [&](NameId n) {
      auto it = fg.ids_.find(n.v);
      if (it != fg.ids_.end()) return it->second;
      int id = static_cast<int>(fg.nodes.size());
      fg.nodes.push_back(n);
      fg.ids_.emplace(n.v, id);
      return id;
    };
    NameId begin = g.names.find("begin");
    NameId end = g.names.find("end");
    fg.begin = intern(begin.valid() ? begin : g.names.find("begin"));
    if (end.valid()) intern(end);
    for (size_t i = 0; i < g.edges.size(); ++i) {
      const Edge& e = g.edges[i];
      int from = intern(e.from);
      int to = intern(e.to);
      fg.edges.push_back(FlowEdge{from, to, &e, i});
      if (e.action.kind == Action::Kind::Reach)
        fg.edges.push_back(FlowEdge{from, intern(e.action.from), nullptr, 0});
    }
    fg.out.assign(fg.nodes.size(), {});
    for (size_t i = 0; i < fg.edges.size(); ++i)
      fg.out[static_cast<size_t>(fg.edges[i].from)].push_back(static_cast<int>(i));
    return fg;
  }

 private:
  std::unordered_map<int32_t, int> ids_;
};

// Samples the lattice laws an analysis must satisfy: join commutative,
// associative, idempotent, bot as identity, and transfer monotone w.r.t.
// the join order. Violations throw LatticeLawViolation.
template <typename A>
void verify_lattice_laws(const A& a, const FlowGraph& fg, Rng& rng, int samples) {
  using D = typename A::Domain;
  auto leq = [&](const D& x, const D& y) { return a.equal(a.join(x, y), y); };
  for (int i = 0; i < samples; ++i) {
    D x = a.sample(rng);
    D y = a.sample(rng);
    D z = a.sample(rng);
    if (!a.equal(a.join(x, y), a.join(y, x)))
      throw RgError("LatticeLawViolation", "join is not commutative");
    if (!a.equal(a.join(a.join(x, y), z), a.join(x, a.join(y, z))))
      throw RgError("LatticeLawViolation", "join is not associative");
    if (!a.equal(a.join(x, x), x))
      throw RgError("LatticeLawViolation", "join is not idempotent");
    if (!a.equal(a.join(a.bot(), x), x))
      throw RgError("LatticeLawViolation", "bot is not join's identity");
    if (!fg.edges.empty()) {
      const FlowEdge& e = fg.edges[rng.below(fg.edges.size())];
      D lo = x;
      D hi = a.join(x, y);
      if (!leq(a.transfer(lo, e), a.transfer(hi, e)))
        throw RgError("LatticeLawViolation", "transfer is not monotone");
    }
  }
}

// Iterative worklist fixpoint: knowledge(begin) = extreme, every other node
// the join over incoming transfers. Convergence is bounded by
// |nodes| x lattice height; running past the bound reports NonConvergence.
template <typename A>
std::vector<typename A::Domain> analyze(const FlowGraph& fg, const A& a,
                                        bool check_laws = true) {
  using D = typename A::Domain;
  if (check_laws) {
    Rng rng(0x6c617773);
    verify_lattice_laws(a, fg, rng, 32);
  }

  std::vector<D> knowledge(fg.nodes.size(), a.bot());
  if (fg.begin >= 0) knowledge[static_cast<size_t>(fg.begin)] = a.extreme();

  uint64_t max_updates =
      (static_cast<uint64_t>(fg.nodes.size()) + 1) * (a.height() + 2) + fg.edges.size();
  uint64_t updates = 0;

  // every edge is processed at least once: transfers need not map bot to
  // bot (liveness, for one, generates uses out of nothing)
  std::deque<int> work;
  std::vector<bool> queued(fg.edges.size(), true);
  for (size_t i = 0; i < fg.edges.size(); ++i) work.push_back(static_cast<int>(i));

  while (!work.empty()) {
    int ei = work.front();
    work.pop_front();
    queued[static_cast<size_t>(ei)] = false;
    const FlowEdge& e = fg.edges[static_cast<size_t>(ei)];
    D incoming = a.transfer(knowledge[static_cast<size_t>(e.from)], e);
    D merged = a.join(knowledge[static_cast<size_t>(e.to)], incoming);
    if (a.equal(merged, knowledge[static_cast<size_t>(e.to)])) continue;
    knowledge[static_cast<size_t>(e.to)] = std::move(merged);
    if (++updates > max_updates)
      throw RgError("NonConvergence", "dataflow did not converge within |nodes| x height");
    for (int succ : fg.out[static_cast<size_t>(e.to)])
      if (!queued[static_cast<size_t>(succ)]) {
        work.push_back(succ);
        queued[static_cast<size_t>(succ)] = true;
      }
  }
  return knowledge;
}

// Naive round-robin fixpoint over the same interface; the oracle the
// worklist driver is tested against.
template <typename A>
std::vector<typename A::Domain> analyze_round_robin(const FlowGraph& fg, const A& a) {
  using D = typename A::Domain;
  std::vector<D> knowledge(fg.nodes.size(), a.bot());
  if (fg.begin >= 0) knowledge[static_cast<size_t>(fg.begin)] = a.extreme();
  bool changed = true;
  uint64_t rounds = 0;
  while (changed) {
    changed = false;
    if (++rounds > (fg.nodes.size() + 2) * (a.height() + 2))
      throw RgError("NonConvergence", "round-robin fixpoint did not converge");
    for (const FlowEdge& e : fg.edges) {
      D merged = a.join(knowledge[static_cast<size_t>(e.to)],
                        a.transfer(knowledge[static_cast<size_t>(e.from)], e));
      if (!a.equal(merged, knowledge[static_cast<size_t>(e.to)])) {
        knowledge[static_cast<size_t>(e.to)] = std::move(merged);
        changed = true;
      }
    }
  }
  return knowledge;
}

// --- action read/write sets ---------------------------------------------------

namespace detail {

inline void expr_reads(const Env& env, const Expr& e, std::set<NameId>& out) {
  if (e.kind == Expr::Kind::Ref) {
    if (env.classify(e.name) == RefKind::Variable) out.insert(e.name);
    return;
  }
  for (const Expr& k : e.kids) expr_reads(env, k, out);
}

}  // namespace detail

// Variables an action reads. Reach actions read everything any edge of their
// pattern's subgraph reads (the walk evaluates those edges), computed here by
// a fixpoint over nested checks.
class ActionReads {
 public:
  ActionReads(const Game& g, const Env& env) : g_(g), env_(env) {
    for (size_t i = 0; i < g.edges.size(); ++i)
      if (g.edges[i].action.kind == Action::Kind::Reach) {
        uint64_t key = pattern_key(g.edges[i].action);
        if (!subgraphs_.count(key))
          subgraphs_.emplace(key, detail::reach_subgraph_edges(g, g.edges[i].action.from,
                                                               g.edges[i].action.to));
      }
    // fixpoint: nested checks fold their pattern's reads into the outer one
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& [key, edges] : subgraphs_) {
        std::set<NameId> reads = pattern_reads_[key];
        for (size_t ei : edges) direct_reads(g.edges[ei].action, reads);
        if (reads != pattern_reads_[key]) {
          pattern_reads_[key] = std::move(reads);
          changed = true;
        }
      }
    }
  }

  [[nodiscard]] std::set<NameId> reads(const Action& a) const {
    std::set<NameId> out;
    direct_reads(a, out);
    return out;
  }

  // Full (non-partial) write target, when the action always overwrites it.
  [[nodiscard]] NameId full_write(const Action& a) const {
    if (a.kind == Action::Kind::Assign || a.kind == Action::Kind::AnyAssign) {
      const Expr* e = &a.lhs;
      while (e->kind == Expr::Kind::Cast) e = &e->inner();
      if (e->kind == Expr::Kind::Ref && env_.classify(e->name) == RefKind::Variable)
        return e->name;
    }
    return NameId{};
  }

  // Root of a partial (keyed) write, invalid when the write is full.
  [[nodiscard]] NameId partial_write(const Action& a) const {
    if (a.kind != Action::Kind::Assign && a.kind != Action::Kind::AnyAssign) return NameId{};
    if (full_write(a).valid()) return NameId{};
    return assign_root(env_, a.lhs);
  }

 private:
  static uint64_t pattern_key(const Action& a) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a.from.v)) << 32) |
           static_cast<uint32_t>(a.to.v);
  }

  void direct_reads(const Action& a, std::set<NameId>& out) const {
    switch (a.kind) {
      case Action::Kind::Empty:
      case Action::Kind::Tag:
        return;
      case Action::Kind::VarTag:
        out.insert(a.tag);
        return;
      case Action::Kind::Compare:
        detail::expr_reads(env_, a.lhs, out);
        detail::expr_reads(env_, a.rhs, out);
        return;
      case Action::Kind::Assign: {
        detail::expr_reads(env_, a.rhs, out);
        // access keys of the target are reads; the root itself is read only
        // by a partial write (the untouched part survives)
        const Expr* e = &a.lhs;
        bool partial = false;
        while (true) {
          if (e->kind == Expr::Kind::Access) {
            detail::expr_reads(env_, e->key(), out);
            partial = true;
            e = &e->base();
          } else if (e->kind == Expr::Kind::Cast) {
            e = &e->inner();
          } else {
            break;
          }
        }
        if (partial && e->kind == Expr::Kind::Ref) out.insert(e->name);
        return;
      }
      case Action::Kind::AnyAssign: {
        const Expr* e = &a.lhs;
        bool partial = false;
        while (true) {
          if (e->kind == Expr::Kind::Access) {
            detail::expr_reads(env_, e->key(), out);
            partial = true;
            e = &e->base();
          } else if (e->kind == Expr::Kind::Cast) {
            e = &e->inner();
          } else {
            break;
          }
        }
        if (partial && e->kind == Expr::Kind::Ref) out.insert(e->name);
        return;
      }
      case Action::Kind::Reach: {
        auto it = pattern_reads_.find(pattern_key(a));
        if (it != pattern_reads_.end())
          for (NameId v : it->second) out.insert(v);
        return;
      }
    }
  }

  const Game& g_;
  const Env& env_;
  std::unordered_map<uint64_t, std::vector<size_t>> subgraphs_;
  std::unordered_map<uint64_t, std::set<NameId>> pattern_reads_;
};

// --- concrete analyses ---------------------------------------------------------

// Reaching definitions: per variable, the set of assignment sites (description
// edge indices; -1 is the initial value) that may have produced its current
// value. Partial writes both generate and keep earlier definitions.
class ReachingDefsAnalysis {
 public:
  using Domain = std::vector<std::set<int>>;  // indexed by variable order

  ReachingDefsAnalysis(const Game& g, const Env& env) : g_(g), reads_(g, env) {
    for (size_t i = 0; i < g.vars.size(); ++i) var_index_.emplace(g.vars[i].name.v, i);
  }

  [[nodiscard]] size_t var_count() const { return g_.vars.size(); }
  [[nodiscard]] int index_of(NameId var) const {
    auto it = var_index_.find(var.v);
    return it == var_index_.end() ? -1 : static_cast<int>(it->second);
  }

  [[nodiscard]] Domain bot() const { return Domain(g_.vars.size()); }

  [[nodiscard]] Domain extreme() const {
    Domain d(g_.vars.size());
    for (auto& s : d) s.insert(-1);
    return d;
  }

  [[nodiscard]] Domain join(Domain a, const Domain& b) const {
    for (size_t i = 0; i < a.size(); ++i) a[i].insert(b[i].begin(), b[i].end());
    return a;
  }

  [[nodiscard]] Domain transfer(Domain d, const FlowEdge& e) const {
    if (!e.edge) return d;  // reach entry: caller's knowledge flows in unchanged
    const Action& a = e.edge->action;
    NameId full = reads_.full_write(a);
    if (full.valid()) {
      auto& defs = d[static_cast<size_t>(index_of(full))];
      defs.clear();
      defs.insert(static_cast<int>(e.edge_index));
      return d;
    }
    NameId partial = reads_.partial_write(a);
    if (partial.valid())
      d[static_cast<size_t>(index_of(partial))].insert(static_cast<int>(e.edge_index));
    return d;
  }

  [[nodiscard]] bool equal(const Domain& a, const Domain& b) const { return a == b; }

  [[nodiscard]] size_t height() const {
    return g_.vars.size() * (g_.edges.size() + 2);
  }

  [[nodiscard]] Domain sample(Rng& rng) const {
    Domain d(g_.vars.size());
    for (auto& s : d)
      for (int k = 0; k < 3; ++k)
        if (rng.below(2)) s.insert(static_cast<int>(rng.below(g_.edges.size() + 2)) - 1);
    return d;
  }

 private:
  const Game& g_;
  ActionReads reads_;
  std::unordered_map<int32_t, size_t> var_index_;
};

// Constant values: per variable either unreached, one known value, or
// varying. Feeds constant propagation.
class ConstValueAnalysis {
 public:
  struct Cell {
    // 0 = bot (unreached), 1 = known value, 2 = top (varying)
    int tag = 0;
    Value value;
  };
  using Domain = std::vector<Cell>;

  ConstValueAnalysis(const Game& g, const Env& env) : g_(g), env_(env), reads_(g, env) {
    for (size_t i = 0; i < g.vars.size(); ++i) var_index_.emplace(g.vars[i].name.v, i);
  }

  [[nodiscard]] int index_of(NameId var) const {
    auto it = var_index_.find(var.v);
    return it == var_index_.end() ? -1 : static_cast<int>(it->second);
  }

  [[nodiscard]] Domain bot() const { return Domain(g_.vars.size()); }

  [[nodiscard]] Domain extreme() const {
    Domain d(g_.vars.size());
    for (size_t i = 0; i < g_.vars.size(); ++i) {
      try {
        d[i] = Cell{1, canonicalize(env_.fold_value(g_.vars[i].init))};
      } catch (const RgError&) {
        d[i] = Cell{2, {}};
      }
    }
    return d;
  }

  [[nodiscard]] Domain join(Domain a, const Domain& b) const {
    for (size_t i = 0; i < a.size(); ++i) {
      const Cell& x = a[i];
      const Cell& y = b[i];
      if (y.tag == 0) continue;
      if (x.tag == 0) {
        a[i] = y;
      } else if (x.tag == 2 || y.tag == 2 || (x.tag == 1 && y.tag == 1 &&
                                              !structural_equal(x.value, y.value))) {
        a[i] = Cell{2, {}};
      }
    }
    return a;
  }

  // Evaluates an expression when every variable it touches has a known value.
  [[nodiscard]] std::optional<Value> try_eval(const Expr& e, const Domain& d) const {
    Semistate vars;
    for (size_t i = 0; i < g_.vars.size(); ++i) {
      if (d[i].tag == 1) vars.emplace(g_.vars[i].name, d[i].value);
    }
    try {
      return canonicalize(eval_expr(env_, e, vars, EvalMode::Checked));
    } catch (const RgError&) {
      return std::nullopt;  // an unknown variable or an improper evaluation
    }
  }

  // Monotone transfer: a bot operand keeps the target bot, a varying operand
  // makes it vary, and fully known operands evaluate.
  [[nodiscard]] Domain transfer(Domain d, const FlowEdge& e) const {
    if (!e.edge) return d;
    const Action& a = e.edge->action;
    if (a.kind != Action::Kind::Assign && a.kind != Action::Kind::AnyAssign) return d;
    NameId root = assign_root(env_, a.lhs);
    if (!root.valid()) return d;
    int idx = index_of(root);
    if (idx < 0) return d;
    auto& target = d[static_cast<size_t>(idx)];
    if (a.kind == Action::Kind::AnyAssign) {
      target = Cell{2, {}};
      return d;
    }
    for (NameId r : reads_.reads(a)) {
      int ri = index_of(r);
      if (ri >= 0 && d[static_cast<size_t>(ri)].tag == 0) {
        target = Cell{0, {}};
        return d;
      }
    }
    std::optional<Value> rhs = try_eval(a.rhs, d);
    if (!rhs) {
      target = Cell{2, {}};
      return d;
    }
    const Expr* cur = &a.lhs;
    std::vector<NameId> keys;
    while (true) {
      if (cur->kind == Expr::Kind::Access) {
        std::optional<Value> k = try_eval(cur->key(), d);
        if (!k || !k->is_symbol()) {
          target = Cell{2, {}};
          return d;
        }
        keys.push_back(k->sym());
        cur = &cur->base();
      } else if (cur->kind == Expr::Kind::Cast) {
        cur = &cur->inner();
      } else {
        break;
      }
    }
    if (keys.empty()) {
      target = Cell{1, std::move(*rhs)};
      return d;
    }
    const TypeExpr* vt = env_.resolved_type_of(root);
    if (!vt || target.tag != 1) {
      target = Cell{2, {}};
      return d;
    }
    std::reverse(keys.begin(), keys.end());
    try {
      target = Cell{1, canonicalize(write_at(*vt, target.value, keys, std::move(*rhs), false))};
    } catch (const RgError&) {
      target = Cell{2, {}};
    }
    return d;
  }

  [[nodiscard]] bool equal(const Domain& a, const Domain& b) const {
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i].tag != b[i].tag) return false;
      if (a[i].tag == 1 && !structural_equal(a[i].value, b[i].value)) return false;
    }
    return true;
  }

  [[nodiscard]] size_t height() const { return 2 * g_.vars.size() + 2; }

  [[nodiscard]] Domain sample(Rng& rng) const {
    Domain d(g_.vars.size());
    for (size_t i = 0; i < d.size(); ++i) {
      switch (rng.below(3)) {
        case 0:
          d[i] = Cell{0, {}};
          break;
        case 1: {
          try {
            Value init = canonicalize(env_.fold_value(g_.vars[i].init));
            // flip between the initial value and a plain symbol to get
            // distinct lattice points
            if (rng.below(2))
              d[i] = Cell{1, std::move(init)};
            else
              d[i] = Cell{1, Value::symbol(g_.vars[i].name)};
          } catch (const RgError&) {
            d[i] = Cell{2, {}};
          }
          break;
        }
        default:
          d[i] = Cell{2, {}};
          break;
      }
    }
    return d;
  }

 private:
  const Game& g_;
  const Env& env_;
  ActionReads reads_;
  std::unordered_map<int32_t, size_t> var_index_;
};

// Live variables on the reversed flow graph (a forward fixpoint over reversed
// edges). player, goals and visible are read by the runtime itself and stay
// live everywhere.
class LiveVarsAnalysis {
 public:
  using Domain = std::set<NameId>;

  LiveVarsAnalysis(const Game& g, const Env& env) : g_(g), reads_(g, env) {
    SpecialNames sp = SpecialNames::find(g.names);
    always_live_ = {sp.player_var, sp.goals_var, sp.visible_var};
  }

  [[nodiscard]] Domain bot() const { return {}; }

  [[nodiscard]] Domain extreme() const { return always_live_; }

  [[nodiscard]] Domain join(Domain a, const Domain& b) const {
    a.insert(b.begin(), b.end());
    return a;
  }

  // `e` is an edge of the REVERSED graph: from = original target.
  [[nodiscard]] Domain transfer(Domain d, const FlowEdge& e) const {
    if (!e.edge) return d;
    const Action& a = e.edge->action;
    NameId full = reads_.full_write(a);
    if (full.valid() && !always_live_.count(full)) d.erase(full);
    for (NameId r : reads_.reads(a)) d.insert(r);
    for (NameId v : always_live_) d.insert(v);
    return d;
  }

  [[nodiscard]] bool equal(const Domain& a, const Domain& b) const { return a == b; }

  [[nodiscard]] size_t height() const { return g_.vars.size() + 2; }

  [[nodiscard]] Domain sample(Rng& rng) const {
    Domain d = always_live_;
    for (const auto& v : g_.vars)
      if (rng.below(2)) d.insert(v.name);
    return d;
  }

 private:
  const Game& g_;
  ActionReads reads_;
  Domain always_live_;
};

// Reversed view of a flow graph with a virtual exit as `begin`: every node
// with no ordinary successor (plus `end`) feeds the exit. Built for backward
// analyses run through the forward driver.
inline FlowGraph reverse_flow_graph(const FlowGraph& fg) {
  FlowGraph out;
  out.nodes = fg.nodes;
  out.nodes.push_back(NameId{});  // virtual exit
  int exit_id = static_cast<int>(out.nodes.size()) - 1;
  out.begin = exit_id;
  for (const FlowEdge& e : fg.edges)
    out.edges.push_back(FlowEdge{e.to, e.from, e.edge, e.edge_index});
  // sinks: nodes with no outgoing real edge in the forward graph
  for (size_t n = 0; n < fg.nodes.size(); ++n) {
    bool has_real_out = false;
    for (int ei : fg.out[n])
      if (fg.edges[static_cast<size_t>(ei)].edge) has_real_out = true;
    if (!has_real_out) out.edges.push_back(FlowEdge{exit_id, static_cast<int>(n), nullptr, 0});
  }
  out.out.assign(out.nodes.size(), {});
  for (size_t i = 0; i < out.edges.size(); ++i)
    out.out[static_cast<size_t>(out.edges[i].from)].push_back(static_cast<int>(i));
  return out;
}

}  // namespace rg
