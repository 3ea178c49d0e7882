#pragma once

#include <functional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rg/dataflow.hpp"
#include "rg/expand.hpp"
#include "rg/render.hpp"
#include "rg/sema.hpp"

namespace rg::passes {

// One reachability pattern `from -> to` with its reduced subgraph and every
// check edge that references it.
struct ReachPattern {
  NameId from, to;
  std::vector<size_t> edges;           // description edge indices in the subgraph
  std::unordered_set<int32_t> nodes;   // subgraph nodes incl. from/to
  std::vector<size_t> check_sites;     // edges whose action is this check
};

inline std::vector<ReachPattern> reach_patterns(const Game& g) {
  std::vector<ReachPattern> out;
  std::unordered_map<uint64_t, size_t> index;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Action& a = g.edges[i].action;
    if (a.kind != Action::Kind::Reach) continue;
    uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(a.from.v)) << 32) |
                   static_cast<uint32_t>(a.to.v);
    auto it = index.find(key);
    if (it == index.end()) {
      ReachPattern p;
      p.from = a.from;
      p.to = a.to;
      p.edges = detail::reach_subgraph_edges(g, a.from, a.to);
      p.nodes.insert(a.from.v);
      p.nodes.insert(a.to.v);
      for (size_t ei : p.edges) {
        p.nodes.insert(g.edges[ei].from.v);
        p.nodes.insert(g.edges[ei].to.v);
      }
      it = index.emplace(key, out.size()).first;
      out.push_back(std::move(p));
    }
    out[it->second].check_sites.push_back(i);
  }
  return out;
}

inline std::unordered_set<int32_t> reach_endpoint_nodes(const Game& g) {
  std::unordered_set<int32_t> out;
  for (const Edge& e : g.edges)
    if (e.action.kind == Action::Kind::Reach) {
      out.insert(e.action.from.v);
      out.insert(e.action.to.v);
    }
  return out;
}

// Applies `fn` to every expression of every action, allowing in-place
// rewriting. `fn` sees each expression tree root: compare sides, assignment
// sides, any-assignment target.
inline void for_each_action_expr(Game& g, const std::function<void(Expr&)>& fn) {
  for (Edge& e : g.edges) {
    switch (e.action.kind) {
      case Action::Kind::Compare:
      case Action::Kind::Assign:
        fn(e.action.lhs);
        fn(e.action.rhs);
        break;
      case Action::Kind::AnyAssign:
        fn(e.action.lhs);
        break;
      default:
        break;
    }
  }
}

// Rewrites every subexpression bottom-up; `fn` may replace a node by
// returning a new expression.
inline void rewrite_expr(Expr& e, const std::function<bool(Expr&)>& fn) {
  for (Expr& k : e.kids) rewrite_expr(k, fn);
  fn(e);
}

inline size_t in_degree(const Game& g, NameId node) {
  size_t n = 0;
  for (const Edge& e : g.edges)
    if (e.to == node) ++n;
  return n;
}

inline std::vector<size_t> out_edges(const Game& g, NameId node) {
  std::vector<size_t> out;
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].from == node) out.push_back(i);
  return out;
}

inline void erase_edges(Game& g, const std::set<size_t>& dead) {
  if (dead.empty()) return;
  std::vector<Edge> kept;
  kept.reserve(g.edges.size() - dead.size());
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (!dead.count(i)) kept.push_back(std::move(g.edges[i]));
  g.edges = std::move(kept);
}

// Is this action an assignment whose target root is the given variable?
inline bool assigns_var(const Env& env, const Action& a, NameId var) {
  if (a.kind != Action::Kind::Assign && a.kind != Action::Kind::AnyAssign) return false;
  return assign_root(env, a.lhs) == var;
}

inline bool is_player_assign(const Game& g, const Env& env, const Action& a) {
  NameId player = g.names.find("player");
  return player.valid() && a.kind == Action::Kind::Assign && assigns_var(env, a, player) &&
         a.lhs.kind != Expr::Kind::Access;
}

// State size in bits: per variable the number of cells times the bits per
// cell, the metric the pipeline reports.
inline uint64_t state_size_bits(const Game& g) {
  Env env(g);
  auto bits_for = [](const TypeExpr& t) -> uint64_t {
    std::function<uint64_t(const TypeExpr&)> rec = [&](const TypeExpr& ty) -> uint64_t {
      if (ty.is_set()) {
        uint64_t n = ty.symbols.size();
        uint64_t bits = 0;
        while ((1ull << bits) < n) ++bits;
        return bits;
      }
      return ty.source->symbols.size() * rec(*ty.dest);
    };
    return rec(t);
  };
  uint64_t total = 0;
  for (const auto& v : g.vars)
    if (const TypeExpr* t = env.resolved_type_of(v.name)) total += bits_for(*t);
  return total;
}

// First declared alias whose resolved type equals `resolved`.
inline NameId find_alias_for(const Game& g, const Env& env, const TypeExpr& resolved) {
  for (const auto& d : g.aliases) {
    const TypeExpr* r = env.resolved_type_of(d.name);
    if (r && type_equal(*r, resolved)) return d.name;
  }
  return NameId{};
}

// Validity probe for a rewritten action: every expression must still infer
// and the static assignability rules must hold.
inline bool action_still_valid(const Game& g, const Action& a) {
  Env env(g);
  try {
    switch (a.kind) {
      case Action::Kind::Compare:
        return assignable(infer_expr_type(env, a.lhs), infer_expr_type(env, a.rhs));
      case Action::Kind::Assign:
        return assignable(infer_expr_type(env, a.lhs), infer_expr_type(env, a.rhs)) &&
               assign_root(env, a.lhs).valid();
      case Action::Kind::AnyAssign: {
        TypeExpr dom = resolve_type(TypeExpr::alias_ref(a.domain), env.aliases());
        return dom.is_set() && assignable(infer_expr_type(env, a.lhs), dom) &&
               assign_root(env, a.lhs).valid();
      }
      default:
        return true;
    }
  } catch (const RgError&) {
    return false;
  }
}

}  // namespace rg::passes
