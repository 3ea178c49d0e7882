#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rg/expand.hpp"
#include "rg/sema.hpp"

namespace rg {

// Expression compiled against a validated game: name kinds resolved, constant
// values folded in, and the type context needed by checked evaluation
// attached to accesses and casts.
struct CompiledExpr {
  enum class Op { Var, Const, Sym, Access, Cast };

  Op op = Op::Sym;
  int slot = -1;          // Var
  Value constant;         // Const (canonical, folded)
  NameId sym;             // Sym
  TypeExpr type;          // Access: base source type; Cast: target type (resolved)
  std::vector<CompiledExpr> kids;
};

struct CompiledAction {
  Action::Kind kind = Action::Kind::Empty;
  // Compare
  CompiledExpr lhs, rhs;
  bool equal = true;
  TypeExpr cmp_type;  // intersected domain context for extensional equality
  // Assign
  int slot = -1;
  std::vector<CompiledExpr> keys;  // root-first access keys
  bool player_assign = false;
  // Reach
  int reach_id = -1;
  bool positive = true;
  // Tag
  NameId tag;
};

struct CompiledEdge {
  int from = -1, to = -1;
  CompiledAction act;
  size_t desc_index = 0;  // index into desc.edges, for diagnostics
};

// Reduced subgraph for one distinct (from, to) reachability pattern: only
// edges that can lie on some from→to walk.
struct ReachSub {
  int from = -1, to = -1;
  std::vector<std::vector<int>> adj;  // node -> compiled edge ids, description order
};

struct GameState {
  std::vector<Value> vars;
  int node = 0;
  uint64_t h0 = 0, h1 = 0;  // incremental semistate hash (node excluded)
};

inline Hash128 slot_hash(int slot, const Value& v) {
  Hash128 vh = value_hash(v);
  uint64_t s = mix64(static_cast<uint64_t>(slot) + 0x426f617264ULL);
  return Hash128{mix64(vh.a ^ s), mix64(vh.b + s)};
}

struct Observation {
  bool terminal = false;
  NameId player;
  std::vector<std::pair<NameId, NameId>> goals;  // player -> score, declaration order
};

// The engine-facing form of a game: shorthands expanded, names resolved to
// dense ids, constants folded, reach subgraphs precomputed. Immutable after
// construction and safely shareable across threads.
class CompiledGame {
 public:
  Game desc;  // the expanded description the engine actually runs

  std::vector<NameId> node_names;
  int begin_node = -1, end_node = -1;

  std::vector<NameId> var_names;
  std::vector<TypeExpr> var_types;  // resolved
  std::vector<Value> var_init;      // canonical
  int player_slot = -1, goals_slot = -1, visible_slot = -1;

  NameId keeper_sym, random_sym, one_sym;
  std::vector<NameId> players;       // real players, declaration order
  std::vector<NameId> score_domain;  // Score symbols, declaration order

  std::vector<CompiledEdge> edges;
  std::vector<std::vector<int>> adj;  // node -> edge ids, description order
  std::vector<ReachSub> reaches;

  [[nodiscard]] int node_id(NameId n) const {
    auto it = node_ids_.find(n.v);
    return it == node_ids_.end() ? -1 : it->second;
  }

  [[nodiscard]] int var_slot(NameId n) const {
    auto it = var_slots_.find(n.v);
    return it == var_slots_.end() ? -1 : it->second;
  }

  [[nodiscard]] std::string node_text(int node) const {
    return std::string(desc.names.text(node_names[static_cast<size_t>(node)]));
  }

  [[nodiscard]] GameState initial_state() const {
    GameState st;
    st.vars = var_init;
    st.node = begin_node;
    for (size_t i = 0; i < st.vars.size(); ++i) {
      Hash128 h = slot_hash(static_cast<int>(i), st.vars[i]);
      st.h0 ^= h.a;
      st.h1 ^= h.b;
    }
    return st;
  }

  void set_var(GameState& st, int slot, Value v) const {
    Hash128 oldh = slot_hash(slot, st.vars[static_cast<size_t>(slot)]);
    Hash128 newh = slot_hash(slot, v);
    st.h0 ^= oldh.a ^ newh.a;
    st.h1 ^= oldh.b ^ newh.b;
    st.vars[static_cast<size_t>(slot)] = std::move(v);
  }

  [[nodiscard]] Observation observe(const GameState& st) const {
    Observation o;
    o.terminal = st.node == end_node;
    const Value& p = st.vars[static_cast<size_t>(player_slot)];
    o.player = p.sym();
    const Value& goals = st.vars[static_cast<size_t>(goals_slot)];
    for (NameId pl : players) o.goals.emplace_back(pl, map_lookup(goals, pl).sym());
    return o;
  }

  [[nodiscard]] bool states_equal(const GameState& a, const GameState& b) const {
    if (a.node != b.node || a.h0 != b.h0 || a.h1 != b.h1) return false;
    for (size_t i = 0; i < a.vars.size(); ++i)
      if (!structural_equal(a.vars[i], b.vars[i])) return false;
    return true;
  }

  friend CompiledGame compile(const Game& source);

 private:
  std::unordered_map<int32_t, int> node_ids_;
  std::unordered_map<int32_t, int> var_slots_;

  int intern_node(NameId n) {
    auto it = node_ids_.find(n.v);
    if (it != node_ids_.end()) return it->second;
    int id = static_cast<int>(node_names.size());
    node_names.push_back(n);
    node_ids_.emplace(n.v, id);
    return id;
  }
};

namespace detail {

inline std::optional<TypeExpr> intersect_types(const TypeExpr& a, const TypeExpr& b) {
  if (a.is_set() && b.is_set()) {
    std::vector<NameId> common;
    for (NameId s : a.symbols)
      if (domain_contains(b, s)) common.push_back(s);
    if (common.empty()) return std::nullopt;
    return TypeExpr::set(std::move(common));
  }
  if (a.is_arrow() && b.is_arrow()) {
    auto s = intersect_types(*a.source, *b.source);
    auto d = intersect_types(*a.dest, *b.dest);
    if (!s || !d) return std::nullopt;
    return TypeExpr::arrow(std::move(*s), std::move(*d));
  }
  return std::nullopt;
}

inline CompiledExpr compile_expr(const Env& env, const CompiledGame& cg,
                                 const std::unordered_map<int32_t, int>& var_slots,
                                 const Expr& e) {
  CompiledExpr out;
  switch (e.kind) {
    case Expr::Kind::Ref: {
      switch (env.classify(e.name)) {
        case RefKind::Variable:
          out.op = CompiledExpr::Op::Var;
          out.slot = var_slots.at(e.name.v);
          return out;
        case RefKind::Constant:
          out.op = CompiledExpr::Op::Const;
          out.constant = *env.const_value(e.name);
          return out;
        case RefKind::Symbol:
          out.op = CompiledExpr::Op::Sym;
          out.sym = e.name;
          return out;
        case RefKind::Unknown:
          throw RgError("UnknownName", "unknown name in compiled expression");
      }
      break;
    }
    case Expr::Kind::Access: {
      out.op = CompiledExpr::Op::Access;
      TypeExpr base_type = infer_expr_type(env, e.base());
      out.type = *base_type.source;  // key domain, for checked evaluation
      out.kids.push_back(compile_expr(env, cg, var_slots, e.base()));
      out.kids.push_back(compile_expr(env, cg, var_slots, e.key()));
      return out;
    }
    case Expr::Kind::Cast: {
      out.op = CompiledExpr::Op::Cast;
      out.type = resolve_type(TypeExpr::alias_ref(e.name), env.aliases());
      out.kids.push_back(compile_expr(env, cg, var_slots, e.inner()));
      return out;
    }
  }
  throw RgError("Internal", "corrupt expression");
}

}  // namespace detail

// Compiles a validated description. Shorthand actions are expanded first on
// an owned copy; the input must already have implicit definitions injected
// and a clean validate_static run.
inline CompiledGame compile(const Game& source) {
  CompiledGame cg;
  cg.desc = source;
  expand_any_assignment(cg.desc);
  expand_variable_tags(cg.desc);

  Game& g = cg.desc;
  Env env(g);
  if (count_errors(env.problems()) > 0)
    throw RgError(env.problems().front().code,
                  "cannot compile an invalid game: " + env.problems().front().message);
  SpecialNames sp = SpecialNames::find(g.names);

  cg.begin_node = cg.intern_node(sp.begin);
  cg.end_node = cg.intern_node(sp.end);
  for (const Edge& e : g.edges) {
    cg.intern_node(e.from);
    cg.intern_node(e.to);
    if (e.action.kind == Action::Kind::Reach) {
      cg.intern_node(e.action.from);
      cg.intern_node(e.action.to);
    }
  }

  for (const VarDecl& d : g.vars) {
    int slot = static_cast<int>(cg.var_names.size());
    cg.var_names.push_back(d.name);
    cg.var_slots_.emplace(d.name.v, slot);
    cg.var_types.push_back(*env.resolved_type_of(d.name));
    cg.var_init.push_back(canonicalize(env.fold_value(d.init)));
  }
  cg.player_slot = cg.var_slot(sp.player_var);
  cg.goals_slot = cg.var_slot(sp.goals_var);
  cg.visible_slot = cg.var_slot(sp.visible_var);
  if (cg.player_slot < 0 || cg.goals_slot < 0 || cg.visible_slot < 0)
    throw RgError("MissingBuiltin", "game lacks player/goals/visible; inject builtins first");

  cg.keeper_sym = sp.keeper;
  cg.random_sym = sp.random_;
  cg.one_sym = sp.one;
  cg.players = resolve_type(TypeExpr::alias_ref(sp.player_type), env.aliases()).symbols;
  cg.score_domain = resolve_type(TypeExpr::alias_ref(sp.score_type), env.aliases()).symbols;

  // reach patterns: one subgraph per distinct (from, to)
  std::unordered_map<uint64_t, int> reach_ids;
  auto reach_key = [](NameId f, NameId t) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(f.v)) << 32) |
           static_cast<uint32_t>(t.v);
  };

  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    CompiledEdge ce;
    ce.from = cg.node_id(e.from);
    ce.to = cg.node_id(e.to);
    ce.desc_index = i;
    CompiledAction& a = ce.act;
    a.kind = e.action.kind;
    switch (e.action.kind) {
      case Action::Kind::Empty:
        break;
      case Action::Kind::Compare: {
        a.lhs = detail::compile_expr(env, cg, cg.var_slots_, e.action.lhs);
        a.rhs = detail::compile_expr(env, cg, cg.var_slots_, e.action.rhs);
        a.equal = e.action.equal;
        auto cmp = detail::intersect_types(infer_expr_type(env, e.action.lhs),
                                           infer_expr_type(env, e.action.rhs));
        if (!cmp) throw RgError("NotAssignable", "comparison over disjoint types");
        a.cmp_type = std::move(*cmp);
        break;
      }
      case Action::Kind::Assign: {
        // collect root-first access keys; casts only retype
        std::vector<const Expr*> keys;
        const Expr* cur = &e.action.lhs;
        while (true) {
          if (cur->kind == Expr::Kind::Access) {
            keys.push_back(&cur->key());
            cur = &cur->base();
          } else if (cur->kind == Expr::Kind::Cast) {
            cur = &cur->inner();
          } else {
            break;
          }
        }
        a.slot = cg.var_slot(cur->name);
        if (a.slot < 0) throw RgError("AssignTargetNotVariable", "assignment root is not a variable");
        for (auto it = keys.rbegin(); it != keys.rend(); ++it)
          a.keys.push_back(detail::compile_expr(env, cg, cg.var_slots_, **it));
        a.rhs = detail::compile_expr(env, cg, cg.var_slots_, e.action.rhs);
        a.player_assign = a.slot == cg.player_slot && a.keys.empty();
        break;
      }
      case Action::Kind::Reach: {
        uint64_t key = reach_key(e.action.from, e.action.to);
        auto it = reach_ids.find(key);
        if (it == reach_ids.end()) {
          it = reach_ids.emplace(key, static_cast<int>(cg.reaches.size())).first;
          ReachSub sub;
          sub.from = cg.node_id(e.action.from);
          sub.to = cg.node_id(e.action.to);
          cg.reaches.push_back(std::move(sub));
        }
        a.reach_id = it->second;
        a.positive = e.action.positive;
        break;
      }
      case Action::Kind::Tag:
        a.tag = e.action.tag;
        break;
      case Action::Kind::AnyAssign:
      case Action::Kind::VarTag:
        throw RgError("Internal", "shorthand action survived expansion");
    }
    cg.edges.push_back(std::move(ce));
  }

  cg.adj.assign(cg.node_names.size(), {});
  for (size_t i = 0; i < cg.edges.size(); ++i)
    cg.adj[static_cast<size_t>(cg.edges[i].from)].push_back(static_cast<int>(i));

  // fill reach subgraphs now that edges have ids
  for (auto& [key, rid] : reach_ids) {
    NameId from{static_cast<int32_t>(key >> 32)};
    NameId to{static_cast<int32_t>(key & 0xffffffff)};
    auto edge_idxs = detail::reach_subgraph_edges(g, from, to);
    ReachSub& sub = cg.reaches[static_cast<size_t>(rid)];
    sub.adj.assign(cg.node_names.size(), {});
    for (size_t di : edge_idxs)
      sub.adj[static_cast<size_t>(cg.edges[di].from)].push_back(static_cast<int>(di));
  }
  return cg;
}

// --- compiled evaluation ----------------------------------------------------

// Evaluates a compiled expression. Fast mode uses the total default-carrying
// map semantics; checked mode verifies cast membership and key domains,
// throwing the improper-description error codes.
inline Value eval_compiled(const CompiledGame& cg, const CompiledExpr& e, const GameState& st,
                           bool checked) {
  switch (e.op) {
    case CompiledExpr::Op::Var:
      return st.vars[static_cast<size_t>(e.slot)];
    case CompiledExpr::Op::Const:
      return e.constant;
    case CompiledExpr::Op::Sym:
      return Value::symbol(e.sym);
    case CompiledExpr::Op::Access: {
      Value base = eval_compiled(cg, e.kids[0], st, checked);
      Value key = eval_compiled(cg, e.kids[1], st, checked);
      if (!base.is_map() || !key.is_symbol())
        throw RgError("KeyOutsideSourceDomain", "access on a non-map or with a map key");
      if (checked && !domain_contains(e.type, key.sym()))
        throw RgError("KeyOutsideSourceDomain",
                      "key '" + cg.desc.text(key.sym()) + "' lies outside the source domain");
      return map_lookup(base, key.sym());
    }
    case CompiledExpr::Op::Cast: {
      Value inner = eval_compiled(cg, e.kids[0], st, checked);
      if (checked && !value_matches_type(inner, e.type))
        throw RgError("CastOutsideDomain", "cast value lies outside the target type");
      return inner;
    }
  }
  throw RgError("Internal", "corrupt compiled expression");
}

}  // namespace rg
