#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rg/game.hpp"

namespace rg {

// What a bare name in expression position denotes. Resolution precedence is
// variable, then constant, then symbol; validate_static warns on shadowing.
enum class RefKind { Variable, Constant, Symbol, Unknown };

// Semantic view over a description: resolved declaration types, folded
// constant values, and the symbol universe. Build is total; problems are
// collected as diagnostics instead of thrown.
class Env {
 public:
  explicit Env(const Game& g) : game_(g), aliases_(g.alias_map()) {
    for (const auto& d : g.aliases) resolve_decl_type(d.name, d.type);
    for (const auto& d : g.consts) resolve_decl_type(d.name, d.type);
    for (const auto& d : g.vars) resolve_decl_type(d.name, d.type);
    collect_symbols();
    for (const auto& d : g.consts) fold_const(d.name);
  }

  [[nodiscard]] const Game& game() const { return game_; }
  [[nodiscard]] const AliasMap& aliases() const { return aliases_; }
  [[nodiscard]] const Diagnostics& problems() const { return problems_; }

  [[nodiscard]] const TypeExpr* resolved_type_of(NameId decl) const {
    auto it = resolved_.find(decl);
    return it == resolved_.end() ? nullptr : &it->second;
  }

  // Folded constant value: constant references substituted, canonicalized.
  [[nodiscard]] const Value* const_value(NameId name) const {
    auto it = const_values_.find(name);
    return it == const_values_.end() ? nullptr : &it->second;
  }

  [[nodiscard]] bool is_symbol(NameId n) const { return symbols_.count(n) > 0; }

  [[nodiscard]] RefKind classify(NameId n) const {
    if (game_.find_var(n)) return RefKind::Variable;
    if (game_.find_const(n)) return RefKind::Constant;
    if (is_symbol(n)) return RefKind::Symbol;
    return RefKind::Unknown;
  }

  // Substitutes constant references inside a raw value; detects reference
  // cycles and unknown names.
  Value fold_value(const Value& v, std::unordered_set<int32_t>& folding) const {
    if (v.is_symbol()) {
      NameId n = v.sym();
      if (!n.valid()) throw RgError("UnknownName", "malformed value");
      if (game_.find_const(n)) {
        if (folding.count(n.v))
          throw RgError("RecursiveValue", "constant '" + game_.text(n) + "' references itself");
        folding.insert(n.v);
        Value out = fold_value(game_.find_const(n)->value, folding);
        folding.erase(n.v);
        return out;
      }
      if (is_symbol(n)) return v;
      throw RgError("UnknownName", "'" + game_.text(n) + "' is neither a symbol nor a constant");
    }
    const MapData& m = v.map_data();
    Value def = fold_value(m.def, folding);
    std::vector<MapEntry> entries;
    entries.reserve(m.entries.size());
    for (const auto& [k, val] : m.entries) entries.emplace_back(k, fold_value(val, folding));
    return make_map(std::move(def), std::move(entries));
  }

  Value fold_value(const Value& v) const {
    std::unordered_set<int32_t> folding;
    return fold_value(v, folding);
  }

 private:
  const Game& game_;
  AliasMap aliases_;
  std::unordered_map<NameId, TypeExpr> resolved_;
  std::unordered_map<NameId, Value> const_values_;
  std::unordered_set<NameId> symbols_;
  Diagnostics problems_;

  void resolve_decl_type(NameId name, const TypeExpr& t) {
    try {
      resolved_.emplace(name, resolve_type(t, aliases_));
    } catch (const RgError& e) {
      add_error(problems_, e.code(), "in declaration of '" + game_.text(name) + "': " + e.what());
    }
  }

  void collect_symbols() {
    std::function<void(const TypeExpr&)> walk = [&](const TypeExpr& t) {
      if (t.is_set())
        for (NameId s : t.symbols) symbols_.insert(s);
      else if (t.is_arrow()) {
        walk(*t.source);
        walk(*t.dest);
      }
    };
    for (const auto& [name, rt] : resolved_) walk(rt);
  }

  void fold_const(NameId name) {
    try {
      const_values_.emplace(name, canonicalize(fold_value(game_.find_const(name)->value)));
    } catch (const RgError& e) {
      add_error(problems_, e.code(), std::string(e.what()));
    }
  }
};

// --- expression typing ------------------------------------------------------

// Infers the resolved type of an expression. Throws UnknownName /
// AccessOnSetType / UnknownAlias on ill-formed input.
inline TypeExpr infer_expr_type(const Env& env, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Ref: {
      switch (env.classify(e.name)) {
        case RefKind::Variable:
        case RefKind::Constant: {
          const TypeExpr* t = env.resolved_type_of(e.name);
          if (!t) throw RgError("UnknownAlias", "declaration type failed to resolve");
          return *t;
        }
        case RefKind::Symbol:
          return TypeExpr::set({e.name});
        case RefKind::Unknown:
          throw RgError("UnknownName", "unknown name '" + env.game().text(e.name) + "'");
      }
      break;
    }
    case Expr::Kind::Access: {
      TypeExpr base = infer_expr_type(env, e.base());
      if (!base.is_arrow())
        throw RgError("AccessOnSetType", "accessed expression has a set type");
      (void)infer_expr_type(env, e.key());
      return *base.dest;
    }
    case Expr::Kind::Cast: {
      (void)infer_expr_type(env, e.inner());
      return resolve_type(TypeExpr::alias_ref(e.name), env.aliases());
    }
  }
  throw RgError("Internal", "corrupt expression");
}

// --- expression evaluation --------------------------------------------------

enum class EvalMode { Fast, Checked };

using Semistate = std::unordered_map<NameId, Value>;

// Evaluates an expression against a variables assignment. Fast mode uses the
// total map semantics (missing keys yield defaults, casts are free); Checked
// mode additionally verifies cast membership and access-key domains and
// throws CastOutsideDomain / KeyOutsideSourceDomain for improper input.
inline Value eval_expr(const Env& env, const Expr& e, const Semistate& vars, EvalMode mode) {
  switch (e.kind) {
    case Expr::Kind::Ref: {
      switch (env.classify(e.name)) {
        case RefKind::Variable: {
          auto it = vars.find(e.name);
          if (it == vars.end()) throw RgError("UnknownName", "variable missing from semistate");
          return it->second;
        }
        case RefKind::Constant: {
          const Value* v = env.const_value(e.name);
          if (!v) throw RgError("UnknownName", "constant failed to fold");
          return *v;
        }
        case RefKind::Symbol:
          return Value::symbol(e.name);
        case RefKind::Unknown:
          throw RgError("UnknownName", "unknown name '" + env.game().text(e.name) + "'");
      }
      break;
    }
    case Expr::Kind::Access: {
      Value base = eval_expr(env, e.base(), vars, mode);
      Value key = eval_expr(env, e.key(), vars, mode);
      if (!base.is_map() || !key.is_symbol())
        throw RgError("AccessOnSetType", "access needs a map and a symbol key");
      if (mode == EvalMode::Checked) {
        TypeExpr bt = infer_expr_type(env, e.base());
        if (!bt.is_arrow() || !domain_contains(*bt.source, key.sym()))
          throw RgError("KeyOutsideSourceDomain",
                        "key '" + env.game().text(key.sym()) + "' lies outside the source domain");
      }
      return map_lookup(base, key.sym());
    }
    case Expr::Kind::Cast: {
      Value inner = eval_expr(env, e.inner(), vars, mode);
      if (mode == EvalMode::Checked) {
        TypeExpr target = resolve_type(TypeExpr::alias_ref(e.name), env.aliases());
        if (!value_matches_type(inner, target))
          throw RgError("CastOutsideDomain", "cast value lies outside '" +
                                                 env.game().text(e.name) + "'");
      }
      return inner;  // casts only retype; the representation is shared
    }
  }
  throw RgError("Internal", "corrupt expression");
}

// Root variable of an assignment target: an access chain, possibly with
// casts, rooted at a variable reference. Returns invalid id otherwise.
inline NameId assign_root(const Env& env, const Expr& lhs) {
  const Expr* e = &lhs;
  while (true) {
    if (e->kind == Expr::Kind::Access)
      e = &e->base();
    else if (e->kind == Expr::Kind::Cast)
      e = &e->inner();
    else
      break;
  }
  if (e->kind == Expr::Kind::Ref && env.classify(e->name) == RefKind::Variable) return e->name;
  return NameId{};
}

// --- implicit definitions ---------------------------------------------------

// Special names every game revolves around.
struct SpecialNames {
  NameId player_type, score_type, bool_type, goals_type, pos_type, vis_type;
  NameId player_var, goals_var, visible_var;
  NameId keeper, random_, begin, end, zero, one;

  static SpecialNames lookup(NameTable& names) {
    SpecialNames s;
    s.player_type = names.intern("Player");
    s.score_type = names.intern("Score");
    s.bool_type = names.intern("Bool");
    s.goals_type = names.intern("Goals");
    s.pos_type = names.intern("PlayerOrSystem");
    s.vis_type = names.intern("Visibility");
    s.player_var = names.intern("player");
    s.goals_var = names.intern("goals");
    s.visible_var = names.intern("visible");
    s.keeper = names.intern("keeper");
    s.random_ = names.intern("random");
    s.begin = names.intern("begin");
    s.end = names.intern("end");
    s.zero = names.intern("0");
    s.one = names.intern("1");
    return s;
  }

  // Read-only variant for already-injected games; absent names stay invalid.
  static SpecialNames find(const NameTable& names) {
    SpecialNames s;
    s.player_type = names.find("Player");
    s.score_type = names.find("Score");
    s.bool_type = names.find("Bool");
    s.goals_type = names.find("Goals");
    s.pos_type = names.find("PlayerOrSystem");
    s.vis_type = names.find("Visibility");
    s.player_var = names.find("player");
    s.goals_var = names.find("goals");
    s.visible_var = names.find("visible");
    s.keeper = names.find("keeper");
    s.random_ = names.find("random");
    s.begin = names.find("begin");
    s.end = names.find("end");
    s.zero = names.find("0");
    s.one = names.find("1");
    return s;
  }
};

// Adds the built-in definitions that may be omitted (Bool, Goals,
// PlayerOrSystem, player, Visibility, visible) and verifies explicit ones
// against the required shapes. Idempotent.
inline Diagnostics inject_implicit_definitions(Game& g) {
  Diagnostics diags;
  SpecialNames sp = SpecialNames::lookup(g.names);

  AliasMap aliases = g.alias_map();
  auto resolved_or_null = [&](const TypeExpr& t) -> std::optional<TypeExpr> {
    try {
      return resolve_type(t, aliases);
    } catch (const RgError&) {
      return std::nullopt;
    }
  };

  const AliasDecl* player = g.find_alias(sp.player_type);
  if (!player) {
    add_error(diags, "MissingPlayerType", "every game must declare 'type Player'");
    return diags;
  }
  const AliasDecl* score = g.find_alias(sp.score_type);
  if (!score) {
    add_error(diags, "MissingScoreType", "every game must declare 'type Score'");
    return diags;
  }
  auto player_resolved = resolved_or_null(player->type);
  auto score_resolved = resolved_or_null(score->type);
  if (!player_resolved || !player_resolved->is_set() || !score_resolved ||
      !score_resolved->is_set() || score_resolved->symbols.empty()) {
    add_error(diags, "MismatchedBuiltin", "'Player' and 'Score' must be non-empty set types");
    return diags;
  }

  // expected shapes
  TypeExpr bool_expected = TypeExpr::set({sp.zero, sp.one});
  std::vector<NameId> pos_syms = player_resolved->symbols;
  pos_syms.push_back(sp.keeper);
  pos_syms.push_back(sp.random_);
  TypeExpr pos_expected = TypeExpr::set(pos_syms);

  auto ensure_alias = [&](NameId name, TypeExpr declared_form, const TypeExpr& expected) {
    if (const AliasDecl* d = g.find_alias(name)) {
      auto r = resolved_or_null(d->type);
      if (!r || !type_equal(*r, expected))
        add_error(diags, "MismatchedBuiltin",
                  "explicit 'type " + g.text(name) + "' must match its built-in definition",
                  d->span);
      return;
    }
    g.aliases.push_back(AliasDecl{name, std::move(declared_form), Span{}});
    aliases = g.alias_map();
  };

  ensure_alias(sp.bool_type, bool_expected, bool_expected);
  ensure_alias(sp.goals_type,
               TypeExpr::arrow(TypeExpr::alias_ref(sp.player_type), TypeExpr::alias_ref(sp.score_type)),
               TypeExpr::arrow(*player_resolved, *score_resolved));
  ensure_alias(sp.pos_type, pos_expected, pos_expected);
  TypeExpr bool_now = resolved_or_null(TypeExpr::alias_ref(sp.bool_type)).value_or(bool_expected);
  ensure_alias(sp.vis_type,
               TypeExpr::arrow(TypeExpr::alias_ref(sp.player_type), TypeExpr::alias_ref(sp.bool_type)),
               TypeExpr::arrow(*player_resolved, bool_now));

  auto ensure_var = [&](NameId name, NameId type_name, const TypeExpr& expected_type, Value init,
                        bool init_must_match) {
    if (const VarDecl* d = g.find_var(name)) {
      auto r = resolved_or_null(d->type);
      if (!r || !type_equal(*r, expected_type))
        add_error(diags, "MismatchedBuiltin",
                  "explicit 'var " + g.text(name) + "' must have its built-in type", d->span);
      if (init_must_match && !(d->init.is_symbol() && d->init.sym() == init.sym()))
        add_error(diags, "MismatchedBuiltin",
                  "'var " + g.text(name) + "' must start as '" + g.text(init.sym()) + "'", d->span);
      return;
    }
    g.vars.push_back(VarDecl{name, TypeExpr::alias_ref(type_name), std::move(init), Span{}});
  };

  auto goals_resolved = resolved_or_null(TypeExpr::alias_ref(sp.goals_type));
  auto pos_resolved = resolved_or_null(TypeExpr::alias_ref(sp.pos_type));
  auto vis_resolved = resolved_or_null(TypeExpr::alias_ref(sp.vis_type));
  if (!goals_resolved || !pos_resolved || !vis_resolved) return diags;

  ensure_var(sp.player_var, sp.pos_type, *pos_resolved, Value::symbol(sp.keeper), true);
  // goals defaults to the first symbol of Score; visible defaults to all-1
  ensure_var(sp.goals_var, sp.goals_type, *goals_resolved,
             make_map(Value::symbol(score_resolved->symbols.front()), {}), false);
  ensure_var(sp.visible_var, sp.vis_type, *vis_resolved,
             make_map(Value::symbol(sp.one), {}), false);
  return diags;
}

// --- static validation ------------------------------------------------------

namespace detail {

inline void check_value_keys(const Game& g, const Value& v, Diagnostics& diags, Span span) {
  if (!v.is_map()) return;
  const MapData& m = v.map_data();
  std::unordered_set<int32_t> keys;
  for (const auto& [k, val] : m.entries) {
    if (k.valid() && !keys.insert(k.v).second)
      add_error(diags, "DuplicateKey", "duplicate map key '" + g.text(k) + "'", span);
    check_value_keys(g, val, diags, span);
  }
  check_value_keys(g, m.def, diags, span);
}

// Plain-digraph reachability over the edge list.
inline std::unordered_set<int32_t> reachable_nodes(const Game& g, NameId start) {
  std::unordered_set<int32_t> seen{start.v};
  std::vector<NameId> work{start};
  while (!work.empty()) {
    NameId n = work.back();
    work.pop_back();
    for (const auto& e : g.edges)
      if (e.from == n && seen.insert(e.to.v).second) work.push_back(e.to);
  }
  return seen;
}

inline std::unordered_set<int32_t> coreachable_nodes(const Game& g, NameId target) {
  std::unordered_set<int32_t> seen{target.v};
  std::vector<NameId> work{target};
  while (!work.empty()) {
    NameId n = work.back();
    work.pop_back();
    for (const auto& e : g.edges)
      if (e.to == n && seen.insert(e.from.v).second) work.push_back(e.from);
  }
  return seen;
}

// Edges that can lie on some walk from `from` to `to`: source reachable from
// `from`, target co-reachable from `to`.
inline std::vector<size_t> reach_subgraph_edges(const Game& g, NameId from, NameId to) {
  auto fwd = reachable_nodes(g, from);
  auto bwd = coreachable_nodes(g, to);
  std::vector<size_t> out;
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (fwd.count(g.edges[i].from.v) && bwd.count(g.edges[i].to.v)) out.push_back(i);
  return out;
}

}  // namespace detail

// Well-formedness checks on an injected description: expression typing,
// assignability, assignment targets, map keys, reachability possibleness,
// reach-recursion, constant folding and shapes. Report-carrying; a clean
// result has zero Error diagnostics.
inline Diagnostics validate_static(const Game& g) {
  Diagnostics diags;
  Env env(g);
  for (const auto& p : env.problems()) diags.push_back(p);
  SpecialNames sp = SpecialNames::find(g.names);

  // declarations: folded values must match their resolved types
  for (const auto& d : g.consts) {
    detail::check_value_keys(g, d.value, diags, d.span);
    const TypeExpr* t = env.resolved_type_of(d.name);
    if (!t) continue;
    try {
      Value v = env.fold_value(d.value);
      if (!value_matches_type(v, *t))
        add_error(diags, "ValueShapeMismatch",
                  "constant '" + g.text(d.name) + "' does not match its type", d.span);
    } catch (const RgError& e) {
      add_error(diags, e.code(), std::string(e.what()), d.span);
    }
  }
  for (const auto& d : g.vars) {
    detail::check_value_keys(g, d.init, diags, d.span);
    const TypeExpr* t = env.resolved_type_of(d.name);
    if (!t) continue;
    try {
      Value v = env.fold_value(d.init);
      if (!value_matches_type(v, *t))
        add_error(diags, "ValueShapeMismatch",
                  "variable '" + g.text(d.name) + "' initial value does not match its type",
                  d.span);
    } catch (const RgError& e) {
      add_error(diags, e.code(), std::string(e.what()), d.span);
    }
  }

  // shadowing: symbols hidden behind a variable or constant of the same name
  for (const auto& d : g.vars)
    if (env.is_symbol(d.name))
      add_warning(diags, "NameShadowing", "variable '" + g.text(d.name) + "' shadows a symbol",
                  d.span);
  for (const auto& d : g.consts)
    if (env.is_symbol(d.name))
      add_warning(diags, "NameShadowing", "constant '" + g.text(d.name) + "' shadows a symbol",
                  d.span);

  auto check_expr = [&](const Expr& e, Span span) -> std::optional<TypeExpr> {
    try {
      return infer_expr_type(env, e);
    } catch (const RgError& err) {
      add_error(diags, err.code(), std::string(err.what()), span);
      return std::nullopt;
    }
  };

  for (const auto& e : g.edges) {
    const Action& a = e.action;
    switch (a.kind) {
      case Action::Kind::Empty:
        break;
      case Action::Kind::Compare: {
        auto lt = check_expr(a.lhs, a.span);
        auto rt = check_expr(a.rhs, a.span);
        if (lt && rt && !assignable(*lt, *rt))
          add_error(diags, "NotAssignable", "compared expressions have disjoint types", a.span);
        break;
      }
      case Action::Kind::Assign: {
        auto lt = check_expr(a.lhs, a.span);
        auto rt = check_expr(a.rhs, a.span);
        if (lt && rt && !assignable(*lt, *rt))
          add_error(diags, "NotAssignable", "assigned expression has a disjoint type", a.span);
        if (lt && !assign_root(env, a.lhs).valid())
          add_error(diags, "AssignTargetNotVariable",
                    "assignment target must be rooted at a variable", a.span);
        break;
      }
      case Action::Kind::AnyAssign: {
        auto lt = check_expr(a.lhs, a.span);
        if (lt && !assign_root(env, a.lhs).valid())
          add_error(diags, "AssignTargetNotVariable",
                    "assignment target must be rooted at a variable", a.span);
        try {
          TypeExpr dom = resolve_type(TypeExpr::alias_ref(a.domain), env.aliases());
          if (!dom.is_set())
            add_error(diags, "NotASetType", "any-assignment domain must be a set type", a.span);
          else if (lt && !assignable(*lt, dom))
            add_error(diags, "NotAssignable", "any-assignment domain is disjoint from the target",
                      a.span);
        } catch (const RgError& err) {
          add_error(diags, err.code(), std::string(err.what()), a.span);
        }
        break;
      }
      case Action::Kind::Reach:
        break;  // handled below
      case Action::Kind::Tag:
        break;
      case Action::Kind::VarTag: {
        const TypeExpr* t = env.resolved_type_of(a.tag);
        if (!g.find_var(a.tag) || !t)
          add_error(diags, "UnknownName", "variable tag names an unknown variable", a.span);
        else if (!t->is_set())
          add_error(diags, "NotASetType", "variable tag needs a variable of set type", a.span);
        break;
      }
    }
  }

  // reachability possibleness and reach-recursion (static, over nodes)
  std::vector<size_t> reach_edges;
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].action.kind == Action::Kind::Reach) reach_edges.push_back(i);

  std::vector<std::unordered_set<size_t>> subgraph_edges(reach_edges.size());
  for (size_t ci = 0; ci < reach_edges.size(); ++ci) {
    const Edge& e = g.edges[reach_edges[ci]];
    auto fwd = detail::reachable_nodes(g, e.action.from);
    if (!fwd.count(e.action.to.v))
      add_error(diags, "ReachabilityImpossible",
                "no path from '" + g.text(e.action.from) + "' to '" + g.text(e.action.to) + "'",
                e.action.span);
    auto edges = detail::reach_subgraph_edges(g, e.action.from, e.action.to);
    subgraph_edges[ci] = std::unordered_set<size_t>(edges.begin(), edges.end());
  }
  // dependency: check ci may evaluate check cj iff cj's edge lies in ci's subgraph
  {
    size_t n = reach_edges.size();
    std::vector<int> color(n, 0);
    std::function<bool(size_t)> has_cycle = [&](size_t i) -> bool {
      color[i] = 1;
      for (size_t j = 0; j < n; ++j) {
        if (!subgraph_edges[i].count(reach_edges[j])) continue;
        if (color[j] == 1) return true;
        if (color[j] == 0 && has_cycle(j)) return true;
      }
      color[i] = 2;
      return false;
    };
    for (size_t i = 0; i < n; ++i)
      if (color[i] == 0 && has_cycle(i)) {
        add_error(diags, "ReachRecursion", "reachability checks form a recursive cycle",
                  g.edges[reach_edges[i]].action.span);
        break;
      }
  }

  // begin/end structure
  bool begin_out = false, end_in = false;
  for (const auto& e : g.edges) {
    begin_out |= e.from == sp.begin;
    end_in |= e.to == sp.end;
  }
  if (!begin_out)
    add_error(diags, "MissingBegin", "'begin' has no outgoing edge; the game cannot start");
  if (!end_in)
    add_warning(diags, "EndUnreachable", "no edge enters 'end'; no play can complete");

  // heuristic: end should be entered under a player=keeper assignment
  for (const auto& e : g.edges) {
    if (e.to != sp.end) continue;
    const Action& a = e.action;
    bool ok = a.kind == Action::Kind::Assign && assign_root(env, a.lhs) == sp.player_var;
    if (!ok)
      add_warning(diags, "EndWithoutKeeper",
                  "edge into 'end' is not a player assignment; proper games hand the end to the keeper",
                  e.span);
  }

  return diags;
}

}  // namespace rg
