#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rg/passes_util.hpp"

namespace rg::passes {

// --- normalizations -----------------------------------------------------------

// Wraps the top-level expressions of comparisons and assignment sources in a
// cast to their inferred type, when a declared alias names that type.
inline bool add_explicit_casts(Game& g) {
  Env env(g);
  bool changed = false;
  auto wrap = [&](Expr& e) {
    if (e.kind == Expr::Kind::Cast) return;
    // a bare symbol already denotes its singleton type; casting it adds nothing
    if (e.kind == Expr::Kind::Ref && env.classify(e.name) == RefKind::Symbol) return;
    TypeExpr t;
    try {
      t = infer_expr_type(env, e);
    } catch (const RgError&) {
      return;
    }
    NameId alias = find_alias_for(g, env, t);
    if (!alias.valid()) return;
    e = Expr::cast(alias, std::move(e), e.span);
    changed = true;
  };
  for (Edge& e : g.edges) {
    switch (e.action.kind) {
      case Action::Kind::Compare:
        wrap(e.action.lhs);
        wrap(e.action.rhs);
        break;
      case Action::Kind::Assign:
        wrap(e.action.rhs);
        break;
      default:
        break;
    }
  }
  return changed;
}

// Hoists nested map literals into fresh constants so maps appear only at the
// top level; variable initial values become plain constant references.
inline bool normalize_constants(Game& g) {
  bool changed = false;
  // dedup hoisted constants by (type syntax, value syntax)
  std::map<std::string, NameId> hoisted;

  // declared subtype syntax one access level down, following alias names
  std::function<std::optional<TypeExpr>(const TypeExpr&)> dest_syntax =
      [&](const TypeExpr& t) -> std::optional<TypeExpr> {
    if (t.is_arrow()) return *t.dest;
    if (t.is_alias()) {
      const AliasDecl* d = g.find_alias(t.alias);
      if (d) return dest_syntax(d->type);
      return std::nullopt;
    }
    return std::nullopt;
  };

  std::function<Value(const Value&, const TypeExpr&)> hoist_children;
  auto hoist = [&](const Value& v, const TypeExpr& type_syntax) -> NameId {
    Value inner = hoist_children(v, type_syntax);
    std::string key;
    render_type(g, type_syntax, key);
    key += '=';
    render_value(g, inner, key);
    auto it = hoisted.find(key);
    if (it != hoisted.end()) return it->second;
    NameId name = fresh_name(g, "_Hoisted_" + std::to_string(hoisted.size() + 1));
    g.consts.push_back(ConstDecl{name, type_syntax, std::move(inner), Span{}});
    hoisted.emplace(key, name);
    return name;
  };
  hoist_children = [&](const Value& v, const TypeExpr& type_syntax) -> Value {
    if (v.is_symbol()) return v;
    const MapData& m = v.map_data();
    std::optional<TypeExpr> sub = dest_syntax(type_syntax);
    auto lower = [&](const Value& child) -> Value {
      if (!child.is_map()) return child;
      if (!sub) return child;  // shape mismatch: leave for the validators
      changed = true;
      return Value::symbol(hoist(child, *sub));
    };
    Value def = lower(m.def);
    std::vector<MapEntry> entries;
    entries.reserve(m.entries.size());
    for (const auto& [k, val] : m.entries) entries.emplace_back(k, lower(val));
    return make_map(std::move(def), std::move(entries));
  };

  for (size_t i = 0; i < g.consts.size(); ++i) {
    // indices stay valid: hoisting appends
    Value nv = hoist_children(g.consts[i].value, g.consts[i].type);
    if (!value_syntax_equal(g.names, nv, g.names, g.consts[i].value)) {
      g.consts[i].value = std::move(nv);
      changed = true;
    }
  }
  for (auto& v : g.vars) {
    if (!v.init.is_map()) continue;
    v.init = Value::symbol(hoist(v.init, v.type));
    changed = true;
  }
  return changed;
}

// Makes arrow types appear only inside alias definitions, one level deep:
// every arrow child becomes an alias reference and declaration types lose
// inline arrows.
inline bool normalize_types(Game& g) {
  bool changed = false;

  std::function<NameId(const TypeExpr&)> alias_for;
  std::function<TypeExpr(const TypeExpr&)> as_child = [&](const TypeExpr& t) -> TypeExpr {
    if (t.is_alias()) return t;
    return TypeExpr::alias_ref(alias_for(t));
  };
  alias_for = [&](const TypeExpr& t) -> NameId {
    {
      Env env(g);
      try {
        TypeExpr resolved = resolve_type(t, env.aliases());
        NameId existing = find_alias_for(g, env, resolved);
        if (existing.valid()) return existing;
      } catch (const RgError&) {
      }
    }
    TypeExpr def = t.is_arrow() ? TypeExpr::arrow(as_child(*t.source), as_child(*t.dest)) : t;
    NameId name = fresh_name(g, "_Type_" + std::to_string(g.aliases.size() + 1));
    g.aliases.push_back(AliasDecl{name, std::move(def), Span{}});
    changed = true;
    return name;
  };

  for (size_t i = 0; i < g.aliases.size(); ++i) {
    if (!g.aliases[i].type.is_arrow()) continue;
    TypeExpr def = g.aliases[i].type;
    TypeExpr src = as_child(*def.source);
    TypeExpr dst = as_child(*def.dest);
    if (!type_syntax_equal(g.names, src, g.names, *def.source) ||
        !type_syntax_equal(g.names, dst, g.names, *def.dest)) {
      g.aliases[i].type = TypeExpr::arrow(std::move(src), std::move(dst));
      changed = true;
    }
  }
  auto flatten_decl = [&](TypeExpr& t) {
    bool has_arrow = t.is_arrow();
    if (!has_arrow) return;
    t = TypeExpr::alias_ref(alias_for(t));
    changed = true;
  };
  for (auto& d : g.consts) flatten_decl(d.type);
  for (auto& d : g.vars) flatten_decl(d.type);
  return changed;
}

// --- expression-oriented passes -------------------------------------------------

// Replaces self comparisons and self assignments with skip edges; a `!=`
// over identical expressions can never hold, so its edge disappears.
inline bool skip_self_assign_compare(Game& g) {
  bool changed = false;
  std::set<size_t> dead;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    Action& a = g.edges[i].action;
    if (a.kind == Action::Kind::Compare && expr_equal(g.names, a.lhs, g.names, a.rhs)) {
      if (a.equal) {
        a = Action::empty(a.span);
      } else {
        dead.insert(i);
      }
      changed = true;
    } else if (a.kind == Action::Kind::Assign && expr_equal(g.names, a.lhs, g.names, a.rhs)) {
      a = Action::empty(a.span);
      changed = true;
    }
  }
  erase_edges(g, dead);
  return changed;
}

// Merges parallel equality edges over the same expression: a group covering
// the whole domain becomes a skip edge, one symbol short of it a single
// inequality. Only fires when that shrinks the automaton.
inline bool compact_comparisons(Game& g) {
  Env env(g);
  bool changed = false;

  auto rhs_symbol = [&](const Expr& e) -> NameId {
    const Expr* cur = &e;
    while (cur->kind == Expr::Kind::Cast) cur = &cur->inner();
    if (cur->kind == Expr::Kind::Ref && env.classify(cur->name) == RefKind::Symbol)
      return cur->name;
    return NameId{};
  };

  // group parallel == edges by (from, to, lhs shape)
  struct Group {
    std::vector<size_t> edges;
    std::vector<NameId> symbols;
  };
  std::vector<Group> groups;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.action.kind != Action::Kind::Compare || !e.action.equal) continue;
    NameId sym = rhs_symbol(e.action.rhs);
    if (!sym.valid()) continue;
    bool placed = false;
    for (Group& grp : groups) {
      const Edge& head = g.edges[grp.edges.front()];
      if (head.from == e.from && head.to == e.to &&
          expr_equal(g.names, head.action.lhs, g.names, e.action.lhs)) {
        grp.edges.push_back(i);
        grp.symbols.push_back(sym);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back(Group{{i}, {sym}});
  }

  std::set<size_t> dead;
  for (const Group& grp : groups) {
    if (grp.edges.size() < 2) continue;
    TypeExpr lt;
    try {
      lt = infer_expr_type(env, g.edges[grp.edges.front()].action.lhs);
    } catch (const RgError&) {
      continue;
    }
    if (!lt.is_set()) continue;
    std::set<int32_t> seen;
    bool in_domain = true;
    for (NameId s : grp.symbols) {
      if (!domain_contains(lt, s)) in_domain = false;
      seen.insert(s.v);
    }
    if (!in_domain) continue;
    if (seen.size() == lt.symbols.size()) {
      // the group is always legal as a whole
      Edge& head = g.edges[grp.edges.front()];
      head.action = Action::empty(head.action.span);
      for (size_t k = 1; k < grp.edges.size(); ++k) dead.insert(grp.edges[k]);
      changed = true;
    } else if (seen.size() + 1 == lt.symbols.size()) {
      NameId missing;
      for (NameId s : lt.symbols)
        if (!seen.count(s.v)) missing = s;
      Edge& head = g.edges[grp.edges.front()];
      head.action = Action::compare(head.action.lhs, Expr::ref(missing, head.action.span),
                                    /*eq=*/false, head.action.span);
      for (size_t k = 1; k < grp.edges.size(); ++k) dead.insert(grp.edges[k]);
      changed = true;
    }
  }
  erase_edges(g, dead);
  return changed;
}

// Inlines constants and variables of known constant value: any subexpression
// that evaluates to a symbol under the per-node constant knowledge becomes
// that symbol, when the action stays statically valid.
inline bool propagate_constants(Game& g) {
  Env env(g);
  FlowGraph fg = FlowGraph::build(g);
  ConstValueAnalysis cva(g, env);
  auto knowledge = analyze(fg, cva, /*check_laws=*/false);
  bool changed = false;

  // only fold expressions that read state or look something up; unwrapping
  // plain casts of symbols would fight the cast normalization
  std::function<bool(const Expr&)> worth_folding = [&](const Expr& e) {
    if (e.kind == Expr::Kind::Access) return true;
    if (e.kind == Expr::Kind::Ref) return env.classify(e.name) == RefKind::Variable;
    for (const Expr& kid : e.kids)
      if (worth_folding(kid)) return true;
    return false;
  };

  auto fold = [&](Expr& root, const ConstValueAnalysis::Domain& k, bool keys_only) {
    std::function<bool(Expr&, bool)> walk = [&](Expr& e, bool replaceable) -> bool {
      // try the whole expression first, then descend
      if (replaceable && e.kind != Expr::Kind::Ref && worth_folding(e)) {
        std::optional<Value> v = cva.try_eval(e, k);
        if (v && v->is_symbol() && env.is_symbol(v->sym())) {
          e = Expr::ref(v->sym(), e.span);
          return true;
        }
      }
      if (replaceable && e.kind == Expr::Kind::Ref &&
          env.classify(e.name) == RefKind::Variable) {
        int idx = cva.index_of(e.name);
        if (idx >= 0 && k[static_cast<size_t>(idx)].tag == 1 &&
            k[static_cast<size_t>(idx)].value.is_symbol()) {
          e = Expr::ref(k[static_cast<size_t>(idx)].value.sym(), e.span);
          return true;
        }
      }
      bool any = false;
      switch (e.kind) {
        case Expr::Kind::Access:
          any |= walk(e.kids[0], replaceable && false);  // spine stays
          any |= walk(e.kids[1], true);
          break;
        case Expr::Kind::Cast:
          any |= walk(e.kids[0], replaceable);
          break;
        default:
          break;
      }
      return any;
    };
    return walk(root, !keys_only);
  };

  for (Edge& e : g.edges) {
    int node = fg.id(e.from);
    if (node < 0) continue;
    const auto& k = knowledge[static_cast<size_t>(node)];
    Action candidate = e.action;
    bool did = false;
    switch (candidate.kind) {
      case Action::Kind::Compare:
        did |= fold(candidate.lhs, k, false);
        did |= fold(candidate.rhs, k, false);
        break;
      case Action::Kind::Assign:
        did |= fold(candidate.rhs, k, false);
        did |= fold(candidate.lhs, k, true);  // only keys inside the target
        break;
      case Action::Kind::AnyAssign:
        did |= fold(candidate.lhs, k, true);
        break;
      default:
        break;
    }
    if (did && action_still_valid(g, candidate)) {
      e.action = std::move(candidate);
      changed = true;
    }
  }
  return changed;
}

namespace detail_inline {

// Plain node reachability over flow edges (reach entries included), used for
// the kill-free-path test.
inline std::unordered_set<int> flow_reachable(const FlowGraph& fg, int start) {
  std::unordered_set<int> seen{start};
  std::vector<int> work{start};
  while (!work.empty()) {
    int n = work.back();
    work.pop_back();
    for (int ei : fg.out[static_cast<size_t>(n)]) {
      int to = fg.edges[static_cast<size_t>(ei)].to;
      if (seen.insert(to).second) work.push_back(to);
    }
  }
  return seen;
}

}  // namespace detail_inline

// Removes an assignment x = expr and substitutes expr into every use of x
// it alone reaches, provided the variables of expr keep their values between
// the assignment point and every use. One definition is rewritten per run;
// the fixed-point loop finds the rest.
inline bool inline_assignment(Game& g) {
  Env env(g);
  SpecialNames sp = SpecialNames::find(g.names);
  FlowGraph fg = FlowGraph::build(g);
  ReachingDefsAnalysis rda(g, env);
  auto rd = analyze(fg, rda, /*check_laws=*/false);
  ActionReads reads(g, env);

  for (size_t di = 0; di < g.edges.size(); ++di) {
    const Edge& def = g.edges[di];
    if (def.action.kind != Action::Kind::Assign) continue;
    if (def.action.lhs.kind == Expr::Kind::Access) continue;  // partial write
    NameId x = assign_root(env, def.action.lhs);
    if (!x.valid()) continue;
    if (x == sp.player_var || x == sp.goals_var || x == sp.visible_var) continue;
    int xi = rda.index_of(x);
    if (xi < 0) continue;

    std::set<NameId> rhs_vars;
    detail::expr_reads(env, def.action.rhs, rhs_vars);
    if (rhs_vars.count(x)) continue;  // x = f(x): substituting would double-apply f

    // uses of x reached by this definition
    std::vector<size_t> uses;
    bool blocked = false;
    for (size_t ui = 0; ui < g.edges.size() && !blocked; ++ui) {
      const Action& ua = g.edges[ui].action;
      if (reads.reads(ua).count(x) == 0) continue;
      int un = fg.id(g.edges[ui].from);
      if (un < 0) continue;
      const auto& defs = rd[static_cast<size_t>(un)][static_cast<size_t>(xi)];
      if (!defs.count(static_cast<int>(di))) continue;
      // this use sees our definition
      if (ua.kind == Action::Kind::Reach || ua.kind == Action::Kind::VarTag ||
          reads.partial_write(ua) == x) {
        blocked = true;  // not a textual position that can hold an expression
        break;
      }
      if (defs.size() != 1) {
        blocked = true;  // another definition also reaches this use
        break;
      }
      uses.push_back(ui);
    }
    if (blocked || uses.empty()) continue;

    // the variables of expr must not be redefined on any def-to-use path
    // (writes to x itself are already covered by the unique-reaching-def rule)
    int def_target = fg.id(def.to);
    if (def_target < 0) continue;
    auto from_def = detail_inline::flow_reachable(fg, def_target);
    bool killed = false;
    for (size_t ki = 0; ki < g.edges.size() && !killed; ++ki) {
      if (ki == di) continue;
      const Action& ka = g.edges[ki].action;
      NameId kw = reads.full_write(ka);
      NameId kp = reads.partial_write(ka);
      NameId target = kw.valid() ? kw : kp;
      if (!target.valid() || !rhs_vars.count(target)) continue;
      int ks = fg.id(g.edges[ki].from);
      if (ks < 0 || !from_def.count(ks)) continue;
      int kt = fg.id(g.edges[ki].to);
      if (kt < 0) continue;
      auto from_kill = detail_inline::flow_reachable(fg, kt);
      for (size_t ui : uses)
        if (from_kill.count(fg.id(g.edges[ui].from))) {
          killed = true;
          break;
        }
    }
    if (killed) continue;

    // rewrite: every use swaps x for expr, the definition becomes a skip
    std::vector<Action> rewritten;
    rewritten.reserve(uses.size());
    bool all_valid = true;
    for (size_t ui : uses) {
      Action candidate = g.edges[ui].action;
      auto substitute = [&](Expr& root, bool keys_only) {
        std::function<void(Expr&, bool)> walk = [&](Expr& ex, bool replaceable) {
          if (replaceable && ex.kind == Expr::Kind::Ref && ex.name == x) {
            ex = def.action.rhs;
            return;
          }
          switch (ex.kind) {
            case Expr::Kind::Access:
              walk(ex.kids[0], replaceable);
              walk(ex.kids[1], true);
              break;
            case Expr::Kind::Cast:
              walk(ex.kids[0], replaceable);
              break;
            default:
              break;
          }
        };
        walk(root, !keys_only);
      };
      switch (candidate.kind) {
        case Action::Kind::Compare:
          substitute(candidate.lhs, false);
          substitute(candidate.rhs, false);
          break;
        case Action::Kind::Assign:
          substitute(candidate.rhs, false);
          substitute(candidate.lhs, true);
          break;
        case Action::Kind::AnyAssign:
          substitute(candidate.lhs, true);
          break;
        default:
          break;
      }
      if (!action_still_valid(g, candidate)) {
        all_valid = false;
        break;
      }
      rewritten.push_back(std::move(candidate));
    }
    if (!all_valid) continue;

    for (size_t k = 0; k < uses.size(); ++k) g.edges[uses[k]].action = std::move(rewritten[k]);
    g.edges[di].action = Action::empty(g.edges[di].action.span);
    return true;
  }
  return false;
}

// Folds chained constant accesses const1[const2[k]] through a composed
// constant const1_const2[k].
inline bool merge_accesses(Game& g) {
  Env env(g);
  bool changed = false;
  std::map<std::pair<int32_t, int32_t>, NameId> merged;

  auto compose = [&](NameId c1, NameId c2) -> NameId {
    auto key = std::make_pair(c1.v, c2.v);
    auto it = merged.find(key);
    if (it != merged.end()) return it->second;

    const TypeExpr* t1 = env.resolved_type_of(c1);
    const TypeExpr* t2 = env.resolved_type_of(c2);
    const Value* v1 = env.const_value(c1);
    const Value* v2 = env.const_value(c2);
    if (!t1 || !t2 || !v1 || !v2 || !t1->is_arrow() || !t2->is_arrow()) return NameId{};
    if (!t2->dest->is_set() || !t1->source->is_set()) return NameId{};
    if (!assignable(*t2->dest, *t1->source)) return NameId{};

    Value def = map_lookup(*v1, v2->map_data().def.sym());
    std::vector<MapEntry> entries;
    for (const auto& [k, val] : v2->map_data().entries)
      entries.emplace_back(k, map_lookup(*v1, val.sym()));
    Value composed = canonicalize(make_map(std::move(def), std::move(entries)));

    // declared type: c2's source to c1's destination, reusing written syntax
    const ConstDecl* d1 = g.find_const(c1);
    const ConstDecl* d2 = g.find_const(c2);
    TypeExpr src = d2 && d2->type.is_arrow() ? *d2->type.source : *t2->source;
    TypeExpr dst = d1 && d1->type.is_arrow() ? *d1->type.dest : *t1->dest;
    NameId name = fresh_name(g, g.text(c1) + "_" + g.text(c2));
    g.consts.push_back(
        ConstDecl{name, TypeExpr::arrow(std::move(src), std::move(dst)), composed, Span{}});
    merged.emplace(key, name);
    return name;
  };

  for_each_action_expr(g, [&](Expr& root) {
    rewrite_expr(root, [&](Expr& e) {
      if (e.kind != Expr::Kind::Access) return false;
      const Expr& base = e.base();
      const Expr& key = e.key();
      if (base.kind != Expr::Kind::Ref || key.kind != Expr::Kind::Access) return false;
      if (key.base().kind != Expr::Kind::Ref) return false;
      NameId c1 = base.name, c2 = key.base().name;
      if (env.classify(c1) != RefKind::Constant || env.classify(c2) != RefKind::Constant)
        return false;
      NameId m = compose(c1, c2);
      if (!m.valid()) return false;
      Expr inner_key = key.key();
      e = Expr::access(Expr::ref(m, e.span), std::move(inner_key), e.span);
      changed = true;
      return true;
    });
  });
  return changed;
}

// Unsafe: hoists a comparison shared by several outgoing chains to sit
// directly after the fork node, reordering the chains' conditions.
inline bool reorder_conditions(Game& g) {
  auto is_pure_compare = [](const Action& a) { return a.kind == Action::Kind::Compare; };

  std::set<NameId> sources;
  for (const Edge& e : g.edges) sources.insert(e.from);

  for (NameId n : sources) {
    auto outs = out_edges(g, n);
    if (outs.size() < 2) continue;
    // linear chains of pure comparisons through single-degree nodes
    struct Chain {
      std::vector<size_t> edges;
    };
    std::vector<Chain> chains;
    for (size_t ei : outs) {
      Chain c;
      size_t cur = ei;
      for (int len = 0; len < 4; ++len) {
        if (!is_pure_compare(g.edges[cur].action)) break;
        c.edges.push_back(cur);
        NameId next = g.edges[cur].to;
        auto next_out = out_edges(g, next);
        if (next_out.size() != 1 || in_degree(g, next) != 1) break;
        cur = next_out.front();
      }
      if (!c.edges.empty()) chains.push_back(std::move(c));
    }
    if (chains.size() < 2) continue;

    // a label on several chains, not already leading everywhere it occurs
    for (size_t ci = 0; ci < chains.size(); ++ci) {
      for (size_t pos = 0; pos < chains[ci].edges.size(); ++pos) {
        const Action& label = g.edges[chains[ci].edges[pos]].action;
        std::vector<std::pair<size_t, size_t>> holders;  // (chain, position)
        for (size_t cj = 0; cj < chains.size(); ++cj)
          for (size_t pj = 0; pj < chains[cj].edges.size(); ++pj)
            if (action_equal(g.names, g.edges[chains[cj].edges[pj]].action, g.names, label)) {
              holders.emplace_back(cj, pj);
              break;
            }
        if (holders.size() < 2) continue;
        bool already_leading = true;
        for (auto& [cj, pj] : holders) already_leading &= pj == 0;
        if (already_leading) continue;
        // rotate the label to the front of each holder chain
        for (auto& [cj, pj] : holders) {
          if (pj == 0) continue;
          std::vector<Action> acts;
          for (size_t e : chains[cj].edges) acts.push_back(g.edges[e].action);
          Action moved = acts[pj];
          acts.erase(acts.begin() + static_cast<long>(pj));
          acts.insert(acts.begin(), std::move(moved));
          for (size_t k = 0; k < acts.size(); ++k)
            g.edges[chains[cj].edges[k]].action = std::move(acts[k]);
        }
        return true;
      }
    }
  }
  return false;
}

}  // namespace rg::passes
