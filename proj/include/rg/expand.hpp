#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rg/sema.hpp"

namespace rg {

// Fresh names come from the reserved '_' prefix with a collision-avoiding
// counter over the intern table.
inline NameId fresh_name(Game& g, const std::string& stem) {
  if (!g.names.find(stem).valid()) return g.names.intern(stem);
  for (int k = 2;; ++k) {
    std::string cand = stem + "_" + std::to_string(k);
    if (!g.names.find(cand).valid()) return g.names.intern(cand);
  }
}

// `x = T(*)` becomes one parallel assignment edge per member of T, in the
// domain's declaration order.
inline bool expand_any_assignment(Game& g) {
  Env env(g);
  bool changed = false;
  std::vector<Edge> out;
  out.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    if (e.action.kind != Action::Kind::AnyAssign) {
      out.push_back(e);
      continue;
    }
    TypeExpr dom = resolve_type(TypeExpr::alias_ref(e.action.domain), env.aliases());
    for (NameId s : dom.symbols) {
      Edge ne = e;
      ne.action = Action::assign(e.action.lhs, Expr::ref(s, e.action.span), e.action.span);
      out.push_back(std::move(ne));
    }
    changed = true;
  }
  g.edges = std::move(out);
  return changed;
}

// `$$v` becomes, per member `s` of v's set type, a fresh node with a
// comparison `v == T(s)` into it and a tag `$s` out of it.
inline bool expand_variable_tags(Game& g) {
  Env env(g);
  bool changed = false;
  std::vector<Edge> out;
  out.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    if (e.action.kind != Action::Kind::VarTag) {
      out.push_back(e);
      continue;
    }
    NameId var = e.action.tag;
    const VarDecl* decl = g.find_var(var);
    const TypeExpr* t = env.resolved_type_of(var);
    if (!decl || !t || !t->is_set())
      throw RgError("NotASetType", "variable tag needs a variable of set type");
    // cast through the declared alias when there is one, as the expansion
    // must stay expressible in the surface syntax
    NameId type_name =
        decl->type.is_alias() ? decl->type.alias : NameId{};
    for (NameId s : t->symbols) {
      NameId mid = fresh_name(g, "_" + g.text(var) + "_" + g.text(s));
      Expr rhs = type_name.valid() ? Expr::cast(type_name, Expr::ref(s, e.action.span), e.action.span)
                                   : Expr::ref(s, e.action.span);
      Edge cmp;
      cmp.from = e.from;
      cmp.to = mid;
      cmp.action = Action::compare(Expr::ref(var, e.action.span), std::move(rhs), true, e.action.span);
      cmp.span = e.span;
      Edge tag;
      tag.from = mid;
      tag.to = e.to;
      tag.action = Action::tag_action(s, e.action.span);
      tag.span = e.span;
      out.push_back(std::move(cmp));
      out.push_back(std::move(tag));
    }
    changed = true;
  }
  g.edges = std::move(out);
  return changed;
}

inline bool has_shorthand_actions(const Game& g) {
  for (const Edge& e : g.edges)
    if (e.action.kind == Action::Kind::AnyAssign || e.action.kind == Action::Kind::VarTag)
      return true;
  return false;
}

}  // namespace rg
