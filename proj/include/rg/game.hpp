#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rg/diag.hpp"
#include "rg/names.hpp"
#include "rg/types.hpp"
#include "rg/value.hpp"

namespace rg {

// Expressions: a reference, an access e1[e2], or a cast T(e).
struct Expr {
  enum class Kind { Ref, Access, Cast };

  Kind kind = Kind::Ref;
  NameId name;              // Ref target or Cast target type name
  std::vector<Expr> kids;   // Access: {base, key}; Cast: {inner}
  Span span;

  static Expr ref(NameId n, Span s = {}) {
    Expr e;
    e.kind = Kind::Ref;
    e.name = n;
    e.span = s;
    return e;
  }

  static Expr access(Expr base, Expr key, Span s = {}) {
    Expr e;
    e.kind = Kind::Access;
    e.kids.push_back(std::move(base));
    e.kids.push_back(std::move(key));
    e.span = s;
    return e;
  }

  static Expr cast(NameId type_name, Expr inner, Span s = {}) {
    Expr e;
    e.kind = Kind::Cast;
    e.name = type_name;
    e.kids.push_back(std::move(inner));
    e.span = s;
    return e;
  }

  [[nodiscard]] const Expr& base() const { return kids[0]; }
  [[nodiscard]] const Expr& key() const { return kids[1]; }
  [[nodiscard]] const Expr& inner() const { return kids[0]; }
};

// Edge label. Core actions are Empty/Compare/Assign/Reach/Tag; AnyAssign and
// VarTag are the two shorthands and are expanded before the engine runs.
struct Action {
  enum class Kind { Empty, Compare, Assign, AnyAssign, Reach, Tag, VarTag };

  Kind kind = Kind::Empty;
  Expr lhs, rhs;        // Compare / Assign; AnyAssign uses lhs only
  bool equal = true;    // Compare: == vs !=
  bool positive = true; // Reach: ? vs !
  NameId domain;        // AnyAssign: set-type name T in `lhs = T(*)`
  NameId from, to;      // Reach endpoints
  NameId tag;           // Tag name or VarTag variable
  Span span;

  static Action empty(Span s = {}) {
    Action a;
    a.kind = Kind::Empty;
    a.span = s;
    return a;
  }

  static Action compare(Expr l, Expr r, bool eq, Span s = {}) {
    Action a;
    a.kind = Kind::Compare;
    a.lhs = std::move(l);
    a.rhs = std::move(r);
    a.equal = eq;
    a.span = s;
    return a;
  }

  static Action assign(Expr l, Expr r, Span s = {}) {
    Action a;
    a.kind = Kind::Assign;
    a.lhs = std::move(l);
    a.rhs = std::move(r);
    a.span = s;
    return a;
  }

  static Action any_assign(Expr l, NameId dom, Span s = {}) {
    Action a;
    a.kind = Kind::AnyAssign;
    a.lhs = std::move(l);
    a.domain = dom;
    a.span = s;
    return a;
  }

  static Action reach(NameId from, NameId to, bool pos, Span s = {}) {
    Action a;
    a.kind = Kind::Reach;
    a.from = from;
    a.to = to;
    a.positive = pos;
    a.span = s;
    return a;
  }

  static Action tag_action(NameId t, Span s = {}) {
    Action a;
    a.kind = Kind::Tag;
    a.tag = t;
    a.span = s;
    return a;
  }

  static Action var_tag(NameId var, Span s = {}) {
    Action a;
    a.kind = Kind::VarTag;
    a.tag = var;
    a.span = s;
    return a;
  }
};

struct Edge {
  NameId from, to;
  Action action;
  Span span;
};

// Pragmas are kept verbatim as a token list; their semantics are runtime
// hints and the toolchain only round-trips them.
struct Pragma {
  NameId name;
  std::vector<std::string> tokens;
  Span span;
};

struct AliasDecl {
  NameId name;
  TypeExpr type;
  Span span;
};

struct ConstDecl {
  NameId name;
  TypeExpr type;
  Value value;  // as written: symbol leaves may reference other constants
  Span span;
};

struct VarDecl {
  NameId name;
  TypeExpr type;
  Value init;
  Span span;
};

// A parsed game description. Declarations keep their declaration order;
// lookups scan linearly (descriptions are small and this keeps transforms
// free of index-invalidation hazards).
struct Game {
  NameTable names;
  std::vector<AliasDecl> aliases;
  std::vector<ConstDecl> consts;
  std::vector<VarDecl> vars;
  std::vector<Edge> edges;
  std::vector<Pragma> pragmas;

  [[nodiscard]] const AliasDecl* find_alias(NameId n) const {
    for (const auto& d : aliases)
      if (d.name == n) return &d;
    return nullptr;
  }

  [[nodiscard]] const ConstDecl* find_const(NameId n) const {
    for (const auto& d : consts)
      if (d.name == n) return &d;
    return nullptr;
  }

  [[nodiscard]] const VarDecl* find_var(NameId n) const {
    for (const auto& d : vars)
      if (d.name == n) return &d;
    return nullptr;
  }

  [[nodiscard]] VarDecl* find_var(NameId n) {
    for (auto& d : vars)
      if (d.name == n) return &d;
    return nullptr;
  }

  [[nodiscard]] bool declared(NameId n) const {
    return find_alias(n) || find_const(n) || find_var(n);
  }

  [[nodiscard]] AliasMap alias_map() const {
    AliasMap m;
    for (const auto& d : aliases) m.emplace(d.name, d.type);
    return m;
  }

  // Node set: union of edge endpoints plus begin/end and reach endpoints.
  [[nodiscard]] std::vector<NameId> node_set() const {
    std::unordered_set<int32_t> seen;
    std::vector<NameId> out;
    auto add = [&](NameId n) {
      if (n.valid() && seen.insert(n.v).second) out.push_back(n);
    };
    add(names.find("begin").valid() ? names.find("begin") : NameId{});
    add(names.find("end").valid() ? names.find("end") : NameId{});
    for (const auto& e : edges) {
      add(e.from);
      add(e.to);
      if (e.action.kind == Action::Kind::Reach) {
        add(e.action.from);
        add(e.action.to);
      }
    }
    return out;
  }

  [[nodiscard]] std::string text(NameId n) const { return std::string(names.text(n)); }
};

// --- structural comparison (spans ignored, names compared as text) ---------

inline bool expr_equal(const NameTable& na, const Expr& a, const NameTable& nb, const Expr& b) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
  if (a.kind != Expr::Kind::Access && na.text(a.name) != nb.text(b.name)) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!expr_equal(na, a.kids[i], nb, b.kids[i])) return false;
  return true;
}

inline bool type_syntax_equal(const NameTable& na, const TypeExpr& a, const NameTable& nb,
                              const TypeExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeExpr::Kind::Set: {
      if (a.symbols.size() != b.symbols.size()) return false;
      for (size_t i = 0; i < a.symbols.size(); ++i)
        if (na.text(a.symbols[i]) != nb.text(b.symbols[i])) return false;
      return true;
    }
    case TypeExpr::Kind::Arrow:
      return type_syntax_equal(na, *a.source, nb, *b.source) &&
             type_syntax_equal(na, *a.dest, nb, *b.dest);
    case TypeExpr::Kind::Alias:
      return na.text(a.alias) == nb.text(b.alias);
  }
  return false;
}

inline bool value_syntax_equal(const NameTable& na, const Value& a, const NameTable& nb,
                               const Value& b) {
  if (a.is_symbol() != b.is_symbol()) return false;
  if (a.is_symbol()) return na.text(a.sym()) == nb.text(b.sym());
  const MapData& ma = a.map_data();
  const MapData& mb = b.map_data();
  if (ma.entries.size() != mb.entries.size()) return false;
  if (!value_syntax_equal(na, ma.def, nb, mb.def)) return false;
  for (size_t i = 0; i < ma.entries.size(); ++i) {
    if (na.text(ma.entries[i].first) != nb.text(mb.entries[i].first)) return false;
    if (!value_syntax_equal(na, ma.entries[i].second, nb, mb.entries[i].second)) return false;
  }
  return true;
}

inline bool action_equal(const NameTable& na, const Action& a, const NameTable& nb,
                         const Action& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Action::Kind::Empty:
      return true;
    case Action::Kind::Compare:
      return a.equal == b.equal && expr_equal(na, a.lhs, nb, b.lhs) &&
             expr_equal(na, a.rhs, nb, b.rhs);
    case Action::Kind::Assign:
      return expr_equal(na, a.lhs, nb, b.lhs) && expr_equal(na, a.rhs, nb, b.rhs);
    case Action::Kind::AnyAssign:
      return expr_equal(na, a.lhs, nb, b.lhs) && na.text(a.domain) == nb.text(b.domain);
    case Action::Kind::Reach:
      return a.positive == b.positive && na.text(a.from) == nb.text(b.from) &&
             na.text(a.to) == nb.text(b.to);
    case Action::Kind::Tag:
    case Action::Kind::VarTag:
      return na.text(a.tag) == nb.text(b.tag);
  }
  return false;
}

// Structural identity of two descriptions modulo spans and name ids.
// Declarations compare as name-keyed sets, edges and pragmas in order.
inline bool game_equal(const Game& a, const Game& b) {
  if (a.aliases.size() != b.aliases.size() || a.consts.size() != b.consts.size() ||
      a.vars.size() != b.vars.size() || a.edges.size() != b.edges.size() ||
      a.pragmas.size() != b.pragmas.size())
    return false;
  for (const auto& d : a.aliases) {
    const AliasDecl* o = b.find_alias(b.names.find(a.names.text(d.name)));
    if (!o || !type_syntax_equal(a.names, d.type, b.names, o->type)) return false;
  }
  for (const auto& d : a.consts) {
    const ConstDecl* o = b.find_const(b.names.find(a.names.text(d.name)));
    if (!o || !type_syntax_equal(a.names, d.type, b.names, o->type) ||
        !value_syntax_equal(a.names, d.value, b.names, o->value))
      return false;
  }
  for (const auto& d : a.vars) {
    const VarDecl* o = b.find_var(b.names.find(a.names.text(d.name)));
    if (!o || !type_syntax_equal(a.names, d.type, b.names, o->type) ||
        !value_syntax_equal(a.names, d.init, b.names, o->init))
      return false;
  }
  for (size_t i = 0; i < a.edges.size(); ++i) {
    const Edge& x = a.edges[i];
    const Edge& y = b.edges[i];
    if (a.names.text(x.from) != b.names.text(y.from) ||
        a.names.text(x.to) != b.names.text(y.to) ||
        !action_equal(a.names, x.action, b.names, y.action))
      return false;
  }
  for (size_t i = 0; i < a.pragmas.size(); ++i) {
    if (a.names.text(a.pragmas[i].name) != b.names.text(b.pragmas[i].name) ||
        a.pragmas[i].tokens != b.pragmas[i].tokens)
      return false;
  }
  return true;
}

}  // namespace rg
