#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "rg/game.hpp"

namespace rg {

inline void render_type(const Game& g, const TypeExpr& t, std::string& out) {
  switch (t.kind) {
    case TypeExpr::Kind::Set: {
      out += '{';
      for (size_t i = 0; i < t.symbols.size(); ++i) {
        if (i) out += ", ";
        out += g.text(t.symbols[i]);
      }
      out += '}';
      return;
    }
    case TypeExpr::Kind::Arrow:
      render_type(g, *t.source, out);
      out += " -> ";
      render_type(g, *t.dest, out);
      return;
    case TypeExpr::Kind::Alias:
      out += g.text(t.alias);
      return;
  }
}

inline void render_value(const Game& g, const Value& v, std::string& out) {
  if (v.is_symbol()) {
    out += g.text(v.sym());
    return;
  }
  const MapData& m = v.map_data();
  out += "{:";
  render_value(g, m.def, out);
  for (const auto& [k, val] : m.entries) {
    out += ", ";
    out += g.text(k);
    out += ": ";
    render_value(g, val, out);
  }
  out += '}';
}

inline void render_expr(const Game& g, const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Ref:
      out += g.text(e.name);
      return;
    case Expr::Kind::Access:
      render_expr(g, e.base(), out);
      out += '[';
      render_expr(g, e.key(), out);
      out += ']';
      return;
    case Expr::Kind::Cast:
      out += g.text(e.name);
      out += '(';
      render_expr(g, e.inner(), out);
      out += ')';
      return;
  }
}

inline std::string render_action(const Game& g, const Action& a) {
  std::string out;
  switch (a.kind) {
    case Action::Kind::Empty:
      break;
    case Action::Kind::Compare:
      render_expr(g, a.lhs, out);
      out += a.equal ? " == " : " != ";
      render_expr(g, a.rhs, out);
      break;
    case Action::Kind::Assign:
      render_expr(g, a.lhs, out);
      out += " = ";
      render_expr(g, a.rhs, out);
      break;
    case Action::Kind::AnyAssign:
      render_expr(g, a.lhs, out);
      out += " = ";
      out += g.text(a.domain);
      out += "(*)";
      break;
    case Action::Kind::Reach:
      out += a.positive ? "? " : "! ";
      out += g.text(a.from);
      out += " -> ";
      out += g.text(a.to);
      break;
    case Action::Kind::Tag:
      out += '$';
      out += g.text(a.tag);
      break;
    case Action::Kind::VarTag:
      out += "$$";
      out += g.text(a.tag);
      break;
  }
  return out;
}

// Deterministic textual form: declarations sorted by name within each kind,
// edge and pragma order preserved. Reparsing the output yields a description
// structurally identical to the input (modulo spans).
inline std::string render_game(const Game& g) {
  std::string out;

  std::vector<const AliasDecl*> aliases;
  for (const auto& d : g.aliases) aliases.push_back(&d);
  std::sort(aliases.begin(), aliases.end(), [&](const AliasDecl* a, const AliasDecl* b) {
    return g.names.text(a->name) < g.names.text(b->name);
  });
  for (const AliasDecl* d : aliases) {
    out += "type " + g.text(d->name) + " = ";
    render_type(g, d->type, out);
    out += ";\n";
  }

  std::vector<const ConstDecl*> consts;
  for (const auto& d : g.consts) consts.push_back(&d);
  std::sort(consts.begin(), consts.end(), [&](const ConstDecl* a, const ConstDecl* b) {
    return g.names.text(a->name) < g.names.text(b->name);
  });
  if (!consts.empty() && !out.empty()) out += '\n';
  for (const ConstDecl* d : consts) {
    out += "const " + g.text(d->name) + ": ";
    render_type(g, d->type, out);
    out += " = ";
    render_value(g, d->value, out);
    out += ";\n";
  }

  std::vector<const VarDecl*> vars;
  for (const auto& d : g.vars) vars.push_back(&d);
  std::sort(vars.begin(), vars.end(), [&](const VarDecl* a, const VarDecl* b) {
    return g.names.text(a->name) < g.names.text(b->name);
  });
  if (!vars.empty() && !out.empty()) out += '\n';
  for (const VarDecl* d : vars) {
    out += "var " + g.text(d->name) + ": ";
    render_type(g, d->type, out);
    out += " = ";
    render_value(g, d->init, out);
    out += ";\n";
  }

  if (!g.edges.empty() && !out.empty()) out += '\n';
  for (const Edge& e : g.edges) {
    out += g.text(e.from) + ", " + g.text(e.to) + ": ";
    out += render_action(g, e.action);
    out += ";\n";
  }

  if (!g.pragmas.empty() && !out.empty()) out += '\n';
  for (const Pragma& p : g.pragmas) {
    out += "@" + g.text(p.name);
    for (const auto& t : p.tokens) {
      out += ' ';
      out += t;
    }
    out += ";\n";
  }
  return out;
}

}  // namespace rg
