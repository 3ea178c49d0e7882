#pragma once

#include <string>

#include "rg/render.hpp"

namespace rg {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Graphviz view of the rules automaton: begin and end stand out, edges carry
// their rendered actions, reachability endpoints are dashed.
inline std::string emit_dot(const Game& g, const std::string& title = "rules") {
  std::string out = "digraph \"" + detail::dot_escape(title) + "\" {\n";
  out += "  rankdir=LR;\n  node [shape=circle, fontsize=11];\n  edge [fontsize=10];\n";

  NameId begin = g.names.find("begin");
  NameId end = g.names.find("end");
  std::unordered_set<int32_t> reach_endpoints;
  for (const Edge& e : g.edges)
    if (e.action.kind == Action::Kind::Reach) {
      reach_endpoints.insert(e.action.from.v);
      reach_endpoints.insert(e.action.to.v);
    }

  for (NameId n : g.node_set()) {
    std::string name = detail::dot_escape(g.text(n));
    out += "  \"" + name + "\"";
    if (n == begin)
      out += " [shape=doublecircle, style=filled, fillcolor=\"#c6e5c6\"]";
    else if (n == end)
      out += " [shape=doublecircle, style=filled, fillcolor=\"#e5c6c6\"]";
    else if (reach_endpoints.count(n.v))
      out += " [style=dashed]";
    out += ";\n";
  }
  for (const Edge& e : g.edges) {
    out += "  \"" + detail::dot_escape(g.text(e.from)) + "\" -> \"" +
           detail::dot_escape(g.text(e.to)) + "\"";
    std::string label = render_action(g, e.action);
    out += " [label=\"" + detail::dot_escape(label) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace rg
