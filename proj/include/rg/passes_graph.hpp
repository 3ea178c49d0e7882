#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rg/passes_util.hpp"

namespace rg::passes {

// --- joins ---------------------------------------------------------------------

// Parallel multiedges with exclusive labels (e == e' with e != e', or a check
// and its negation) always admit exactly one legal member; the pair collapses
// to a skip edge.
inline bool join_exclusive_edges(Game& g) {
  bool changed = false;
  std::set<size_t> dead;
  auto exclusive = [&](const Action& a, const Action& b) {
    if (a.kind == Action::Kind::Compare && b.kind == Action::Kind::Compare)
      return a.equal != b.equal && expr_equal(g.names, a.lhs, g.names, b.lhs) &&
             expr_equal(g.names, a.rhs, g.names, b.rhs);
    if (a.kind == Action::Kind::Reach && b.kind == Action::Kind::Reach)
      return a.positive != b.positive && a.from == b.from && a.to == b.to;
    return false;
  };
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (dead.count(i)) continue;
    for (size_t j = i + 1; j < g.edges.size(); ++j) {
      if (dead.count(j)) continue;
      if (g.edges[i].from != g.edges[j].from || g.edges[i].to != g.edges[j].to) continue;
      if (!exclusive(g.edges[i].action, g.edges[j].action)) continue;
      g.edges[i].action = Action::empty(g.edges[i].action.span);
      dead.insert(j);
      changed = true;
      break;
    }
  }
  erase_edges(g, dead);
  return changed;
}

// Two identically labeled edges out of one node merge into one: the second
// target is reached through a fresh skip edge behind the first. Applies only
// where the targets have no other entries, so no new walks appear.
inline bool join_fork_prefixes_once(Game& g) {
  SpecialNames sp = SpecialNames::find(g.names);
  auto reach_nodes = reach_endpoint_nodes(g);

  std::set<NameId> sources;
  for (const Edge& e : g.edges) sources.insert(e.from);
  for (NameId n : sources) {
    auto outs = out_edges(g, n);
    for (size_t a = 0; a < outs.size(); ++a) {
      for (size_t b = a + 1; b < outs.size(); ++b) {
        Edge& e1 = g.edges[outs[a]];
        Edge& e2 = g.edges[outs[b]];
        if (e1.to == e2.to) continue;
        if (!action_equal(g.names, e1.action, g.names, e2.action)) continue;
        size_t hub_i = outs[a], other_i = outs[b];
        // the hub gains a skip edge, so it must not be begin, end, or a
        // reachability endpoint, and both targets need a single entry
        auto hub_ok = [&](const Edge& hub) {
          return hub.to != sp.begin && hub.to != sp.end && !reach_nodes.count(hub.to.v) &&
                 in_degree(g, hub.to) == 1;
        };
        if (!hub_ok(g.edges[hub_i])) std::swap(hub_i, other_i);
        if (!hub_ok(g.edges[hub_i])) continue;
        if (in_degree(g, g.edges[other_i].to) != 1) continue;
        NameId hub = g.edges[hub_i].to;
        NameId tail = g.edges[other_i].to;
        Span span = g.edges[other_i].span;
        erase_edges(g, {other_i});
        g.edges.push_back(Edge{hub, tail, Action::empty(span), span});
        return true;
      }
    }
  }
  return false;
}

inline bool join_fork_prefixes(Game& g) {
  bool changed = false;
  while (join_fork_prefixes_once(g)) changed = true;
  return changed;
}

// Merges a node into a sibling with an identical outgoing edge set, joining
// paths with identical labels that lead to the same places.
inline bool join_fork_suffixes_once(Game& g) {
  SpecialNames sp = SpecialNames::find(g.names);
  auto reach_nodes = reach_endpoint_nodes(g);

  auto out_signature = [&](NameId n) {
    std::vector<std::string> sig;
    bool self_edge = false;
    for (const Edge& e : g.edges)
      if (e.from == n) {
        if (e.to == n) self_edge = true;
        sig.push_back(g.text(e.to) + " / " + render_action(g, e.action));
      }
    std::sort(sig.begin(), sig.end());
    return std::make_pair(sig, self_edge);
  };

  std::vector<NameId> nodes = g.node_set();
  for (size_t i = 0; i < nodes.size(); ++i) {
    auto [sig_i, self_i] = out_signature(nodes[i]);
    if (sig_i.empty() || self_i) continue;
    for (size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      NameId keep = nodes[i], drop = nodes[j];
      if (drop == sp.begin || drop == sp.end || reach_nodes.count(drop.v)) continue;
      auto [sig_j, self_j] = out_signature(drop);
      if (self_j || sig_i != sig_j) continue;
      // redirect everything entering `drop` and shed its duplicate suffix
      std::set<size_t> dead;
      for (size_t ei = 0; ei < g.edges.size(); ++ei) {
        if (g.edges[ei].from == drop) dead.insert(ei);
        if (g.edges[ei].to == drop) g.edges[ei].to = keep;
      }
      erase_edges(g, dead);
      return true;
    }
  }
  return false;
}

inline bool join_fork_suffixes(Game& g) {
  bool changed = false;
  while (join_fork_suffixes_once(g)) changed = true;
  return changed;
}

// --- prunings ------------------------------------------------------------------

// Removes skip edges by rerouting around pass-through nodes.
inline bool compact_skip_edges(Game& g) {
  SpecialNames sp = SpecialNames::find(g.names);
  bool changed = false;
  bool again = true;
  while (again) {
    again = false;
    auto reach_nodes = reach_endpoint_nodes(g);
    for (size_t i = 0; i < g.edges.size(); ++i) {
      const Edge& skip = g.edges[i];
      if (skip.action.kind != Action::Kind::Empty) continue;
      NameId b = skip.from, c = skip.to;
      if (b == c) {  // a self skip never does anything
        erase_edges(g, {i});
        changed = again = true;
        break;
      }
      bool b_special = b == sp.begin || b == sp.end || reach_nodes.count(b.v);
      bool c_special = c == sp.begin || c == sp.end || reach_nodes.count(c.v);
      // case a: the skip is b's only exit; entries to b land on c instead
      if (!b_special && out_edges(g, b).size() == 1) {
        for (Edge& e : g.edges)
          if (e.to == b) e.to = c;
        erase_edges(g, {i});
        changed = again = true;
        break;
      }
      // case b: the skip is c's only entry; c's exits start at b instead
      if (!c_special && b != sp.end && in_degree(g, c) == 1) {
        for (Edge& e : g.edges)
          if (e.from == c) e.from = b;
        erase_edges(g, {i});
        changed = again = true;
        break;
      }
    }
  }
  return changed;
}

// Drops edges not reachable from begin or not on a path to end or to a
// reachability target. Reach patterns count as entries into their subgraphs.
inline bool prune_unreachable_nodes(Game& g) {
  SpecialNames sp = SpecialNames::find(g.names);
  bool changed = false;
  bool again = true;
  while (again) {
    again = false;
    // forward closure, entering reach subgraphs at their from-nodes
    std::unordered_set<int32_t> fwd{sp.begin.v};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Edge& e : g.edges) {
        if (!fwd.count(e.from.v)) continue;
        if (fwd.insert(e.to.v).second) grew = true;
        if (e.action.kind == Action::Kind::Reach && fwd.insert(e.action.from.v).second)
          grew = true;
      }
    }
    // backward closure from end and from targets of reachable checks
    std::unordered_set<int32_t> bwd{sp.end.v};
    for (const Edge& e : g.edges)
      if (e.action.kind == Action::Kind::Reach && fwd.count(e.from.v))
        bwd.insert(e.action.to.v);
    grew = true;
    while (grew) {
      grew = false;
      for (const Edge& e : g.edges)
        if (bwd.count(e.to.v) && bwd.insert(e.from.v).second) grew = true;
    }

    std::set<size_t> dead;
    for (size_t i = 0; i < g.edges.size(); ++i)
      if (!fwd.count(g.edges[i].from.v) || !bwd.count(g.edges[i].to.v)) dead.insert(i);
    if (!dead.empty()) {
      erase_edges(g, dead);
      changed = again = true;
    }
  }
  return changed;
}

// Removes constants and variables no action or retained value references.
// player, goals and visible are read by the runtime and always stay.
inline bool prune_unused_consts_vars(Game& g) {
  Env env(g);
  SpecialNames sp = SpecialNames::find(g.names);
  std::set<NameId> used{sp.player_var, sp.goals_var, sp.visible_var};

  std::function<void(const Expr&)> expr_names = [&](const Expr& e) {
    if (e.kind == Expr::Kind::Ref) {
      if (env.classify(e.name) == RefKind::Variable || env.classify(e.name) == RefKind::Constant)
        used.insert(e.name);
      return;
    }
    for (const Expr& k : e.kids) expr_names(k);
  };
  for (const Edge& e : g.edges) {
    switch (e.action.kind) {
      case Action::Kind::Compare:
      case Action::Kind::Assign:
        expr_names(e.action.lhs);
        expr_names(e.action.rhs);
        break;
      case Action::Kind::AnyAssign:
        expr_names(e.action.lhs);
        break;
      case Action::Kind::VarTag:
        used.insert(e.action.tag);
        break;
      default:
        break;
    }
  }
  // values of used declarations keep the constants they mention alive
  std::function<void(const Value&)> value_names = [&](const Value& v) {
    if (v.is_symbol()) {
      if (v.sym().valid() && g.find_const(v.sym())) used.insert(v.sym());
      return;
    }
    value_names(v.map_data().def);
    for (const auto& [k, val] : v.map_data().entries) value_names(val);
  };
  bool grew = true;
  while (grew) {
    grew = false;
    size_t before = used.size();
    for (const auto& d : g.vars)
      if (used.count(d.name)) value_names(d.init);
    for (const auto& d : g.consts)
      if (used.count(d.name)) value_names(d.value);
    grew = used.size() != before;
  }

  bool changed = false;
  auto sweep = [&](auto& decls) {
    for (size_t i = decls.size(); i-- > 0;) {
      if (!used.count(decls[i].name)) {
        decls.erase(decls.begin() + static_cast<long>(i));
        changed = true;
      }
    }
  };
  sweep(g.consts);
  sweep(g.vars);
  return changed;
}

// --- tag passes ------------------------------------------------------------------

// Strips tags declared artificial through `@artificialTag name...;` pragmas.
// Runs at the very end of the pipeline so nothing reorders around it.
inline bool skip_artificial_tags(Game& g) {
  std::set<NameId> artificial;
  for (const Pragma& p : g.pragmas) {
    if (g.text(p.name) != "artificialTag") continue;
    for (const std::string& t : p.tokens) {
      NameId id = g.names.find(t);
      if (id.valid()) artificial.insert(id);
    }
  }
  if (artificial.empty()) return false;
  bool changed = false;
  for (Edge& e : g.edges)
    if (e.action.kind == Action::Kind::Tag && artificial.count(e.action.tag)) {
      e.action = Action::empty(e.action.span);
      changed = true;
    }
  return changed;
}

// Strips one tag position every move carries identically: when every move
// walk passes index k with the same tag and no move ends at or before k,
// dropping that position keeps all labelings distinct.
inline bool skip_redundant_tags(Game& g) {
  Env env(g);
  SpecialNames sp = SpecialNames::find(g.names);

  // per-node tag-prefix knowledge over the move-search graph:
  // 0 = unreached, 1 = every partial walk carries exactly `seq`, 2 = varies
  struct K {
    int tag = 0;
    std::vector<NameId> seq;
  };
  std::vector<NameId> nodes = g.node_set();
  std::unordered_map<int32_t, size_t> node_ix;
  for (size_t i = 0; i < nodes.size(); ++i) node_ix.emplace(nodes[i].v, i);
  std::vector<K> k(nodes.size());

  auto join_into = [&](K& dst, const K& src) {
    if (src.tag == 0) return false;
    if (dst.tag == 0) {
      dst = src;
      return true;
    }
    if (dst.tag == 2) return false;
    if (src.tag == 2 || dst.seq != src.seq) {
      dst = K{2, {}};
      return true;
    }
    return false;
  };

  // move walks start at begin and right after every player assignment
  k[node_ix.at(sp.begin.v)] = K{1, {}};
  for (const Edge& e : g.edges)
    if (is_player_assign(g, env, e.action)) k[node_ix.at(e.to.v)] = K{1, {}};

  bool grew = true;
  while (grew) {
    grew = false;
    for (const Edge& e : g.edges) {
      if (is_player_assign(g, env, e.action)) continue;  // moves end here
      const K& in = k[node_ix.at(e.from.v)];
      if (in.tag == 0) continue;
      K out = in;
      if (e.action.kind == Action::Kind::Tag && in.tag == 1) out.seq.push_back(e.action.tag);
      if (e.action.kind == Action::Kind::VarTag) out = K{2, {}};
      grew |= join_into(k[node_ix.at(e.to.v)], out);
    }
  }

  // collect tag edges by certain index; any uncertain tag edge blocks the pass
  std::map<size_t, std::vector<size_t>> by_index;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Action& a = g.edges[i].action;
    if (a.kind != Action::Kind::Tag && a.kind != Action::Kind::VarTag) continue;
    const K& in = k[node_ix.at(g.edges[i].from.v)];
    if (in.tag == 0) continue;  // only walkable inside reach patterns
    if (in.tag == 2 || a.kind == Action::Kind::VarTag) return false;
    by_index[in.seq.size()].push_back(i);
  }

  for (const auto& [index, edges] : by_index) {
    NameId tag = g.edges[edges.front()].action.tag;
    bool uniform = true;
    for (size_t ei : edges) uniform &= g.edges[ei].action.tag == tag;
    if (!uniform) continue;
    // every move must strictly pass this index
    bool all_longer = true;
    for (const Edge& e : g.edges) {
      if (!is_player_assign(g, env, e.action)) continue;
      const K& in = k[node_ix.at(e.from.v)];
      if (in.tag == 0) continue;
      if (in.tag == 2 || in.seq.size() <= index) {
        all_longer = false;
        break;
      }
    }
    if (!all_longer) continue;
    for (size_t ei : edges) g.edges[ei].action = Action::empty(g.edges[ei].action.span);
    return true;
  }
  return false;
}

// Tags on edges that are only walkable inside reachability patterns never
// label a move; they become skip labels.
inline bool skip_unused_tags(Game& g) {
  Env env(g);
  SpecialNames sp = SpecialNames::find(g.names);

  std::unordered_set<int32_t> move_reach{sp.begin.v};
  for (const Edge& e : g.edges)
    if (is_player_assign(g, env, e.action)) move_reach.insert(e.to.v);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Edge& e : g.edges)
      if (move_reach.count(e.from.v) && move_reach.insert(e.to.v).second) grew = true;
  }

  std::unordered_set<size_t> inside;
  for (const ReachPattern& p : reach_patterns(g))
    for (size_t ei : p.edges) inside.insert(ei);

  bool changed = false;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    Action& a = g.edges[i].action;
    if (a.kind != Action::Kind::Tag && a.kind != Action::Kind::VarTag) continue;
    if (move_reach.count(g.edges[i].from.v)) continue;
    if (!inside.count(i)) continue;
    a = Action::empty(a.span);
    changed = true;
  }
  return changed;
}

// --- reachability passes ----------------------------------------------------------

// Shrinks a pattern's span by stepping over unconditional entry and exit
// edges; a pattern that closes onto itself folds into a skip (or, negated,
// into deleting the edge).
inline bool compact_reachability(Game& g) {
  bool changed = false;
  bool again = true;
  while (again) {
    again = false;
    auto patterns = reach_patterns(g);
    for (const ReachPattern& p : patterns) {
      if (p.from == p.to) {
        // vacuously true: the empty walk always exists
        std::set<size_t> dead;
        for (size_t site : p.check_sites) {
          Action& a = g.edges[site].action;
          if (a.positive)
            a = Action::empty(a.span);
          else
            dead.insert(site);
        }
        erase_edges(g, dead);
        changed = again = true;
        break;
      }
      NameId from = p.from, to = p.to;
      // a single unconditional exit from the entry node moves the entry
      std::vector<size_t> entry_out;
      for (size_t ei : p.edges)
        if (g.edges[ei].from == from) entry_out.push_back(ei);
      if (entry_out.size() == 1 &&
          g.edges[entry_out[0]].action.kind == Action::Kind::Empty &&
          g.edges[entry_out[0]].to != from) {
        from = g.edges[entry_out[0]].to;
      } else {
        std::vector<size_t> exit_in;
        for (size_t ei : p.edges)
          if (g.edges[ei].to == to) exit_in.push_back(ei);
        if (exit_in.size() == 1 && g.edges[exit_in[0]].action.kind == Action::Kind::Empty &&
            g.edges[exit_in[0]].from != to) {
          to = g.edges[exit_in[0]].from;
        }
      }
      if (from == p.from && to == p.to) continue;
      for (size_t site : p.check_sites) {
        g.edges[site].action.from = from;
        g.edges[site].action.to = to;
      }
      changed = again = true;
      break;
    }
  }
  return changed;
}

// Splices a pattern's subautomaton in place of its (single) positive check.
// Only fires when the subgraph is exclusively this check's, carries no tags
// or player writes, and every variable it writes is dead at the check's
// target.
inline bool inline_reachability(Game& g) {
  Env env(g);
  SpecialNames sp = SpecialNames::find(g.names);
  auto patterns = reach_patterns(g);

  FlowGraph fg = FlowGraph::build(g);
  LiveVarsAnalysis lva(g, env);
  auto live = analyze(reverse_flow_graph(fg), lva, /*check_laws=*/false);
  ActionReads reads(g, env);

  for (size_t pi = 0; pi < patterns.size(); ++pi) {
    const ReachPattern& p = patterns[pi];
    if (p.check_sites.size() != 1) continue;
    size_t site = p.check_sites.front();
    if (!g.edges[site].action.positive) continue;
    if (p.from == p.to || p.edges.empty()) continue;
    if (p.nodes.count(sp.begin.v) || p.nodes.count(sp.end.v)) continue;
    if (p.nodes.count(g.edges[site].from.v) || p.nodes.count(g.edges[site].to.v)) continue;

    // exclusivity: no other pattern shares a node; nothing outside touches one
    bool shared = false;
    for (size_t pj = 0; pj < patterns.size() && !shared; ++pj) {
      if (pi == pj) continue;
      for (int32_t n : patterns[pj].nodes) shared |= p.nodes.count(n) > 0;
    }
    if (shared) continue;
    std::unordered_set<size_t> sub_edges(p.edges.begin(), p.edges.end());
    bool isolated = true;
    for (size_t ei = 0; ei < g.edges.size() && isolated; ++ei) {
      if (sub_edges.count(ei) || ei == site) continue;
      isolated = !p.nodes.count(g.edges[ei].from.v) && !p.nodes.count(g.edges[ei].to.v);
    }
    if (!isolated) continue;
    // walks must stop at the pattern exit
    bool exit_continues = false;
    for (const Edge& e : g.edges) exit_continues |= e.from == p.to;
    if (exit_continues) continue;

    bool clean = true;
    std::set<NameId> written;
    for (size_t ei : p.edges) {
      const Action& a = g.edges[ei].action;
      if (a.kind == Action::Kind::Tag || a.kind == Action::Kind::VarTag) clean = false;
      NameId w = reads.full_write(a);
      if (!w.valid()) w = reads.partial_write(a);
      if (w.valid()) {
        if (w == sp.player_var || w == sp.goals_var || w == sp.visible_var) clean = false;
        written.insert(w);
      }
    }
    if (!clean) continue;
    int q = fg.id(g.edges[site].to);
    if (q < 0) continue;
    bool dead_after = true;
    for (NameId w : written) dead_after &= live[static_cast<size_t>(q)].count(w) == 0;
    if (!dead_after) continue;

    // splice: the check becomes a skip into the pattern, the pattern's exit
    // edges land on the check's target
    NameId target = g.edges[site].to;
    g.edges[site].to = p.from;
    g.edges[site].action = Action::empty(g.edges[site].action.span);
    for (size_t ei : p.edges)
      if (g.edges[ei].to == p.to) g.edges[ei].to = target;
    return true;
  }
  return false;
}

// --- mangle ----------------------------------------------------------------------

// Shortens every name that is not part of the language contract. Changes
// move labelings and symbol spellings, so it stays out of the default
// pipeline; pragma payloads are left verbatim and may go stale.
inline bool mangle_symbols(Game& g) {
  SpecialNames sp = SpecialNames::find(g.names);
  std::set<NameId> keep{sp.player_type, sp.score_type, sp.bool_type, sp.goals_type,
                        sp.pos_type,    sp.vis_type,   sp.player_var, sp.goals_var,
                        sp.visible_var, sp.keeper,     sp.random_,    sp.begin,
                        sp.end,         sp.zero,       sp.one};

  std::set<NameId> referenced;
  auto touch = [&](NameId n) {
    if (n.valid()) referenced.insert(n);
  };
  std::function<void(const TypeExpr&)> touch_type = [&](const TypeExpr& t) {
    if (t.is_set())
      for (NameId s : t.symbols) touch(s);
    else if (t.is_arrow()) {
      touch_type(*t.source);
      touch_type(*t.dest);
    } else {
      touch(t.alias);
    }
  };
  std::function<void(const Value&)> touch_value = [&](const Value& v) {
    if (v.is_symbol()) {
      touch(v.sym());
      return;
    }
    touch_value(v.map_data().def);
    for (const auto& [key, val] : v.map_data().entries) {
      touch(key);
      touch_value(val);
    }
  };
  std::function<void(const Expr&)> touch_expr = [&](const Expr& e) {
    if (e.kind != Expr::Kind::Access) touch(e.name);
    for (const Expr& kid : e.kids) touch_expr(kid);
  };
  for (const auto& d : g.aliases) {
    touch(d.name);
    touch_type(d.type);
  }
  for (const auto& d : g.consts) {
    touch(d.name);
    touch_type(d.type);
    touch_value(d.value);
  }
  for (const auto& d : g.vars) {
    touch(d.name);
    touch_type(d.type);
    touch_value(d.init);
  }
  for (const Edge& e : g.edges) {
    touch(e.from);
    touch(e.to);
    const Action& a = e.action;
    touch(a.domain);
    touch(a.from);
    touch(a.to);
    touch(a.tag);
    if (a.kind == Action::Kind::Compare || a.kind == Action::Kind::Assign) {
      touch_expr(a.lhs);
      touch_expr(a.rhs);
    } else if (a.kind == Action::Kind::AnyAssign) {
      touch_expr(a.lhs);
    }
  }

  // stable short names in first-seen (id) order
  std::map<NameId, NameId> rename;
  size_t counter = 0;
  auto short_name = [&]() {
    std::string s = "_";
    size_t n = counter++;
    do {
      s += static_cast<char>('a' + n % 26);
      n /= 26;
    } while (n > 0);
    return s;
  };
  for (NameId n : referenced) {
    if (keep.count(n)) continue;
    std::string_view old = g.names.text(n);
    if (old.size() <= 2 && old[0] == '_') continue;  // already mangled
    std::string fresh;
    do {
      fresh = short_name();
    } while (g.names.find(fresh).valid());
    rename.emplace(n, g.names.intern(fresh));
  }
  if (rename.empty()) return false;

  auto map_name = [&](NameId n) {
    auto it = rename.find(n);
    return it == rename.end() ? n : it->second;
  };
  std::function<TypeExpr(const TypeExpr&)> map_type = [&](const TypeExpr& t) -> TypeExpr {
    switch (t.kind) {
      case TypeExpr::Kind::Set: {
        std::vector<NameId> syms;
        for (NameId s : t.symbols) syms.push_back(map_name(s));
        return TypeExpr::set(std::move(syms));
      }
      case TypeExpr::Kind::Arrow:
        return TypeExpr::arrow(map_type(*t.source), map_type(*t.dest));
      case TypeExpr::Kind::Alias:
        return TypeExpr::alias_ref(map_name(t.alias));
    }
    return t;
  };
  std::function<Value(const Value&)> map_value = [&](const Value& v) -> Value {
    if (v.is_symbol()) return Value::symbol(map_name(v.sym()));
    std::vector<MapEntry> entries;
    for (const auto& [key, val] : v.map_data().entries)
      entries.emplace_back(map_name(key), map_value(val));
    return make_map(map_value(v.map_data().def), std::move(entries));
  };
  std::function<void(Expr&)> map_expr = [&](Expr& e) {
    if (e.kind != Expr::Kind::Access) e.name = map_name(e.name);
    for (Expr& kid : e.kids) map_expr(kid);
  };

  for (auto& d : g.aliases) {
    d.name = map_name(d.name);
    d.type = map_type(d.type);
  }
  for (auto& d : g.consts) {
    d.name = map_name(d.name);
    d.type = map_type(d.type);
    d.value = map_value(d.value);
  }
  for (auto& d : g.vars) {
    d.name = map_name(d.name);
    d.type = map_type(d.type);
    d.init = map_value(d.init);
  }
  for (Edge& e : g.edges) {
    e.from = map_name(e.from);
    e.to = map_name(e.to);
    Action& a = e.action;
    a.domain = map_name(a.domain);
    a.from = map_name(a.from);
    a.to = map_name(a.to);
    a.tag = map_name(a.tag);
    if (a.kind == Action::Kind::Compare || a.kind == Action::Kind::Assign) {
      map_expr(a.lhs);
      map_expr(a.rhs);
    } else if (a.kind == Action::Kind::AnyAssign) {
      map_expr(a.lhs);
    }
  }
  return true;
}

}  // namespace rg::passes
