#pragma once

#include <string>

#include <json.hpp>

#include "rg/bench.hpp"
#include "rg/pipeline.hpp"
#include "rg/proper.hpp"

namespace rg {

using Json = nlohmann::ordered_json;

inline Json value_to_json(const Game& g, const Value& v) {
  if (v.is_symbol()) return g.text(v.sym());
  Json out = Json::object();
  out[":"] = value_to_json(g, v.map_data().def);
  for (const auto& [k, val] : v.map_data().entries) out[g.text(k)] = value_to_json(g, val);
  return out;
}

// Versioned GameState dump: variables in canonical sparse-map form plus the
// automaton node.
inline Json state_to_json(const CompiledGame& cg, const GameState& st) {
  Json vars = Json::object();
  for (size_t i = 0; i < cg.var_names.size(); ++i)
    vars[cg.desc.text(cg.var_names[i])] = value_to_json(cg.desc, st.vars[i]);
  return Json{{"v", 1}, {"node", cg.node_text(st.node)}, {"vars", std::move(vars)}};
}

inline Json move_to_json(const CompiledGame& cg, const Move& m) {
  Json tags = Json::array();
  for (NameId t : m) tags.push_back(cg.desc.text(t));
  return Json{{"v", 1}, {"tags", std::move(tags)}};
}

inline Json diagnostic_to_json(const Diagnostic& d) {
  return Json{{"severity", d.severity == Severity::Error ? "error" : "warning"},
              {"code", d.code},
              {"message", d.message},
              {"span",
               {{"offset", d.span.offset},
                {"length", d.span.length},
                {"line", d.span.line},
                {"column", d.span.column}}}};
}

inline Json diagnostics_to_json(const Diagnostics& ds) {
  Json out = Json::array();
  for (const auto& d : ds) out.push_back(diagnostic_to_json(d));
  return out;
}

inline const char* verdict_text(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

inline Json proper_report_to_json(const CompiledGame& cg, const ProperReport& rep) {
  Json conditions = Json::array();
  for (size_t i = 0; i < rep.conditions.size(); ++i) {
    const ConditionResult& c = rep.conditions[i];
    Json entry{{"condition", std::to_string(i + 1)}, {"verdict", verdict_text(c.verdict)}};
    if (c.verdict == Verdict::Fail) {
      Json witness = Json::array();
      for (const Move& m : c.witness) {
        Json tags = Json::array();
        for (NameId t : m) tags.push_back(cg.desc.text(t));
        witness.push_back(std::move(tags));
      }
      entry["witness"] = std::move(witness);
      if (!c.detail_move.empty()) {
        Json tags = Json::array();
        for (NameId t : c.detail_move) tags.push_back(cg.desc.text(t));
        entry["move"] = std::move(tags);
      }
      entry["note"] = c.note;
    }
    conditions.push_back(std::move(entry));
  }
  return Json{{"v", 1},
              {"conditions", std::move(conditions)},
              {"states_visited", rep.states_visited},
              {"budget_exhausted", rep.budget_exhausted}};
}

inline Json bench_report_to_json(const BenchReport& r) {
  Json hist = Json::object();
  for (const auto& [k, v] : r.histogram) hist[k] = v;
  return Json{{"v", 1},
              {"game", r.game},
              {"mode", r.mode},
              {"playouts", r.playouts},
              {"seconds", r.seconds},
              {"playouts_per_sec", r.playouts_per_sec},
              {"states_per_sec", r.states_per_sec},
              {"mean_play_length", r.mean_play_length},
              {"seed", r.seed},
              {"workers", r.workers},
              {"budget_exceeded", r.budget_exceeded},
              {"rng", r.rng},
              {"histogram", std::move(hist)}};
}

// Histogram alone, serialized deterministically: the fixed-count
// reproducibility contract compares these byte for byte.
inline std::string histogram_json(const BenchReport& r) {
  Json hist = Json::object();
  for (const auto& [k, v] : r.histogram) hist[k] = v;
  return hist.dump();
}

inline Json pass_stats_to_json(const PassStats& st) {
  return Json{{"pass", pass_info(st.pass).name},
              {"nodes_before", st.nodes_before},
              {"nodes_after", st.nodes_after},
              {"edges_before", st.edges_before},
              {"edges_after", st.edges_after},
              {"state_size_bits", st.state_size_bits}};
}

}  // namespace rg
