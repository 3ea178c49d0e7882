#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rg/passes_expr.hpp"
#include "rg/passes_graph.hpp"

namespace rg {

enum class PassId {
  // normalizations (run once, up front)
  NormalizeConstants,
  NormalizeTypes,
  AddExplicitCasts,
  // shorthand expansions (mandatory before the engine; optional here)
  ExpandAnyAssignment,
  ExpandVariableTags,
  // expression-oriented
  SkipSelfAssignCompare,
  PropagateConstants,
  InlineAssignment,
  MergeAccesses,
  CompactComparisons,
  ReorderConditions,
  // joins
  JoinExclusiveEdges,
  JoinForkPrefixes,
  JoinForkSuffixes,
  // reachability-oriented
  CompactReachability,
  SkipUnusedTags,
  InlineReachability,
  // prunings
  SkipRedundantTags,
  CompactSkipEdges,
  PruneUnreachableNodes,
  PruneUnusedConstsVars,
  // finalizers
  SkipArtificialTags,
  MangleSymbols,
};

enum class PassPhase { Normalize, Loop, Final };

struct PassInfo {
  PassId id;
  const char* name;
  const char* category;
  PassPhase phase;
  bool safe;             // may change observable behavior when false
  bool default_enabled;  // part of the default pipeline
};

inline const std::vector<PassInfo>& pass_catalog() {
  static const std::vector<PassInfo> catalog = {
      {PassId::NormalizeConstants, "normalize_constants", "normalization", PassPhase::Normalize,
       true, true},
      {PassId::NormalizeTypes, "normalize_types", "normalization", PassPhase::Normalize, true,
       true},
      {PassId::AddExplicitCasts, "add_explicit_casts", "normalization", PassPhase::Normalize, true,
       true},
      // expansions grow the description; the engine performs them itself, so
      // the default pipeline leaves them out
      {PassId::ExpandAnyAssignment, "expand_any_assignment", "expansion", PassPhase::Normalize,
       true, false},
      {PassId::ExpandVariableTags, "expand_variable_tags", "expansion", PassPhase::Normalize, true,
       false},
      {PassId::SkipSelfAssignCompare, "skip_self_assign_compare", "expression", PassPhase::Loop,
       true, true},
      {PassId::PropagateConstants, "propagate_constants", "expression", PassPhase::Loop, true,
       true},
      {PassId::InlineAssignment, "inline_assignment", "expression", PassPhase::Loop, true, true},
      {PassId::MergeAccesses, "merge_accesses", "expression", PassPhase::Loop, true, true},
      {PassId::CompactComparisons, "compact_comparisons", "expression", PassPhase::Loop, true,
       true},
      // can change the semantics of improper-adjacent games; opt-in only
      {PassId::ReorderConditions, "reorder_conditions", "expression", PassPhase::Loop, false,
       false},
      {PassId::JoinExclusiveEdges, "join_exclusive_edges", "join", PassPhase::Loop, true, true},
      {PassId::JoinForkPrefixes, "join_fork_prefixes", "join", PassPhase::Loop, true, true},
      {PassId::JoinForkSuffixes, "join_fork_suffixes", "join", PassPhase::Loop, true, true},
      {PassId::CompactReachability, "compact_reachability", "reachability", PassPhase::Loop, true,
       true},
      {PassId::SkipUnusedTags, "skip_unused_tags", "reachability", PassPhase::Loop, true, true},
      {PassId::InlineReachability, "inline_reachability", "reachability", PassPhase::Loop, true,
       true},
      {PassId::SkipRedundantTags, "skip_redundant_tags", "pruning", PassPhase::Loop, true, true},
      {PassId::CompactSkipEdges, "compact_skip_edges", "pruning", PassPhase::Loop, true, true},
      {PassId::PruneUnreachableNodes, "prune_unreachable_nodes", "pruning", PassPhase::Loop, true,
       true},
      {PassId::PruneUnusedConstsVars, "prune_unused_consts_vars", "pruning", PassPhase::Loop, true,
       true},
      {PassId::SkipArtificialTags, "skip_artificial_tags", "pruning", PassPhase::Final, true,
       true},
      // renames tags and score symbols, so equal-seed outputs stop matching;
      // opt-in only
      {PassId::MangleSymbols, "mangle_symbols", "other", PassPhase::Final, true, false},
  };
  return catalog;
}

inline const PassInfo& pass_info(PassId id) {
  for (const PassInfo& p : pass_catalog())
    if (p.id == id) return p;
  throw RgError("Internal", "unknown pass id");
}

inline std::optional<PassId> pass_by_name(std::string_view name) {
  for (const PassInfo& p : pass_catalog())
    if (name == p.name) return p.id;
  return std::nullopt;
}

// Applies one pass in place. Returns whether the description changed;
// changed == false leaves the description structurally identical.
inline bool run_pass(Game& g, PassId id) {
  switch (id) {
    case PassId::NormalizeConstants: return passes::normalize_constants(g);
    case PassId::NormalizeTypes: return passes::normalize_types(g);
    case PassId::AddExplicitCasts: return passes::add_explicit_casts(g);
    case PassId::ExpandAnyAssignment: return expand_any_assignment(g);
    case PassId::ExpandVariableTags: return expand_variable_tags(g);
    case PassId::SkipSelfAssignCompare: return passes::skip_self_assign_compare(g);
    case PassId::PropagateConstants: return passes::propagate_constants(g);
    case PassId::InlineAssignment: return passes::inline_assignment(g);
    case PassId::MergeAccesses: return passes::merge_accesses(g);
    case PassId::CompactComparisons: return passes::compact_comparisons(g);
    case PassId::ReorderConditions: return passes::reorder_conditions(g);
    case PassId::JoinExclusiveEdges: return passes::join_exclusive_edges(g);
    case PassId::JoinForkPrefixes: return passes::join_fork_prefixes(g);
    case PassId::JoinForkSuffixes: return passes::join_fork_suffixes(g);
    case PassId::CompactReachability: return passes::compact_reachability(g);
    case PassId::SkipUnusedTags: return passes::skip_unused_tags(g);
    case PassId::InlineReachability: return passes::inline_reachability(g);
    case PassId::SkipRedundantTags: return passes::skip_redundant_tags(g);
    case PassId::CompactSkipEdges: return passes::compact_skip_edges(g);
    case PassId::PruneUnreachableNodes: return passes::prune_unreachable_nodes(g);
    case PassId::PruneUnusedConstsVars: return passes::prune_unused_consts_vars(g);
    case PassId::SkipArtificialTags: return passes::skip_artificial_tags(g);
    case PassId::MangleSymbols: return passes::mangle_symbols(g);
  }
  throw RgError("Internal", "unknown pass id");
}

}  // namespace rg
