#pragma once

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rg/diag.hpp"
#include "rg/names.hpp"

namespace rg {

// A type is a finite set of symbols, an arrow (map) type, or a reference to
// a declared alias. Arrow children are shared so copies stay cheap.
struct TypeExpr {
  enum class Kind { Set, Arrow, Alias };

  Kind kind = Kind::Set;
  std::vector<NameId> symbols;             // Set: domain in declaration order
  std::shared_ptr<const TypeExpr> source;  // Arrow
  std::shared_ptr<const TypeExpr> dest;    // Arrow
  NameId alias;                            // Alias

  static TypeExpr set(std::vector<NameId> syms) {
    TypeExpr t;
    t.kind = Kind::Set;
    t.symbols = std::move(syms);
    return t;
  }

  static TypeExpr arrow(TypeExpr src, TypeExpr dst) {
    TypeExpr t;
    t.kind = Kind::Arrow;
    t.source = std::make_shared<TypeExpr>(std::move(src));
    t.dest = std::make_shared<TypeExpr>(std::move(dst));
    return t;
  }

  static TypeExpr alias_ref(NameId name) {
    TypeExpr t;
    t.kind = Kind::Alias;
    t.alias = name;
    return t;
  }

  [[nodiscard]] bool is_set() const { return kind == Kind::Set; }
  [[nodiscard]] bool is_arrow() const { return kind == Kind::Arrow; }
  [[nodiscard]] bool is_alias() const { return kind == Kind::Alias; }
};

using AliasMap = std::unordered_map<NameId, TypeExpr>;

// Replaces every alias reference by its definition. Alias cycles and unknown
// aliases are reported as RgError (RecursiveAlias / UnknownAlias).
inline TypeExpr resolve_type(const TypeExpr& t, const AliasMap& aliases) {
  struct Resolver {
    const AliasMap& aliases;
    std::unordered_set<int32_t> in_progress;

    TypeExpr run(const TypeExpr& t) {
      switch (t.kind) {
        case TypeExpr::Kind::Set:
          return t;
        case TypeExpr::Kind::Arrow:
          return TypeExpr::arrow(run(*t.source), run(*t.dest));
        case TypeExpr::Kind::Alias: {
          auto it = aliases.find(t.alias);
          if (it == aliases.end())
            throw RgError("UnknownAlias", "unknown type alias (id " + std::to_string(t.alias.v) + ")");
          if (!in_progress.insert(t.alias.v).second)
            throw RgError("RecursiveAlias", "recursive type alias (id " + std::to_string(t.alias.v) + ")");
          TypeExpr out = run(it->second);
          in_progress.erase(t.alias.v);
          return out;
        }
      }
      throw RgError("Internal", "corrupt TypeExpr");
    }
  };
  return Resolver{aliases, {}}.run(t);
}

inline std::vector<int32_t> sorted_domain(const TypeExpr& set_type) {
  std::vector<int32_t> ids;
  ids.reserve(set_type.symbols.size());
  for (NameId s : set_type.symbols) ids.push_back(s.v);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Set types compare as symbol sets (order-insensitive); arrow types compare
// componentwise. Both inputs must be resolved.
inline bool type_equal(const TypeExpr& t, const TypeExpr& u) {
  if (t.kind != u.kind) return false;
  if (t.is_set()) return sorted_domain(t) == sorted_domain(u);
  return type_equal(*t.source, *u.source) && type_equal(*t.dest, *u.dest);
}

// Assignability: set types need a non-empty domain intersection; arrow types
// need both components assignable. Symmetric by construction.
inline bool assignable(const TypeExpr& t, const TypeExpr& u) {
  if (t.is_set() && u.is_set()) {
    auto a = sorted_domain(t), b = sorted_domain(u);
    std::vector<int32_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return !common.empty();
  }
  if (t.is_arrow() && u.is_arrow())
    return assignable(*t.source, *u.source) && assignable(*t.dest, *u.dest);
  return false;
}

inline bool domain_contains(const TypeExpr& set_type, NameId sym) {
  for (NameId s : set_type.symbols)
    if (s == sym) return true;
  return false;
}

// Number of arrows plus one; set types have type length 1.
inline int type_length(const TypeExpr& resolved) {
  return resolved.is_arrow() ? 1 + type_length(*resolved.dest) : 1;
}

}  // namespace rg
