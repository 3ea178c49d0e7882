#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "rg/diag.hpp"
#include "rg/names.hpp"
#include "rg/types.hpp"

namespace rg {

inline uint64_t mix64(uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Hash128 {
  uint64_t a = 0, b = 0;

  friend bool operator==(const Hash128& x, const Hash128& y) {
    return x.a == y.a && x.b == y.b;
  }
};

inline Hash128 hash_combine(Hash128 h, uint64_t x) {
  h.a = mix64(h.a ^ x);
  h.b = mix64(h.b + (x ^ 0xd1b54a32d192ed03ULL));
  return h;
}

struct MapData;

// A value is a symbol or a default-carrying map. Values are immutable and
// share map payloads, so copying a value (and hence a whole semistate) is a
// pointer copy. Writes build new values along the written path only.
class Value {
 public:
  Value() = default;

  static Value symbol(NameId s) {
    Value v;
    v.sym_ = s;
    return v;
  }

  static Value map(std::shared_ptr<const MapData> data) {
    Value v;
    v.map_ = std::move(data);
    return v;
  }

  [[nodiscard]] bool is_map() const { return map_ != nullptr; }
  [[nodiscard]] bool is_symbol() const { return map_ == nullptr; }
  [[nodiscard]] NameId sym() const { return sym_; }
  [[nodiscard]] const MapData& map_data() const { return *map_; }
  [[nodiscard]] const std::shared_ptr<const MapData>& map_ptr() const { return map_; }

 private:
  NameId sym_;
  std::shared_ptr<const MapData> map_;
};

using MapEntry = std::pair<NameId, Value>;

struct MapData {
  Value def;
  std::vector<MapEntry> entries;  // canonical form: sorted by key, none equal to def
  mutable Hash128 cached_hash;
  mutable bool hashed = false;
};

inline Value make_map(Value def, std::vector<MapEntry> entries) {
  auto data = std::make_shared<MapData>();
  data->def = std::move(def);
  data->entries = std::move(entries);
  return Value::map(std::move(data));
}

// Structural equality on values. On canonicalized values of a common type
// this is a sound (conservative) stand-in for extensional equality: equal
// structures are always extensionally equal, while extensionally equal maps
// with different defaults compare unequal and merely cost extra exploration.
inline bool structural_equal(const Value& a, const Value& b) {
  if (a.is_symbol() != b.is_symbol()) return false;
  if (a.is_symbol()) return a.sym() == b.sym();
  if (a.map_ptr() == b.map_ptr()) return true;
  const MapData& ma = a.map_data();
  const MapData& mb = b.map_data();
  if (ma.entries.size() != mb.entries.size()) return false;
  if (!structural_equal(ma.def, mb.def)) return false;
  for (size_t i = 0; i < ma.entries.size(); ++i) {
    if (ma.entries[i].first != mb.entries[i].first) return false;
    if (!structural_equal(ma.entries[i].second, mb.entries[i].second)) return false;
  }
  return true;
}

inline Hash128 value_hash(const Value& v) {
  if (v.is_symbol()) return hash_combine(Hash128{0x736d, 0x79c1}, static_cast<uint64_t>(v.sym().v));
  const MapData& m = v.map_data();
  if (m.hashed) return m.cached_hash;
  Hash128 h{0x6d61ULL, 0x3c7aULL};
  Hash128 dh = value_hash(m.def);
  h = hash_combine(h, dh.a);
  h = hash_combine(h, dh.b);
  for (const auto& [k, val] : m.entries) {
    h = hash_combine(h, static_cast<uint64_t>(k.v));
    Hash128 vh = value_hash(val);
    h = hash_combine(h, vh.a);
    h = hash_combine(h, vh.b);
  }
  m.cached_hash = h;
  m.hashed = true;
  return h;
}

// Total order on canonical values; used only for deterministic tie-breaking.
inline int value_compare(const Value& a, const Value& b) {
  if (a.is_symbol() != b.is_symbol()) return a.is_symbol() ? -1 : 1;
  if (a.is_symbol()) return (a.sym().v < b.sym().v) ? -1 : (a.sym().v > b.sym().v ? 1 : 0);
  const MapData& ma = a.map_data();
  const MapData& mb = b.map_data();
  if (int c = value_compare(ma.def, mb.def)) return c;
  size_t n = std::min(ma.entries.size(), mb.entries.size());
  for (size_t i = 0; i < n; ++i) {
    if (ma.entries[i].first != mb.entries[i].first)
      return ma.entries[i].first < mb.entries[i].first ? -1 : 1;
    if (int c = value_compare(ma.entries[i].second, mb.entries[i].second)) return c;
  }
  if (ma.entries.size() != mb.entries.size())
    return ma.entries.size() < mb.entries.size() ? -1 : 1;
  return 0;
}

// Looks up a key in a map value; missing keys yield the default. Maps are
// total functions, so this never fails.
inline const Value& map_lookup(const Value& m, NameId key) {
  const MapData& d = m.map_data();
  auto it = std::lower_bound(d.entries.begin(), d.entries.end(), key,
                             [](const MapEntry& e, NameId k) { return e.first < k; });
  if (it != d.entries.end() && it->first == key) return it->second;
  return d.def;
}

// Sorts entries by key and drops entries structurally equal to the default,
// recursively. Idempotent.
inline Value canonicalize(const Value& v) {
  if (v.is_symbol()) return v;
  const MapData& m = v.map_data();
  Value def = canonicalize(m.def);
  std::vector<MapEntry> entries;
  entries.reserve(m.entries.size());
  for (const auto& [k, val] : m.entries) {
    Value cv = canonicalize(val);
    if (!structural_equal(cv, def)) entries.emplace_back(k, std::move(cv));
  }
  std::sort(entries.begin(), entries.end(),
            [](const MapEntry& x, const MapEntry& y) { return x.first < y.first; });
  return make_map(std::move(def), std::move(entries));
}

// Verifies that a value structurally matches a resolved type: maps line up
// with arrows, keys lie in source domains, leaf symbols in set domains.
inline bool value_matches_type(const Value& v, const TypeExpr& resolved) {
  if (resolved.is_set()) return v.is_symbol() && domain_contains(resolved, v.sym());
  if (!v.is_map()) return false;
  const MapData& m = v.map_data();
  if (!value_matches_type(m.def, *resolved.dest)) return false;
  for (const auto& [k, val] : m.entries) {
    if (!domain_contains(*resolved.source, k)) return false;
    if (!value_matches_type(val, *resolved.dest)) return false;
  }
  return true;
}

// canonicalize_value from the core model: shape-checked canonicalization.
inline Value canonicalize_value(const TypeExpr& resolved, const Value& v) {
  if (!value_matches_type(v, resolved))
    throw RgError("ShapeMismatch", "value does not match its declared type");
  return canonicalize(v);
}

// Writes `nv` at the end of a key path into `cur`, path-copying the touched
// maps and keeping the result canonical (sorted entries, none equal to the
// default). `resolved` is the declared type of `cur`; checked mode verifies
// keys and the written value against it.
inline Value write_at(const TypeExpr& resolved, const Value& cur, std::span<const NameId> keys,
                      Value nv, bool checked) {
  if (keys.empty()) {
    if (checked && !value_matches_type(nv, resolved))
      throw RgError("AssignOutsideDomain", "assigned value lies outside the target type");
    return nv;
  }
  if (!resolved.is_arrow() || !cur.is_map())
    throw RgError("AssignOutsideDomain", "assignment path is deeper than the variable's type");
  if (checked && !domain_contains(*resolved.source, keys.front()))
    throw RgError("AssignOutsideDomain", "assignment key lies outside the source domain");
  const MapData& m = cur.map_data();
  Value child = map_lookup(cur, keys.front());
  Value nchild = write_at(*resolved.dest, child, keys.subspan(1), std::move(nv), checked);

  std::vector<MapEntry> entries;
  entries.reserve(m.entries.size() + 1);
  const bool drop = structural_equal(nchild, m.def);
  bool placed = false;
  for (const auto& [k, v] : m.entries) {
    if (k == keys.front()) {
      placed = true;
      if (!drop) entries.emplace_back(k, nchild);
      continue;
    }
    if (!placed && !drop && keys.front() < k) {
      entries.emplace_back(keys.front(), nchild);
      placed = true;
    }
    entries.emplace_back(k, v);
  }
  if (!placed && !drop) entries.emplace_back(keys.front(), nchild);
  return make_map(m.def, std::move(entries));
}

// Extensional equality of two values over a type's key domains: maps are
// compared as total functions with defaults expanded logically. `resolved`
// supplies the domain at every arrow level; for comparisons between values
// of merely assignable types, pass the intersected domain per level.
// Tolerates non-canonical inputs (unsorted entries, entries that repeat the
// default), so lookups scan instead of bisecting.
inline bool value_equal(const TypeExpr& resolved, const Value& a, const Value& b) {
  if (a.is_symbol() || b.is_symbol()) {
    return a.is_symbol() && b.is_symbol() && a.sym() == b.sym();
  }
  if (!resolved.is_arrow()) return false;  // shape mismatch: maps need a key domain
  const MapData& ma = a.map_data();
  const MapData& mb = b.map_data();
  auto find = [](const MapData& m, NameId key) -> const Value& {
    for (const auto& [k, v] : m.entries)
      if (k == key) return v;
    return m.def;
  };
  size_t covered = 0;
  for (NameId k : resolved.source->symbols) {
    const Value& va = find(ma, k);
    const Value& vb = find(mb, k);
    if (&va != &ma.def || &vb != &mb.def) {
      if (!value_equal(*resolved.dest, va, vb)) return false;
      ++covered;
    }
  }
  if (covered < resolved.source->symbols.size())
    return value_equal(*resolved.dest, ma.def, mb.def);
  return true;
}

}  // namespace rg
