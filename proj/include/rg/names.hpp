#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rg {

// Dense id for an interned name. Ids are assigned in first-seen order and
// are stable for the lifetime of the owning NameTable; all tie-breaking and
// sorting in the toolchain goes through these ids.
struct NameId {
  int32_t v = -1;

  [[nodiscard]] bool valid() const { return v >= 0; }

  friend bool operator==(NameId a, NameId b) { return a.v == b.v; }
  friend bool operator!=(NameId a, NameId b) { return a.v != b.v; }
  friend bool operator<(NameId a, NameId b) { return a.v < b.v; }
  friend bool operator>(NameId a, NameId b) { return a.v > b.v; }
};

// Case-sensitive name interner. One table per game description; every name
// (types, symbols, variables, nodes, tags) shares it.
class NameTable {
 public:
  NameId intern(std::string_view text) {
    auto it = ids_.find(std::string(text));
    if (it != ids_.end()) return NameId{it->second};
    const int32_t id = static_cast<int32_t>(texts_.size());
    texts_.emplace_back(text);
    ids_.emplace(texts_.back(), id);
    return NameId{id};
  }

  [[nodiscard]] NameId find(std::string_view text) const {
    auto it = ids_.find(std::string(text));
    return it == ids_.end() ? NameId{} : NameId{it->second};
  }

  [[nodiscard]] std::string_view text(NameId id) const {
    return texts_.at(static_cast<size_t>(id.v));
  }

  [[nodiscard]] size_t size() const { return texts_.size(); }

 private:
  std::vector<std::string> texts_;
  std::unordered_map<std::string, int32_t> ids_;
};

// The three reserved keywords of the language.
inline bool is_reserved_keyword(std::string_view s) {
  return s == "const" || s == "type" || s == "var";
}

inline bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_name_char(char c) { return is_name_start(c) || (c >= '0' && c <= '9'); }

// Declared type/const/var names must not start with a digit; symbols, nodes
// and tags may be purely numeric (e.g. the members of {0,1,2}).
inline bool is_declarable_name(std::string_view s) {
  if (s.empty() || !is_name_start(s[0])) return false;
  for (char c : s)
    if (!is_name_char(c)) return false;
  return !is_reserved_keyword(s);
}

}  // namespace rg

template <>
struct std::hash<rg::NameId> {
  size_t operator()(rg::NameId id) const noexcept {
    return std::hash<int32_t>{}(id.v);
  }
};
