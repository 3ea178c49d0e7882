#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rg {

// Byte-accurate source location; line and column are 1-based.
struct Span {
  uint32_t offset = 0;
  uint32_t length = 0;
  uint32_t line = 0;
  uint32_t column = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;     // short stable identifier, e.g. "UnexpectedToken"
  std::string message;  // human-readable detail
  Span span;
};

using Diagnostics = std::vector<Diagnostic>;

inline size_t count_errors(const Diagnostics& ds) {
  size_t n = 0;
  for (const auto& d : ds)
    if (d.severity == Severity::Error) ++n;
  return n;
}

inline void add_error(Diagnostics& ds, std::string code, std::string message, Span span = {}) {
  ds.push_back(Diagnostic{Severity::Error, std::move(code), std::move(message), span});
}

inline void add_warning(Diagnostics& ds, std::string code, std::string message, Span span = {}) {
  ds.push_back(Diagnostic{Severity::Warning, std::move(code), std::move(message), span});
}

// Hard failure carrying a stable error code. Used for contract violations
// (illegal move, exhausted budget, improper description surfaced at runtime);
// recoverable user-input problems travel as Diagnostics instead.
class RgError : public std::runtime_error {
 public:
  RgError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace rg
