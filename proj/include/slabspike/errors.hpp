#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "slabspike/types.hpp"

namespace slabspike {

/// Malformed or unusable input data (bad CSV, constant column, missing column).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based input line, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Argument outside the open domain of a closed-form map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A factorization or sum of squares degenerated.  Carries the active set
/// involved and, once raised out of a chain, the sweep index.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::vector<Index> active, long sweep = -1)
      : std::runtime_error(format(what, active, sweep)),
        reason_(what),
        active_(std::move(active)),
        sweep_(sweep) {}

  const std::vector<Index>& active() const noexcept { return active_; }
  long sweep() const noexcept { return sweep_; }

  NumericalError at_sweep(long sweep) const { return NumericalError(reason_, active_, sweep); }

 private:
  static std::string format(const std::string& what, const std::vector<Index>& active, long sweep) {
    std::string msg = what + " (active set {";
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (i) msg += ",";
      msg += std::to_string(active[i]);
    }
    msg += "})";
    if (sweep >= 0) msg += " at sweep " + std::to_string(sweep);
    return msg;
  }

  std::string reason_;
  std::vector<Index> active_;
  long sweep_;
};

}  // namespace slabspike
