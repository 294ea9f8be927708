#pragma once

#include <stdexcept>

namespace rvlab {

/// A propagation was stopped by a resolution or sanity guard; carries the
/// evolution coordinate at which the guard fired.
struct SolverAbort : std::runtime_error {
  double z;
  SolverAbort(const std::string& what, double z_) : std::runtime_error(what), z(z_) {}
};

/// A bisection was asked to start from a bracket whose endpoints do not
/// disagree, or lost its bracket mid-search.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rvlab
