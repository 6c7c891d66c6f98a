#pragma once

#include <stdexcept>
#include <string>

namespace kdv {

/// Raised when a state would break the zero-mean / real-field / Nyquist-free
/// contract, or when an operation is handed inputs outside its domain.
class InvariantViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two states living on grids with different mode counts were combined.
class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch(int lhs_modes, int rhs_modes)
      : std::invalid_argument("grid mismatch: " + std::to_string(lhs_modes) +
                              " vs " + std::to_string(rhs_modes) + " modes"),
        lhs_modes_(lhs_modes),
        rhs_modes_(rhs_modes) {}

  int lhs_modes() const { return lhs_modes_; }
  int rhs_modes() const { return rhs_modes_; }

 private:
  int lhs_modes_;
  int rhs_modes_;
};

/// The implicit step's fixed-point iteration failed: either the iteration cap
/// was hit or the update norm blew up between sweeps. Usually means the time
/// step is outside the contraction regime for the current data.
class FixedPointDivergence : public std::runtime_error {
 public:
  FixedPointDivergence(const std::string& what, int iterations,
                       double residual, long step_index = -1)
      : std::runtime_error(what),
        iterations_(iterations),
        residual_(residual),
        step_index_(step_index) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  /// Index of the failing step within a trajectory, or -1 for a lone step.
  long step_index() const { return step_index_; }

 private:
  int iterations_;
  double residual_;
  long step_index_;
};

}  // namespace kdv
