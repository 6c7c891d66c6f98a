#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "kdv/spectral.hpp"

namespace kdv {

enum class Method { Symplectic, ExplicitResonance, SymmetricLawson };

/// "symplectic", "explicit", "lawson".
std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

/// Norm in which fixed-point updates are measured.
enum class StopNorm { L2, H1 };

struct IntegratorConfig {
  /// Step size. Negative values run the scheme backwards in time.
  double tau;
  /// Stop once the norm of a fixed-point update falls to this value.
  double fp_tol;
  int fp_max_iters = 100;
  bool dealias = false;
  StopNorm stop_norm = StopNorm::L2;

  /// tau with the default stopping threshold |tau|^4.
  static IntegratorConfig for_step(double tau);

  /// Throws InvariantViolation on a zero/non-finite tau, a non-positive
  /// tolerance or a non-positive iteration cap.
  void validate() const;
};

struct StepReport {
  SpectralState state;
  int fp_iterations = 0;
  double fp_residual = 0.0;
};

/// Relative size of the round-off floor on fixed-point updates: iteration also
/// stops once an update is below kRoundoffFloor * eps * |iterate|, since no
/// further progress is possible in double precision.
inline constexpr double kRoundoffFloor = 64.0;

/// The implicit symplectic resonance-based step
///
///   u+ = E u + (1/24) (D u+ + E D u)^2 - (1/24) E (E^-1 D u+ + D u)^2,
///
/// with E = exp(-tau d^3/dx^3) and D = (d/dx)^-1, solved by fixed-point
/// iteration started at u. Phase multipliers are built once per instance.
class SymplecticResonanceStepper {
 public:
  SymplecticResonanceStepper(GridSpec grid, IntegratorConfig cfg);
  StepReport operator()(const SpectralState& u) const;

  /// One application of the fixed-point map at `guess` for the step from `u`.
  SpectralState fixed_point_map(const SpectralState& u,
                                const SpectralState& guess) const;

 private:
  SpectralState apply_map(const SpectralState& linear, const SpectralState& d_u,
                          const SpectralState& e_d_u,
                          const SpectralState& guess) const;

  IntegratorConfig cfg_;
  DiagonalOperator backward_;           // exp(-tau d^3)
  DiagonalOperator antiderivative_;     // d^-1
  DiagonalOperator forward_antideriv_;  // exp(tau d^3) d^-1
};

/// First-order explicit resonance step with both slowly varying factors
/// frozen at the start of the step:
///
///   u+ = E u + (1/6) (E D u)^2 - (1/6) E (D u)^2.
class ExplicitResonanceStepper {
 public:
  ExplicitResonanceStepper(GridSpec grid, IntegratorConfig cfg);
  StepReport operator()(const SpectralState& u) const;

 private:
  IntegratorConfig cfg_;
  DiagonalOperator backward_;
  DiagonalOperator backward_antideriv_;
  DiagonalOperator antiderivative_;
};

/// Symmetric Lawson method: the implicit midpoint rule applied to the twisted
/// equation with the exponential evaluated at the half step,
///
///   u+ = E u + tau H N((H u + H^-1 u+) / 2),   N(w) = (1/2) d/dx (w^2),
///
/// with H = exp(-(tau/2) d^3/dx^3). Same fixed-point machinery as the
/// symplectic step.
class SymmetricLawsonStepper {
 public:
  SymmetricLawsonStepper(GridSpec grid, IntegratorConfig cfg);
  StepReport operator()(const SpectralState& u) const;

 private:
  IntegratorConfig cfg_;
  DiagonalOperator backward_;
  DiagonalOperator half_backward_;
  DiagonalOperator half_forward_;
  DiagonalOperator derivative_;
};

StepReport symplectic_resonance_step(const SpectralState& u,
                                     const IntegratorConfig& cfg);
SpectralState explicit_resonance_step(const SpectralState& u,
                                      const IntegratorConfig& cfg);
StepReport symmetric_lawson_step(const SpectralState& u,
                                 const IntegratorConfig& cfg);

/// Literal Fourier-sum evaluation of the implicit step in the twisted variable
/// (taken at t_n = 0), O(M^2) per sweep:
///
///   v+_m = v_m + sum_{a+b=m} -(exp(-i tau phi) - 1) / (24 a b)
///                               (v+_a + v_a)(v+_b + v_b),
///   phi = m^3 - a^3 - b^3 (= 3 m a b when a + b = m exactly),
///
/// with a + b taken modulo M unless cfg.dealias is set, mirroring the
/// collocation product. Returns u+ = exp(-tau d^3) v+. Requires M <= 128.
/// Verification oracle for symplectic_resonance_step.
SpectralState direct_fourier_step(const SpectralState& u,
                                  const IntegratorConfig& cfg);

/// Same Fourier sums with the frozen-coefficient kernel
/// -(exp(-i tau phi) - 1) / (6 a b) v_a v_b; oracle for the explicit step.
SpectralState direct_fourier_explicit_step(const SpectralState& u,
                                           const IntegratorConfig& cfg);

/// Type-erased single step of any method.
class Stepper {
 public:
  Stepper(Method method, GridSpec grid, IntegratorConfig cfg);
  StepReport operator()(const SpectralState& u) const { return step_(u); }
  Method method() const { return method_; }
  const IntegratorConfig& config() const { return cfg_; }

 private:
  Method method_;
  IntegratorConfig cfg_;
  std::function<StepReport(const SpectralState&)> step_;
};

struct StepObservation {
  long step;    // n >= 1
  double time;  // n * tau
  const SpectralState& state;
  const StepReport& report;
};

using Observer = std::function<void(const StepObservation&)>;

struct TrajectorySummary {
  SpectralState final_state;
  long steps = 0;
  long fp_iterations_total = 0;
  int fp_iterations_max = 0;
  double wall_time_s = 0.0;

  double fp_iterations_mean() const {
    return steps > 0 ? static_cast<double>(fp_iterations_total) / steps : 0.0;
  }
};

/// Runs round(T / |tau|) steps from u0, calling every observer after each
/// step. A FixedPointDivergence escaping a step is rethrown with the step
/// index attached.
TrajectorySummary evolve(const SpectralState& u0, Method method,
                         const IntegratorConfig& cfg, double T,
                         std::span<const Observer> observers = {});

}  // namespace kdv
