#include "kdv/integrators.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "kdv/errors.hpp"

namespace kdv {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Symplectic:
      return "symplectic";
    case Method::ExplicitResonance:
      return "explicit";
    case Method::SymmetricLawson:
      return "lawson";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::Symplectic, Method::ExplicitResonance,
                   Method::SymmetricLawson}) {
    if (name == method_name(m)) return m;
  }
  return std::nullopt;
}

IntegratorConfig IntegratorConfig::for_step(double tau) {
  const double t2 = tau * tau;
  return IntegratorConfig{.tau = tau, .fp_tol = t2 * t2};
}

void IntegratorConfig::validate() const {
  if (!std::isfinite(tau) || tau == 0.0) {
    throw InvariantViolation("time step must be finite and nonzero");
  }
  if (!(fp_tol > 0.0)) {
    throw InvariantViolation("fixed-point tolerance must be positive");
  }
  if (fp_max_iters < 1) {
    throw InvariantViolation("fixed-point iteration cap must be >= 1");
  }
}

namespace {

double stop_norm(const SpectralState& s, StopNorm norm) {
  return sobolev_norm(s, SobolevIndex(norm == StopNorm::H1 ? 1.0 : 0.0));
}

// Iterates x <- map(x) from `start` until the update norm drops to the
// tolerance (or to the round-off floor of the iterate).
template <class Map>
StepReport iterate_to_fixed_point(const SpectralState& start, Map&& map,
                                  const IntegratorConfig& cfg) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  SpectralState current = start;
  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= cfg.fp_max_iters; ++iter) {
    SpectralState next = map(current);
    const double residual = stop_norm(next - current, cfg.stop_norm);
    const double floor = kRoundoffFloor * eps * stop_norm(next, cfg.stop_norm);
    if (!std::isfinite(residual)) {
      throw FixedPointDivergence("fixed-point iteration produced non-finite "
                                 "values",
                                 iter, residual);
    }
    if (residual <= cfg.fp_tol || residual <= floor) {
      return StepReport{std::move(next), iter, residual};
    }
    if (residual > 10.0 * previous) {
      throw FixedPointDivergence(
          "fixed-point update grew more than 10x between sweeps (" +
              std::to_string(previous) + " -> " + std::to_string(residual) +
              ")",
          iter, residual);
    }
    previous = residual;
    current = std::move(next);
  }
  throw FixedPointDivergence("fixed-point iteration cap of " +
                                 std::to_string(cfg.fp_max_iters) +
                                 " reached without convergence",
                             cfg.fp_max_iters, previous);
}

}  // namespace

// ---------------------------------------------------------------------------

SymplecticResonanceStepper::SymplecticResonanceStepper(GridSpec grid,
                                                       IntegratorConfig cfg)
    : cfg_(cfg),
      backward_(DiagonalOperator::free_flow(grid, -cfg.tau)),
      antiderivative_(DiagonalOperator::antiderivative(grid)),
      forward_antideriv_(DiagonalOperator::free_flow(grid, cfg.tau) *
                         DiagonalOperator::antiderivative(grid)) {
  cfg_.validate();
}

SpectralState SymplecticResonanceStepper::apply_map(
    const SpectralState& linear, const SpectralState& d_u,
    const SpectralState& e_d_u, const SpectralState& guess) const {
  SpectralState next =
      pointwise_square(antiderivative_(guess) + e_d_u, cfg_.dealias);
  next -= backward_(
      pointwise_square(forward_antideriv_(guess) + d_u, cfg_.dealias));
  next *= 1.0 / 24.0;
  return next += linear;
}

SpectralState SymplecticResonanceStepper::fixed_point_map(
    const SpectralState& u, const SpectralState& guess) const {
  const SpectralState d_u = antiderivative_(u);
  return apply_map(backward_(u), d_u, backward_(d_u), guess);
}

StepReport SymplecticResonanceStepper::operator()(const SpectralState& u) const {
  const SpectralState linear = backward_(u);
  const SpectralState d_u = antiderivative_(u);
  const SpectralState e_d_u = backward_(d_u);
  return iterate_to_fixed_point(
      u,
      [&](const SpectralState& guess) {
        return apply_map(linear, d_u, e_d_u, guess);
      },
      cfg_);
}

// ---------------------------------------------------------------------------

ExplicitResonanceStepper::ExplicitResonanceStepper(GridSpec grid,
                                                   IntegratorConfig cfg)
    : cfg_(cfg),
      backward_(DiagonalOperator::free_flow(grid, -cfg.tau)),
      backward_antideriv_(DiagonalOperator::free_flow(grid, -cfg.tau) *
                          DiagonalOperator::antiderivative(grid)),
      antiderivative_(DiagonalOperator::antiderivative(grid)) {
  cfg_.validate();
}

StepReport ExplicitResonanceStepper::operator()(const SpectralState& u) const {
  SpectralState next = pointwise_square(backward_antideriv_(u), cfg_.dealias);
  next -= backward_(pointwise_square(antiderivative_(u), cfg_.dealias));
  next *= 1.0 / 6.0;
  next += backward_(u);
  return StepReport{std::move(next), 0, 0.0};
}

// ---------------------------------------------------------------------------

SymmetricLawsonStepper::SymmetricLawsonStepper(GridSpec grid,
                                               IntegratorConfig cfg)
    : cfg_(cfg),
      backward_(DiagonalOperator::free_flow(grid, -cfg.tau)),
      half_backward_(DiagonalOperator::free_flow(grid, -0.5 * cfg.tau)),
      half_forward_(DiagonalOperator::free_flow(grid, 0.5 * cfg.tau)),
      derivative_(DiagonalOperator::derivative(grid, 1)) {
  cfg_.validate();
}

StepReport SymmetricLawsonStepper::operator()(const SpectralState& u) const {
  const SpectralState linear = backward_(u);
  const SpectralState half_u = half_backward_(u);
  // tau * H * (1/2) d/dx, applied after squaring the midpoint.
  const DiagonalOperator kick = half_backward_ * derivative_;
  const double weight = 0.5 * cfg_.tau;
  auto map = [&](const SpectralState& guess) {
    SpectralState mid = half_u + half_forward_(guess);
    mid *= 0.5;
    SpectralState next = kick(pointwise_square(mid, cfg_.dealias));
    next *= weight;
    return next += linear;
  };
  return iterate_to_fixed_point(u, map, cfg_);
}

// ---------------------------------------------------------------------------

StepReport symplectic_resonance_step(const SpectralState& u,
                                     const IntegratorConfig& cfg) {
  return SymplecticResonanceStepper(u.grid(), cfg)(u);
}

SpectralState explicit_resonance_step(const SpectralState& u,
                                      const IntegratorConfig& cfg) {
  return ExplicitResonanceStepper(u.grid(), cfg)(u).state;
}

StepReport symmetric_lawson_step(const SpectralState& u,
                                 const IntegratorConfig& cfg) {
  return SymmetricLawsonStepper(u.grid(), cfg)(u);
}

Stepper::Stepper(Method method, GridSpec grid, IntegratorConfig cfg)
    : method_(method), cfg_(cfg) {
  switch (method) {
    case Method::Symplectic:
      step_ = SymplecticResonanceStepper(grid, cfg);
      break;
    case Method::ExplicitResonance:
      step_ = ExplicitResonanceStepper(grid, cfg);
      break;
    case Method::SymmetricLawson:
      step_ = SymmetricLawsonStepper(grid, cfg);
      break;
  }
}

TrajectorySummary evolve(const SpectralState& u0, Method method,
                         const IntegratorConfig& cfg, double T,
                         std::span<const Observer> observers) {
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvariantViolation("final time must be finite and non-negative");
  }
  const long steps = std::lround(T / std::abs(cfg.tau));
  const Stepper stepper(method, u0.grid(), cfg);

  const auto start = std::chrono::steady_clock::now();
  TrajectorySummary summary{.final_state = u0};
  for (long n = 1; n <= steps; ++n) {
    std::optional<StepReport> attempt;
    try {
      attempt = stepper(summary.final_state);
    } catch (const FixedPointDivergence& e) {
      throw FixedPointDivergence(
          std::string(method_name(method)) + " step " + std::to_string(n) +
              ": " + e.what(),
          e.iterations(), e.residual(), n);
    }
    const StepReport& report = *attempt;
    summary.final_state = report.state;
    summary.steps = n;
    summary.fp_iterations_total += report.fp_iterations;
    summary.fp_iterations_max =
        std::max(summary.fp_iterations_max, report.fp_iterations);
    const StepObservation obs{n, static_cast<double>(n) * cfg.tau,
                              summary.final_state, report};
    for (const auto& observer : observers) observer(obs);
  }
  summary.wall_time_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return summary;
}

}  // namespace kdv
