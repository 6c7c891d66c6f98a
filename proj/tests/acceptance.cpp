// Acceptance gate: runs each release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any
// criterion fails. Pass criterion names as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "kdv/diagnostics.hpp"
#include "kdv/harness.hpp"
#include "kdv/initial_data.hpp"
#include "kdv/integrators.hpp"

using namespace kdv;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Verdict()> run;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

SpectralState rough(int M, std::uint64_t seed, double theta = 3.5) {
  return random_rough({.modes = M, .theta = theta, .seed = seed});
}

double l2_distance(const SpectralState& a, const SpectralState& b) {
  return sobolev_norm(a - b, SobolevIndex(0.0));
}

ExperimentConfig convergence_config(double theta, std::vector<Method> methods) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Converge;
  cfg.M = 512;
  cfg.T = 1.0;
  cfg.data.theta = theta;
  cfg.data.seed = 1;
  cfg.methods = std::move(methods);
  for (int k = 4; k <= 10; ++k) cfg.tau_grid.push_back(std::ldexp(1.0, -k));
  return cfg;
}

std::optional<double> slope_of(const RunResult& r, Method m) {
  for (const auto& s : r.summaries) {
    if (s.method == m) return s.slope;
  }
  return std::nullopt;
}

const MethodSummary& summary_of(const RunResult& r, Method m) {
  for (const auto& s : r.summaries) {
    if (s.method == m) return s;
  }
  throw std::logic_error("method missing from run");
}

// Shared long run: every method at tau = 0.05 to T = 500.
const RunResult& conservation_run() {
  static const RunResult result = [] {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Conserve;
    cfg.M = 512;
    cfg.T = 500.0;
    cfg.tau_grid = {0.05};
    cfg.data.theta = 3.5;
    cfg.methods = {Method::Symplectic, Method::ExplicitResonance,
                   Method::SymmetricLawson};
    return run_conservation(cfg);
  }();
  return result;
}

const RunResult& rough_convergence_run() {
  static const RunResult result = run_convergence(
      convergence_config(3.5, {Method::Symplectic, Method::ExplicitResonance}));
  return result;
}

Verdict oracle_equivalence() {
  double worst = 0.0;
  for (int M : {16, 32, 64}) {
    for (double tau : {0.1, 0.01}) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        IntegratorConfig cfg = IntegratorConfig::for_step(tau);
        cfg.fp_tol = kTightTolerance;
        const auto u = rough(M, seed);
        worst = std::max(worst, l2_distance(symplectic_resonance_step(u, cfg).state,
                                            direct_fourier_step(u, cfg)));
      }
    }
  }
  return {worst <= 1e-11, fmt("max L2 difference %.3g (tol 1e-11, 120 cases)", worst)};
}

Verdict second_order_smooth() {
  const auto r = run_convergence(convergence_config(5.5, {Method::Symplectic}));
  const auto s = slope_of(r, Method::Symplectic);
  if (!s) return {false, "no slope (too few rows above the error floor)"};
  return {*s >= 1.75 && *s <= 2.25,
          fmt("theta=5.5 slope %.4f (want [1.75, 2.25]), floor %.3g", *s,
              r.self_convergence_floor.value_or(NAN))};
}

Verdict first_order_rough() {
  const auto s = slope_of(rough_convergence_run(), Method::Symplectic);
  if (!s) return {false, "no slope"};
  return {*s >= 0.9, fmt("theta=3.5 symplectic slope %.4f (want >= 0.9)", *s)};
}

Verdict explicit_first_order() {
  const auto s = slope_of(rough_convergence_run(), Method::ExplicitResonance);
  if (!s) return {false, "no slope"};
  return {*s >= 0.75 && *s <= 1.25,
          fmt("theta=3.5 explicit slope %.4f (want [0.75, 1.25])", *s)};
}

Verdict momentum_conservation() {
  const auto& s = summary_of(conservation_run(), Method::Symplectic);
  if (s.status != RowStatus::Ok) return {false, "symplectic run diverged"};
  return {s.max_momentum_err < 1e-10,
          fmt("max |I0 drift| %.3g over %.0f steps (tol 1e-10)", s.max_momentum_err,
              static_cast<double>(s.steps))};
}

Verdict pairing_conservation() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Symplecticity;
  cfg.M = 512;
  cfg.T = 50.0;  // 1000 steps
  cfg.tau_grid = {0.05};
  cfg.data.theta = 3.5;
  cfg.data.seed = 1;
  cfg.data.second_seed = 2;
  cfg.methods = {Method::Symplectic};
  const auto r = run_symplecticity(cfg);
  const auto& s = r.summaries.front();
  if (s.status != RowStatus::Ok) return {false, "symplectic run diverged"};
  return {s.max_pairing_err < 1e-10,
          fmt("max |omega drift| %.3g over %.0f steps (tol 1e-10)", s.max_pairing_err,
              static_cast<double>(s.steps))};
}

Verdict time_symmetry() {
  const double fp_tol = 1e-13;
  const int grids[] = {64, 256, 512};
  const double taus[] = {0.1, 0.05, 0.01};
  double worst_ratio = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto u = rough(grids[k % 3], 100 + static_cast<std::uint64_t>(k));
    IntegratorConfig fwd = IntegratorConfig::for_step(taus[(k / 3) % 3]);
    fwd.fp_tol = fp_tol;
    IntegratorConfig back = fwd;
    back.tau = -fwd.tau;
    const auto again = symplectic_resonance_step(
        symplectic_resonance_step(u, fwd).state, back).state;
    worst_ratio = std::max(worst_ratio, l2_distance(again, u) / fp_tol);
  }
  return {worst_ratio <= 4.0,
          fmt("max round-trip error %.3g fp_tol (want <= 4, 50 cases)", worst_ratio)};
}

Verdict fixed_point_behaviour() {
  const auto& s = summary_of(conservation_run(), Method::Symplectic);
  if (s.status != RowStatus::Ok) return {false, "symplectic run diverged"};
  const bool ok = s.fp_iter_max <= 30 && s.fp_iter_mean >= 5.0 && s.fp_iter_mean <= 25.0;
  return {ok, fmt("iterations per step: max %.0f (want <= 30), mean %.3f (want [5, 25])",
                  s.fp_iter_max, s.fp_iter_mean)};
}

Verdict resonance_sweep() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ResonanceSweep;
  cfg.M = 256;
  cfg.T = 100.0;
  cfg.data.theta = 3.5;
  cfg.methods = {Method::Symplectic};
  const double lo = 0.05, hi = 0.2;
  for (int i = 0; i < 200; ++i) cfg.tau_grid.push_back(lo * std::pow(hi / lo, i / 199.0));
  const auto r = run_resonance_sweep(cfg);
  const auto& a = *r.sweep_analysis;
  if (!a.envelope_slope) return {false, "no envelope"};
  const double slope = *a.envelope_slope;
  const bool ok = slope >= 1.6 && slope <= 2.4 && !a.spike_taus.empty();
  return {ok, fmt("envelope slope %.4f (want [1.6, 2.4]), %.0f spike(s) (want >= 1)", slope,
                  static_cast<double>(a.spike_taus.size()))};
}

Verdict lawson_instability() {
  const auto& r = conservation_run();
  const auto& lawson = summary_of(r, Method::SymmetricLawson);
  const bool resonance_ok = summary_of(r, Method::Symplectic).status == RowStatus::Ok &&
                            summary_of(r, Method::ExplicitResonance).status == RowStatus::Ok;
  const bool diverged = lawson.status == RowStatus::Diverged;
  const double at = diverged ? static_cast<double>(*lawson.diverged_at_step) * 0.05 : NAN;
  return {diverged && resonance_ok,
          fmt("lawson diverged at t=%.4g; resonance methods completed: ", at) +
              (resonance_ok ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"oracle_equivalence", oracle_equivalence},
      {"second_order_smooth", second_order_smooth},
      {"first_order_rough", first_order_rough},
      {"explicit_first_order", explicit_first_order},
      {"momentum_conservation", momentum_conservation},
      {"pairing_conservation", pairing_conservation},
      {"time_symmetry", time_symmetry},
      {"fixed_point_iterations", fixed_point_behaviour},
      {"resonance_sweep", resonance_sweep},
      {"lawson_instability", lawson_instability},
  };
  const std::set<std::string> wanted(argv + 1, argv + argc);

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.contains(c.name)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.name.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !v.pass;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
