#include "kdv/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "kdv/errors.hpp"
#include "kdv/initial_data.hpp"

namespace kdv {

namespace {

// Raised from observers when a trajectory leaves the finite range without the
// fixed-point solver noticing (the explicit step has no solver).
struct BlowUp {
  long step;
};

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

RunResult blank_result(const ExperimentConfig& cfg) {
  RunResult result;
  result.kind = cfg.kind;
  result.config_json = cfg.to_json();
  result.config_hash = cfg.hash();
  return result;
}

SpectralState rough_state(const ExperimentConfig& cfg, std::uint64_t seed) {
  return random_rough({.modes = cfg.M, .theta = cfg.data.theta, .seed = seed});
}

// The partner trajectory of a pairing run.
SpectralState second_state(const ExperimentConfig& cfg) {
  if (cfg.data.kind == DataKind::Zero) return SpectralState::zero(GridSpec(cfg.M));
  return rough_state(cfg, cfg.data.second_seed);
}

}  // namespace

std::string_view status_name(RowStatus status) {
  return status == RowStatus::Ok ? "ok" : "diverged";
}

SpectralState make_initial_state(const ExperimentConfig& cfg) {
  switch (cfg.data.kind) {
    case DataKind::Rough:
      return rough_state(cfg, cfg.data.seed);
    case DataKind::Smooth:
      return smooth_profile(cfg.M);
    case DataKind::Zero:
      return SpectralState::zero(GridSpec(cfg.M));
    case DataKind::File: {
      std::ifstream in(cfg.data.path);
      if (!in) throw ConfigError("cannot open state file " + cfg.data.path);
      SpectralState state = read_state(in);
      if (state.grid().modes() != cfg.M) {
        throw ConfigError("state file has M = " +
                          std::to_string(state.grid().modes()) +
                          " but the config asks for " + std::to_string(cfg.M));
      }
      return state;
    }
  }
  throw ConfigError("unknown data kind");
}

RunResult run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::Converge) throw ConfigError("not a converge config");
  RunResult result = blank_result(cfg);
  const SpectralState u0 = make_initial_state(cfg);

  const double ref_tau = cfg.effective_ref_tau();
  auto reference = [&](double tau) {
    try {
      return evolve(u0, Method::Symplectic, cfg.integrator_config(tau), cfg.T)
          .final_state;
    } catch (const FixedPointDivergence& e) {
      throw ReferenceFailure(std::string("reference solution failed: ") + e.what());
    }
  };
  const SpectralState ref = reference(ref_tau);
  const double floor = h_error(reference(2.0 * ref_tau), ref, SobolevIndex(1.0));
  result.self_convergence_floor = floor;

  std::vector<double> taus = cfg.tau_grid;
  std::sort(taus.begin(), taus.end());
  for (Method method : cfg.methods) {
    MethodSummary summary{.method = method};
    std::vector<double> fit_tau, fit_err;
    long ok_rows = 0;
    for (double tau : taus) {
      ConvergenceRow row{.method = method, .tau = tau, .h1_error = std::nullopt,
                         .wall_time_s = 0.0, .fp_iter_mean = 0.0,
                         .status = RowStatus::Ok};
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto traj = evolve(u0, method, cfg.integrator_config(tau), cfg.T);
        const double err = h_error(traj.final_state, ref, SobolevIndex(1.0));
        row.wall_time_s = traj.wall_time_s;
        row.fp_iter_mean = traj.fp_iterations_mean();
        if (std::isfinite(err)) {
          row.h1_error = err;
        } else {
          row.status = RowStatus::Diverged;
        }
      } catch (const FixedPointDivergence& e) {
        row.status = RowStatus::Diverged;
        row.wall_time_s = elapsed_since(start);
        if (!summary.diverged_at_step) summary.diverged_at_step = e.step_index();
      }
      if (row.status == RowStatus::Ok) {
        ++ok_rows;
        summary.wall_time_s += row.wall_time_s;
        summary.fp_iter_mean = std::max(summary.fp_iter_mean, row.fp_iter_mean);
        if (*row.h1_error >= 100.0 * floor && *row.h1_error > 0.0) {
          fit_tau.push_back(tau);
          fit_err.push_back(*row.h1_error);
        }
      }
      result.convergence.push_back(row);
    }
    if (ok_rows == 0) summary.status = RowStatus::Diverged;
    if (fit_tau.size() >= 2) summary.slope = fit_loglog_slope(fit_tau, fit_err);
    result.summaries.push_back(summary);
  }
  return result;
}

RunResult run_conservation(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::Conserve) throw ConfigError("not a conserve config");
  RunResult result = blank_result(cfg);
  const SpectralState u0 = make_initial_state(cfg);
  const double I0 = momentum(u0);
  const double I1 = hamiltonian(u0);
  const double tau = cfg.tau_grid.front();

  for (Method method : cfg.methods) {
    MethodSummary summary{.method = method};
    std::vector<DriftRow> rows;
    rows.push_back({method, 0.0, 0.0, 0.0, RowStatus::Ok});

    const Observer track = [&](const StepObservation& obs) {
      const double dm = std::abs(momentum(obs.state) - I0);
      const double dh = std::abs(hamiltonian(obs.state) - I1);
      if (!std::isfinite(dm) || !std::isfinite(dh)) throw BlowUp{obs.step};
      summary.max_momentum_err = std::max(summary.max_momentum_err, dm);
      summary.max_hamiltonian_err = std::max(summary.max_hamiltonian_err, dh);
      if (obs.step % cfg.stride == 0) {
        rows.push_back({method, obs.time, dm, dh, RowStatus::Ok});
      }
    };
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto traj = evolve(u0, method, cfg.integrator_config(tau), cfg.T,
                               std::span(&track, 1));
      summary.steps = traj.steps;
      summary.fp_iter_mean = traj.fp_iterations_mean();
      summary.fp_iter_max = traj.fp_iterations_max;
    } catch (const FixedPointDivergence& e) {
      summary.status = RowStatus::Diverged;
      summary.diverged_at_step = e.step_index();
    } catch (const BlowUp& b) {
      summary.status = RowStatus::Diverged;
      summary.diverged_at_step = b.step;
    }
    summary.wall_time_s = elapsed_since(start);
    if (summary.status == RowStatus::Diverged) {
      rows.push_back({method, static_cast<double>(*summary.diverged_at_step) * tau,
                      std::nullopt, std::nullopt, RowStatus::Diverged});
    }
    result.drift.insert(result.drift.end(), rows.begin(), rows.end());
    result.summaries.push_back(summary);
  }
  return result;
}

RunResult run_symplecticity(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::Symplecticity) {
    throw ConfigError("not a symplectic config");
  }
  RunResult result = blank_result(cfg);
  const SpectralState u0 = make_initial_state(cfg);
  const SpectralState w0 = second_state(cfg);
  const Complex omega0 = symplectic_pairing(u0, w0);
  const double tau = cfg.tau_grid.front();

  for (Method method : cfg.methods) {
    MethodSummary summary{.method = method};
    std::vector<PairingRow> rows;
    rows.push_back({method, 0.0, 0.0, RowStatus::Ok});

    const IntegratorConfig ic = cfg.integrator_config(tau);
    const Stepper partner(method, u0.grid(), ic);
    SpectralState w = w0;
    long partner_iters = 0;
    const Observer co_evolve = [&](const StepObservation& obs) {
      try {
        const StepReport r = partner(w);
        w = r.state;
        partner_iters += r.fp_iterations;
        summary.fp_iter_max = std::max(summary.fp_iter_max, r.fp_iterations);
      } catch (const FixedPointDivergence&) {
        throw BlowUp{obs.step};
      }
      const double err = std::abs(symplectic_pairing(obs.state, w) - omega0);
      if (!std::isfinite(err)) throw BlowUp{obs.step};
      summary.max_pairing_err = std::max(summary.max_pairing_err, err);
      if (obs.step % cfg.stride == 0) {
        rows.push_back({method, obs.time, err, RowStatus::Ok});
      }
    };
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto traj = evolve(u0, method, ic, cfg.T, std::span(&co_evolve, 1));
      summary.steps = traj.steps;
      summary.fp_iter_max = std::max(summary.fp_iter_max, traj.fp_iterations_max);
      if (traj.steps > 0) {
        summary.fp_iter_mean =
            static_cast<double>(traj.fp_iterations_total + partner_iters) /
            (2.0 * static_cast<double>(traj.steps));
      }
    } catch (const FixedPointDivergence& e) {
      summary.status = RowStatus::Diverged;
      summary.diverged_at_step = e.step_index();
    } catch (const BlowUp& b) {
      summary.status = RowStatus::Diverged;
      summary.diverged_at_step = b.step;
    }
    summary.wall_time_s = elapsed_since(start);
    if (summary.status == RowStatus::Diverged) {
      rows.push_back({method, static_cast<double>(*summary.diverged_at_step) * tau,
                      std::nullopt, RowStatus::Diverged});
    }
    result.pairing.insert(result.pairing.end(), rows.begin(), rows.end());
    result.summaries.push_back(summary);
  }
  return result;
}

RunResult run_resonance_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::ResonanceSweep) {
    throw ConfigError("not a sweep config");
  }
  RunResult result = blank_result(cfg);
  const SpectralState u0 = make_initial_state(cfg);
  const double I1 = hamiltonian(u0);

  std::vector<double> taus = cfg.tau_grid;
  std::sort(taus.begin(), taus.end());
  MethodSummary summary{.method = Method::Symplectic};
  long total_iters = 0;
  const auto start = std::chrono::steady_clock::now();
  for (double tau : taus) {
    double worst = 0.0;
    const Observer track = [&](const StepObservation& obs) {
      const double dh = std::abs(hamiltonian(obs.state) - I1);
      if (!std::isfinite(dh)) throw BlowUp{obs.step};
      worst = std::max(worst, dh);
    };
    SweepRow row{.tau = tau, .max_hamiltonian_err = std::nullopt,
                 .status = RowStatus::Ok};
    try {
      const auto traj = evolve(u0, Method::Symplectic, cfg.integrator_config(tau),
                               cfg.T, std::span(&track, 1));
      row.max_hamiltonian_err = worst;
      summary.steps += traj.steps;
      total_iters += traj.fp_iterations_total;
      summary.fp_iter_max = std::max(summary.fp_iter_max, traj.fp_iterations_max);
      summary.max_hamiltonian_err = std::max(summary.max_hamiltonian_err, worst);
    } catch (const FixedPointDivergence&) {
      row.status = RowStatus::Diverged;
    } catch (const BlowUp&) {
      row.status = RowStatus::Diverged;
    }
    result.sweep.push_back(row);
  }
  summary.wall_time_s = elapsed_since(start);
  if (summary.steps > 0) {
    summary.fp_iter_mean = static_cast<double>(total_iters) / summary.steps;
  }
  result.sweep_analysis = analyze_sweep(result.sweep);
  if (result.all_diverged()) summary.status = RowStatus::Diverged;
  result.summaries.push_back(summary);
  return result;
}

RunResult run_solve(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::Solve) throw ConfigError("not a solve config");
  RunResult result = blank_result(cfg);
  const SpectralState u0 = make_initial_state(cfg);
  const Method method = cfg.methods.front();
  const double tau = cfg.tau_grid.front();
  const IntegratorConfig ic = cfg.integrator_config(tau);
  const long steps = std::lround(cfg.T / std::abs(tau));

  const auto start = std::chrono::steady_clock::now();
  auto record = [&](long step, double time, const SpectralState& u,
                    std::optional<int> iters) {
    result.series.push_back({.step_index = step,
                             .time = time,
                             .momentum = momentum(u),
                             .hamiltonian = hamiltonian(u),
                             .h1_error_vs_ref = std::nullopt,
                             .fp_iterations = iters,
                             .wall_time_s = elapsed_since(start)});
  };
  record(0, 0.0, u0, std::nullopt);
  const Observer sample = [&](const StepObservation& obs) {
    if (obs.step % cfg.stride == 0 || obs.step == steps) {
      record(obs.step, obs.time, obs.state, obs.report.fp_iterations);
    }
  };
  const auto traj = evolve(u0, method, ic, cfg.T, std::span(&sample, 1));

  MethodSummary summary{.method = method};
  summary.steps = traj.steps;
  summary.fp_iter_mean = traj.fp_iterations_mean();
  summary.fp_iter_max = traj.fp_iterations_max;
  summary.wall_time_s = traj.wall_time_s;
  for (const auto& rec : result.series) {
    summary.max_momentum_err = std::max(
        summary.max_momentum_err, std::abs(rec.momentum - result.series[0].momentum));
    summary.max_hamiltonian_err =
        std::max(summary.max_hamiltonian_err,
                 std::abs(rec.hamiltonian - result.series[0].hamiltonian));
  }
  result.summaries.push_back(summary);
  result.final_state = traj.final_state;
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::Converge:
      return run_convergence(cfg);
    case ExperimentKind::Conserve:
      return run_conservation(cfg);
    case ExperimentKind::Symplecticity:
      return run_symplecticity(cfg);
    case ExperimentKind::ResonanceSweep:
      return run_resonance_sweep(cfg);
    case ExperimentKind::Solve:
      return run_solve(cfg);
  }
  throw ConfigError("unknown experiment kind");
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("slope fit needs positive data");
    }
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct x values");
  return sxy / sxx;
}

SweepAnalysis analyze_sweep(std::span<const SweepRow> rows) {
  std::vector<SweepRow> usable;
  for (const auto& r : rows) {
    if (r.status == RowStatus::Ok && r.max_hamiltonian_err &&
        *r.max_hamiltonian_err > 0.0) {
      usable.push_back(r);
    }
  }
  std::sort(usable.begin(), usable.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.tau < b.tau; });

  std::vector<double> env_tau, env_err;
  const size_t block = 2 * kEnvelopeWindow + 1;
  for (size_t start = 0; start < usable.size(); start += block) {
    const auto first = usable.begin() + static_cast<long>(start);
    const auto last = usable.begin() + static_cast<long>(std::min(start + block, usable.size()));
    const auto low = std::min_element(first, last, [](const SweepRow& a, const SweepRow& b) {
      return *a.max_hamiltonian_err < *b.max_hamiltonian_err;
    });
    env_tau.push_back(low->tau);
    env_err.push_back(*low->max_hamiltonian_err);
  }

  SweepAnalysis analysis;
  if (env_tau.size() < 2 || env_tau.front() == env_tau.back()) return analysis;
  const double slope = fit_loglog_slope(env_tau, env_err);
  analysis.envelope_slope = slope;
  // Intercept of the envelope fit in log space.
  double shift = 0.0;
  for (size_t i = 0; i < env_tau.size(); ++i) {
    shift += std::log(env_err[i]) - slope * std::log(env_tau[i]);
  }
  shift /= static_cast<double>(env_tau.size());
  for (const auto& r : usable) {
    const double trend = std::exp(shift + slope * std::log(r.tau));
    if (*r.max_hamiltonian_err > kSpikeFactor * trend) {
      analysis.spike_taus.push_back(r.tau);
    }
  }
  return analysis;
}

}  // namespace kdv
