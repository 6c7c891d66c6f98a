#pragma once

// Experiment drivers: convergence studies, long-time conservation runs,
// pairing co-evolution, the resonant-timestep sweep and single solves.
//
// CSV schemas (header row first, reals printed with 17 significant digits,
// rows sorted by key):
//
//   converge    method,tau,h1_error,wall_time_s,fp_iter_mean,status
//   conserve    method,time,momentum_err,hamiltonian_err,status
//   symplectic  method,time,pairing_err,status
//   sweep       tau,max_hamiltonian_err,status
//   solve       DiagnosticsRecord::csv_header()
//
// status is "ok" or "diverged"; a diverged row leaves its error fields empty.
// Each run also writes <output>.meta.json (config echo, config hash,
// generator id, version, per-method summaries); solve additionally writes
// the final state to <output>.state.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdv/diagnostics.hpp"
#include "kdv/integrators.hpp"
#include "kdv/spectral.hpp"

namespace kdv {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

/// Malformed or inconsistent experiment description.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The reference trajectory of a convergence study could not be computed.
class ReferenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Converge, Conserve, Symplecticity, ResonanceSweep, Solve };

/// "converge", "conserve", "symplectic", "sweep", "solve".
std::string_view kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);

enum class DataKind { Rough, Smooth, Zero, File };

struct DataSpec {
  DataKind kind = DataKind::Rough;
  double theta = 3.5;
  std::uint64_t seed = 1;
  /// Seed of the second trajectory in a symplecticity run.
  std::uint64_t second_seed = 2;
  /// State file for DataKind::File (format of write_state()).
  std::string path;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Solve;
  int M = 512;
  DataSpec data;
  std::vector<Method> methods;
  std::vector<double> tau_grid;
  double T = 1.0;
  /// Reference step of a convergence study; min(tau_grid) / 100 if unset.
  std::optional<double> ref_tau;
  std::string output_path;
  bool dealias = false;
  /// Fixed-point tolerance. Unset: tau^4 for convergence studies and
  /// kTightTolerance for everything else.
  std::optional<double> fp_tol;
  int fp_max_iters = 100;
  /// Diagnostics sampling stride in steps.
  long stride = 10;

  /// Throws ConfigError.
  void validate() const;

  /// Strict parse: unknown keys and wrong types raise ConfigError. Keys
  /// mirror the fields above; "data" is an object with keys type
  /// ("rough" | "smooth" | "zero" | "file"), theta, seed, second_seed, path.
  static ExperimentConfig from_json(std::string_view text);
  std::string to_json() const;

  /// FNV-1a 64 of the canonical JSON echo, as 16 hex digits.
  std::string hash() const;

  double effective_ref_tau() const;
  IntegratorConfig integrator_config(double tau) const;
};

/// Fixed-point tolerance used by the long-time experiments: iterate to
/// machine accuracy so that conservation is not limited by the solver.
inline constexpr double kTightTolerance = 1e-14;

/// Defaults for the run length of each experiment kind.
double default_final_time(ExperimentKind kind);

enum class RowStatus { Ok, Diverged };
std::string_view status_name(RowStatus status);

struct ConvergenceRow {
  Method method;
  double tau;
  std::optional<double> h1_error;
  double wall_time_s;
  double fp_iter_mean;
  RowStatus status;
};

struct DriftRow {
  Method method;
  double time;
  std::optional<double> momentum_err;
  std::optional<double> hamiltonian_err;
  RowStatus status;
};

struct PairingRow {
  Method method;
  double time;
  std::optional<double> pairing_err;
  RowStatus status;
};

struct SweepRow {
  double tau;
  std::optional<double> max_hamiltonian_err;
  RowStatus status;
};

struct MethodSummary {
  Method method;
  RowStatus status = RowStatus::Ok;
  /// First failing step when status is Diverged.
  std::optional<long> diverged_at_step = std::nullopt;
  long steps = 0;
  double max_momentum_err = 0.0;
  double max_hamiltonian_err = 0.0;
  double max_pairing_err = 0.0;
  double fp_iter_mean = 0.0;
  int fp_iter_max = 0;
  double wall_time_s = 0.0;
  /// Fitted convergence order (converge runs).
  std::optional<double> slope = std::nullopt;
};

struct SweepAnalysis {
  /// Unset when fewer than two positive errors are available.
  std::optional<double> envelope_slope;
  std::vector<double> spike_taus;
};

struct RunResult {
  ExperimentKind kind;
  std::string config_json;
  std::string config_hash;

  std::vector<ConvergenceRow> convergence;
  std::vector<DriftRow> drift;
  std::vector<PairingRow> pairing;
  std::vector<SweepRow> sweep;
  std::vector<DiagnosticsRecord> series;
  std::optional<SpectralState> final_state;

  std::vector<MethodSummary> summaries;
  /// H1 distance between references at ref_tau and 2 ref_tau.
  std::optional<double> self_convergence_floor;
  std::optional<SweepAnalysis> sweep_analysis;

  std::string csv_header() const;
  /// Rows in output order (sorted by key).
  std::vector<std::string> csv_rows() const;
  /// Metadata block as JSON.
  std::string metadata_json() const;
  /// True when every method (or every sweep step size) diverged.
  bool all_diverged() const;
  /// One-line human summary: key metric and nothing else.
  std::string summary() const;
};

/// Initial state described by cfg.data on cfg.M modes.
SpectralState make_initial_state(const ExperimentConfig& cfg);

RunResult run_convergence(const ExperimentConfig& cfg);
RunResult run_conservation(const ExperimentConfig& cfg);
RunResult run_symplecticity(const ExperimentConfig& cfg);
RunResult run_resonance_sweep(const ExperimentConfig& cfg);
RunResult run_solve(const ExperimentConfig& cfg);
/// Dispatches on cfg.kind.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Writes the CSV to `path`, metadata to `path`.meta.json and, for solves,
/// the final state to `path`.state.
void write_outputs(const RunResult& result, const std::string& path);

/// Least-squares slope of log(y) against log(x). Needs >= 2 points.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Slope of the lower envelope of the sweep and every step size whose error
/// exceeds the envelope power law by kSpikeFactor. The envelope is the
/// minimum of each run of 2 kEnvelopeWindow + 1 consecutive step sizes.
SweepAnalysis analyze_sweep(std::span<const SweepRow> rows);
inline constexpr int kEnvelopeWindow = 5;
inline constexpr double kSpikeFactor = 10.0;

/// Plain-text state dump:
///
///   # kdv-state v1
///   M <modes>
///   <m> <re> <im>        one line per m = 1..M/2-1, 17 significant digits
void write_state(std::ostream& out, const SpectralState& state);
SpectralState read_state(std::istream& in);

}  // namespace kdv
