#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <json.hpp>

#include "kdv/errors.hpp"
#include "kdv/harness.hpp"
#include "kdv/initial_data.hpp"

namespace kdv {

using nlohmann::json;

namespace {

std::string optional_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

template <class Row, class Key>
std::vector<Row> sorted_by(std::vector<Row> rows, Key key) {
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const Row& a, const Row& b) { return key(a) < key(b); });
  return rows;
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string RunResult::csv_header() const {
  switch (kind) {
    case ExperimentKind::Converge:
      return "method,tau,h1_error,wall_time_s,fp_iter_mean,status";
    case ExperimentKind::Conserve:
      return "method,time,momentum_err,hamiltonian_err,status";
    case ExperimentKind::Symplecticity:
      return "method,time,pairing_err,status";
    case ExperimentKind::ResonanceSweep:
      return "tau,max_hamiltonian_err,status";
    case ExperimentKind::Solve:
      return DiagnosticsRecord::csv_header();
  }
  return {};
}

std::vector<std::string> RunResult::csv_rows() const {
  std::vector<std::string> out;
  auto name = [](Method m) { return std::string(method_name(m)); };
  switch (kind) {
    case ExperimentKind::Converge:
      for (const auto& r : sorted_by(convergence, [](const ConvergenceRow& r) {
             return std::pair(static_cast<int>(r.method), r.tau);
           })) {
        out.push_back(name(r.method) + ',' + format_real(r.tau) + ',' +
                      optional_real(r.h1_error) + ',' + format_real(r.wall_time_s) +
                      ',' + format_real(r.fp_iter_mean) + ',' +
                      std::string(status_name(r.status)));
      }
      break;
    case ExperimentKind::Conserve:
      for (const auto& r : sorted_by(drift, [](const DriftRow& r) {
             return std::pair(static_cast<int>(r.method), r.time);
           })) {
        out.push_back(name(r.method) + ',' + format_real(r.time) + ',' +
                      optional_real(r.momentum_err) + ',' +
                      optional_real(r.hamiltonian_err) + ',' +
                      std::string(status_name(r.status)));
      }
      break;
    case ExperimentKind::Symplecticity:
      for (const auto& r : sorted_by(pairing, [](const PairingRow& r) {
             return std::pair(static_cast<int>(r.method), r.time);
           })) {
        out.push_back(name(r.method) + ',' + format_real(r.time) + ',' +
                      optional_real(r.pairing_err) + ',' +
                      std::string(status_name(r.status)));
      }
      break;
    case ExperimentKind::ResonanceSweep:
      for (const auto& r : sorted_by(sweep, [](const SweepRow& r) { return r.tau; })) {
        out.push_back(format_real(r.tau) + ',' +
                      optional_real(r.max_hamiltonian_err) + ',' +
                      std::string(status_name(r.status)));
      }
      break;
    case ExperimentKind::Solve:
      for (const auto& rec : series) out.push_back(rec.csv_row());
      break;
  }
  return out;
}

bool RunResult::all_diverged() const {
  if (kind == ExperimentKind::ResonanceSweep) {
    return !sweep.empty() &&
           std::all_of(sweep.begin(), sweep.end(), [](const SweepRow& r) {
             return r.status == RowStatus::Diverged;
           });
  }
  return !summaries.empty() &&
         std::all_of(summaries.begin(), summaries.end(), [](const MethodSummary& s) {
           return s.status == RowStatus::Diverged;
         });
}

std::string RunResult::metadata_json() const {
  json meta;
  meta["artifact_version"] = kArtifactVersion;
  meta["generator_id"] = kGeneratorId;
  meta["kind"] = kind_name(kind);
  meta["config"] = json::parse(config_json);
  meta["config_hash"] = config_hash;
  meta["csv_header"] = csv_header();
  json methods = json::array();
  for (const auto& s : summaries) {
    json m = {{"method", method_name(s.method)},
              {"status", status_name(s.status)},
              {"steps", s.steps},
              {"max_momentum_err", s.max_momentum_err},
              {"max_hamiltonian_err", s.max_hamiltonian_err},
              {"max_pairing_err", s.max_pairing_err},
              {"fp_iter_mean", s.fp_iter_mean},
              {"fp_iter_max", s.fp_iter_max},
              {"wall_time_s", s.wall_time_s}};
    m["diverged_at_step"] = s.diverged_at_step ? json(*s.diverged_at_step) : json(nullptr);
    m["slope"] = s.slope ? json(*s.slope) : json(nullptr);
    methods.push_back(m);
  }
  meta["methods"] = methods;
  if (self_convergence_floor) meta["self_convergence_floor"] = *self_convergence_floor;
  if (sweep_analysis) {
    meta["sweep"] = {
        {"envelope_slope", sweep_analysis->envelope_slope
                               ? json(*sweep_analysis->envelope_slope)
                               : json(nullptr)},
        {"spike_taus", sweep_analysis->spike_taus}};
  }
  return meta.dump(2);
}

std::string RunResult::summary() const {
  std::string line(kind_name(kind));
  line += ':';
  if (kind == ExperimentKind::ResonanceSweep && sweep_analysis) {
    line += " envelope_slope=";
    line += sweep_analysis->envelope_slope
                ? short_real(*sweep_analysis->envelope_slope)
                : std::string("n/a");
    line += " spikes=" + std::to_string(sweep_analysis->spike_taus.size());
    return line;
  }
  for (const auto& s : summaries) {
    line += ' ';
    line += method_name(s.method);
    if (s.status == RowStatus::Diverged && kind != ExperimentKind::Converge) {
      line += "=diverged@" + std::to_string(s.diverged_at_step.value_or(-1));
      continue;
    }
    switch (kind) {
      case ExperimentKind::Converge:
        line += " slope=" + (s.slope ? short_real(*s.slope) : std::string("n/a"));
        break;
      case ExperimentKind::Conserve:
        line += " momentum_err=" + short_real(s.max_momentum_err) +
                " hamiltonian_err=" + short_real(s.max_hamiltonian_err);
        break;
      case ExperimentKind::Symplecticity:
        line += " pairing_err=" + short_real(s.max_pairing_err);
        break;
      default:
        line += " steps=" + std::to_string(s.steps) +
                " fp_iter_mean=" + short_real(s.fp_iter_mean);
        break;
    }
  }
  return line;
}

void write_outputs(const RunResult& result, const std::string& path) {
  {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot write " + path);
    csv << result.csv_header() << '\n';
    for (const auto& row : result.csv_rows()) csv << row << '\n';
  }
  {
    std::ofstream meta(path + ".meta.json");
    if (!meta) throw std::runtime_error("cannot write " + path + ".meta.json");
    meta << result.metadata_json() << '\n';
  }
  if (result.final_state) {
    std::ofstream state(path + ".state");
    if (!state) throw std::runtime_error("cannot write " + path + ".state");
    write_state(state, *result.final_state);
  }
}

void write_state(std::ostream& out, const SpectralState& state) {
  const GridSpec& grid = state.grid();
  out << "# kdv-state v1\n";
  out << "M " << grid.modes() << '\n';
  for (int m = 1; m < grid.half(); ++m) {
    out << m << ' ' << format_real(state[m].real()) << ' '
        << format_real(state[m].imag()) << '\n';
  }
}

SpectralState read_state(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# kdv-state v1") {
    throw InvariantViolation("state file: missing '# kdv-state v1' header");
  }
  std::string tag;
  int modes = 0;
  if (!(in >> tag >> modes) || tag != "M") {
    throw InvariantViolation("state file: expected 'M <modes>'");
  }
  const GridSpec grid(modes);
  std::vector<Complex> coeffs(static_cast<size_t>(grid.half() - 1));
  for (int expected = 1; expected < grid.half(); ++expected) {
    int m = 0;
    double re = 0.0, im = 0.0;
    if (!(in >> m >> re >> im) || m != expected) {
      throw InvariantViolation("state file: bad line for mode " +
                               std::to_string(expected));
    }
    coeffs[static_cast<size_t>(m - 1)] = {re, im};
  }
  return SpectralState::from_positive_modes(grid, coeffs);
}

}  // namespace kdv
