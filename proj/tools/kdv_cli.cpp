// kdv: command-line front end for the experiment harness.
//
//   kdv <solve|converge|conserve|symplectic|sweep> [--config file.json] [flags]
//
// Flags override keys of the config file. Exit codes: 0 success, 2 config or
// usage error, 3 reference solution failed, 4 every method diverged.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "kdv/errors.hpp"
#include "kdv/harness.hpp"
#include "kdv/initial_data.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitReference = 3;
constexpr int kExitDiverged = 4;

struct Overrides {
  std::string config_path;
  std::optional<int> M;
  std::optional<double> tau;
  std::vector<double> taus;
  std::vector<double> tau_range;
  std::optional<double> T;
  std::optional<double> theta;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> seed2;
  std::string data;
  std::string data_path;
  std::vector<std::string> methods;
  bool dealias = false;
  std::string output;
  std::optional<double> ref_tau;
  std::optional<double> fp_tol;
  std::optional<int> fp_max_iters;
  std::optional<long> stride;
};

void add_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd.add_option("--M", o.M, "number of Fourier modes (even)");
  cmd.add_option("--tau", o.tau, "single step size");
  cmd.add_option("--taus,--tau_grid", o.taus, "comma-separated step sizes")
      ->delimiter(',');
  cmd.add_option("--tau_range", o.tau_range,
                 "MIN MAX COUNT: log-spaced step sizes")
      ->expected(3);
  cmd.add_option("--T", o.T, "final time");
  cmd.add_option("--theta", o.theta, "decay exponent of rough data");
  cmd.add_option("--seed", o.seed, "seed of the initial data");
  cmd.add_option("--seed2", o.seed2, "seed of the second trajectory");
  cmd.add_option("--data", o.data, "rough | smooth | zero | file")
      ->check(CLI::IsMember({"rough", "smooth", "zero", "file"}));
  cmd.add_option("--state", o.data_path, "state file for --data file");
  cmd.add_option("--methods", o.methods, "symplectic,explicit,lawson")->delimiter(',');
  cmd.add_flag("--dealias", o.dealias, "dealiased products");
  cmd.add_option("--output,-o", o.output, "output CSV path");
  cmd.add_option("--ref_tau", o.ref_tau, "reference step of a convergence study");
  cmd.add_option("--fp_tol", o.fp_tol, "fixed-point tolerance");
  cmd.add_option("--fp_max_iters", o.fp_max_iters, "fixed-point iteration cap");
  cmd.add_option("--stride", o.stride, "diagnostics sampling stride in steps");
}

std::vector<double> log_spaced(const std::vector<double>& range) {
  const double lo = range[0], hi = range[1];
  const int count = static_cast<int>(range[2]);
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw kdv::ConfigError("--tau_range needs 0 < MIN < MAX and COUNT >= 2");
  }
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  }
  return out;
}

std::string default_output(std::string_view kind) {
  std::filesystem::path dir = ".";
  if (const char* env = std::getenv("KDV_OUTPUT_DIR"); env && *env) dir = env;
  std::filesystem::create_directories(dir);
  return (dir / (std::string(kind) + ".csv")).string();
}

kdv::ExperimentConfig build_config(std::string_view kind, const Overrides& o) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    std::stringstream text;
    text << in.rdbuf();
    try {
      cfg = nlohmann::json::parse(text.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw kdv::ConfigError(o.config_path + ": " + e.what());
    }
    if (!cfg.is_object()) throw kdv::ConfigError("config must be a JSON object");
    if (cfg.contains("kind") && cfg["kind"] != kind) {
      throw kdv::ConfigError("config kind does not match the subcommand");
    }
  }
  cfg["kind"] = kind;
  if (o.M) cfg["M"] = *o.M;
  if (o.tau) cfg["tau_grid"] = {*o.tau};
  if (!o.taus.empty()) cfg["tau_grid"] = o.taus;
  if (!o.tau_range.empty()) cfg["tau_grid"] = log_spaced(o.tau_range);
  if (o.T) cfg["T"] = *o.T;
  if (o.ref_tau) cfg["ref_tau"] = *o.ref_tau;
  if (o.fp_tol) cfg["fp_tol"] = *o.fp_tol;
  if (o.fp_max_iters) cfg["fp_max_iters"] = *o.fp_max_iters;
  if (o.stride) cfg["stride"] = *o.stride;
  if (o.dealias) cfg["dealias"] = true;
  if (!o.methods.empty()) cfg["methods"] = o.methods;

  nlohmann::json& data = cfg["data"];
  if (data.is_null()) data = nlohmann::json::object();
  if (!o.data.empty()) data["type"] = o.data;
  if (!o.data_path.empty()) data["path"] = o.data_path;
  if (o.theta) data["theta"] = *o.theta;
  if (o.seed) data["seed"] = *o.seed;
  if (o.seed2) data["second_seed"] = *o.seed2;

  if (!o.output.empty()) {
    cfg["output_path"] = o.output;
  } else if (!cfg.contains("output_path")) {
    cfg["output_path"] = default_output(kind);
  }
  return kdv::ExperimentConfig::from_json(cfg.dump());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic KdV spectral solver and experiment harness"};
  app.set_version_flag("--version", std::string("kdv ") + std::string(kdv::kArtifactVersion) +
                                        " (rng " + std::string(kdv::kGeneratorId) + ")");
  app.require_subcommand(1);

  Overrides overrides;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "evolve one trajectory and dump diagnostics and the final state"},
      {"converge", "convergence-order study against a reference solution"},
      {"conserve", "long-time momentum and Hamiltonian drift"},
      {"symplectic", "pairing drift of two co-evolved trajectories"},
      {"sweep", "maximal Hamiltonian error over a dense step-size sweep"},
  };
  for (const auto& [name, help] : commands) add_flags(*app.add_subcommand(name, help), overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string kind = app.get_subcommands().front()->get_name();

  try {
    const kdv::ExperimentConfig cfg = build_config(kind, overrides);
    std::cerr << "kdv: running " << kind << " (config " << cfg.hash() << ")\n";
    const kdv::RunResult result = kdv::run_experiment(cfg);
    kdv::write_outputs(result, cfg.output_path);
    std::cout << result.summary() << '\n' << cfg.output_path << '\n';
    if (result.all_diverged()) {
      std::cerr << "kdv: every method diverged\n";
      return kExitDiverged;
    }
    return 0;
  } catch (const kdv::ConfigError& e) {
    std::cerr << "kdv: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const kdv::InvariantViolation& e) {
    std::cerr << "kdv: invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const kdv::ReferenceFailure& e) {
    std::cerr << "kdv: " << e.what() << '\n';
    return kExitReference;
  } catch (const kdv::FixedPointDivergence& e) {
    std::cerr << "kdv: diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "kdv: error: " << e.what() << '\n';
    return 1;
  }
}
