#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kdv/errors.hpp"
#include "kdv/harness.hpp"
#include "kdv/initial_data.hpp"

using namespace kdv;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "kdv_harness_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops the trailing wall-time column of a solve CSV.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
  return out;
}

}  // namespace

TEST(SlopeFit, RecoversSyntheticPowerLaw) {
  std::vector<double> x, y;
  for (int k = 0; k < 7; ++k) {
    x.push_back(std::ldexp(1.0, -4 - k));
    y.push_back(3.7 * std::pow(x.back(), 1.83));
  }
  EXPECT_NEAR(fit_loglog_slope(x, y), 1.83, 1e-10);
  const std::vector<double> one{1.0};
  EXPECT_THROW(fit_loglog_slope(one, one), std::invalid_argument);
}

TEST(SweepAnalysis, FindsEnvelopeAndSpikes) {
  std::vector<SweepRow> rows;
  for (double tau : geometric(0.01, 0.1, 200)) {
    rows.push_back({tau, 0.5 * tau * tau, RowStatus::Ok});
  }
  rows[120].max_hamiltonian_err = *rows[120].max_hamiltonian_err * 50.0;
  rows[30].status = RowStatus::Diverged;
  rows[30].max_hamiltonian_err.reset();
  const auto a = analyze_sweep(rows);
  ASSERT_TRUE(a.envelope_slope);
  EXPECT_NEAR(*a.envelope_slope, 2.0, 1e-10);
  ASSERT_EQ(a.spike_taus.size(), 1u);
  EXPECT_EQ(a.spike_taus[0], rows[120].tau);
}

TEST(SweepAnalysis, ZeroErrorsGiveNothing) {
  std::vector<SweepRow> rows;
  for (double tau : geometric(0.01, 0.1, 200)) rows.push_back({tau, 0.0, RowStatus::Ok});
  const auto a = analyze_sweep(rows);
  EXPECT_FALSE(a.envelope_slope);
  EXPECT_TRUE(a.spike_taus.empty());
}

TEST(Config, DefaultsPerKind) {
  const auto conserve = ExperimentConfig::from_json(R"({"kind": "conserve"})");
  EXPECT_EQ(conserve.T, 500.0);
  EXPECT_EQ(conserve.methods.size(), 3u);
  EXPECT_EQ(conserve.tau_grid, std::vector<double>{0.05});
  const auto solve = ExperimentConfig::from_json(R"({"kind": "solve"})");
  EXPECT_EQ(solve.methods, std::vector<Method>{Method::Symplectic});
  EXPECT_EQ(solve.integrator_config(0.05).fp_tol, kTightTolerance);
  const auto converge =
      ExperimentConfig::from_json(R"({"kind": "converge", "tau_grid": [0.1, 0.05]})");
  EXPECT_DOUBLE_EQ(converge.effective_ref_tau(), 5e-4);
  EXPECT_DOUBLE_EQ(converge.integrator_config(0.1).fp_tol, 1e-4);
}

TEST(Config, RejectsMalformedInput) {
  auto rejects = [](const char* text) {
    EXPECT_THROW(ExperimentConfig::from_json(text), ConfigError) << text;
  };
  rejects(R"({"kind": "solve", "colour": 1})");
  rejects(R"({"kind": "solve", "data": {"type": "rough", "sigma": 2}})");
  rejects(R"({"kind": "solve", "M": "512"})");
  rejects(R"({"kind": "solve", "M": 7})");
  rejects(R"({"kind": "dance"})");
  rejects(R"({"M": 64})");
  rejects(R"({"kind": "solve", "methods": ["rk4"]})");
  rejects(R"({"kind": "conserve", "T": 0})");
  rejects(R"({"kind": "converge"})");
  rejects(R"({"kind": "converge", "tau_grid": [0.01], "ref_tau": 0.001})");
  rejects(R"({"kind": "sweep", "tau_grid": [0.01, 0.02]})");
  rejects(R"({"kind": "solve", "data": {"theta": 0.4}})");
  rejects(R"({"kind": "symplectic", "data": {"type": "smooth"}})");
  rejects(R"({"kind": "conserve", "tau_grid": [-0.05]})");
  rejects("not json");
}

TEST(Config, JsonRoundTripAndHash) {
  const auto cfg = ExperimentConfig::from_json(
      R"({"kind": "converge", "M": 64, "tau_grid": [0.1, 0.05], "T": 0.5,
          "data": {"type": "rough", "theta": 5.5, "seed": 9},
          "methods": ["symplectic", "explicit"], "output_path": "a.csv"})");
  const auto again = ExperimentConfig::from_json(cfg.to_json());
  EXPECT_EQ(again.hash(), cfg.hash());
  EXPECT_EQ(again.to_json(), cfg.to_json());
  EXPECT_EQ(cfg.hash().size(), 16u);

  auto moved = cfg;
  moved.output_path = "elsewhere.csv";
  EXPECT_EQ(moved.hash(), cfg.hash());
  auto reseeded = cfg;
  reseeded.data.seed = 10;
  EXPECT_NE(reseeded.hash(), cfg.hash());
}

TEST(Runs, ZeroDataConservesExactly) {
  auto cfg = ExperimentConfig::from_json(
      R"({"kind": "conserve", "M": 32, "T": 1, "data": {"type": "zero"}})");
  const auto r = run_conservation(cfg);
  ASSERT_EQ(r.summaries.size(), 3u);
  for (const auto& row : r.drift) {
    EXPECT_EQ(row.status, RowStatus::Ok);
    EXPECT_EQ(*row.momentum_err, 0.0);
    EXPECT_EQ(*row.hamiltonian_err, 0.0);
  }
}

TEST(Runs, ZeroDataSweepHasNoSpikes) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ResonanceSweep;
  cfg.M = 16;
  cfg.T = 0.5;
  cfg.data.kind = DataKind::Zero;
  cfg.methods = {Method::Symplectic};
  cfg.tau_grid = geometric(0.05, 0.25, 200);
  const auto r = run_resonance_sweep(cfg);
  ASSERT_EQ(r.sweep.size(), 200u);
  for (const auto& row : r.sweep) EXPECT_EQ(*row.max_hamiltonian_err, 0.0);
  EXPECT_FALSE(r.sweep_analysis->envelope_slope);
  EXPECT_TRUE(r.sweep_analysis->spike_taus.empty());
}

TEST(Runs, IdenticalTrajectoriesHaveZeroPairing) {
  const auto cfg = ExperimentConfig::from_json(
      R"({"kind": "symplectic", "M": 32, "T": 1, "stride": 2,
          "data": {"seed": 4, "second_seed": 4}})");
  const auto r = run_symplecticity(cfg);
  for (const auto& row : r.pairing) EXPECT_EQ(*row.pairing_err, 0.0);
}

TEST(Runs, ConvergenceNearReference) {
  const auto cfg = ExperimentConfig::from_json(
      R"({"kind": "converge", "M": 64, "T": 0.1, "tau_grid": [0.002],
          "ref_tau": 0.0001, "methods": ["symplectic"], "data": {"theta": 5.5}})");
  const auto r = run_convergence(cfg);
  ASSERT_EQ(r.convergence.size(), 1u);
  ASSERT_TRUE(r.convergence[0].h1_error);
  EXPECT_LT(*r.convergence[0].h1_error, 1e-8);
  ASSERT_TRUE(r.self_convergence_floor);
  EXPECT_LT(*r.self_convergence_floor, *r.convergence[0].h1_error);
}

TEST(Runs, ConvergenceRecordsDivergenceInBand) {
  const auto cfg = ExperimentConfig::from_json(
      R"({"kind": "converge", "M": 512, "T": 0.1, "tau_grid": [0.05, 0.025],
          "methods": ["lawson", "symplectic"], "fp_tol": 1e-14})");
  const auto r = run_convergence(cfg);
  const auto rows = r.csv_rows();
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].rfind("symplectic,0.025000000000000001,", 0), 0u);
  EXPECT_EQ(rows[3].rfind("lawson,0.050000000000000003,,", 0), 0u);
  EXPECT_NE(rows[3].find(",diverged"), std::string::npos);
  EXPECT_FALSE(r.all_diverged());
}

TEST(Runs, ConservationIsolatesDivergedMethods) {
  const auto cfg = ExperimentConfig::from_json(
      R"({"kind": "conserve", "M": 512, "T": 0.5, "stride": 5})");
  const auto r = run_conservation(cfg);
  ASSERT_EQ(r.summaries.size(), 3u);
  EXPECT_EQ(r.summaries[0].status, RowStatus::Ok);
  EXPECT_EQ(r.summaries[1].status, RowStatus::Ok);
  EXPECT_EQ(r.summaries[2].status, RowStatus::Diverged);
  EXPECT_LT(r.summaries[0].max_momentum_err, 1e-13);
  long symplectic_rows = 0;
  for (const auto& row : r.drift) symplectic_rows += row.method == Method::Symplectic;
  EXPECT_EQ(symplectic_rows, 3);  // t = 0, 0.25, 0.5
}

TEST(Runs, SolveAtTimeZeroReturnsTheInput) {
  const auto cfg = ExperimentConfig::from_json(R"({"kind": "solve", "M": 64, "T": 0})");
  const auto r = run_solve(cfg);
  ASSERT_TRUE(r.final_state);
  EXPECT_EQ(*r.final_state, make_initial_state(cfg));
  EXPECT_EQ(r.series.size(), 1u);
}

TEST(Runs, SolveOutputsAreDeterministic) {
  const auto dir = scratch_dir();
  const auto cfg = ExperimentConfig::from_json(
      R"({"kind": "solve", "M": 64, "T": 1, "tau_grid": [0.01]})");
  write_outputs(run_solve(cfg), (dir / "a.csv").string());
  write_outputs(run_solve(cfg), (dir / "b.csv").string());
  EXPECT_EQ(without_wall_time(slurp(dir / "a.csv")), without_wall_time(slurp(dir / "b.csv")));
  EXPECT_EQ(slurp(dir / "a.csv.state"), slurp(dir / "b.csv.state"));
  EXPECT_NE(slurp(dir / "a.csv.meta.json").find("generator_id"), std::string::npos);
}

TEST(Runs, SolveBackwardFromDumpedStateReturns) {
  const auto dir = scratch_dir();
  auto fwd = ExperimentConfig::from_json(
      R"({"kind": "solve", "M": 64, "T": 1, "tau_grid": [0.05]})");
  const auto out = (dir / "fwd.csv").string();
  write_outputs(run_solve(fwd), out);

  auto back = fwd;
  back.tau_grid = {-0.05};
  back.data.kind = DataKind::File;
  back.data.path = out + ".state";
  const auto r = run_solve(back);
  const double steps = 20.0;
  const double tol = steps * 4.0 * kTightTolerance;
  EXPECT_LT(sobolev_norm(*r.final_state - make_initial_state(fwd), SobolevIndex(0)), tol);
}

TEST(StateFile, RoundTripIsExact) {
  const auto u = random_rough({.modes = 128, .theta = 1.2, .seed = 77});
  std::stringstream ss;
  write_state(ss, u);
  EXPECT_EQ(read_state(ss), u);
}

TEST(StateFile, RejectsBadInput) {
  std::stringstream no_header("M 8\n1 0 0\n");
  EXPECT_THROW(read_state(no_header), InvariantViolation);
  std::stringstream short_body("# kdv-state v1\nM 8\n1 0 0\n2 0 0\n");
  EXPECT_THROW(read_state(short_body), InvariantViolation);
}

TEST(StateFile, MismatchedModeCountIsAConfigError) {
  const auto dir = scratch_dir();
  {
    std::ofstream out(dir / "m32.state");
    write_state(out, random_rough({.modes = 32, .theta = 2.0, .seed = 1}));
  }
  ExperimentConfig cfg;
  cfg.M = 64;
  cfg.data.kind = DataKind::File;
  cfg.data.path = (dir / "m32.state").string();
  EXPECT_THROW(make_initial_state(cfg), ConfigError);
}
