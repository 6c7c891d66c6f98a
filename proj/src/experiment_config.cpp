#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "kdv/harness.hpp"

namespace kdv {

using nlohmann::json;

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Converge:
      return "converge";
    case ExperimentKind::Conserve:
      return "conserve";
    case ExperimentKind::Symplecticity:
      return "symplectic";
    case ExperimentKind::ResonanceSweep:
      return "sweep";
    case ExperimentKind::Solve:
      return "solve";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (auto k : {ExperimentKind::Converge, ExperimentKind::Conserve,
                 ExperimentKind::Symplecticity, ExperimentKind::ResonanceSweep,
                 ExperimentKind::Solve}) {
    if (name == kind_name(k)) return k;
  }
  return std::nullopt;
}

double default_final_time(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Converge:
      return 1.0;
    case ExperimentKind::Conserve:
      return 500.0;
    case ExperimentKind::Symplecticity:
      return 50.0;
    case ExperimentKind::ResonanceSweep:
      return 100.0;
    case ExperimentKind::Solve:
      return 1.0;
  }
  return 1.0;
}

namespace {

constexpr std::string_view data_kind_name(DataKind kind) {
  switch (kind) {
    case DataKind::Rough:
      return "rough";
    case DataKind::Smooth:
      return "smooth";
    case DataKind::Zero:
      return "zero";
    case DataKind::File:
      return "file";
  }
  return "unknown";
}

std::vector<Method> default_methods(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ResonanceSweep:
    case ExperimentKind::Solve:
      return {Method::Symplectic};
    default:
      return {Method::Symplectic, Method::ExplicitResonance,
              Method::SymmetricLawson};
  }
}

template <class T>
T get_as(const json& value, std::string_view key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + std::string(key) + "' has the wrong type");
  }
}

double get_real(const json& value, std::string_view key) {
  if (!value.is_number()) {
    throw ConfigError("config key '" + std::string(key) + "' must be a number");
  }
  return value.get<double>();
}

std::uint64_t get_seed(const json& value, std::string_view key) {
  if (!value.is_number_unsigned()) {
    throw ConfigError("config key '" + std::string(key) +
                      "' must be a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

DataSpec parse_data(const json& obj) {
  if (!obj.is_object()) throw ConfigError("config key 'data' must be an object");
  DataSpec data;
  for (const auto& [key, value] : obj.items()) {
    if (key == "type") {
      const auto name = get_as<std::string>(value, key);
      if (name == "rough") {
        data.kind = DataKind::Rough;
      } else if (name == "smooth") {
        data.kind = DataKind::Smooth;
      } else if (name == "zero") {
        data.kind = DataKind::Zero;
      } else if (name == "file") {
        data.kind = DataKind::File;
      } else {
        throw ConfigError("unknown data type '" + name + "'");
      }
    } else if (key == "theta") {
      data.theta = get_real(value, key);
    } else if (key == "seed") {
      data.seed = get_seed(value, key);
    } else if (key == "second_seed") {
      data.second_seed = get_seed(value, key);
    } else if (key == "path") {
      data.path = get_as<std::string>(value, key);
    } else {
      throw ConfigError("unknown config key 'data." + key + "'");
    }
  }
  return data;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  if (!root.contains("kind")) throw ConfigError("config key 'kind' is required");

  ExperimentConfig cfg;
  const auto kind_text = get_as<std::string>(root["kind"], "kind");
  const auto kind = parse_kind(kind_text);
  if (!kind) throw ConfigError("unknown experiment kind '" + kind_text + "'");
  cfg.kind = *kind;
  cfg.T = default_final_time(cfg.kind);
  cfg.methods = default_methods(cfg.kind);
  if (cfg.kind != ExperimentKind::Converge &&
      cfg.kind != ExperimentKind::ResonanceSweep) {
    cfg.tau_grid = {0.05};
  }

  for (const auto& [key, value] : root.items()) {
    if (key == "kind") continue;
    if (key == "M") {
      if (!value.is_number_integer()) throw ConfigError("config key 'M' must be an integer");
      cfg.M = value.get<int>();
    } else if (key == "data") {
      cfg.data = parse_data(value);
    } else if (key == "methods") {
      if (!value.is_array()) throw ConfigError("config key 'methods' must be an array");
      cfg.methods.clear();
      for (const auto& item : value) {
        const auto name = get_as<std::string>(item, key);
        const auto method = parse_method(name);
        if (!method) throw ConfigError("unknown method '" + name + "'");
        cfg.methods.push_back(*method);
      }
    } else if (key == "tau_grid") {
      if (!value.is_array()) throw ConfigError("config key 'tau_grid' must be an array");
      cfg.tau_grid.clear();
      for (const auto& item : value) cfg.tau_grid.push_back(get_real(item, key));
    } else if (key == "T") {
      cfg.T = get_real(value, key);
    } else if (key == "ref_tau") {
      if (!value.is_null()) cfg.ref_tau = get_real(value, key);
    } else if (key == "output_path") {
      cfg.output_path = get_as<std::string>(value, key);
    } else if (key == "dealias") {
      if (!value.is_boolean()) throw ConfigError("config key 'dealias' must be a boolean");
      cfg.dealias = value.get<bool>();
    } else if (key == "fp_tol") {
      if (!value.is_null()) cfg.fp_tol = get_real(value, key);
    } else if (key == "fp_max_iters") {
      if (!value.is_number_integer()) throw ConfigError("config key 'fp_max_iters' must be an integer");
      cfg.fp_max_iters = value.get<int>();
    } else if (key == "stride") {
      if (!value.is_number_integer()) throw ConfigError("config key 'stride' must be an integer");
      cfg.stride = value.get<long>();
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

namespace {
json to_json_object(const ExperimentConfig& cfg, bool with_output) {
  json data = {{"type", data_kind_name(cfg.data.kind)},
               {"theta", cfg.data.theta},
               {"seed", cfg.data.seed},
               {"second_seed", cfg.data.second_seed},
               {"path", cfg.data.path}};
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(method_name(m));
  json out = {{"kind", kind_name(cfg.kind)},
              {"M", cfg.M},
              {"data", data},
              {"methods", methods},
              {"tau_grid", cfg.tau_grid},
              {"T", cfg.T},
              {"ref_tau", cfg.ref_tau ? json(*cfg.ref_tau) : json(nullptr)},
              {"dealias", cfg.dealias},
              {"fp_tol", cfg.fp_tol ? json(*cfg.fp_tol) : json(nullptr)},
              {"fp_max_iters", cfg.fp_max_iters},
              {"stride", cfg.stride}};
  if (with_output) out["output_path"] = cfg.output_path;
  return out;
}
}  // namespace

std::string ExperimentConfig::to_json() const {
  return to_json_object(*this, true).dump(2);
}

std::string ExperimentConfig::hash() const {
  // The output location does not influence any computed number.
  const std::string canonical = to_json_object(*this, false).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double ExperimentConfig::effective_ref_tau() const {
  if (ref_tau) return *ref_tau;
  if (tau_grid.empty()) return 0.0;
  return *std::min_element(tau_grid.begin(), tau_grid.end()) / 100.0;
}

IntegratorConfig ExperimentConfig::integrator_config(double tau) const {
  IntegratorConfig ic = IntegratorConfig::for_step(tau);
  if (fp_tol) {
    ic.fp_tol = *fp_tol;
  } else if (kind != ExperimentKind::Converge) {
    ic.fp_tol = kTightTolerance;
  }
  ic.fp_max_iters = fp_max_iters;
  ic.dealias = dealias;
  return ic;
}

void ExperimentConfig::validate() const {
  if (M < 4 || M % 2 != 0) throw ConfigError("M must be even and >= 4");
  if (data.kind == DataKind::Rough && !(data.theta > 0.5)) {
    throw ConfigError("theta must exceed 1/2");
  }
  if (data.kind == DataKind::Smooth && M < 16) {
    throw ConfigError("smooth data needs M >= 16");
  }
  if (data.kind == DataKind::File && data.path.empty()) {
    throw ConfigError("file data needs data.path");
  }
  if (tau_grid.empty()) throw ConfigError("tau_grid is required");
  for (double tau : tau_grid) {
    if (!std::isfinite(tau) || tau == 0.0) {
      throw ConfigError("tau values must be finite and nonzero");
    }
    if (kind != ExperimentKind::Solve && tau < 0.0) {
      throw ConfigError("negative tau is only allowed for solve");
    }
  }
  if (!std::isfinite(T) || T < 0.0 || (T == 0.0 && kind != ExperimentKind::Solve)) {
    throw ConfigError("T must be positive");
  }
  if (methods.empty()) throw ConfigError("methods must not be empty");
  if (fp_tol && !(*fp_tol > 0.0)) throw ConfigError("fp_tol must be positive");
  if (fp_max_iters < 1) throw ConfigError("fp_max_iters must be >= 1");
  if (stride < 1) throw ConfigError("stride must be >= 1");

  switch (kind) {
    case ExperimentKind::Converge: {
      const double min_tau = *std::min_element(tau_grid.begin(), tau_grid.end());
      const double ref = effective_ref_tau();
      if (!(ref > 0.0) || ref > min_tau / 20.0) {
        throw ConfigError("ref_tau must be positive and <= min(tau_grid)/20");
      }
      break;
    }
    case ExperimentKind::Conserve:
    case ExperimentKind::Symplecticity:
      if (tau_grid.size() != 1) throw ConfigError("expected exactly one tau");
      if (kind == ExperimentKind::Symplecticity &&
          data.kind != DataKind::Rough && data.kind != DataKind::Zero) {
        throw ConfigError("symplecticity runs need rough or zero data");
      }
      break;
    case ExperimentKind::ResonanceSweep:
      if (tau_grid.size() < 200) {
        throw ConfigError("a resonance sweep needs at least 200 step sizes");
      }
      if (methods.size() != 1 || methods.front() != Method::Symplectic) {
        throw ConfigError("the resonance sweep runs the symplectic method only");
      }
      break;
    case ExperimentKind::Solve:
      if (tau_grid.size() != 1) throw ConfigError("expected exactly one tau");
      if (methods.size() != 1) throw ConfigError("solve takes exactly one method");
      break;
  }
}

}  // namespace kdv
