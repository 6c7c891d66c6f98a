#include "kdv/initial_data.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "kdv/errors.hpp"

namespace kdv {

namespace {
double uniform_symmetric(std::mt19937_64& gen) {
  const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}
}  // namespace

SpectralState random_rough(const RoughDataSpec& spec) {
  if (!(spec.theta > 0.5)) {
    throw InvariantViolation("theta must exceed 1/2 for L2 data");
  }
  const GridSpec grid(spec.modes);
  std::mt19937_64 gen(spec.seed);
  std::vector<Complex> modes;
  modes.reserve(static_cast<size_t>(grid.half() - 1));
  for (int m = 1; m < grid.half(); ++m) {
    const double re = uniform_symmetric(gen);
    const double im = uniform_symmetric(gen);
    const double scale = std::pow(static_cast<double>(m), -spec.theta) / 10.0;
    modes.emplace_back(scale * re, scale * im);
  }
  return SpectralState::from_positive_modes(grid, modes);
}

double smooth_profile_mean() { return 1.0 / (10.0 * std::sqrt(3.0)); }

SpectralState smooth_profile(int modes) {
  if (modes < 16) throw InvariantViolation("smooth profile needs M >= 16");
  const GridSpec grid(modes);
  const double mean = smooth_profile_mean();
  std::vector<double> samples(static_cast<size_t>(modes));
  for (int j = 0; j < modes; ++j) {
    samples[static_cast<size_t>(j)] =
        1.0 / (10.0 * (2.0 + std::sin(grid.point(j)))) - mean;
  }
  return to_spectral(grid, samples);
}

}  // namespace kdv
