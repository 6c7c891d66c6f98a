#pragma once

#include <cstdint>
#include <string_view>

#include "kdv/spectral.hpp"

namespace kdv {

/// Identifier of the pseudo-random generator behind random_rough(), echoed in
/// experiment metadata and `--version`.
inline constexpr std::string_view kGeneratorId = "mt19937_64/u53";

/// Random data with coefficients decaying like m^-theta.
struct RoughDataSpec {
  int modes;
  double theta;
  std::uint64_t seed;
};

/// u_m = m^-theta U_m / 10 for 1 <= m < M/2 with Re U_m, Im U_m drawn
/// independently and uniformly from [-1, 1], mirrored to negative m by
/// conjugation. The field lies in H^{theta - 1/2 - eps}.
///
/// Draws come from std::mt19937_64 seeded with `seed`; each 64-bit output is
/// mapped to [0, 1) through its top 53 bits, then to [-1, 1). Both steps are
/// fully specified, so states are bit-identical across platforms. Real part
/// is drawn before the imaginary part, modes in increasing order.
SpectralState random_rough(const RoughDataSpec& spec);

/// u0(x) = 1 / (10 (2 + sin x)) minus its exact mean 1 / (10 sqrt 3),
/// sampled on the grid and transformed. Requires M >= 16.
SpectralState smooth_profile(int modes);

/// Exact mean of 1 / (10 (2 + sin x)) over the torus.
double smooth_profile_mean();

}  // namespace kdv
