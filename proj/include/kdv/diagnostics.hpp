#pragma once

#include <optional>
#include <string>

#include "kdv/spectral.hpp"

namespace kdv {

/// I0[u] = integral of u^2 over the torus = 2 pi sum_m |u_m|^2.
double momentum(const SpectralState& u);

/// I1[u] = -(1/2) integral (3 u_x^2 + u^3) dx.
///
/// The quadratic part is evaluated by Parseval. The cubic part uses the
/// trapezoidal rule on 2M points when `dealias` is set, which is exact for
/// the cube of a degree M/2-1 trigonometric polynomial, and on the M
/// collocation points otherwise.
double hamiltonian(const SpectralState& u, bool dealias = true);

/// omega(u, w) = sum_{m != 0} sgn(m) u_m w_{-m}. Antisymmetric and bilinear;
/// purely imaginary for real fields.
Complex symplectic_pairing(const SpectralState& u, const SpectralState& w);

/// sum_{m != 0} u_m w_{-m} / m, i.e. (1 / 2 pi i) times the integral of
/// u (d/dx)^-1 w: the symplectic form of KdV in these coordinates. Conserved
/// by a symplectic map on tangent vectors, not along two trajectories.
Complex gardner_pairing(const SpectralState& u, const SpectralState& w);

/// Sobolev-norm distance ||u - ref||_{H^s}.
double h_error(const SpectralState& u, const SpectralState& ref,
               SobolevIndex s);

/// One sample of a trajectory's diagnostics.
struct DiagnosticsRecord {
  long step_index = 0;
  double time = 0.0;
  double momentum = 0.0;
  double hamiltonian = 0.0;
  std::optional<double> h1_error_vs_ref;
  std::optional<int> fp_iterations;
  double wall_time_s = 0.0;

  /// "step_index,time,momentum,hamiltonian,h1_error_vs_ref,fp_iterations,
  /// wall_time_s"; absent optionals serialize as empty fields.
  static std::string csv_header();
  std::string csv_row() const;
};

/// %.17g, the lossless round-trip format used for every CSV field.
std::string format_real(double value);

}  // namespace kdv
