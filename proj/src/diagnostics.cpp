#include "kdv/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "kdv/errors.hpp"

namespace kdv {

double momentum(const SpectralState& u) {
  const double l2 = sobolev_norm(u, SobolevIndex(0.0));
  return 2.0 * std::numbers::pi * l2 * l2;
}

double hamiltonian(const SpectralState& u, bool dealias) {
  const double h1 = sobolev_norm(u, SobolevIndex(1.0));
  const double gradient_energy = 3.0 * 2.0 * std::numbers::pi * h1 * h1;

  const int points = dealias ? 2 * u.grid().modes() : u.grid().modes();
  double cubic = 0.0;
  for (double x : to_physical(u, points)) cubic += x * x * x;
  cubic *= 2.0 * std::numbers::pi / points;

  return -0.5 * (gradient_energy + cubic);
}

Complex symplectic_pairing(const SpectralState& u, const SpectralState& w) {
  if (u.grid() != w.grid()) throw GridMismatch(u.grid().modes(), w.grid().modes());
  // sgn(m) u_m w_{-m} summed over +-m is u_m conj(w_m) - conj(u_m) w_m.
  const auto uh = u.half_spectrum();
  const auto wh = w.half_spectrum();
  Complex sum{0.0, 0.0};
  for (size_t m = 1; m < uh.size(); ++m) {
    sum += uh[m] * std::conj(wh[m]) - std::conj(uh[m]) * wh[m];
  }
  return sum;
}

Complex gardner_pairing(const SpectralState& u, const SpectralState& w) {
  if (u.grid() != w.grid()) throw GridMismatch(u.grid().modes(), w.grid().modes());
  const auto uh = u.half_spectrum();
  const auto wh = w.half_spectrum();
  Complex sum{0.0, 0.0};
  for (size_t m = 1; m < uh.size(); ++m) {
    sum += (uh[m] * std::conj(wh[m]) - std::conj(uh[m]) * wh[m]) /
           static_cast<double>(m);
  }
  return sum;
}

double h_error(const SpectralState& u, const SpectralState& ref,
               SobolevIndex s) {
  return sobolev_norm(u - ref, s);
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string DiagnosticsRecord::csv_header() {
  return "step_index,time,momentum,hamiltonian,h1_error_vs_ref,fp_iterations,"
         "wall_time_s";
}

std::string DiagnosticsRecord::csv_row() const {
  std::string row = std::to_string(step_index);
  row += ',' + format_real(time);
  row += ',' + format_real(momentum);
  row += ',' + format_real(hamiltonian);
  row += ',' + (h1_error_vs_ref ? format_real(*h1_error_vs_ref) : "");
  row += ',' + (fp_iterations ? std::to_string(*fp_iterations) : "");
  row += ',' + format_real(wall_time_s);
  return row;
}

}  // namespace kdv
