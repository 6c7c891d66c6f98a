// Literal double-sum evaluation of the resonance steps. Deliberately shares
// nothing with the FFT path beyond the state type.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "kdv/errors.hpp"
#include "kdv/integrators.hpp"

namespace kdv {

namespace {

constexpr int kMaxOracleModes = 128;

struct Triad {
  int m_index;  // position of the output mode in the full spectrum
  int a_index;
  int b_index;
  Complex kernel;
};

// All (a, b) pairs with a, b != 0 contributing to a retained output mode m,
// with kernel -(exp(-i tau phi) - 1) / (denominator * a * b).
std::vector<Triad> build_triads(GridSpec grid, double tau, double denominator,
                                bool dealias) {
  const int lo = grid.min_mode();
  const int hi = grid.max_mode();
  const int M = grid.modes();
  std::vector<Triad> triads;
  for (int a = lo; a <= hi; ++a) {
    if (a == 0) continue;
    for (int b = lo; b <= hi; ++b) {
      if (b == 0) continue;
      int m = a + b;
      if (m < lo || m > hi) {
        if (dealias) continue;
        m += (m < lo) ? M : -M;
      }
      // The product is projected onto the mean-free, Nyquist-free space.
      if (m == 0 || m == hi) continue;
      const std::int64_t phi = std::int64_t{m} * m * m -
                               std::int64_t{a} * a * a -
                               std::int64_t{b} * b * b;
      const Complex phase = std::polar(1.0, -tau * static_cast<double>(phi));
      const Complex kernel =
          -(phase - 1.0) / (denominator * static_cast<double>(a) * b);
      triads.push_back({m - lo, a - lo, b - lo, kernel});
    }
  }
  return triads;
}

void require_small_grid(const SpectralState& u) {
  if (u.grid().modes() > kMaxOracleModes) {
    throw InvariantViolation("Fourier-sum oracle limited to M <= 128");
  }
}

// v -> exp(-tau d^3) v on the full spectrum.
SpectralState untwist(GridSpec grid, const std::vector<Complex>& v, double tau) {
  std::vector<Complex> u(v.size());
  for (int m = grid.min_mode(); m <= grid.max_mode(); ++m) {
    const double cube = static_cast<double>(m) * m * m;
    u[static_cast<size_t>(m - grid.min_mode())] =
        std::polar(1.0, cube * tau) * v[static_cast<size_t>(m - grid.min_mode())];
  }
  // Assembled by hand, so allow round-off in the Hermitian check.
  return SpectralState::from_full_spectrum(grid, u, 1e-12);
}

double l2(const std::vector<Complex>& x) {
  double sum = 0.0;
  for (const auto& c : x) sum += std::norm(c);
  return std::sqrt(sum);
}

}  // namespace

SpectralState direct_fourier_step(const SpectralState& u,
                                  const IntegratorConfig& cfg) {
  cfg.validate();
  require_small_grid(u);
  const GridSpec grid = u.grid();
  const auto triads = build_triads(grid, cfg.tau, 24.0, cfg.dealias);
  const std::vector<Complex> v = u.full_spectrum();

  std::vector<Complex> next = v;
  std::vector<Complex> sum(v.size());
  std::vector<Complex> update(v.size());
  for (int iter = 1; iter <= cfg.fp_max_iters; ++iter) {
    for (size_t k = 0; k < v.size(); ++k) sum[k] = next[k] + v[k];
    std::vector<Complex> candidate = v;
    for (const auto& t : triads) {
      candidate[static_cast<size_t>(t.m_index)] +=
          t.kernel * sum[static_cast<size_t>(t.a_index)] *
          sum[static_cast<size_t>(t.b_index)];
    }
    for (size_t k = 0; k < v.size(); ++k) update[k] = candidate[k] - next[k];
    next = std::move(candidate);
    const double residual = l2(update);
    if (!std::isfinite(residual)) {
      throw FixedPointDivergence("oracle iteration produced non-finite values",
                                 iter, residual);
    }
    if (residual <= cfg.fp_tol ||
        residual <= kRoundoffFloor * std::numeric_limits<double>::epsilon() *
                       l2(next)) {
      return untwist(grid, next, cfg.tau);
    }
  }
  throw FixedPointDivergence("oracle iteration cap reached", cfg.fp_max_iters,
                             0.0);
}

SpectralState direct_fourier_explicit_step(const SpectralState& u,
                                           const IntegratorConfig& cfg) {
  cfg.validate();
  require_small_grid(u);
  const GridSpec grid = u.grid();
  const auto triads = build_triads(grid, cfg.tau, 6.0, cfg.dealias);
  const std::vector<Complex> v = u.full_spectrum();
  std::vector<Complex> next = v;
  for (const auto& t : triads) {
    next[static_cast<size_t>(t.m_index)] += t.kernel *
                                            v[static_cast<size_t>(t.a_index)] *
                                            v[static_cast<size_t>(t.b_index)];
  }
  return untwist(grid, next, cfg.tau);
}

}  // namespace kdv
