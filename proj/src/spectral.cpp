#include "kdv/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fourier_transform.hpp"
#include "kdv/errors.hpp"

namespace kdv {

GridSpec::GridSpec(int modes) : modes_(modes) {
  if (modes < 4 || modes % 2 != 0) {
    throw InvariantViolation("mode count must be even and >= 4, got " +
                             std::to_string(modes));
  }
}

double GridSpec::point(int j) const {
  return 2.0 * std::numbers::pi * j / modes_;
}

SobolevIndex::SobolevIndex(double s) : s_(s) {
  if (!(s >= 0.0)) throw InvariantViolation("Sobolev index must be >= 0");
}

// ---------------------------------------------------------------------------
// SpectralState

SpectralState SpectralState::zero(GridSpec grid) {
  return SpectralState(grid,
                       std::vector<Complex>(static_cast<size_t>(grid.half() + 1)));
}

SpectralState SpectralState::from_positive_modes(
    GridSpec grid, std::span<const Complex> modes) {
  if (static_cast<int>(modes.size()) != grid.half() - 1) {
    throw GridMismatch(static_cast<int>(modes.size()) * 2 + 2, grid.modes());
  }
  auto s = zero(grid);
  std::copy(modes.begin(), modes.end(), s.coeffs_.begin() + 1);
  return s;
}

SpectralState SpectralState::from_full_spectrum(GridSpec grid,
                                                std::span<const Complex> coeffs,
                                                double tol) {
  if (static_cast<int>(coeffs.size()) != grid.modes()) {
    throw GridMismatch(static_cast<int>(coeffs.size()), grid.modes());
  }
  const int offset = -grid.min_mode();  // index of mode 0
  auto at = [&](int m) { return coeffs[static_cast<size_t>(m + offset)]; };
  if (std::abs(at(0)) > tol) {
    throw InvariantViolation("nonzero mean mode");
  }
  if (std::abs(at(grid.half())) > tol) {
    throw InvariantViolation("nonzero Nyquist mode");
  }
  auto s = zero(grid);
  for (int m = 1; m < grid.half(); ++m) {
    if (std::abs(at(-m) - std::conj(at(m))) > tol) {
      throw InvariantViolation("spectrum is not Hermitian at mode " +
                               std::to_string(m));
    }
    s.coeffs_[static_cast<size_t>(m)] = at(m);
  }
  return s;
}

SpectralState SpectralState::project(GridSpec grid, std::vector<Complex> half) {
  if (static_cast<int>(half.size()) != grid.half() + 1) {
    throw GridMismatch(2 * (static_cast<int>(half.size()) - 1), grid.modes());
  }
  half.front() = 0.0;
  half.back() = 0.0;
  return SpectralState(grid, std::move(half));
}

Complex SpectralState::operator[](int m) const {
  if (!grid_.contains(m)) {
    throw InvariantViolation("mode " + std::to_string(m) + " outside grid");
  }
  return m >= 0 ? coeffs_[static_cast<size_t>(m)]
                : std::conj(coeffs_[static_cast<size_t>(-m)]);
}

void SpectralState::set_mode(int m, Complex value) {
  const int k = std::abs(m);
  if (k == 0 || k >= grid_.half()) {
    throw InvariantViolation("mode " + std::to_string(m) +
                             " is pinned to zero");
  }
  coeffs_[static_cast<size_t>(k)] = m > 0 ? value : std::conj(value);
}

std::vector<Complex> SpectralState::full_spectrum() const {
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(grid_.modes()));
  for (int m = grid_.min_mode(); m <= grid_.max_mode(); ++m) {
    out.push_back((*this)[m]);
  }
  return out;
}

void SpectralState::require_same_grid(const SpectralState& other) const {
  if (grid_ != other.grid_) {
    throw GridMismatch(grid_.modes(), other.grid_.modes());
  }
}

SpectralState& SpectralState::operator+=(const SpectralState& rhs) {
  require_same_grid(rhs);
  for (size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += rhs.coeffs_[m];
  return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& rhs) {
  require_same_grid(rhs);
  for (size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] -= rhs.coeffs_[m];
  return *this;
}

SpectralState& SpectralState::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

// ---------------------------------------------------------------------------
// DiagonalOperator

DiagonalOperator DiagonalOperator::free_flow(GridSpec grid, double t) {
  std::vector<Complex> symbol(static_cast<size_t>(grid.half() + 1));
  for (int m = 0; m <= grid.half(); ++m) {
    // m^3 is exact in double for any practical M; t is a step size, never an
    // accumulated time, so the argument stays well conditioned.
    const double cube = static_cast<double>(m) * m * m;
    symbol[static_cast<size_t>(m)] = std::polar(1.0, -cube * t);
  }
  return DiagonalOperator(grid, std::move(symbol));
}

DiagonalOperator DiagonalOperator::derivative(GridSpec grid, int order) {
  if (order < 1) throw InvariantViolation("derivative order must be >= 1");
  std::vector<Complex> symbol(static_cast<size_t>(grid.half() + 1));
  for (int m = 0; m <= grid.half(); ++m) {
    Complex factor{1.0, 0.0};
    for (int k = 0; k < order; ++k) factor *= Complex(0.0, m);
    symbol[static_cast<size_t>(m)] = factor;
  }
  return DiagonalOperator(grid, std::move(symbol));
}

DiagonalOperator DiagonalOperator::antiderivative(GridSpec grid) {
  std::vector<Complex> symbol(static_cast<size_t>(grid.half() + 1));
  for (int m = 1; m <= grid.half(); ++m) {
    symbol[static_cast<size_t>(m)] = Complex(0.0, -1.0 / m);
  }
  return DiagonalOperator(grid, std::move(symbol));
}

SpectralState DiagonalOperator::operator()(const SpectralState& s) const {
  if (s.grid() != grid_) throw GridMismatch(grid_.modes(), s.grid().modes());
  std::vector<Complex> out(s.coeffs_.size());
  for (size_t m = 0; m < out.size(); ++m) out[m] = symbol_[m] * s.coeffs_[m];
  return SpectralState::project(grid_, std::move(out));
}

DiagonalOperator operator*(const DiagonalOperator& a,
                           const DiagonalOperator& b) {
  if (a.grid_ != b.grid_) throw GridMismatch(a.grid_.modes(), b.grid_.modes());
  std::vector<Complex> symbol(a.symbol_.size());
  for (size_t m = 0; m < symbol.size(); ++m) {
    symbol[m] = a.symbol_[m] * b.symbol_[m];
  }
  return DiagonalOperator(a.grid_, std::move(symbol));
}

// ---------------------------------------------------------------------------
// Transforms and calculus

std::vector<double> to_physical(const SpectralState& state) {
  return to_physical(state, state.grid().modes());
}

std::vector<double> to_physical(const SpectralState& state, int points) {
  if (points < state.grid().modes()) {
    throw InvariantViolation("cannot sample below the grid resolution");
  }
  std::vector<double> out(static_cast<size_t>(points));
  detail::transform_for(points).synthesize(state.half_spectrum(), out);
  return out;
}

SpectralState to_spectral(GridSpec grid, std::span<const double> samples) {
  if (static_cast<int>(samples.size()) != grid.modes()) {
    throw GridMismatch(static_cast<int>(samples.size()), grid.modes());
  }
  std::vector<Complex> half(static_cast<size_t>(grid.half() + 1));
  detail::transform_for(grid.modes()).analyze(samples, half);
  return SpectralState::project(grid, std::move(half));
}

SpectralState free_flow(const SpectralState& state, double t) {
  return DiagonalOperator::free_flow(state.grid(), t)(state);
}

SpectralState antiderivative(const SpectralState& state) {
  return DiagonalOperator::antiderivative(state.grid())(state);
}

SpectralState derivative(const SpectralState& state, int order) {
  return DiagonalOperator::derivative(state.grid(), order)(state);
}

namespace {
int padded_points(int modes) {
  const int n = 3 * modes / 2;
  return n + n % 2;
}
}  // namespace

SpectralState pointwise_square(const SpectralState& state, bool dealias) {
  const GridSpec grid = state.grid();
  const int points = dealias ? padded_points(grid.modes()) : grid.modes();
  auto& fft = detail::transform_for(points);

  std::vector<double> samples(static_cast<size_t>(points));
  fft.synthesize(state.half_spectrum(), samples);
  for (auto& u : samples) u *= u;

  std::vector<Complex> half(static_cast<size_t>(grid.half() + 1));
  fft.analyze(samples, half);
  return SpectralState::project(grid, std::move(half));
}

double sobolev_norm(const SpectralState& state, SobolevIndex s) {
  const auto half = state.half_spectrum();
  double sum = 0.0;
  for (size_t m = 1; m < half.size(); ++m) {
    const double weight =
        s.value() == 0.0 ? 1.0 : std::pow(static_cast<double>(m), 2 * s.value());
    sum += weight * std::norm(half[m]);
  }
  return std::sqrt(2.0 * sum);
}

}  // namespace kdv
