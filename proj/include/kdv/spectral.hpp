#pragma once

// Fourier substrate for the periodic KdV solvers.
//
// Conventions: a field on the torus is the trigonometric polynomial
//
//   u(x) = sum_{m=-M/2+1}^{M/2} u_m exp(i m x),
//
// sampled at x_j = 2 pi j / M, j = 0..M-1 (the same points as j = -M/2+1..M/2
// modulo 2 pi). The forward transform carries the 1/M factor, so u_m are the
// coefficients of the polynomial itself and the backward transform is an
// unscaled sum.

#include <complex>
#include <span>
#include <vector>

namespace kdv {

using Complex = std::complex<double>;

/// Number of retained Fourier modes M and the matching collocation grid.
class GridSpec {
 public:
  /// M must be even and at least 4.
  explicit GridSpec(int modes);

  int modes() const { return modes_; }
  int half() const { return modes_ / 2; }
  int min_mode() const { return -half() + 1; }
  int max_mode() const { return half(); }
  bool contains(int m) const { return m >= min_mode() && m <= max_mode(); }

  /// Collocation point x_j = 2 pi j / M.
  double point(int j) const;

  bool operator==(const GridSpec&) const = default;

 private:
  int modes_;
};

/// Sobolev regularity exponent s >= 0.
class SobolevIndex {
 public:
  explicit SobolevIndex(double s);
  double value() const { return s_; }

 private:
  double s_;
};

/// Fourier coefficients of a real, zero-mean field on a GridSpec.
///
/// Only modes m = 0..M/2 are stored; negative modes are their conjugates. The
/// zero mode and the Nyquist mode M/2 are held at exactly zero by every
/// constructor, so any SpectralState is a real, mean-free, Hermitian field.
class SpectralState {
 public:
  static SpectralState zero(GridSpec grid);

  /// Coefficients of modes 1..M/2-1, in that order.
  static SpectralState from_positive_modes(GridSpec grid,
                                           std::span<const Complex> modes);

  /// Full index set m = -M/2+1..M/2 in increasing order. Throws
  /// InvariantViolation unless the input is Hermitian with vanishing zero and
  /// Nyquist modes (to within `tol` in absolute value).
  static SpectralState from_full_spectrum(GridSpec grid,
                                          std::span<const Complex> coeffs,
                                          double tol = 1e-14);

  /// Takes a half spectrum m = 0..M/2 (FFTW r2c layout, length M/2+1) and
  /// zeroes the mean and Nyquist entries.
  static SpectralState project(GridSpec grid, std::vector<Complex> half);

  const GridSpec& grid() const { return grid_; }

  /// Coefficient of mode m for any m in the grid's index set.
  Complex operator[](int m) const;

  /// Sets u_m for 1 <= |m| <= M/2-1; the mirror mode follows by conjugation.
  void set_mode(int m, Complex value);

  /// Half spectrum m = 0..M/2.
  std::span<const Complex> half_spectrum() const { return coeffs_; }

  /// Full index set m = -M/2+1..M/2 in increasing order.
  std::vector<Complex> full_spectrum() const;

  SpectralState& operator+=(const SpectralState& rhs);
  SpectralState& operator-=(const SpectralState& rhs);
  SpectralState& operator*=(double scale);

  friend SpectralState operator+(SpectralState lhs, const SpectralState& rhs) {
    return lhs += rhs;
  }
  friend SpectralState operator-(SpectralState lhs, const SpectralState& rhs) {
    return lhs -= rhs;
  }
  friend SpectralState operator*(double scale, SpectralState s) {
    return s *= scale;
  }
  friend SpectralState operator*(SpectralState s, double scale) {
    return s *= scale;
  }
  SpectralState operator-() const { return -1.0 * *this; }

  bool operator==(const SpectralState&) const = default;

 private:
  SpectralState(GridSpec grid, std::vector<Complex> coeffs)
      : grid_(grid), coeffs_(std::move(coeffs)) {}

  void require_same_grid(const SpectralState& other) const;

  GridSpec grid_;
  std::vector<Complex> coeffs_;

  friend class DiagonalOperator;
};

/// A Fourier multiplier m -> symbol(m) with symbol(-m) = conj(symbol(m)), so it
/// maps real fields to real fields. Symbols are evaluated once at
/// construction.
class DiagonalOperator {
 public:
  /// exp(t d^3/dx^3): u_m -> exp(-i m^3 t) u_m.
  static DiagonalOperator free_flow(GridSpec grid, double t);
  /// (d/dx)^order: u_m -> (i m)^order u_m.
  static DiagonalOperator derivative(GridSpec grid, int order);
  /// (d/dx)^-1 on the mean-free subspace: u_m -> u_m / (i m), u_0 -> 0.
  static DiagonalOperator antiderivative(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> symbol() const { return symbol_; }

  SpectralState operator()(const SpectralState& s) const;
  /// Composition: (a * b)(s) == a(b(s)).
  friend DiagonalOperator operator*(const DiagonalOperator& a,
                                    const DiagonalOperator& b);

 private:
  DiagonalOperator(GridSpec grid, std::vector<Complex> symbol)
      : grid_(grid), symbol_(std::move(symbol)) {}

  GridSpec grid_;
  std::vector<Complex> symbol_;
};

/// Samples u(x_j), j = 0..M-1.
std::vector<double> to_physical(const SpectralState& state);

/// Evaluates the trigonometric polynomial at `points` equispaced nodes
/// 2 pi j / points. Requires points >= M.
std::vector<double> to_physical(const SpectralState& state, int points);

/// Inverse of to_physical; the mean and Nyquist components are discarded.
SpectralState to_spectral(GridSpec grid, std::span<const double> samples);

SpectralState free_flow(const SpectralState& state, double t);
SpectralState antiderivative(const SpectralState& state);
SpectralState derivative(const SpectralState& state, int order);

/// Square of the field, projected back onto the grid's mean-free index set.
/// Aliased: collocation product on the M-point grid, so wrapped frequencies
/// a + b = m +- M contribute. Dealiased: product on a zero-padded grid of at
/// least 3M/2 points, with no wrapped contributions.
SpectralState pointwise_square(const SpectralState& state, bool dealias);

/// (sum_{m != 0} |m|^{2s} |u_m|^2)^{1/2}, over both signs of m.
double sobolev_norm(const SpectralState& state, SobolevIndex s);

}  // namespace kdv
