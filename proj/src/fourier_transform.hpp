#pragma once

#include <fftw3.h>

#include <complex>
#include <span>
#include <vector>

namespace kdv::detail {

/// Real <-> half-complex transforms of one length, backed by FFTW.
///
/// Plans are made with FFTW_ESTIMATE so the chosen algorithm (and therefore
/// every bit of the output) does not depend on timing. Instances are cached
/// per thread; see transform_for().
class FourierTransform {
 public:
  explicit FourierTransform(int points);
  ~FourierTransform();

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  int points() const { return points_; }

  /// Unscaled synthesis: out_j = sum_m half[m] e^{2 pi i m j / L} over the full
  /// Hermitian extension of `half`. Entries of `half` beyond L/2 are ignored;
  /// missing entries count as zero.
  void synthesize(std::span<const std::complex<double>> half,
                  std::span<double> out);

  /// Analysis with the 1/L factor: out[m] = (1/L) sum_j in_j e^{-2 pi i m j/L}
  /// for m = 0..out.size()-1 (out.size() <= L/2 + 1).
  void analyze(std::span<const double> in,
               std::span<std::complex<double>> out);

 private:
  int points_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan forward_;
  fftw_plan backward_;
};

/// Thread-local transform of the requested length.
FourierTransform& transform_for(int points);

}  // namespace kdv::detail
