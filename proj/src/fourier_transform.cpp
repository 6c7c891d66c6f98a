#include "fourier_transform.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace kdv::detail {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FourierTransform::FourierTransform(int points) : points_(points) {
  const int spectral = points / 2 + 1;
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(static_cast<size_t>(points));
  spec_ = fftw_alloc_complex(static_cast<size_t>(spectral));
  forward_ = fftw_plan_dft_r2c_1d(points, real_, spec_, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_c2r_1d(points, spec_, real_, FFTW_ESTIMATE);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(backward_);
  fftw_free(real_);
  fftw_free(spec_);
}

void FourierTransform::synthesize(std::span<const std::complex<double>> half,
                                  std::span<double> out) {
  const int spectral = points_ / 2 + 1;
  const int n = std::min<int>(spectral, static_cast<int>(half.size()));
  for (int m = 0; m < n; ++m) {
    spec_[m][0] = half[m].real();
    spec_[m][1] = half[m].imag();
  }
  for (int m = n; m < spectral; ++m) {
    spec_[m][0] = 0.0;
    spec_[m][1] = 0.0;
  }
  fftw_execute(backward_);
  std::copy_n(real_, points_, out.begin());
}

void FourierTransform::analyze(std::span<const double> in,
                               std::span<std::complex<double>> out) {
  std::copy_n(in.begin(), points_, real_);
  fftw_execute(forward_);
  const double scale = 1.0 / points_;
  for (size_t m = 0; m < out.size(); ++m) {
    out[m] = {spec_[m][0] * scale, spec_[m][1] * scale};
  }
}

FourierTransform& transform_for(int points) {
  thread_local std::map<int, std::unique_ptr<FourierTransform>> cache;
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<FourierTransform>(points);
  return *slot;
}

}  // namespace kdv::detail
