#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace geolab::fft {

namespace detail {

struct Buffer {
  explicit Buffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* data;
};

// FFTW planning is not thread-safe; execution with new-array execute is.
inline fftw_plan plan_for(std::size_t n, int sign) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(n, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  Buffer in(n), out(n);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, sign, FFTW_ESTIMATE);
  plans.emplace(key, plan);
  return plan;
}

inline std::vector<std::complex<double>> run(std::span<const std::complex<double>> x, int sign) {
  const std::size_t n = x.size();
  Buffer in(n), out(n);
  for (std::size_t k = 0; k < n; ++k) {
    in.data[k][0] = x[k].real();
    in.data[k][1] = x[k].imag();
  }
  fftw_execute_dft(plan_for(n, sign), in.data, out.data);
  std::vector<std::complex<double>> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = {out.data[k][0], out.data[k][1]};
  return y;
}

}  // namespace detail

/// Unnormalized DFT: X_m = sum_k x_k exp(-2 pi i k m / n).
inline std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) {
  return detail::run(x, FFTW_FORWARD);
}

/// Unnormalized inverse: x_k = sum_m X_m exp(+2 pi i k m / n).
inline std::vector<std::complex<double>> backward(std::span<const std::complex<double>> x) {
  return detail::run(x, FFTW_BACKWARD);
}

}  // namespace geolab::fft
