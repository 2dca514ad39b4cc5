#include "gqarch/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace gqarch {

namespace {

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer alloc_complex(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

struct PlanPair {
  fftw_plan forward = nullptr;   // r2c, size n
  fftw_plan backward = nullptr;  // c2r, size n
};

// The FFTW planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per size under a lock and never destroyed.
const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto real = alloc_real(n);
  auto spec = alloc_complex(n / 2 + 1);
  PlanPair plans;
  const int size = static_cast<int>(n);
  plans.forward = fftw_plan_dft_r2c_1d(size, real.get(), spec.get(), FFTW_ESTIMATE);
  plans.backward = fftw_plan_dft_c2r_1d(size, spec.get(), real.get(), FFTW_ESTIMATE);
  return cache.emplace(n, plans).first->second;
}

void forward(const PlanPair& plans, double* in, fftw_complex* out) {
  fftw_execute_dft_r2c(plans.forward, in, out);
}

void backward(const PlanPair& plans, fftw_complex* in, double* out) {
  fftw_execute_dft_c2r(plans.backward, in, out);
}

}  // namespace

LaggedSumKernel::LaggedSumKernel(std::span<const double> series, std::size_t max_lag)
    : n_(series.size()) {
  lags_ = n_ == 0 ? 0 : std::min(max_lag, n_ - 1);
  fft_size_ = std::bit_ceil(std::max<std::size_t>(n_ + lags_, 2));
  log_lag_.resize(lags_ + 1, 0.0);
  for (std::size_t j = 1; j <= lags_; ++j) log_lag_[j] = std::log(static_cast<double>(j));

  const auto& plans = plans_for(fft_size_);
  auto buf = alloc_real(fft_size_);
  std::fill_n(buf.get(), fft_size_, 0.0);
  std::copy(series.begin(), series.end(), buf.get());
  const std::size_t bins = fft_size_ / 2 + 1;
  auto spec = alloc_complex(bins);
  forward(plans, buf.get(), spec.get());
  series_spectrum_.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) series_spectrum_[k] = {spec[k][0], spec[k][1]};
}

WeightedSums LaggedSumKernel::evaluate(double d, bool with_log) const {
  WeightedSums out;
  evaluate_into(d, with_log, out);
  return out;
}

void LaggedSumKernel::evaluate_into(double d, bool with_log, WeightedSums& out) const {
  out.y.assign(n_, 0.0);
  if (with_log) {
    out.dy.assign(n_, 0.0);
  } else {
    out.dy.clear();
  }
  if (lags_ == 0) return;

  const auto& plans = plans_for(fft_size_);
  const std::size_t bins = fft_size_ / 2 + 1;
  const double scale = 1.0 / static_cast<double>(fft_size_);
  auto real = alloc_real(fft_size_);
  auto spec = alloc_complex(bins);

  auto convolve = [&](auto weight_of, std::vector<double>& target) {
    std::fill_n(real.get(), fft_size_, 0.0);
    for (std::size_t j = 1; j <= lags_; ++j) real[j] = weight_of(j);
    forward(plans, real.get(), spec.get());
    for (std::size_t k = 0; k < bins; ++k) {
      const std::complex<double> w(spec[k][0], spec[k][1]);
      const std::complex<double> prod = w * series_spectrum_[k];
      spec[k][0] = prod.real();
      spec[k][1] = prod.imag();
    }
    backward(plans, spec.get(), real.get());
    target[0] = 0.0;
    for (std::size_t i = 1; i < n_; ++i) target[i] = real[i] * scale;
  };

  const double expo = d - 1.0;
  std::vector<double> weights(lags_ + 1, 0.0);
  for (std::size_t j = 1; j <= lags_; ++j) weights[j] = std::exp(expo * log_lag_[j]);
  convolve([&](std::size_t j) { return weights[j]; }, out.y);
  if (with_log) convolve([&](std::size_t j) { return weights[j] * log_lag_[j]; }, out.dy);
}

WeightedSums weighted_sums(std::span<const double> series, double d, bool with_log,
                           std::size_t max_lag) {
  return LaggedSumKernel(series, max_lag).evaluate(d, with_log);
}

WeightedSums weighted_sums_reference(std::span<const double> series, double d, bool with_log,
                                     std::size_t max_lag) {
  const std::size_t n = series.size();
  WeightedSums out;
  out.y.assign(n, 0.0);
  if (with_log) out.dy.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t lags = std::min(i, max_lag);
    double y = 0.0;
    double dy = 0.0;
    for (std::size_t j = 1; j <= lags; ++j) {
      const double w = std::pow(static_cast<double>(j), d - 1.0);
      y += w * series[i - j];
      if (with_log) dy += w * std::log(static_cast<double>(j)) * series[i - j];
    }
    out.y[i] = y;
    if (with_log) out.dy[i] = dy;
  }
  return out;
}

}  // namespace gqarch
