#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gqarch {

inline constexpr std::size_t kUnlimitedLags = std::numeric_limits<std::size_t>::max();

/// y[i] = sum_{j=1}^{min(i, max_lag)} j^(d-1) x[i-j]   (so y[0] = 0)
/// dy[i] = sum_{j=1}^{min(i, max_lag)} j^(d-1) log(j) x[i-j]   (only when requested)
struct WeightedSums {
  std::vector<double> y;
  std::vector<double> dy;
};

/// FFT evaluator of the power-law lag sums for a fixed series. The series
/// spectrum and log-lag table are computed once; each evaluate() call costs one
/// weight transform plus one inverse transform per requested output.
class LaggedSumKernel {
 public:
  explicit LaggedSumKernel(std::span<const double> series, std::size_t max_lag = kUnlimitedLags);

  [[nodiscard]] WeightedSums evaluate(double d, bool with_log) const;
  void evaluate_into(double d, bool with_log, WeightedSums& out) const;

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t max_lag() const noexcept { return lags_; }
  [[nodiscard]] std::size_t fft_size() const noexcept { return fft_size_; }

 private:
  std::size_t n_ = 0;
  std::size_t lags_ = 0;
  std::size_t fft_size_ = 0;
  std::vector<double> log_lag_;  // log_lag_[j] = log j, j = 1..lags_
  std::vector<std::complex<double>> series_spectrum_;
};

/// One-shot FFT evaluation (builds a kernel internally).
WeightedSums weighted_sums(std::span<const double> series, double d, bool with_log,
                           std::size_t max_lag = kUnlimitedLags);

/// Serial O(n^2) reference for the same sums.
WeightedSums weighted_sums_reference(std::span<const double> series, double d, bool with_log,
                                     std::size_t max_lag = kUnlimitedLags);

}  // namespace gqarch
