#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gqarch/convolution.hpp"
#include "gqarch/params.hpp"
#include "gqarch/simulator.hpp"

namespace gqarch {

/// Which history enters sigma2_t(theta).
///  finite_past: only r_1..r_{t-1}, recursion started at sigma2_0 = 0.
///  presample:   the pre-sample block is prepended and the recursion starts at
///               its first element from zero, lag sums capped at n lags.
///  truncated:   finite-past variances, objective averaged over the last [n^beta] terms.
struct PastMode {
  enum class Kind { finite_past, presample, truncated };
  Kind kind = Kind::finite_past;
  double beta = 0.0;

  static PastMode finite_past() { return {Kind::finite_past, 0.0}; }
  static PastMode presample() { return {Kind::presample, 0.0}; }
  static PastMode truncated(double beta) { return {Kind::truncated, beta}; }

  void validate() const;
  friend bool operator==(const PastMode&, const PastMode&) = default;
};

std::string to_string(const PastMode& mode);
PastMode parse_past_mode(const std::string& name, double beta = 0.0);

/// [n^beta], guarded against pow() landing just below an exact integer.
std::size_t truncation_window(std::size_t n, double beta);

struct VolPath {
  std::vector<double> sigma2;     // t = 1..n
  std::vector<ParamVec> grad;     // d sigma2_t / d(gamma, omega, a, d, c); empty unless requested
  std::vector<double> y;          // lag sums Y_t(d) for t = 1..n
  std::vector<double> dy;         // d/dd Y_t(d); empty unless gradients requested
};

struct QmlValue {
  double value = 0.0;
  std::optional<ParamVec> gradient;
  std::vector<double> per_obs;  // l_t over the averaging window, when requested
  bool floor_activated = false;
};

/// Variance floor applied inside the objective (never inside the recursion).
inline constexpr double kVarianceFloor = 1e-12;

/// QML objective bound to one series and one past mode. Holds the FFT state of
/// the series so repeated evaluations at new theta only transform the weights.
/// Thread-safe for concurrent const use.
class QmlObjective {
 public:
  QmlObjective(const SamplePath& series, PastMode mode);

  /// Throws NumericalError if any sigma2_t <= 0.
  [[nodiscard]] VolPath vol_path(const Theta& theta, bool want_grad) const;
  [[nodiscard]] QmlValue evaluate(const Theta& theta, bool want_grad, bool keep_per_obs = false) const;
  [[nodiscard]] double value(const Theta& theta) const { return evaluate(theta, false).value; }

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t window_begin() const noexcept { return window_begin_; }
  [[nodiscard]] std::size_t window_size() const noexcept { return n_ - window_begin_; }
  [[nodiscard]] const PastMode& mode() const noexcept { return mode_; }
  [[nodiscard]] std::span<const double> observations() const noexcept {
    return std::span<const double>(extended_).subspan(offset_);
  }

 private:
  VolPath compute(const Theta& theta, bool want_grad) const;

  PastMode mode_;
  std::vector<double> extended_;  // pre-sample (if used) followed by observations
  std::size_t offset_ = 0;        // index of r_1 in extended_
  std::size_t n_ = 0;
  std::size_t window_begin_ = 0;  // first observation index entering the average
  LaggedSumKernel kernel_;
};

VolPath vol_path(const Theta& theta, const SamplePath& series, PastMode mode, bool want_grad);
QmlValue qml(const Theta& theta, const SamplePath& series, PastMode mode, bool want_grad);

}  // namespace gqarch
