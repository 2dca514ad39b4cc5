#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "gqarch/error.hpp"
#include "gqarch/likelihood.hpp"
#include "gqarch/optimizer.hpp"
#include "gqarch/simulator.hpp"

namespace gqarch {

using Matrix5 = Eigen::Matrix<double, 5, 5>;

/// Plug-in sandwich quantities over the likelihood window:
///   B = mean sigma^-4 grad grad^T,  A = mean (r^2/sigma^2 - 1)^2 sigma^-4 grad grad^T,
///   kappa4 = mean (r^2/sigma^2 - 1)^2,  Sigma = kappa4 B^-1,  se_i = sqrt(Sigma_ii / n_eff).
struct InfoMatrices {
  Matrix5 b_hat = Matrix5::Zero();
  Matrix5 a_hat = Matrix5::Zero();
  Matrix5 sigma_hat = Matrix5::Zero();
  double kappa4_hat = 0.0;
  std::optional<ParamVec> se;
  std::size_t effective_n = 0;
  double condition_number = 0.0;
};

inline constexpr double kMaxConditionNumber = 1e12;

/// Raised when B is not safely invertible; carries the matrices computed so far.
class SingularInformationError : public NumericalError {
 public:
  SingularInformationError(const std::string& what, InfoMatrices partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  [[nodiscard]] const InfoMatrices& partial() const noexcept { return partial_; }

 private:
  InfoMatrices partial_;
};

InfoMatrices info_matrices(const Theta& theta, const SamplePath& series, PastMode mode);
InfoMatrices info_matrices(const QmlObjective& objective, const Theta& theta);

/// Two-sided standard normal critical value z with P(|Z| <= z) = level.
double normal_critical_value(double level);

struct CoverageConfig {
  Theta theta0{};
  std::size_t n = 2000;
  std::size_t reps = 200;
  double level = 0.95;
  PastMode mode = PastMode::presample();
  std::uint64_t seed = 0;
  OptimOptions opts{};
  Innovation innovation{};
  std::size_t workers = 1;
};

struct CoverageReport {
  ParamVec coverage{};
  std::size_t completed = 0;
  std::size_t excluded = 0;
  double mean_kappa4 = 0.0;
};

/// Fraction of replications whose Wald interval theta_hat_i +- z se_i covers theta0_i.
CoverageReport ci_coverage_experiment(const CoverageConfig& cfg);

}  // namespace gqarch
