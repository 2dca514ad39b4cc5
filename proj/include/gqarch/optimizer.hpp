#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gqarch/likelihood.hpp"
#include "gqarch/params.hpp"

namespace gqarch {

enum class StartStrategy { latin_hypercube, user_supplied, perturbed_reference };

std::string to_string(StartStrategy s);
StartStrategy parse_start_strategy(const std::string& name);

struct OptimOptions {
  ParamBox box{};
  std::size_t starts = 5;
  std::size_t max_iters = 2000;  // per start
  double f_tol = 1e-9;
  double x_tol = 1e-7;           // in the unconstrained coordinates
  bool use_gradient = true;      // projected-gradient polish after Nelder-Mead
  StartStrategy start_strategy = StartStrategy::latin_hypercube;
  std::uint64_t seed = 0;        // latin-hypercube / perturbation sub-seed
  std::vector<Theta> user_starts;       // user_supplied
  std::optional<Theta> reference;       // perturbed_reference

  void validate() const;
};

/// Smooth bijection between R^5 and the feasible box. Box coordinates use a
/// scaled logistic; the fifth coordinate maps to B2 = c^2 zeta(2(1-d)) inside
/// its gamma-dependent interval, so every image satisfies the nonlinear bound.
class BoxTransform {
 public:
  explicit BoxTransform(const ParamBox& box);

  [[nodiscard]] Theta to_theta(const ParamVec& u) const;
  /// Inverse on the box interior; boundary points are pulled inside by 1e-12 of the width.
  [[nodiscard]] ParamVec to_unconstrained(const Theta& theta) const;
  /// Position of each coordinate within its interval, in [0, 1]
  /// (fifth entry: position of B2 inside its interval).
  [[nodiscard]] ParamVec fractions(const Theta& theta) const;

  [[nodiscard]] const ParamBox& box() const noexcept { return box_; }

 private:
  ParamBox box_;
};

struct NelderMeadResult {
  ParamVec x{};
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead with dimension-adaptive coefficients. Stops when the simplex
/// value spread drops below f_tol or its extent below x_tol.
NelderMeadResult nelder_mead(const std::function<double(const ParamVec&)>& f, const ParamVec& start,
                             double initial_step, std::size_t max_iters, double f_tol, double x_tol);

struct EstimateResult {
  Theta theta_hat{};  // canonical, c >= 0
  double objective = 0.0;
  PastMode mode{};
  bool converged = false;
  std::size_t iterations = 0;  // summed over starts
  std::size_t starts_used = 0;
  std::array<bool, kNumParams> at_boundary{};
  bool floor_activated = false;
  bool d_weakly_identified = false;
  std::vector<double> start_objectives;  // best value reached from each start
  std::vector<std::string> warnings;
};

EstimateResult estimate(const SamplePath& series, PastMode mode, const OptimOptions& opts);
EstimateResult estimate(const QmlObjective& objective, const OptimOptions& opts);

/// L along one coordinate with the others held at theta.
std::vector<std::pair<double, double>> profile_objective(const SamplePath& series, PastMode mode,
                                                         const Theta& theta, Coord coord,
                                                         const std::vector<double>& grid);

}  // namespace gqarch
