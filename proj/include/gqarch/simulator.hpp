#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gqarch/params.hpp"

namespace gqarch {

enum class InnovationKind { standard_normal, student_t, rademacher };

struct Innovation {
  InnovationKind kind = InnovationKind::standard_normal;
  double nu = 8.0;  // degrees of freedom, student_t only

  /// E zeta^4 of the standardized innovation (infinite for nu <= 4).
  [[nodiscard]] double fourth_moment() const;
};

std::string to_string(InnovationKind kind);
InnovationKind parse_innovation(const std::string& name);

struct SimConfig {
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  Innovation innovation{};
  bool presample = true;
  bool force = false;  // simulate even when the L2 condition fails
};

/// Returns r_1..r_n plus, optionally, the pre-sample block r_{-m+1}..r_0.
struct SamplePath {
  std::vector<double> observations;
  std::optional<std::vector<double>> presample;
  std::optional<std::vector<double>> vols;  // true sigma_t for t = 1..n
  std::optional<Theta> theta_true;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const noexcept { return observations.size(); }
  [[nodiscard]] bool has_presample() const noexcept { return presample.has_value(); }
};

/// Generates the process for t = -n..n from the zero initial condition
/// sigma2_{-n-1} = 0, with X_t = c * sum_{j=1}^{min(n, t+n)} j^(d-1) r_{t-j}.
/// Observations are r_1..r_n; the pre-sample is r_{-n}..r_0 (n+1 values).
/// Throws InfeasibleError when B2 >= 1 - gamma unless cfg.force is set.
SamplePath simulate(const Theta& theta, const SimConfig& cfg);

/// Draws count innovations from a fresh stream; used by the innovation tests.
std::vector<double> draw_innovations(const Innovation& innovation, std::uint64_t seed,
                                     std::uint64_t stream, std::size_t count);

}  // namespace gqarch
