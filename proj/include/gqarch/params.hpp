#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace gqarch {

inline constexpr std::size_t kNumParams = 5;

/// Coordinate order used for every 5-vector in the library.
enum class Coord : std::size_t { gamma = 0, omega = 1, a = 2, d = 3, c = 4 };

using ParamVec = std::array<double, kNumParams>;

std::string coord_name(std::size_t i);

/// Five-parameter GQARCH volatility:
///   sigma2_t = sum_l gamma^l { omega^2 + (a + c * sum_j j^(d-1) r_(t-l-j))^2 }.
struct Theta {
  double gamma = 0.0;
  double omega = 0.0;
  double a = 0.0;
  double d = 0.0;
  double c = 0.0;

  [[nodiscard]] ParamVec as_array() const noexcept { return {gamma, omega, a, d, c}; }
  [[nodiscard]] static Theta from_array(const ParamVec& v) noexcept {
    return {v[0], v[1], v[2], v[3], v[4]};
  }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return as_array()[i]; }

  /// Throws DomainError unless gamma in [0,1), omega >= 0, d in [0, 0.5) and all finite.
  void validate() const;

  /// The likelihood only sees (a + cY)^2, so (a, c) and (-a, -c) are equivalent.
  /// Returns the representative with c >= 0.
  [[nodiscard]] Theta canonical() const noexcept;

  friend bool operator==(const Theta&, const Theta&) = default;
};

/// Largest d the library evaluates; keeps 2(1-d) clear of the zeta pole.
inline constexpr double kMaxEvalD = 0.5 - 1e-6;

/// Riemann zeta on the real axis, s > 1 + 1e-6. Absolute error below 1e-10 on (1.0001, inf).
double zeta_real(double s);

/// B2 = sum_j (c j^(d-1))^2 = c^2 zeta(2(1-d)).
double b2_of(const Theta& theta);

/// Box constraints for the optimizer. The c-constraint is nonlinear:
///   max(b2_floor - gamma, gamma / b2_lower_ratio) <= c^2 zeta(2(1-d))
///     <= min(b2_ceiling - gamma, b2_upper_ratio * gamma).
struct ParamBox {
  double gamma_lo = 0.001, gamma_hi = 0.9;
  double omega_lo = 0.0, omega_hi = 2.0;
  double a_lo = -2.0, a_hi = 2.0;
  double d_lo = 0.0, d_hi = 0.5;
  double b2_floor = 0.05;
  double b2_lower_ratio = 999.0;
  double b2_ceiling = 0.99;
  double b2_upper_ratio = 99.0;

  [[nodiscard]] double b2_lower(double gamma) const noexcept;
  [[nodiscard]] double b2_upper(double gamma) const noexcept;
  [[nodiscard]] double lower(std::size_t i) const noexcept;
  [[nodiscard]] double upper(std::size_t i) const noexcept;
  /// Upper bound for d actually used in evaluation (min(d_hi, kMaxEvalD)).
  [[nodiscard]] double d_eval_hi() const noexcept;
  [[nodiscard]] ParamVec center() const;

  /// Throws DomainError when any interval is empty.
  void validate() const;
  /// True when theta satisfies every constraint, within tol on the b2 bounds.
  [[nodiscard]] bool contains(const Theta& theta, double tol = 1e-12) const;

  friend bool operator==(const ParamBox&, const ParamBox&) = default;
};

inline constexpr double kDefaultMu4 = 3.0;
inline constexpr double kDefaultK4 = 32.207 * 32.207 * 32.207 * 32.207;

struct FeasibilityReport {
  double b2 = 0.0;
  bool l2_ok = false;
  bool l4_ok = false;
  double slack_l2 = 0.0;  // 1 - gamma - B2
  double slack_l4 = 0.0;  // 1 - gamma - K4 mu4 B2^2
};

FeasibilityReport check_feasibility(const Theta& theta, double mu4 = kDefaultMu4,
                                    double k4 = kDefaultK4);

/// Clips (gamma, omega, a, d) into the box and rescales |c| so that B2 lands in
/// its gamma-dependent interval. The sign of c is kept (c == 0 maps to c > 0).
Theta project_into_box(const Theta& theta, const ParamBox& box);

}  // namespace gqarch
