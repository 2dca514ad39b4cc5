#include "gqarch/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gqarch/error.hpp"

namespace gqarch {

std::string coord_name(std::size_t i) {
  static constexpr const char* kNames[kNumParams] = {"gamma", "omega", "a", "d", "c"};
  return i < kNumParams ? kNames[i] : "?";
}

void Theta::validate() const {
  for (double v : as_array()) {
    if (!std::isfinite(v)) throw DomainError("theta: non-finite component");
  }
  if (gamma < 0.0 || gamma >= 1.0) throw DomainError("theta: gamma must lie in [0, 1)");
  if (omega < 0.0) throw DomainError("theta: omega must be nonnegative");
  if (d < 0.0 || d >= 0.5) throw DomainError("theta: d must lie in [0, 0.5)");
}

Theta Theta::canonical() const noexcept {
  Theta t = *this;
  if (t.c < 0.0) {
    t.c = -t.c;
    t.a = -t.a;
  }
  return t;
}

namespace {

// Partial sum length and Bernoulli corrections B2..B8 / (2k)!.
constexpr int kZetaTerms = 64;
constexpr std::array<double, 4> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
};

}  // namespace

double zeta_real(double s) {
  if (!(s > 1.0 + 1e-6)) {
    std::ostringstream msg;
    msg << "zeta_real: argument " << s << " too close to or below the pole at 1";
    throw DomainError(msg.str());
  }

  double partial = 0.0;
  for (int j = kZetaTerms - 1; j >= 1; --j) partial += std::pow(static_cast<double>(j), -s);

  const double n = kZetaTerms;
  const double n_pow = std::pow(n, -s);
  double tail = n * n_pow / (s - 1.0) + 0.5 * n_pow;

  // Euler-Maclaurin: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  double rising = s;
  double n_power = n_pow / n;
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    tail += kBernoulliOverFactorial[k] * rising * n_power;
    rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
    n_power /= n * n;
  }
  return partial + tail;
}

double b2_of(const Theta& theta) {
  if (theta.c == 0.0) return 0.0;
  return theta.c * theta.c * zeta_real(2.0 * (1.0 - theta.d));
}

double ParamBox::b2_lower(double gamma) const noexcept {
  return std::max(b2_floor - gamma, gamma / b2_lower_ratio);
}

double ParamBox::b2_upper(double gamma) const noexcept {
  return std::min(b2_ceiling - gamma, b2_upper_ratio * gamma);
}

double ParamBox::lower(std::size_t i) const noexcept {
  switch (i) {
    case 0: return gamma_lo;
    case 1: return omega_lo;
    case 2: return a_lo;
    case 3: return d_lo;
    default: return 0.0;
  }
}

double ParamBox::upper(std::size_t i) const noexcept {
  switch (i) {
    case 0: return gamma_hi;
    case 1: return omega_hi;
    case 2: return a_hi;
    case 3: return d_eval_hi();
    default: return 0.0;
  }
}

double ParamBox::d_eval_hi() const noexcept { return std::min(d_hi, kMaxEvalD); }

void ParamBox::validate() const {
  if (!(gamma_lo <= gamma_hi) || gamma_lo < 0.0 || gamma_hi >= 1.0)
    throw DomainError("box: gamma interval must be a non-empty subset of [0, 1)");
  if (!(omega_lo <= omega_hi) || omega_lo < 0.0)
    throw DomainError("box: omega interval must be non-empty and nonnegative");
  if (!(a_lo <= a_hi)) throw DomainError("box: a interval is empty");
  if (!(d_lo <= d_hi) || d_lo < 0.0 || d_lo > kMaxEvalD || d_hi > 0.5)
    throw DomainError("box: d interval must be a non-empty subset of [0, 0.5]");
  if (!(b2_lower_ratio > 0.0) || !(b2_upper_ratio > 0.0))
    throw DomainError("box: b2 ratios must be positive");
}

ParamVec ParamBox::center() const {
  ParamVec mid{};
  for (std::size_t i = 0; i < 4; ++i) mid[i] = 0.5 * (lower(i) + upper(i));
  const double b2 = 0.5 * (b2_lower(mid[0]) + b2_upper(mid[0]));
  mid[4] = std::sqrt(std::max(b2, 0.0) / zeta_real(2.0 * (1.0 - mid[3])));
  return mid;
}

bool ParamBox::contains(const Theta& theta, double tol) const {
  const auto v = theta.as_array();
  for (std::size_t i = 0; i < 4; ++i) {
    if (v[i] < lower(i) || v[i] > upper(i)) return false;
  }
  const double b2 = b2_of(theta);
  return b2 >= b2_lower(theta.gamma) * (1.0 - tol) - tol &&
         b2 <= b2_upper(theta.gamma) * (1.0 + tol) + tol;
}

FeasibilityReport check_feasibility(const Theta& theta, double mu4, double k4) {
  theta.validate();
  if (!(mu4 >= 1.0)) throw DomainError("check_feasibility: mu4 must be >= 1");
  if (!(k4 > 0.0)) throw DomainError("check_feasibility: k4 must be positive");
  FeasibilityReport rep;
  rep.b2 = b2_of(theta);
  rep.slack_l2 = 1.0 - theta.gamma - rep.b2;
  rep.slack_l4 = 1.0 - theta.gamma - k4 * mu4 * rep.b2 * rep.b2;
  rep.l2_ok = rep.slack_l2 > 0.0;
  rep.l4_ok = rep.slack_l4 > 0.0;
  return rep;
}

Theta project_into_box(const Theta& theta, const ParamBox& box) {
  box.validate();
  Theta out = theta;
  out.gamma = std::clamp(theta.gamma, box.gamma_lo, box.gamma_hi);
  out.omega = std::clamp(theta.omega, box.omega_lo, box.omega_hi);
  out.a = std::clamp(theta.a, box.a_lo, box.a_hi);
  out.d = std::clamp(theta.d, box.d_lo, box.d_eval_hi());

  const double lo = box.b2_lower(out.gamma);
  const double hi = box.b2_upper(out.gamma);
  if (!(lo <= hi) || hi < 0.0) {
    std::ostringstream msg;
    msg << "project_into_box: empty c-interval at gamma=" << out.gamma << " (B2 lower " << lo
        << " > upper " << hi << ")";
    throw DomainError(msg.str());
  }
  const double z = zeta_real(2.0 * (1.0 - out.d));
  const double b2 = out.c * out.c * z;
  const double sign = out.c < 0.0 ? -1.0 : 1.0;
  if (b2 < lo) {
    out.c = sign * std::sqrt(std::max(lo, 0.0) / z);
  } else if (b2 > hi) {
    out.c = sign * std::sqrt(hi / z);
  }
  return out;
}

}  // namespace gqarch
