#include "gqarch/simulator.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "gqarch/error.hpp"
#include "gqarch/rng.hpp"

namespace gqarch {

double Innovation::fourth_moment() const {
  switch (kind) {
    case InnovationKind::standard_normal: return 3.0;
    case InnovationKind::rademacher: return 1.0;
    case InnovationKind::student_t:
      if (nu <= 4.0) return std::numeric_limits<double>::infinity();
      return 3.0 * (nu - 2.0) / (nu - 4.0);
  }
  return 3.0;
}

std::string to_string(InnovationKind kind) {
  switch (kind) {
    case InnovationKind::standard_normal: return "standard-normal";
    case InnovationKind::student_t: return "student-t";
    case InnovationKind::rademacher: return "rademacher";
  }
  return "standard-normal";
}

InnovationKind parse_innovation(const std::string& name) {
  if (name == "standard-normal" || name == "normal") return InnovationKind::standard_normal;
  if (name == "student-t" || name == "t") return InnovationKind::student_t;
  if (name == "rademacher") return InnovationKind::rademacher;
  throw DomainError("unknown innovation kind '" + name + "'");
}

namespace {

class InnovationSource {
 public:
  InnovationSource(const Innovation& innovation, std::uint64_t seed, std::uint64_t stream)
      : innovation_(innovation), rng_(seed, stream) {
    if (innovation_.kind == InnovationKind::student_t) {
      if (!(innovation_.nu > 2.0))
        throw DomainError("student-t innovations need nu > 2 for unit variance");
      t_scale_ = std::sqrt((innovation_.nu - 2.0) / innovation_.nu);
    }
  }

  double next() {
    switch (innovation_.kind) {
      case InnovationKind::standard_normal: return rng_.normal();
      case InnovationKind::student_t: return t_scale_ * rng_.student_t(innovation_.nu);
      case InnovationKind::rademacher: return rng_.rademacher();
    }
    return 0.0;
  }

 private:
  Innovation innovation_;
  RngStream rng_;
  double t_scale_ = 1.0;
};

}  // namespace

std::vector<double> draw_innovations(const Innovation& innovation, std::uint64_t seed,
                                     std::uint64_t stream, std::size_t count) {
  InnovationSource source(innovation, seed, stream);
  std::vector<double> out(count);
  for (auto& z : out) z = source.next();
  return out;
}

SamplePath simulate(const Theta& theta, const SimConfig& cfg) {
  theta.validate();
  if (cfg.n < 2) throw DomainError("simulate: n must be at least 2");
  if (cfg.innovation.kind == InnovationKind::student_t && cfg.innovation.nu <= 4.0 &&
      cfg.innovation.nu > 2.0) {
    std::cerr << "warning: student-t innovations with nu <= 4 have infinite fourth moment\n";
  }
  const auto feas = check_feasibility(theta);
  if (!feas.l2_ok && !cfg.force) {
    std::ostringstream msg;
    msg << "simulate: B2 = " << feas.b2 << " >= 1 - gamma = " << 1.0 - theta.gamma
        << " (no stationary L2 solution; pass force to simulate anyway)";
    throw InfeasibleError(msg.str());
  }

  const std::size_t n = cfg.n;
  const std::size_t total = 2 * n + 1;  // t = -n..n stored at s = t + n
  // Reversed weights: rev[n - j] = j^(d-1), so the lag sum runs forward in memory.
  std::vector<double> rev(n, 0.0);
  for (std::size_t j = 1; j <= n; ++j) rev[n - j] = std::pow(static_cast<double>(j), theta.d - 1.0);

  InnovationSource source(cfg.innovation, cfg.seed, cfg.stream);
  std::vector<double> r(total, 0.0);
  std::vector<double> sigma(total, 0.0);
  const double omega2 = theta.omega * theta.omega;
  double sigma2_prev = 0.0;
  for (std::size_t s = 0; s < total; ++s) {
    const std::size_t lags = std::min(n, s);
    const double* past = r.data() + (s - lags);
    const double* w = rev.data() + (n - lags);
    double x = 0.0;
#pragma omp simd reduction(+ : x)
    for (std::size_t k = 0; k < lags; ++k) x += w[k] * past[k];
    x *= theta.c;
    const double q = theta.a + x;
    const double sigma2 = omega2 + q * q + theta.gamma * sigma2_prev;
    sigma[s] = std::sqrt(sigma2);
    r[s] = source.next() * sigma[s];
    sigma2_prev = sigma2;
  }

  SamplePath path;
  path.observations.assign(r.begin() + static_cast<std::ptrdiff_t>(n + 1), r.end());
  path.vols.emplace(sigma.begin() + static_cast<std::ptrdiff_t>(n + 1), sigma.end());
  if (cfg.presample) path.presample.emplace(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n + 1));
  path.theta_true = theta;
  path.seed = cfg.seed;
  return path;
}

}  // namespace gqarch
