#include "gqarch/likelihood.hpp"

#include <cmath>
#include <sstream>

#include "gqarch/error.hpp"

namespace gqarch {

void PastMode::validate() const {
  if (kind == Kind::truncated && !(beta > 0.0 && beta < 1.0))
    throw DomainError("truncated mode requires beta in (0, 1)");
}

std::string to_string(const PastMode& mode) {
  switch (mode.kind) {
    case PastMode::Kind::finite_past: return "finite-past";
    case PastMode::Kind::presample: return "presample";
    case PastMode::Kind::truncated: return "truncated";
  }
  return "finite-past";
}

PastMode parse_past_mode(const std::string& name, double beta) {
  if (name == "finite-past") return PastMode::finite_past();
  if (name == "presample" || name == "infinite-past") return PastMode::presample();
  if (name == "truncated") {
    auto m = PastMode::truncated(beta);
    m.validate();
    return m;
  }
  throw DomainError("unknown past mode '" + name + "'");
}

std::size_t truncation_window(std::size_t n, double beta) {
  return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), beta) + 1e-9));
}

namespace {

std::vector<double> extended_series(const SamplePath& series, const PastMode& mode) {
  if (mode.kind != PastMode::Kind::presample) return series.observations;
  if (!series.presample) throw DomainError("presample mode requires a series with a pre-sample block");
  std::vector<double> ext = *series.presample;
  ext.insert(ext.end(), series.observations.begin(), series.observations.end());
  return ext;
}

}  // namespace

QmlObjective::QmlObjective(const SamplePath& series, PastMode mode)
    : mode_(mode),
      extended_(extended_series(series, mode)),
      offset_(extended_.size() - series.observations.size()),
      n_(series.observations.size()),
      kernel_(extended_, mode.kind == PastMode::Kind::presample ? series.observations.size()
                                                               : kUnlimitedLags) {
  mode_.validate();
  if (n_ == 0) throw DomainError("QmlObjective: empty series");
  if (mode_.kind == PastMode::Kind::truncated) {
    const std::size_t k = truncation_window(n_, mode_.beta);
    if (k < 1) throw DomainError("truncated mode: [n^beta] must be at least 1");
    window_begin_ = n_ - std::min(k, n_);
  }
}

VolPath QmlObjective::compute(const Theta& theta, bool want_grad) const {
  if (!(theta.gamma >= 0.0 && theta.gamma < 1.0)) throw DomainError("vol_path: gamma must lie in [0, 1)");
  if (!(theta.d >= 0.0 && theta.d <= 0.5)) throw DomainError("vol_path: d must lie in [0, 0.5]");

  WeightedSums sums;
  kernel_.evaluate_into(theta.d, want_grad, sums);

  VolPath out;
  out.sigma2.resize(n_);
  out.y.assign(sums.y.begin() + static_cast<std::ptrdiff_t>(offset_), sums.y.end());
  if (want_grad) {
    out.grad.resize(n_);
    out.dy.assign(sums.dy.begin() + static_cast<std::ptrdiff_t>(offset_), sums.dy.end());
  }

  const double omega2 = theta.omega * theta.omega;
  const double g = theta.gamma;
  double s2 = 0.0;
  ParamVec grad{};
  const std::size_t total = extended_.size();
  for (std::size_t s = 0; s < total; ++s) {
    const double y = sums.y[s];
    const double q = theta.a + theta.c * y;
    if (want_grad) {
      grad[0] = s2 + g * grad[0];
      grad[1] = 2.0 * theta.omega + g * grad[1];
      grad[2] = 2.0 * q + g * grad[2];
      grad[3] = 2.0 * theta.c * q * sums.dy[s] + g * grad[3];
      grad[4] = 2.0 * q * y + g * grad[4];
    }
    s2 = omega2 + q * q + g * s2;
    if (s >= offset_) {
      out.sigma2[s - offset_] = s2;
      if (want_grad) out.grad[s - offset_] = grad;
    }
  }
  return out;
}

VolPath QmlObjective::vol_path(const Theta& theta, bool want_grad) const {
  VolPath path = compute(theta, want_grad);
  for (std::size_t t = 0; t < path.sigma2.size(); ++t) {
    if (!(path.sigma2[t] > 0.0)) {
      std::ostringstream msg;
      msg << "vol_path: nonpositive conditional variance at t=" << t + 1;
      throw NumericalError(msg.str());
    }
  }
  return path;
}

QmlValue QmlObjective::evaluate(const Theta& theta, bool want_grad, bool keep_per_obs) const {
  const VolPath path = compute(theta, want_grad);
  const auto r = observations();
  QmlValue out;
  ParamVec grad{};
  double total = 0.0;
  if (keep_per_obs) out.per_obs.reserve(window_size());
  for (std::size_t t = window_begin_; t < n_; ++t) {
    double s2 = path.sigma2[t];
    bool floored = false;
    if (!(s2 >= kVarianceFloor)) {
      s2 = kVarianceFloor;
      floored = true;
      out.floor_activated = true;
    }
    const double r2 = r[t] * r[t];
    const double lt = r2 / s2 + std::log(s2);
    total += lt;
    if (keep_per_obs) out.per_obs.push_back(lt);
    if (want_grad && !floored) {
      const double w = (1.0 - r2 / s2) / s2;
      for (std::size_t i = 0; i < kNumParams; ++i) grad[i] += w * path.grad[t][i];
    }
  }
  const double inv = 1.0 / static_cast<double>(window_size());
  out.value = total * inv;
  if (want_grad) {
    for (auto& gi : grad) gi *= inv;
    out.gradient = grad;
  }
  return out;
}

VolPath vol_path(const Theta& theta, const SamplePath& series, PastMode mode, bool want_grad) {
  return QmlObjective(series, mode).vol_path(theta, want_grad);
}

QmlValue qml(const Theta& theta, const SamplePath& series, PastMode mode, bool want_grad) {
  return QmlObjective(series, mode).evaluate(theta, want_grad);
}

}  // namespace gqarch
