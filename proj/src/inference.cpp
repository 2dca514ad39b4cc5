#include "gqarch/inference.hpp"

#include <boost/math/distributions/normal.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gqarch/rng.hpp"

namespace gqarch {

InfoMatrices info_matrices(const Theta& theta, const SamplePath& series, PastMode mode) {
  return info_matrices(QmlObjective(series, mode), theta);
}

InfoMatrices info_matrices(const QmlObjective& objective, const Theta& theta) {
  const VolPath path = objective.vol_path(theta, true);
  const auto r = objective.observations();
  InfoMatrices out;
  out.effective_n = objective.window_size();
  if (out.effective_n < 30) throw DomainError("info_matrices: effective window below 30 observations");

  Eigen::Matrix<double, 5, 1> g;
  for (std::size_t t = objective.window_begin(); t < objective.n(); ++t) {
    const double s2 = path.sigma2[t];
    for (std::size_t i = 0; i < kNumParams; ++i) g(static_cast<Eigen::Index>(i)) = path.grad[t][i];
    const Matrix5 outer = (g * g.transpose()) / (s2 * s2);
    const double u = r[t] * r[t] / s2 - 1.0;
    out.b_hat += outer;
    out.a_hat += u * u * outer;
    out.kappa4_hat += u * u;
  }
  const double inv = 1.0 / static_cast<double>(out.effective_n);
  out.b_hat *= inv;
  out.a_hat *= inv;
  out.kappa4_hat *= inv;
  // Enforce exact symmetry against accumulated rounding.
  out.b_hat = 0.5 * (out.b_hat + out.b_hat.transpose()).eval();
  out.a_hat = 0.5 * (out.a_hat + out.a_hat.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<Matrix5> eig(out.b_hat, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  out.condition_number = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  const Eigen::LLT<Matrix5> llt(out.b_hat);
  if (!(out.condition_number <= kMaxConditionNumber) || llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "info_matrices: B is singular or ill-conditioned (condition number "
        << out.condition_number << ")";
    throw SingularInformationError(msg.str(), out);
  }
  out.sigma_hat = out.kappa4_hat * llt.solve(Matrix5::Identity());
  out.sigma_hat = 0.5 * (out.sigma_hat + out.sigma_hat.transpose()).eval();
  ParamVec se{};
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    se[i] = std::sqrt(out.sigma_hat(k, k) * inv);
  }
  out.se = se;
  return out;
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 * (1.0 + level));
}

namespace {

struct CoverageDraw {
  bool ok = false;
  std::array<bool, kNumParams> covered{};
  double kappa4 = 0.0;
};

CoverageDraw coverage_draw(const CoverageConfig& cfg, std::size_t rep, double z) {
  CoverageDraw draw;
  try {
    SimConfig sim;
    sim.n = cfg.n;
    sim.seed = cfg.seed;
    sim.stream = stream_id(0xC0u, static_cast<std::uint32_t>(rep));
    sim.innovation = cfg.innovation;
    sim.presample = cfg.mode.kind == PastMode::Kind::presample;
    const SamplePath path = simulate(cfg.theta0, sim);
    const QmlObjective objective(path, cfg.mode);
    OptimOptions opts = cfg.opts;
    opts.seed = derive_seed(cfg.seed, sim.stream);
    const EstimateResult est = estimate(objective, opts);
    if (!est.converged) return draw;
    const InfoMatrices info = info_matrices(objective, est.theta_hat);
    const auto hat = est.theta_hat.as_array();
    const auto truth = cfg.theta0.canonical().as_array();
    for (std::size_t i = 0; i < kNumParams; ++i)
      draw.covered[i] = std::abs(hat[i] - truth[i]) <= z * (*info.se)[i];
    draw.kappa4 = info.kappa4_hat;
    draw.ok = true;
  } catch (const std::exception&) {
    draw.ok = false;
  }
  return draw;
}

}  // namespace

CoverageReport ci_coverage_experiment(const CoverageConfig& cfg) {
  if (cfg.reps < 50) throw DomainError("ci_coverage_experiment: reps must be at least 50");
  if (!(cfg.level >= 0.5 && cfg.level < 1.0)) throw DomainError("ci_coverage_experiment: level must lie in [0.5, 1)");
  cfg.mode.validate();
  const double z = normal_critical_value(cfg.level);
  std::vector<CoverageDraw> draws(cfg.reps);
  const int workers = static_cast<int>(std::max<std::size_t>(cfg.workers, 1));
  const auto reps = static_cast<std::ptrdiff_t>(cfg.reps);
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
  for (std::ptrdiff_t k = 0; k < reps; ++k) {
    draws[static_cast<std::size_t>(k)] = coverage_draw(cfg, static_cast<std::size_t>(k), z);
  }

  CoverageReport rep;
  for (const auto& d : draws) {
    if (!d.ok) {
      ++rep.excluded;
      continue;
    }
    ++rep.completed;
    rep.mean_kappa4 += d.kappa4;
    for (std::size_t i = 0; i < kNumParams; ++i) rep.coverage[i] += d.covered[i] ? 1.0 : 0.0;
  }
  if (rep.completed > 0) {
    for (auto& c : rep.coverage) c /= static_cast<double>(rep.completed);
    rep.mean_kappa4 /= static_cast<double>(rep.completed);
  }
  return rep;
}

}  // namespace gqarch
