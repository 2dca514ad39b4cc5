#include "gqarch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "gqarch/error.hpp"
#include "gqarch/rng.hpp"

namespace gqarch {

std::string to_string(StartStrategy s) {
  switch (s) {
    case StartStrategy::latin_hypercube: return "latin-hypercube";
    case StartStrategy::user_supplied: return "user-supplied";
    case StartStrategy::perturbed_reference: return "perturbed-reference";
  }
  return "latin-hypercube";
}

StartStrategy parse_start_strategy(const std::string& name) {
  if (name == "latin-hypercube") return StartStrategy::latin_hypercube;
  if (name == "user-supplied") return StartStrategy::user_supplied;
  if (name == "perturbed-reference") return StartStrategy::perturbed_reference;
  throw DomainError("unknown start strategy '" + name + "'");
}

void OptimOptions::validate() const {
  box.validate();
  if (starts < 1) throw DomainError("optimizer: starts must be >= 1");
  if (max_iters < 1) throw DomainError("optimizer: max_iters must be >= 1");
  if (!(f_tol > 0.0) || !(x_tol > 0.0)) throw DomainError("optimizer: tolerances must be positive");
  if (start_strategy == StartStrategy::user_supplied && user_starts.empty())
    throw DomainError("optimizer: user-supplied strategy needs at least one start");
  if (start_strategy == StartStrategy::perturbed_reference && !reference)
    throw DomainError("optimizer: perturbed-reference strategy needs a reference theta");
}

namespace {

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double f) { return std::log(f / (1.0 - f)); }

constexpr double kFractionGuard = 1e-12;

double to_fraction(double x, double lo, double hi) {
  if (!(hi > lo)) return 0.5;
  return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}

}  // namespace

BoxTransform::BoxTransform(const ParamBox& box) : box_(box) { box_.validate(); }

Theta BoxTransform::to_theta(const ParamVec& u) const {
  ParamVec v{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double lo = box_.lower(i);
    const double hi = box_.upper(i);
    v[i] = lo + (hi - lo) * logistic(u[i]);
  }
  const double b2_lo = std::max(box_.b2_lower(v[0]), 0.0);
  const double b2_hi = box_.b2_upper(v[0]);
  const double b2 = b2_lo + (b2_hi - b2_lo) * logistic(u[4]);
  v[4] = std::sqrt(std::max(b2, 0.0) / zeta_real(2.0 * (1.0 - v[3])));
  return Theta::from_array(v);
}

ParamVec BoxTransform::fractions(const Theta& theta) const {
  const auto v = theta.as_array();
  ParamVec f{};
  for (std::size_t i = 0; i < 4; ++i) f[i] = to_fraction(v[i], box_.lower(i), box_.upper(i));
  const double b2_lo = std::max(box_.b2_lower(theta.gamma), 0.0);
  f[4] = to_fraction(b2_of(theta), b2_lo, box_.b2_upper(theta.gamma));
  return f;
}

ParamVec BoxTransform::to_unconstrained(const Theta& theta) const {
  const Theta inside = project_into_box(theta.canonical(), box_);
  ParamVec f = fractions(inside);
  for (auto& fi : f) fi = logit(std::clamp(fi, kFractionGuard, 1.0 - kFractionGuard));
  return f;
}

NelderMeadResult nelder_mead(const std::function<double(const ParamVec&)>& f, const ParamVec& start,
                             double initial_step, std::size_t max_iters, double f_tol, double x_tol) {
  constexpr std::size_t dim = kNumParams;
  const double ndim = static_cast<double>(dim);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / ndim;
  const double contract = 0.75 - 1.0 / (2.0 * ndim);
  const double shrink = 1.0 - 1.0 / ndim;

  NelderMeadResult res;
  auto eval = [&](const ParamVec& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::array<ParamVec, dim + 1> simplex{};
  std::array<double, dim + 1> values{};
  simplex[0] = start;
  for (std::size_t i = 0; i < dim; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += initial_step;
  }
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

  std::array<std::size_t, dim + 1> order{};
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
    auto s = simplex;
    auto v = values;
    for (std::size_t i = 0; i <= dim; ++i) {
      simplex[i] = s[order[i]];
      values[i] = v[order[i]];
    }
  };
  auto along = [](const ParamVec& base, const ParamVec& toward, double t) {
    ParamVec out{};
    for (std::size_t i = 0; i < dim; ++i) out[i] = base[i] + t * (toward[i] - base[i]);
    return out;
  };

  sort_simplex();
  while (res.iterations < max_iters) {
    double extent = 0.0;
    for (std::size_t k = 1; k <= dim; ++k)
      for (std::size_t i = 0; i < dim; ++i) extent = std::max(extent, std::abs(simplex[k][i] - simplex[0][i]));
    if (values[dim] - values[0] <= f_tol || extent <= x_tol) {
      res.converged = true;
      break;
    }
    ++res.iterations;

    ParamVec centroid{};
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[k][i] / ndim;

    const ParamVec xr = along(centroid, simplex[dim], -reflect);
    const double fr = eval(xr);
    if (fr < values[0]) {
      const ParamVec xe = along(centroid, simplex[dim], -reflect * expand);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[dim] = xe;
        values[dim] = fe;
      } else {
        simplex[dim] = xr;
        values[dim] = fr;
      }
    } else if (fr < values[dim - 1]) {
      simplex[dim] = xr;
      values[dim] = fr;
    } else {
      const bool outside = fr < values[dim];
      const ParamVec xc = outside ? along(centroid, xr, contract) : along(centroid, simplex[dim], contract);
      const double fc = eval(xc);
      if (fc < std::min(fr, values[dim])) {
        simplex[dim] = xc;
        values[dim] = fc;
      } else {
        for (std::size_t k = 1; k <= dim; ++k) {
          simplex[k] = along(simplex[0], simplex[k], shrink);
          values[k] = eval(simplex[k]);
        }
      }
    }
    sort_simplex();
  }
  res.x = simplex[0];
  res.value = values[0];
  return res;
}

namespace {

std::vector<ParamVec> make_starts(const OptimOptions& opts, const BoxTransform& transform) {
  std::vector<ParamVec> starts;
  switch (opts.start_strategy) {
    case StartStrategy::user_supplied:
      for (const auto& t : opts.user_starts) starts.push_back(transform.to_unconstrained(t));
      break;
    case StartStrategy::perturbed_reference: {
      RngStream rng(derive_seed(opts.seed, 0x5265665374617274ULL), 0);
      const ParamVec ref = transform.to_unconstrained(*opts.reference);
      starts.push_back(ref);
      for (std::size_t k = 1; k < opts.starts; ++k) {
        ParamVec u = ref;
        for (auto& ui : u) ui += 0.5 * rng.normal();
        starts.push_back(u);
      }
      break;
    }
    case StartStrategy::latin_hypercube: {
      RngStream rng(derive_seed(opts.seed, 0x4c48535374617274ULL), 0);
      const std::size_t m = opts.starts;
      std::array<std::vector<std::size_t>, kNumParams> strata;
      for (auto& perm : strata) {
        perm.resize(m);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = m; i > 1; --i) {
          const auto j = static_cast<std::size_t>(rng.next_u64() % i);
          std::swap(perm[i - 1], perm[j]);
        }
      }
      for (std::size_t k = 0; k < m; ++k) {
        ParamVec u{};
        for (std::size_t i = 0; i < kNumParams; ++i) {
          const double frac = 0.05 + 0.9 * (static_cast<double>(strata[i][k]) + rng.uniform()) /
                                         static_cast<double>(m);
          u[i] = logit(frac);
        }
        starts.push_back(u);
      }
      break;
    }
  }
  return starts;
}

struct LocalRun {
  Theta theta{};
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
};

// Projected gradient descent with Armijo backtracking, steps scaled by box widths.
LocalRun polish(const QmlObjective& objective, const ParamBox& box, LocalRun run) {
  ParamVec width{};
  for (std::size_t i = 0; i < 4; ++i) width[i] = std::max(box.upper(i) - box.lower(i), 1e-8);
  width[4] = 1.0;
  double step = 1e-2;
  for (int it = 0; it < 50 && step > 1e-10; ++it) {
    const auto val = objective.evaluate(run.theta, true);
    const ParamVec g = *val.gradient;
    double gnorm = 0.0;
    for (std::size_t i = 0; i < kNumParams; ++i) gnorm = std::max(gnorm, std::abs(g[i]) * width[i]);
    if (!(gnorm > 0.0) || !std::isfinite(gnorm)) break;
    bool accepted = false;
    while (step > 1e-10) {
      ParamVec x = run.theta.as_array();
      for (std::size_t i = 0; i < kNumParams; ++i) x[i] -= step * g[i] * width[i] * width[i] / gnorm;
      const Theta cand = project_into_box(Theta::from_array(x), box);
      double decrease = 0.0;
      const auto c0 = run.theta.as_array();
      const auto c1 = cand.as_array();
      for (std::size_t i = 0; i < kNumParams; ++i) decrease += g[i] * (c0[i] - c1[i]);
      const double fc = objective.value(cand);
      if (std::isfinite(fc) && fc < run.value - 1e-4 * std::max(decrease, 0.0) && fc < run.value) {
        run.theta = cand;
        run.value = fc;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.25;
    }
    ++run.iterations;
    if (!accepted) break;
  }
  return run;
}

double distance_to_center(const Theta& t, const ParamVec& center) {
  const auto v = t.as_array();
  double s = 0.0;
  for (std::size_t i = 0; i < kNumParams; ++i) s += (v[i] - center[i]) * (v[i] - center[i]);
  return std::sqrt(s);
}

}  // namespace

EstimateResult estimate(const SamplePath& series, PastMode mode, const OptimOptions& opts) {
  if (series.size() < 50)
    std::cerr << "warning: estimating from only " << series.size() << " observations\n";
  return estimate(QmlObjective(series, mode), opts);
}

EstimateResult estimate(const QmlObjective& objective, const OptimOptions& opts) {
  opts.validate();
  const BoxTransform transform(opts.box);
  const auto starts = make_starts(opts, transform);
  if (starts.empty()) throw DomainError("estimate: no feasible start");

  auto f = [&](const ParamVec& u) {
    try {
      return objective.value(transform.to_theta(u));
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  EstimateResult result;
  result.mode = objective.mode();
  std::vector<LocalRun> runs;
  for (const auto& start : starts) {
    if (!std::isfinite(f(start))) continue;
    LocalRun run;
    auto nm = nelder_mead(f, start, 0.5, opts.max_iters, opts.f_tol, opts.x_tol);
    run.iterations = nm.iterations;
    // One restart from the best vertex guards against a collapsed simplex.
    if (nm.iterations < opts.max_iters) {
      auto again = nelder_mead(f, nm.x, 0.1, opts.max_iters - nm.iterations, opts.f_tol, opts.x_tol);
      run.iterations += again.iterations;
      if (again.value <= nm.value) nm = again;
      else nm.converged = nm.converged && again.converged;
    }
    run.theta = transform.to_theta(nm.x);
    run.value = nm.value;
    run.converged = nm.converged;
    if (opts.use_gradient) run = polish(objective, opts.box, run);
    result.start_objectives.push_back(run.value);
    result.iterations += run.iterations;
    runs.push_back(run);
  }
  if (runs.empty()) throw DomainError("estimate: no start produced a finite objective");
  result.starts_used = runs.size();

  const ParamVec center = opts.box.center();
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& r : runs) best_value = std::min(best_value, r.value);
  const LocalRun* best = nullptr;
  for (const auto& r : runs) {
    if (r.value > best_value + opts.f_tol) continue;
    if (best == nullptr) {
      best = &r;
      continue;
    }
    const double dr = distance_to_center(r.theta, center);
    const double db = distance_to_center(best->theta, center);
    if (dr < db || (dr == db && r.theta.as_array() < best->theta.as_array())) best = &r;
  }

  result.theta_hat = best->theta.canonical();
  const auto final_value = objective.evaluate(result.theta_hat, false);
  result.objective = final_value.value;
  result.floor_activated = final_value.floor_activated;
  result.converged = best->converged;

  const auto frac = transform.fractions(result.theta_hat);
  for (std::size_t i = 0; i < kNumParams; ++i) result.at_boundary[i] = frac[i] < 1e-4 || frac[i] > 1.0 - 1e-4;

  // Likelihood-ratio range of d with the other coordinates held fixed; below the
  // 95% chi-square(1) point there is no evidence in the data about d.
  constexpr std::size_t kGrid = 11;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const double d0 = opts.box.d_lo;
  const double d1 = opts.box.d_eval_hi();
  for (std::size_t k = 0; k < kGrid; ++k) {
    Theta probe = result.theta_hat;
    probe.d = d0 + (d1 - d0) * static_cast<double>(k) / static_cast<double>(kGrid - 1);
    const double v = objective.value(probe);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double lr_range = static_cast<double>(objective.window_size()) * (hi - lo);
  result.d_weakly_identified = !(lr_range >= 3.841);

  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (result.at_boundary[i]) result.warnings.push_back(coord_name(i) + " estimate at box boundary");
  }
  if (result.d_weakly_identified) {
    std::ostringstream msg;
    msg << "d weakly identified: likelihood-ratio range over d is " << lr_range << " < 3.84";
    result.warnings.push_back(msg.str());
  }
  if (result.floor_activated) result.warnings.push_back("variance floor activated at the estimate");
  if (!result.converged) result.warnings.push_back("optimizer hit max_iters before tolerance");
  return result;
}

std::vector<std::pair<double, double>> profile_objective(const SamplePath& series, PastMode mode,
                                                         const Theta& theta, Coord coord,
                                                         const std::vector<double>& grid) {
  const QmlObjective objective(series, mode);
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double g : grid) {
    auto v = theta.as_array();
    v[static_cast<std::size_t>(coord)] = g;
    out.emplace_back(g, objective.value(Theta::from_array(v)));
  }
  return out;
}

}  // namespace gqarch
