#include "gqarch/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "gqarch/error.hpp"
#include "gqarch/rng.hpp"
#include "gqarch/series_io.hpp"

namespace gqarch {

void McDesign::validate() const {
  if (reps < 1) throw DomainError("mc: reps must be >= 1");
  if (theta_grid.empty() || n_list.empty()) throw DomainError("mc: empty design grid");
  for (const auto& t : theta_grid) {
    if (!check_feasibility(t).l2_ok) throw InfeasibleError("mc: design theta violates B2 < 1 - gamma");
  }
  for (auto n : n_list) {
    if (n < 2) throw DomainError("mc: sample sizes must be >= 2");
  }
  mode.validate();
  opts.validate();
}

std::optional<Theta> qml_estimator(const McReplication& rep) {
  const EstimateResult est = estimate(QmlObjective(rep.path, rep.mode), rep.opts);
  if (!est.converged) return std::nullopt;
  return est.theta_hat;
}

namespace {

struct Draw {
  std::optional<Theta> estimate;
};

Draw run_replication(const McDesign& design, const McEstimator& estimator, std::size_t cell,
                     const Theta& theta0, std::size_t n, std::size_t k) {
  Draw draw;
  try {
    SimConfig sim;
    sim.n = n;
    sim.seed = design.seed;
    sim.stream = stream_id(static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(k));
    sim.innovation = design.innovation;
    sim.presample = design.mode.kind == PastMode::Kind::presample;
    const SamplePath path = simulate(theta0, sim);
    OptimOptions opts = design.opts;
    opts.seed = derive_seed(design.seed, sim.stream);
    if (opts.start_strategy == StartStrategy::perturbed_reference && !opts.reference) opts.reference = theta0;
    const McReplication rep{path, theta0, opts, design.mode};
    auto est = estimator(rep);
    if (est) draw.estimate = est->canonical();
  } catch (const std::exception&) {
    draw.estimate.reset();
  }
  return draw;
}

}  // namespace

McReport run_mc(const McDesign& design, const McEstimator& estimator) {
  design.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t ncells = design.theta_grid.size() * design.n_list.size();
  const std::size_t total = ncells * design.reps;
  std::vector<Draw> draws(total);

  const int workers = static_cast<int>(std::max<std::size_t>(design.workers, 1));
  const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
  for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
    const auto flat = static_cast<std::size_t>(idx);
    const std::size_t cell = flat / design.reps;
    const std::size_t k = flat % design.reps;
    const Theta& theta0 = design.theta_grid[cell / design.n_list.size()];
    const std::size_t n = design.n_list[cell % design.n_list.size()];
    draws[flat] = run_replication(design, estimator, cell, theta0, n, k);
  }

  McReport report;
  report.cells.reserve(ncells);
  for (std::size_t cell = 0; cell < ncells; ++cell) {
    McCell out;
    out.theta0 = design.theta_grid[cell / design.n_list.size()].canonical();
    out.n = design.n_list[cell % design.n_list.size()];
    const auto truth = out.theta0.as_array();
    ParamVec sq{};
    for (std::size_t k = 0; k < design.reps; ++k) {
      const auto& draw = draws[cell * design.reps + k];
      if (!draw.estimate) {
        ++out.failures;
        continue;
      }
      out.estimates.push_back(*draw.estimate);
      const auto hat = draw.estimate->as_array();
      for (std::size_t i = 0; i < kNumParams; ++i) {
        const double e = hat[i] - truth[i];
        out.bias[i] += e;
        sq[i] += e * e;
      }
    }
    out.reps_completed = out.estimates.size();
    if (out.reps_completed > 0) {
      const double m = static_cast<double>(out.reps_completed);
      for (std::size_t i = 0; i < kNumParams; ++i) {
        out.bias[i] /= m;
        out.rmse[i] = std::sqrt(sq[i] / m);
      }
    }
    report.cells.push_back(std::move(out));
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

void write_mc_csv(std::ostream& out, const McReport& report, const McDesign& design) {
  out << "omega0,d0,n,reps,rmse_gamma,rmse_omega,rmse_a,rmse_d,rmse_c,"
         "bias_gamma,bias_omega,bias_a,bias_d,bias_c,failures,seed\n";
  for (const auto& cell : report.cells) {
    out << format_real(cell.theta0.omega) << ',' << format_real(cell.theta0.d) << ',' << cell.n << ','
        << design.reps;
    for (double v : cell.rmse) out << ',' << format_real(v);
    for (double v : cell.bias) out << ',' << format_real(v);
    out << ',' << cell.failures << ',' << design.seed << '\n';
  }
}

void write_mc_table(std::ostream& out, const McReport& report) {
  std::map<double, std::vector<const McCell*>, std::greater<>> blocks;
  for (const auto& cell : report.cells) blocks[cell.theta0.omega].push_back(&cell);
  char line[160];
  for (const auto& [omega0, cells] : blocks) {
    auto sorted = cells;
    std::stable_sort(sorted.begin(), sorted.end(), [](const McCell* x, const McCell* y) {
      return x->n != y->n ? x->n < y->n : x->theta0.d < y->theta0.d;
    });
    std::snprintf(line, sizeof line, "omega0 = %g\n", omega0);
    out << line;
    out << "     n    d0   gamma_hat  omega_hat      a_hat      d_hat      c_hat  fails\n";
    std::size_t last_n = 0;
    for (const McCell* c : sorted) {
      if (last_n != 0 && c->n != last_n) out << '\n';
      const bool first = c->n != last_n;
      last_n = c->n;
      if (first) {
        std::snprintf(line, sizeof line, "%6zu", c->n);
      } else {
        std::snprintf(line, sizeof line, "%6s", "");
      }
      out << line;
      std::snprintf(line, sizeof line, "  %4.2f  %9.3f  %9.3f  %9.3f  %9.3f  %9.3f  %5zu\n", c->theta0.d,
                    c->rmse[0], c->rmse[1], c->rmse[2], c->rmse[3], c->rmse[4], c->failures);
      out << line;
    }
    out << '\n';
  }
}

std::vector<double> acf_squares(const SamplePath& series, std::size_t max_lag) {
  const auto& r = series.observations;
  const std::size_t n = r.size();
  if (n == 0) throw DomainError("acf_squares: empty series");
  if (4 * max_lag >= n) throw DomainError("acf_squares: max_lag must be below n/4");
  std::vector<double> sq(n);
  double mean = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    sq[t] = r[t] * r[t];
    mean += sq[t];
  }
  mean /= static_cast<double>(n);
  for (auto& v : sq) v -= mean;
  std::vector<double> acf(max_lag + 1, 0.0);
  const int lags = static_cast<int>(max_lag);
#pragma omp parallel for schedule(static)
  for (int k = 0; k <= lags; ++k) {
    double s = 0.0;
    const auto uk = static_cast<std::size_t>(k);
    for (std::size_t t = uk; t < n; ++t) s += sq[t] * sq[t - uk];
    acf[uk] = s / static_cast<double>(n);
  }
  return acf;
}

MemorySlope memory_slope_from_acf(std::span<const double> acf, std::size_t lag_lo, std::size_t lag_hi) {
  if (lag_lo < 2 || lag_lo >= lag_hi) throw DomainError("memory_slope: need 2 <= lag_lo < lag_hi");
  if (lag_hi >= acf.size()) throw DomainError("memory_slope: lag_hi beyond available autocovariances");
  std::vector<double> xs, ys;
  for (std::size_t k = lag_lo; k <= lag_hi; ++k) {
    if (!(acf[k] > 0.0)) {
      std::ostringstream msg;
      msg << "memory_slope: nonpositive autocovariance at lag " << k;
      throw NumericalError(msg.str());
    }
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(acf[k]));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  MemorySlope out;
  out.slope = sxy / sxx;
  out.d_implied = 0.5 * (out.slope + 1.0);
  return out;
}

MemorySlope memory_slope(const SamplePath& series, std::size_t lag_lo, std::size_t lag_hi) {
  const auto acf = acf_squares(series, lag_hi);
  return memory_slope_from_acf(acf, lag_lo, lag_hi);
}

}  // namespace gqarch
