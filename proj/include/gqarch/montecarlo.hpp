#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gqarch/likelihood.hpp"
#include "gqarch/optimizer.hpp"
#include "gqarch/simulator.hpp"

namespace gqarch {

struct McDesign {
  std::vector<Theta> theta_grid;
  std::vector<std::size_t> n_list;
  std::size_t reps = 100;
  PastMode mode = PastMode::finite_past();
  std::uint64_t seed = 0;
  OptimOptions opts{};
  Innovation innovation{};
  std::size_t workers = 1;

  void validate() const;
};

struct McCell {
  Theta theta0{};
  std::size_t n = 0;
  std::size_t reps_completed = 0;
  std::size_t failures = 0;
  ParamVec rmse{};
  ParamVec bias{};
  std::vector<Theta> estimates;  // completed replications, in replication order
};

struct McReport {
  std::vector<McCell> cells;  // theta-major, then n
  double wall_time = 0.0;     // seconds
};

/// What a replication sees: its simulated path, the true parameter and the
/// optimizer options with the replication's own sub-seed.
struct McReplication {
  const SamplePath& path;
  const Theta& theta0;
  const OptimOptions& opts;
  PastMode mode;
};

/// Returns the (canonical) estimate, or nullopt for a failed replication.
using McEstimator = std::function<std::optional<Theta>(const McReplication&)>;

/// Default estimator: estimate() with the design's mode; non-converged fits count as failures.
std::optional<Theta> qml_estimator(const McReplication& rep);

/// Replication k of cell j uses simulation stream (seed, j, k); the report
/// depends only on the design, not on the number of workers.
McReport run_mc(const McDesign& design, const McEstimator& estimator = qml_estimator);

/// CSV: omega0,d0,n,reps,rmse_*,bias_*,failures,seed with round-trip exact values.
void write_mc_csv(std::ostream& out, const McReport& report, const McDesign& design);
/// Plain-text table: blocks by omega0, rows by (n, d0), columns gamma, omega, a, d, c.
void write_mc_table(std::ostream& out, const McReport& report);

/// Sample autocovariances of r_t^2 at lags 0..max_lag (mean-centered, divisor n).
std::vector<double> acf_squares(const SamplePath& series, std::size_t max_lag);

struct MemorySlope {
  double slope = 0.0;
  double d_implied = 0.0;
};

/// Least-squares slope of log acf against log lag over [lag_lo, lag_hi]; d = (slope + 1) / 2.
MemorySlope memory_slope(const SamplePath& series, std::size_t lag_lo, std::size_t lag_hi);
MemorySlope memory_slope_from_acf(std::span<const double> acf, std::size_t lag_lo, std::size_t lag_hi);

}  // namespace gqarch
