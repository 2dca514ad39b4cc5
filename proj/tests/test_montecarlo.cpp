#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gqarch/error.hpp"
#include "gqarch/montecarlo.hpp"
#include "gqarch/simulator.hpp"

using namespace gqarch;

namespace {

const Theta kReference{0.7, 0.1, -0.2, 0.2, 0.2};

McDesign small_design() {
  McDesign design;
  design.theta_grid = {kReference, Theta{0.7, 0.01, -0.2, 0.4, 0.2}};
  design.n_list = {200, 300};
  design.reps = 6;
  design.seed = 5;
  design.opts.starts = 2;
  return design;
}

}  // namespace

TEST_CASE("an estimator returning theta0 gives zero rmse and bias") {
  McDesign design = small_design();
  design.reps = 1;
  const auto report = run_mc(design, [](const McReplication& rep) { return std::optional<Theta>(rep.theta0); });
  REQUIRE(report.cells.size() == 4);
  for (const auto& cell : report.cells) {
    CHECK(cell.reps_completed == 1);
    CHECK(cell.failures == 0);
    for (std::size_t i = 0; i < kNumParams; ++i) {
      CHECK(cell.rmse[i] == 0.0);
      CHECK(cell.bias[i] == 0.0);
    }
  }
  CHECK(report.cells[1].n == 300);
  CHECK(report.cells[2].theta0.omega == 0.01);
}

TEST_CASE("failed replications are counted, never fatal") {
  McDesign design = small_design();
  const auto report = run_mc(design, [](const McReplication& rep) -> std::optional<Theta> {
    if (rep.path.observations[0] > 0.0) throw NumericalError("synthetic failure");
    return rep.theta0;
  });
  for (const auto& cell : report.cells) {
    CHECK(cell.reps_completed + cell.failures == design.reps);
    CHECK(cell.estimates.size() == cell.reps_completed);
  }
}

TEST_CASE("rmse decomposes into bias and variance; results do not depend on workers") {
  McDesign design = small_design();
  design.workers = 1;
  const auto serial = run_mc(design);
  design.workers = 8;
  const auto parallel = run_mc(design);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  for (std::size_t c = 0; c < serial.cells.size(); ++c) {
    const auto& a = serial.cells[c];
    const auto& b = parallel.cells[c];
    CHECK(a.failures == b.failures);
    CHECK(a.rmse == b.rmse);
    CHECK(a.bias == b.bias);
    CHECK(a.estimates == b.estimates);

    const double m = static_cast<double>(a.reps_completed);
    REQUIRE(m > 0);
    for (std::size_t i = 0; i < kNumParams; ++i) {
      double mean = 0.0;
      for (const auto& e : a.estimates) mean += e[i];
      mean /= m;
      double var = 0.0;
      for (const auto& e : a.estimates) var += (e[i] - mean) * (e[i] - mean);
      var /= m;
      CHECK(std::abs(a.rmse[i] * a.rmse[i] - (a.bias[i] * a.bias[i] + var)) < 1e-12);
      CHECK(a.rmse[i] >= std::abs(a.bias[i]));
    }
  }

  std::ostringstream x, y;
  write_mc_csv(x, serial, design);
  write_mc_csv(y, parallel, design);
  CHECK(x.str() == y.str());
  CHECK(x.str().rfind("omega0,d0,n,reps,rmse_gamma", 0) == 0);
  std::ostringstream table;
  write_mc_table(table, serial);
  CHECK(table.str().find("omega0 = 0.1") < table.str().find("omega0 = 0.01"));
}

TEST_CASE("design validation") {
  McDesign design = small_design();
  design.reps = 0;
  CHECK_THROWS_AS(design.validate(), DomainError);
  design = small_design();
  design.theta_grid.push_back({0.9, 0.1, 0.0, 0.4, 0.5});
  CHECK_THROWS_AS(design.validate(), InfeasibleError);
  design = small_design();
  design.n_list.clear();
  CHECK_THROWS_AS(design.validate(), DomainError);
}

TEST_CASE("acf of squares") {
  SimConfig cfg;
  cfg.n = 20000;
  cfg.seed = 6;
  const auto iid = simulate({0.0, 1.0, 0.0, 0.2, 0.0}, cfg);  // sigma2 = 1: i.i.d. normal returns
  const auto acf = acf_squares(iid, 50);
  double mean = 0.0;
  for (double r : iid.observations) mean += r * r;
  mean /= 20000.0;
  double var = 0.0;
  for (double r : iid.observations) var += (r * r - mean) * (r * r - mean);
  var /= 20000.0;
  CHECK(std::abs(acf[0] - var) < 1e-12 * var);
  for (std::size_t k = 1; k <= 50; ++k) CHECK(std::abs(acf[k]) < 4.0 / std::sqrt(20000.0) * acf[0]);
  CHECK_THROWS_AS(acf_squares(iid, 5000), DomainError);
  CHECK_THROWS_AS(memory_slope(iid, 10, 200), NumericalError);
}

TEST_CASE("memory slope on an exact power law") {
  std::vector<double> acf(600);
  acf[0] = 1.0;
  for (std::size_t k = 1; k < acf.size(); ++k) acf[k] = 3.0 * std::pow(static_cast<double>(k), -0.4);
  const auto fit = memory_slope_from_acf(acf, 20, 500);
  CHECK(std::abs(fit.slope + 0.4) < 1e-10);
  CHECK(std::abs(fit.d_implied - 0.3) < 1e-10);
  CHECK_THROWS_AS(memory_slope_from_acf(acf, 1, 500), DomainError);
  CHECK_THROWS_AS(memory_slope_from_acf(acf, 20, 600), DomainError);
  acf[100] = -1e-3;
  try {
    (void)memory_slope_from_acf(acf, 20, 500);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("lag 100") != std::string::npos);
  }
}

TEST_CASE("long-memory design has positive autocovariances of squares") {
  SimConfig cfg;
  cfg.n = 100000;
  cfg.seed = 7;
  cfg.presample = false;
  const auto path = simulate({0.7, 0.1, -0.2, 0.3, 0.2}, cfg);
  const auto acf = acf_squares(path, 200);
  std::size_t positive = 0;
  for (std::size_t k = 10; k <= 200; ++k) positive += acf[k] > 0.0 ? 1 : 0;
  CHECK(positive == 191);
}
