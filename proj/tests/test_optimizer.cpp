#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gqarch/error.hpp"
#include "gqarch/optimizer.hpp"
#include "gqarch/simulator.hpp"

using namespace gqarch;

namespace {

const Theta kReference{0.7, 0.1, -0.2, 0.2, 0.2};

SamplePath sample(const Theta& th, std::size_t n, std::uint64_t seed) {
  SimConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return simulate(th, cfg);
}

double nonlinear_violation(const Theta& th, const ParamBox& box) {
  const double b2 = b2_of(th);
  return std::max({0.0, box.b2_lower(th.gamma) - b2, b2 - box.b2_upper(th.gamma)});
}

}  // namespace

TEST_CASE("box transform maps R^5 into the feasible set and inverts on the interior") {
  const ParamBox box;
  const BoxTransform tr(box);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    ParamVec u{};
    for (auto& v : u) v = z(rng);
    const Theta th = tr.to_theta(u);
    CHECK(box.contains(th, 1e-12));
    CHECK(nonlinear_violation(th, box) <= 1e-8);
    CHECK(th.c >= 0.0);
    const auto back = tr.to_unconstrained(th);
    if (std::all_of(u.begin(), u.end(), [](double v) { return std::abs(v) < 8.0; })) {
      for (std::size_t i = 0; i < kNumParams; ++i) CHECK(std::abs(back[i] - u[i]) < 1e-6);
    }
    for (double f : tr.fractions(th)) {
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
  }
}

TEST_CASE("nelder_mead minimizes a shifted quadratic") {
  const ParamVec target{1.0, -2.0, 0.5, 3.0, -1.0};
  auto f = [&](const ParamVec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < kNumParams; ++i) s += (1.0 + static_cast<double>(i)) * (x[i] - target[i]) * (x[i] - target[i]);
    return s;
  };
  const auto res = nelder_mead(f, ParamVec{}, 1.0, 5000, 1e-14, 1e-10);
  CHECK(res.converged);
  for (std::size_t i = 0; i < kNumParams; ++i) CHECK(std::abs(res.x[i] - target[i]) < 1e-4);
  CHECK(res.value < 1e-8);

  const auto capped = nelder_mead(f, ParamVec{}, 1.0, 5, 1e-14, 1e-14);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 5);
}

TEST_CASE("estimate recovers the reference design at n = 5000") {
  OptimOptions opts;
  int inside = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    opts.seed = static_cast<std::uint64_t>(s);
    const auto path = sample(kReference, 5000, 1000 + static_cast<std::uint64_t>(s));
    const auto res = estimate(path, PastMode::presample(), opts);
    const auto& t = res.theta_hat;
    const bool ok = std::abs(t.gamma - 0.7) <= 0.10 && std::abs(t.omega - 0.1) <= 0.06 &&
                    std::abs(t.a + 0.2) <= 0.06 && std::abs(t.d - 0.2) <= 0.13 && std::abs(t.c - 0.2) <= 0.05;
    inside += ok ? 1 : 0;

    CHECK(t.c >= 0.0);
    CHECK(opts.box.contains(t, 1e-12));
    CHECK(nonlinear_violation(t, opts.box) <= 1e-8);
    CHECK(res.starts_used == opts.starts);
    for (double v : res.start_objectives) CHECK(res.objective <= v + opts.f_tol);
  }
  CHECK(inside >= 9);
}

TEST_CASE("estimate is bit-identical on reruns") {
  const auto path = sample(kReference, 800, 55);
  OptimOptions opts;
  opts.seed = 9;
  const auto a = estimate(path, PastMode::finite_past(), opts);
  const auto b = estimate(path, PastMode::finite_past(), opts);
  CHECK(a.theta_hat == b.theta_hat);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  CHECK(a.start_objectives == b.start_objectives);
  CHECK(a.warnings == b.warnings);
}

TEST_CASE("start strategies") {
  const auto path = sample(kReference, 600, 56);
  OptimOptions opts;
  opts.start_strategy = StartStrategy::user_supplied;
  CHECK_THROWS_AS(opts.validate(), DomainError);
  opts.user_starts = {kReference, Theta{0.5, 0.3, 0.1, 0.1, 0.3}};
  const auto res = estimate(path, PastMode::finite_past(), opts);
  CHECK(res.starts_used == 2);

  opts = OptimOptions{};
  opts.start_strategy = StartStrategy::perturbed_reference;
  CHECK_THROWS_AS(opts.validate(), DomainError);
  opts.reference = kReference;
  opts.starts = 3;
  CHECK(estimate(path, PastMode::finite_past(), opts).starts_used == 3);
  CHECK(parse_start_strategy(to_string(StartStrategy::latin_hypercube)) == StartStrategy::latin_hypercube);
}

TEST_CASE("c = 0 design flags d as weakly identified") {
  const Theta flat{0.7, 0.3, -0.2, 0.2, 0.0};
  const auto path = sample(flat, 1000, 77);
  OptimOptions opts;
  opts.box.b2_floor = 0.0;  // let B2 (and so c) reach zero
  opts.box.b2_lower_ratio = 1e300;
  const auto res = estimate(path, PastMode::finite_past(), opts);
  CHECK(res.d_weakly_identified);
  CHECK(std::any_of(res.warnings.begin(), res.warnings.end(),
                    [](const std::string& w) { return w.find("d weakly identified") != std::string::npos; }));

  const auto boxed = estimate(path, PastMode::finite_past(), OptimOptions{});
  CHECK((boxed.d_weakly_identified || boxed.at_boundary[4]));

  const auto strong = estimate(sample(kReference, 3000, 78), PastMode::presample(), OptimOptions{});
  CHECK_FALSE(strong.d_weakly_identified);
}

TEST_CASE("profile objective") {
  int near = 0;
  std::vector<double> grid;
  for (int k = -10; k <= 10; ++k) grid.push_back(0.7 + 0.02 * k);
  for (int s = 0; s < 5; ++s) {
    const auto path = sample(kReference, 5000, 200 + static_cast<std::uint64_t>(s));
    const auto prof = profile_objective(path, PastMode::presample(), kReference, Coord::gamma, grid);
    REQUIRE(prof.size() == grid.size());
    const auto best = std::min_element(prof.begin(), prof.end(),
                                       [](const auto& x, const auto& y) { return x.second < y.second; });
    near += std::abs(best->first - 0.7) <= 0.02 + 1e-12 ? 1 : 0;
  }
  CHECK(near >= 4);

  const auto path = sample(kReference, 500, 300);
  const Theta flat{0.7, 0.1, -0.2, 0.2, 0.0};
  const auto dprof = profile_objective(path, PastMode::finite_past(), flat, Coord::d, {0.0, 0.1, 0.2, 0.3, 0.4, 0.49});
  double lo = dprof[0].second, hi = dprof[0].second;
  for (const auto& [x, v] : dprof) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo < 1e-12);

  const std::vector<double> agrid{-0.4, -0.2, 0.0, 0.2};
  const auto pos = profile_objective(path, PastMode::finite_past(), kReference, Coord::a, agrid);
  const Theta mirrored{0.7, 0.1, 0.2, 0.2, -0.2};
  std::vector<double> neg_grid;
  for (double a : agrid) neg_grid.push_back(-a);
  const auto neg = profile_objective(path, PastMode::finite_past(), mirrored, Coord::a, neg_grid);
  for (std::size_t i = 0; i < agrid.size(); ++i) CHECK(pos[i].second == neg[i].second);
}

TEST_CASE("options validation") {
  OptimOptions opts;
  opts.starts = 0;
  CHECK_THROWS_AS(opts.validate(), DomainError);
  opts = OptimOptions{};
  opts.f_tol = 0.0;
  CHECK_THROWS_AS(opts.validate(), DomainError);
}
