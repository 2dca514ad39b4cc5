#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gqarch/error.hpp"
#include "gqarch/params.hpp"
#include "oracles.hpp"

using namespace gqarch;

TEST_CASE("zeta_real closed forms") {
  CHECK(zeta_real(2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-14));
  CHECK(std::abs(zeta_real(2.0) - 1.6449340668482264) < 1e-12);
  CHECK(std::abs(zeta_real(4.0) - std::pow(std::numbers::pi, 4) / 90.0) < 1e-12);
  CHECK(std::abs(zeta_real(50.0) - 1.0) < 1e-12);
}

TEST_CASE("zeta_real against brute-force partial sums") {
  // Frozen from the oracle: 10^7 terms plus midpoint tail integral.
  const double at_1_2 = oracle::zeta_brute_force(1.2);
  CHECK(std::abs(at_1_2 - 5.5915824411777519) < 1e-9);
  CHECK(std::abs(zeta_real(1.2) - at_1_2) < 1e-9);
  CHECK(std::abs(zeta_real(1.2) - 5.5915824411777519) < 1e-10);

  for (double s : {1.0001, 1.002, 1.05, 1.3, 1.6, 1.9, 2.5, 3.0}) {
    CAPTURE(s);
    CHECK(std::abs(zeta_real(s) - oracle::zeta_brute_force(s, 200'000)) < 1e-9);
  }
}

TEST_CASE("zeta_real domain") {
  CHECK_THROWS_AS(zeta_real(1.0), DomainError);
  CHECK_THROWS_AS(zeta_real(0.5), DomainError);
  CHECK_THROWS_AS(zeta_real(1.0 + 1e-7), DomainError);
  CHECK_NOTHROW(zeta_real(1.0 + 1e-5));
}

TEST_CASE("zeta_real properties: decreasing, > 1 + 2^-s") {
  double prev = zeta_real(1.0001);
  for (double s = 1.01; s < 40.0; s *= 1.07) {
    const double z = zeta_real(s);
    CHECK(z < prev);
    CHECK(z > 1.0);
    CHECK(z - 1.0 - std::exp2(-s) > 0.0);
    prev = z;
  }
}

TEST_CASE("b2_of examples") {
  CHECK(std::abs(b2_of({0.7, 0.1, -0.2, 0.4, 0.2}) - 0.22366329764711008) < 1e-10);
  CHECK(b2_of({0.7, 0.1, -0.2, 0.3, 0.0}) == 0.0);
  CHECK(std::abs(b2_of({0.5, 0.1, 0.0, 0.499, 1.0}) - 500.57736127720859) < 1e-6);
}

TEST_CASE("b2_of is even in c and increasing in d") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uc(-2.0, 2.0), ud(0.01, 0.48);
  for (int k = 0; k < 200; ++k) {
    Theta t{0.5, 0.1, 0.0, ud(rng), uc(rng)};
    Theta neg = t;
    neg.c = -t.c;
    CHECK(b2_of(t) == b2_of(neg));
    Theta more = t;
    more.d = t.d + 0.01;
    if (t.c != 0.0) CHECK(b2_of(more) > b2_of(t));
  }
}

TEST_CASE("check_feasibility examples") {
  SUBCASE("reference design with d = 0.4") {
    const auto rep = check_feasibility({0.7, 0.1, -0.2, 0.4, 0.2}, 3.0);
    CHECK(rep.l2_ok);
    CHECK(std::abs(rep.b2 - 0.22366329764711008) < 1e-10);
    CHECK(rep.slack_l2 == doctest::Approx(1.0 - 0.7 - 0.22366329764711008));
    // The conservative Rosenthal constant rejects the L4 condition here.
    CHECK_FALSE(rep.l4_ok);
  }
  SUBCASE("c = 0") {
    for (double g : {0.0, 0.3, 0.99}) {
      const auto rep = check_feasibility({g, 0.1, 0.2, 0.3, 0.0});
      CHECK(rep.b2 == 0.0);
      CHECK(rep.l2_ok);
      CHECK(rep.l4_ok);
    }
  }
  SUBCASE("violates L2") {
    const auto rep = check_feasibility({0.9, 0.1, 0.0, 0.4, 0.5});
    CHECK(std::abs(rep.b2 - 1.3978956102944380) < 1e-9);
    CHECK_FALSE(rep.l2_ok);
  }
  SUBCASE("definitional equivalences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
      const Theta t{0.99 * u(rng), u(rng), u(rng) - 0.5, 0.49 * u(rng), u(rng) - 0.5};
      const auto rep = check_feasibility(t, 1.0 + 5.0 * u(rng), 10.0 * u(rng) + 0.1);
      CHECK(rep.l2_ok == (rep.slack_l2 > 0.0));
      CHECK(rep.l4_ok == (rep.slack_l4 > 0.0));
    }
  }
  CHECK_THROWS_AS(check_feasibility({0.5, 0.1, 0.0, 0.2, 0.1}, 0.5), DomainError);
  CHECK_THROWS_AS(check_feasibility({1.0, 0.1, 0.0, 0.2, 0.1}), DomainError);
  CHECK(kDefaultK4 == doctest::Approx(std::pow(32.207, 4)));
}

TEST_CASE("default box bounds") {
  const ParamBox box;
  CHECK(box.gamma_lo == 0.001);
  CHECK(box.gamma_hi == 0.9);
  CHECK(box.omega_hi == 2.0);
  CHECK(box.a_lo == -2.0);
  CHECK(box.d_hi == 0.5);
  CHECK(box.b2_lower(0.7) == doctest::Approx(0.7 / 999.0));
  CHECK(box.b2_lower(0.01) == doctest::Approx(0.04));
  CHECK(box.b2_upper(0.7) == doctest::Approx(0.29));
  CHECK(box.b2_upper(0.002) == doctest::Approx(0.198));
  for (double g = box.gamma_lo; g <= box.gamma_hi; g += 0.001) CHECK(box.b2_lower(g) < box.b2_upper(g));
}

TEST_CASE("project_into_box examples") {
  const ParamBox box;
  SUBCASE("interior point unchanged") {
    const Theta t{0.7, 0.1, -0.2, 0.2, 0.2};
    CHECK(project_into_box(t, box) == t);
  }
  SUBCASE("gamma clipped") {
    const Theta p = project_into_box({0.95, 0.1, -0.2, 0.2, 0.2}, box);
    CHECK(p.gamma == 0.9);
  }
  SUBCASE("c rescaled onto the upper B2 bound") {
    const Theta p = project_into_box({0.7, 0.1, -0.2, 0.2, 3.0}, box);
    const double expected_c = std::sqrt(0.29 / oracle::zeta_brute_force(1.6));
    CHECK(std::abs(p.c - expected_c) < 1e-9);
    CHECK(std::abs(p.c - 0.35619116787842641) < 1e-9);
    CHECK(std::abs(b2_of(p) - 0.29) < 1e-12);
  }
  SUBCASE("negative c keeps its sign") {
    const Theta p = project_into_box({0.7, 0.1, -0.2, 0.2, -3.0}, box);
    CHECK(p.c < 0.0);
    CHECK(std::abs(b2_of(p) - 0.29) < 1e-12);
  }
  SUBCASE("zero c lifted to the lower bound") {
    const Theta p = project_into_box({0.7, 0.1, -0.2, 0.2, 0.0}, box);
    CHECK(p.c > 0.0);
    CHECK(std::abs(b2_of(p) - 0.7 / 999.0) < 1e-14);
  }
  SUBCASE("empty c interval") {
    ParamBox bad;
    bad.b2_ceiling = 0.0;
    CHECK_THROWS_AS(project_into_box({0.7, 0.1, -0.2, 0.2, 0.2}, bad), DomainError);
  }
}

TEST_CASE("project_into_box: idempotent, lands in box, box interior is L2-feasible") {
  const ParamBox box;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const Theta raw{0.5 + u(rng), 3.0 * u(rng), 3.0 * u(rng), 0.25 + 0.4 * u(rng), 2.0 * u(rng)};
    const Theta p = project_into_box(raw, box);
    CHECK(project_into_box(p, box) == p);
    CHECK(box.contains(p, 1e-12));
    CHECK(check_feasibility(p.canonical()).l2_ok);
  }
}

TEST_CASE("canonical sign flip") {
  const Theta t{0.7, 0.1, 0.3, 0.2, -0.2};
  const Theta c = t.canonical();
  CHECK(c.c == 0.2);
  CHECK(c.a == -0.3);
  CHECK(c.canonical() == c);
}
