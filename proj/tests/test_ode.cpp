#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qewarp/families.hpp"
#include "qewarp/ode.hpp"

using namespace qewarp;

TEST_CASE("dense output reproduces a quintic exactly") {
  // value/d1/d2 knots of t^5 determine each quintic segment uniquely
  HermiteSeries s;
  for (double t : {0.0, 1.0, 2.0}) {
    s.add_knot(t, std::pow(t, 5), 5 * std::pow(t, 4), 20 * std::pow(t, 3));
  }
  for (double t : {0.0, 0.3, 0.7, 1.0, 1.5, 1.9, 2.0}) {
    CHECK(s.eval(t, 0) == doctest::Approx(std::pow(t, 5)).epsilon(1e-12));
    CHECK(s.eval(t, 1) == doctest::Approx(5 * std::pow(t, 4)).epsilon(1e-12));
    CHECK(s.eval(t, 2) == doctest::Approx(20 * std::pow(t, 3)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(s.eval(0.5, 3), InvalidRequestError);
  CHECK_THROWS_AS(s.eval(2.1, 0), DomainError);
  CHECK_THROWS_AS(s.eval(-0.1, 0), DomainError);
  CHECK(s.eval(-0.5e-12, 0) == doctest::Approx(0.0));
}

TEST_CASE("dense output rejects degenerate knot sequences") {
  HermiteSeries s;
  s.add_knot(0.0, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(s.add_knot(0.0, 2.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(s.add_knot(-1.0, 2.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(s.eval(0.0, 0), Error);
}

TEST_CASE("constant-branch velocity function") {
  // n=3, m=1, k=1, r=2: a=0, b=2, Q(z) = 2z^2 - 4z - 2
  CHECK(v_of_z(3, 1, 2.0, 1.0, 0.0, 1e-6) == doctest::Approx(0.0));
  CHECK(v_of_z(3, 1, 2.0, 1.0, 1.0, 1e-6) == doctest::Approx(1.0));
  const double root = 1.0 - std::sqrt(2.0);
  CHECK_THROWS_AS(v_of_z(3, 1, 2.0, 1.0, root, 1e-6), IntegrationError);
}

TEST_CASE("implicit family integrates across the requested range") {
  IntegratorConfig cfg;
  auto fam = integrate_implicit_family(3, 1, 2.0, 1.0, 1.0, 0.5,
                                       Interval{0.0, 1.0}, cfg);
  CHECK(fam.stop == StopReason::range_end);
  CHECK(fam.table.size() == 1001);
  CHECK(fam.table.front().xi == doctest::Approx(0.0));
  CHECK(fam.table.back().xi == doctest::Approx(1.0));
  CHECK(fam.a == doctest::Approx(0.0));
  CHECK(fam.b == doctest::Approx(2.0));

  // k = 1 forces log(phi) and log(f) to integrate in lockstep
  for (size_t i = 0; i < fam.table.size(); i += 97) {
    CHECK(std::abs(fam.table[i].phi - fam.table[i].f) <= 1e-12);
  }
  for (double xi : {0.1, 0.35, 0.62, 0.9}) {
    CHECK(std::abs(fam.phi.value(xi) - fam.f.value(xi)) <= 1e-12);
  }

  // interpolated profiles have self-consistent derivatives
  const std::vector<double> xis{0.1, 0.3, 0.5, 0.7, 0.9};
  CHECK(profile_consistency_check(fam.f, xis).pass);
  CHECK(profile_consistency_check(fam.phi, xis).pass);
  CHECK(profile_consistency_check(fam.h, xis).pass);
}

TEST_CASE("constant-branch start reproduces the closed form") {
  // z0 at a root of Q keeps z frozen and x' = (a - r z0) x^2 separable
  const double N = 1.0 - std::sqrt(2.0);
  const double s = 0.0 - 2.0 * N;
  const double x0 = 1.0;
  IntegratorConfig cfg;
  auto fam = integrate_implicit_family(3, 1, 2.0, 1.0, x0, N,
                                       Interval{0.0, 1.0}, cfg);
  REQUIRE(fam.stop == StopReason::range_end);
  double worst_x = 0.0, worst_z = 0.0;
  for (const auto& row : fam.table) {
    const double exact = -1.0 / (s * row.xi - 1.0 / x0);
    worst_x = std::max(worst_x, std::abs(row.x - exact));
    worst_z = std::max(worst_z, std::abs(row.z - N));
  }
  CHECK(worst_x <= 1e-8);
  CHECK(worst_z <= 1e-10);
}

TEST_CASE("integrator error shrinks at fourth order") {
  // huge tolerance disables adaptive halving so the nominal step is exact
  const double N = 1.0 - std::sqrt(2.0);
  const double s = -2.0 * N;
  auto final_x = [&](double step) {
    IntegratorConfig cfg;
    cfg.step = step;
    cfg.tolerance = 1.0;
    auto fam = integrate_implicit_family(3, 1, 2.0, 1.0, 1.0, N,
                                         Interval{0.0, 0.5}, cfg);
    REQUIRE(fam.stop == StopReason::range_end);
    return fam.table.back().x;
  };
  const double exact = -1.0 / (s * 0.5 - 1.0);
  const double e1 = std::abs(final_x(1e-2) - exact);
  const double e2 = std::abs(final_x(5e-3) - exact);
  CHECK(e1 > 1e-14);  // coarse error is measurable, not roundoff noise
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("step budget exhaustion is reported, not thrown") {
  IntegratorConfig cfg;
  cfg.max_steps = 10;
  auto fam = integrate_implicit_family(3, 1, 2.0, 1.0, 1.0, 0.5,
                                       Interval{0.0, 1.0}, cfg);
  CHECK(fam.stop == StopReason::max_steps);
  CHECK(fam.table.size() >= 2);
  CHECK(fam.table.size() < 1001);
  CHECK(fam.domain.span.hi == doctest::Approx(fam.table.back().xi));
}

TEST_CASE("implicit family rejects degenerate requests") {
  IntegratorConfig cfg;
  CHECK_THROWS_AS(integrate_implicit_family(3, 1, 2.0, 1.0, 0.0, 0.5,
                                            Interval{0.0, 1.0}, cfg),
                  InvalidRequestError);
  CHECK_THROWS_AS(integrate_implicit_family(2, 1, 2.0, 1.0, 1.0, 0.5,
                                            Interval{0.0, 1.0}, cfg),
                  DimensionError);
  CHECK_THROWS_AS(integrate_implicit_family(3, 0, 2.0, 1.0, 1.0, 0.5,
                                            Interval{0.0, 1.0}, cfg),
                  DimensionError);
  CHECK_THROWS_AS(integrate_implicit_family(3, 1, -2.0, 1.0, 1.0, 0.5,
                                            Interval{0.0, 1.0}, cfg),
                  AdmissibilityError);
  CHECK_THROWS_AS(integrate_implicit_family(3, 1, 2.0, -1.0, 1.0, 0.5,
                                            Interval{0.0, 1.0}, cfg),
                  AdmissibilityError);
  CHECK_THROWS_AS(integrate_implicit_family(3, 1, 2.0, 1.0, 1.0, 0.5,
                                            Interval{1.0, 0.0}, cfg),
                  InvalidRequestError);
}

TEST_CASE("stop reason labels") {
  CHECK(to_string(StopReason::range_end) == "range-end");
  CHECK(to_string(StopReason::singularity_guard) == "singularity-guard");
  CHECK(to_string(StopReason::max_steps) == "max-steps");
}

TEST_CASE("null potential solve: constant coefficients give a line") {
  const Profile one = Profile::constant(1.0);
  IntegratorConfig cfg;
  Profile h = solve_null_h(4, 2, 2.0, one, one, 3.0, 0.25,
                           Interval{0.0, 2.0}, cfg);
  // the returned profile lives on the open solve interval
  for (double xi : {0.1, 0.4, 1.1, 1.7, 1.9}) {
    CHECK(h.value(xi) == doctest::Approx(3.0 + 0.25 * xi).epsilon(1e-10));
    CHECK(h.d1(xi) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(std::abs(h.d2(xi)) <= 1e-10);
  }
}

TEST_CASE("null potential solve matches the exponential closed form") {
  const int n = 4, m = 2;
  const double r = 2.0, A = 0.5, B = 1.0;
  ExpNullParams params;
  params.k1 = 1.0;
  params.k2 = 1.0;
  params.A = A;
  params.B = B;
  params.c1_h = 1.0;
  params.c2_h = 0.5;
  auto fam = exp_null_family(n, m, r, params);

  const double C =
      r * r * B * B + r * ((n - 2) * B * B - m * A * A - 2 * m * A * B);
  REQUIRE(C > 0.0);
  const double ep = (-r * B + std::sqrt(C)) / r;
  const double em = (-r * B - std::sqrt(C)) / r;

  IntegratorConfig cfg;
  Profile h = solve_null_h(n, m, r, fam.f, fam.phi, params.c1_h + params.c2_h,
                           params.c1_h * ep + params.c2_h * em,
                           Interval{0.0, 2.0}, cfg);
  for (double xi : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    const double exact =
        params.c1_h * std::exp(ep * xi) + params.c2_h * std::exp(em * xi);
    CHECK(h.value(xi) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(h.value(xi) == doctest::Approx(fam.h.value(xi)).epsilon(1e-6));
  }
}

TEST_CASE("null potential solve matches the equidimensional closed form") {
  auto fam = cauchy_euler_family(12, 1, 8.0, CauchyEulerParams{1.0, 0.5});
  REQUIRE(fam.regime == CauchyEulerRegime::two_real_roots);
  IntegratorConfig cfg;
  Profile h = solve_null_h(12, 1, 8.0, fam.f, fam.phi, fam.h.value(1.0),
                           fam.h.d1(1.0), Interval{1.0, 10.0}, cfg);
  for (double xi : {1.5, 2.0, 4.5, 7.0, 9.5}) {
    CHECK(h.value(xi) ==
          doctest::Approx(fam.h.value(xi)).epsilon(1e-6));
    CHECK(h.d1(xi) == doctest::Approx(fam.h.d1(xi)).epsilon(1e-5));
  }
}

TEST_CASE("null potential solve rejects bad ranges") {
  const Profile one = Profile::constant(1.0);
  IntegratorConfig cfg;
  CHECK_THROWS_AS(solve_null_h(4, 2, 2.0, one, one, 1.0, 0.0,
                               Interval{2.0, 0.0}, cfg),
                  InvalidRequestError);
  CHECK_THROWS_AS(solve_null_h(4, 2, -1.0, one, one, 1.0, 0.0,
                               Interval{0.0, 2.0}, cfg),
                  AdmissibilityError);
}
