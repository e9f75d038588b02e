#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qewarp/curvature.hpp"

using namespace qewarp;
using qetest::axis_direction;
using qetest::plus_signature;

namespace {

// phi = e^xi along the first axis, constant f and h: the classic anchor
// configuration with hand-computable symbols.
WarpedSpec exp_phi_spec(int n) {
  Signature sig = plus_signature(n);
  Direction dir = axis_direction(sig);
  Profile e([](double x) { return std::exp(x); },
            [](double x) { return std::exp(x); },
            [](double x) { return std::exp(x); }, Domain{});
  return WarpedSpec::make(n, 1, 2.0, 0.0, 0.0, sig, dir, Profile::constant(1.0),
                          e, Profile::constant(2.0));
}

}  // namespace

TEST_CASE("conformal Christoffel symbols: four index cases") {
  WarpedSpec spec = exp_phi_spec(3);
  const std::vector<double> origin{0.0, 0.0, 0.0};
  const auto gamma = christoffel_conformal(spec, origin);

  CHECK(gamma[0](0, 0) == doctest::Approx(-1.0));  // all indices equal
  CHECK(gamma[0](1, 1) == doctest::Approx(1.0));   // equal lower pair
  CHECK(gamma[0](2, 2) == doctest::Approx(1.0));
  CHECK(gamma[1](0, 1) == doctest::Approx(-1.0));  // upper matches one lower
  CHECK(gamma[1](1, 0) == doctest::Approx(-1.0));
  CHECK(gamma[2](0, 2) == doctest::Approx(-1.0));
  CHECK(gamma[2](0, 1) == doctest::Approx(0.0));   // all distinct
  CHECK(gamma[1](1, 1) == doctest::Approx(0.0));   // phi_{,2} = 0
  CHECK(gamma[0](0, 1) == doctest::Approx(0.0));
}

TEST_CASE("conformal Ricci anchor values") {
  WarpedSpec spec = exp_phi_spec(3);
  const std::vector<double> p{0.5, -1.0, 2.0};
  const Eigen::MatrixXd R = ricci_conformal(spec, p);
  // R(0,0) = (n-2) phi''/phi + [phi''/phi - (n-1) phi'^2/phi^2] = 1 - 1 = 0
  CHECK(std::abs(R(0, 0)) <= 1e-12);
  CHECK(R(1, 1) == doctest::Approx(-1.0));
  CHECK(R(2, 2) == doctest::Approx(-1.0));
  CHECK(std::abs(R(0, 1)) <= 1e-12);
}

TEST_CASE("hessian agrees with its Christoffel assembly") {
  // Independent assembly: Hess u(i,j) = u_{,ij} - Gamma^k_{ij} u_{,k}.
  Signature sig(std::vector<int>{-1, 1, 1, 1});
  Direction dir(sig, {0.4, 1.1, 0.0, -0.3});
  Profile f([](double x) { return std::exp(0.2 * x); },
            [](double x) { return 0.2 * std::exp(0.2 * x); },
            [](double x) { return 0.04 * std::exp(0.2 * x); }, Domain{});
  Profile phi([](double x) { return 1.0 + 0.1 * x * x; },
              [](double x) { return 0.2 * x; },
              [](double) { return 0.2; }, Domain{});
  Profile h([](double x) { return 2.0 + std::sin(x); },
            [](double x) { return std::cos(x); },
            [](double x) { return -std::sin(x); }, Domain{});
  WarpedSpec spec =
      WarpedSpec::make(4, 2, 1.5, 0.0, 0.0, sig, dir, f, phi, h);

  const std::vector<double> p{0.3, -0.2, 0.9, 0.1};
  const double xi = spec.direction.xi_at(p);
  const auto gamma = christoffel_conformal(spec, p);
  const auto& alpha = spec.direction.alpha();

  for (Which which : {Which::f, Which::phi, Which::h}) {
    const Eigen::MatrixXd H = hessian_conformal(spec, which, p);
    const Profile& u = which == Which::f ? spec.f
                       : which == Which::phi ? spec.phi
                                             : spec.h;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double v = u.d2(xi) * alpha[size_t(i)] * alpha[size_t(j)];
        for (int k = 0; k < 4; ++k) {
          v -= gamma[size_t(k)](i, j) * u.d1(xi) * alpha[size_t(k)];
        }
        CHECK(std::abs(H(i, j) - v) <= 1e-12 * (1.0 + std::abs(v)));
      }
    }
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("ricci is exactly symmetric") {
  WarpedSpec spec = exp_phi_spec(4);
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const Eigen::MatrixXd R = ricci_conformal(spec, p);
  CHECK((R - R.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("warped fiber coefficient matches its definition") {
  FamilyParams fp;
  PowerLawFamily fam;
  WarpedSpec spec = qetest::power_law_spec(4, 2, 3.0, fp, &fam);
  const double xi = sample_window(fam.domain.span).lo;
  const std::vector<double> p = spec.direction.point_at(xi);
  const CurvatureBlock ric = warped_ricci(spec, p);

  // lambda_F - f Lap f - (m - 1) |grad f|^2 in the conformal base metric;
  // laplacian_base includes the fiber term m f' u'/f, so strip it back out.
  const double f0 = spec.f.value(xi);
  const double grad2 = grad_norm_base(spec, Which::f, xi);
  const double lap_conf =
      laplacian_base(spec, Which::f, xi) - spec.m * grad2 / f0;
  const double expect = spec.lambda_F - f0 * lap_conf - (spec.m - 1) * grad2;
  CHECK(ric.fiber_coeff == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("bakry-emery ignores potential rescaling") {
  FamilyParams fp;
  WarpedSpec spec = qetest::power_law_spec(3, 1, 2.0, fp);
  Profile h3(
      [h = spec.h](double x) { return 3.0 * h.value(x); },
      [h = spec.h](double x) { return 3.0 * h.d1(x); },
      [h = spec.h](double x) { return 3.0 * h.d2(x); }, spec.h.domain());
  WarpedSpec scaled = qetest::with_profiles(spec, spec.f, spec.phi, h3, 0.0);

  const double xi = sample_window(spec.f.domain().span).lo;
  const std::vector<double> p = spec.direction.point_at(xi);
  const CurvatureBlock a = bakry_emery(spec, p);
  const CurvatureBlock b = bakry_emery(scaled, p);
  CHECK((a.base - b.base).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(a.fiber_coeff - b.fiber_coeff) <= 1e-12);
}

TEST_CASE("vanishing conformal factor is rejected") {
  Signature sig = plus_signature(3);
  Direction dir = axis_direction(sig);
  Profile lin([](double x) { return x; }, [](double) { return 1.0; },
              [](double) { return 0.0; }, Domain{});
  WarpedSpec spec = WarpedSpec::make(3, 1, 2.0, 0.0, 0.0, sig, dir,
                                     Profile::constant(1.0), lin,
                                     Profile::constant(1.0));
  const std::vector<double> origin{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(christoffel_conformal(spec, origin), DomainError);
  CHECK_THROWS_AS(ricci_conformal(spec, origin), DomainError);
}

TEST_CASE("base laplacian and gradient norm on the flat configuration") {
  Signature sig = plus_signature(3);
  Direction dir = axis_direction(sig);
  Profile sq([](double x) { return 5.0 + x * x; },
             [](double x) { return 2.0 * x; }, [](double) { return 2.0; },
             Domain{});
  WarpedSpec spec =
      WarpedSpec::make(3, 1, 2.0, 0.0, 0.0, sig, dir, Profile::constant(1.0),
                       Profile::constant(1.0), sq);
  // phi = f = 1: Lap u = u'', |grad u|^2 = u'^2.
  CHECK(laplacian_base(spec, Which::h, 1.5) == doctest::Approx(2.0));
  CHECK(grad_norm_base(spec, Which::h, 1.5) == doctest::Approx(9.0));
}
