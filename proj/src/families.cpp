#include "qewarp/families.hpp"

#include <cmath>

namespace qewarp {

namespace {

void check_power_law_inputs(int n, int m, const FamilyParams& p) {
  if (n < 3) throw DimensionError("base dimension n must be >= 3");
  if (m < 1) throw DimensionError("fiber dimension m must be >= 1");
  if (!(p.k > 0.0)) throw AdmissibilityError("exponent k must be positive");
  if (!(p.c1 > 0.0 && p.c2 > 0.0 && p.c3 > 0.0)) {
    throw AdmissibilityError("scale constants c1, c2, c3 must be positive");
  }
}

// coef * W^e with W = s xi + c, on the half-space W > 0.
Profile power_profile(double coef, double e, double s, double c,
                      Domain domain) {
  auto value = [coef, e, s, c](double xi) {
    return coef * std::pow(s * xi + c, e);
  };
  auto d1 = [coef, e, s, c](double xi) {
    return coef * e * s * std::pow(s * xi + c, e - 1);
  };
  auto d2 = [coef, e, s, c](double xi) {
    return coef * e * (e - 1) * s * s * std::pow(s * xi + c, e - 2);
  };
  return Profile(value, d1, d2, domain);
}

PowerLawFamily assemble_power_law(double r, const FamilyParams& p, double a,
                                  double b, double N, double discriminant) {
  const double s = a - r * N;
  if (s == 0.0) {
    throw AdmissibilityError("degenerate exponent: a - rN = 0");
  }
  PowerLawFamily fam;
  fam.a = a;
  fam.b = b;
  fam.N = N;
  fam.discriminant = discriminant;
  fam.boundary = -p.c / s;
  fam.domain.span = s > 0.0 ? Interval{fam.boundary, kInf}
                            : Interval{-kInf, fam.boundary};
  fam.f = power_profile(p.c1, -1.0 / s, s, p.c, fam.domain);
  fam.h = power_profile(p.c2, -N / s, s, p.c, fam.domain);
  fam.phi = power_profile(p.c3, -p.k / s, s, p.c, fam.domain);
  return fam;
}

}  // namespace

double family_a(int n, int m, double k) { return (n - 2) * k - m; }

double family_b(int n, int m, double k) {
  return m * (2 * k + 1) - (n - 2) * k * k;
}

PowerLawFamily power_law_family(int n, int m, double r, const FamilyParams& p) {
  check_power_law_inputs(n, m, p);
  if (!(r > 0.0) || r == 1.0) {
    throw AdmissibilityError("this branch needs r > 0 and r != 1");
  }
  const double a = family_a(n, m, p.k);
  const double b = family_b(n, m, p.k);
  const double disc =
      r * r * (p.k + a) * (p.k + a) - r * (r - 1.0) * (a * a - b);
  if (disc < 0.0) {
    throw AdmissibilityError(
        "no real branch: r(k+a)^2 >= (r-1)(a^2-b) is violated");
  }
  const double root = std::sqrt(disc);
  const double N = (p.branch == Branch::plus)
                       ? (r * (p.k + a) + root) / (r * (r - 1.0))
                       : (r * (p.k + a) - root) / (r * (r - 1.0));
  return assemble_power_law(r, p, a, b, N, disc);
}

PowerLawFamily power_law_r1_family(int n, int m, const FamilyParams& p) {
  check_power_law_inputs(n, m, p);
  const double a = family_a(n, m, p.k);
  const double b = family_b(n, m, p.k);
  if (p.k + a == 0.0) {
    throw AdmissibilityError("k + a = 0 leaves N undetermined at r = 1");
  }
  const double N = (a * a - b) / (2.0 * (p.k + a));
  PowerLawFamily fam = assemble_power_law(1.0, p, a, b, N, 0.0);
  // The boundary admits a second algebraic form; both must agree.
  const double alt = -2.0 * p.c * (p.k + a) / (a * a + 2.0 * p.k * a + b);
  if (std::abs(alt - fam.boundary) > 1e-9 * (1.0 + std::abs(fam.boundary))) {
    throw AdmissibilityError("half-space boundary forms disagree");
  }
  return fam;
}

ExpNullFamily exp_null_family(int n, int m, double r, const ExpNullParams& p) {
  if (n < 3) throw DimensionError("base dimension n must be >= 3");
  if (m < 1) throw DimensionError("fiber dimension m must be >= 1");
  if (!(r > 0.0)) throw AdmissibilityError("parameter r must be positive");
  if (!(p.k1 > 0.0 && p.k2 > 0.0)) {
    throw AdmissibilityError("scale constants k1, k2 must be positive");
  }
  const double bracket =
      (n - 2) * p.B * p.B - m * p.A * p.A - 2.0 * m * p.A * p.B;
  const double C = r * r * p.B * p.B + r * bracket;
  if (C < 0.0) {
    throw AdmissibilityError("complex exponent: C = r^2 B^2 + r[...] < 0");
  }
  const double root = std::sqrt(C);
  ExpNullFamily fam;
  fam.C = C;
  fam.exponent_plus = (-r * p.B + root) / r;
  fam.exponent_minus = (-r * p.B - root) / r;
  if (p.c1_h == 0.0 && p.c2_h == 0.0) {
    throw AdmissibilityError("potential is identically zero: c1_h = c2_h = 0");
  }
  if (C == 0.0 && p.c1_h + p.c2_h == 0.0) {
    throw AdmissibilityError(
        "potential is identically zero: coincident exponents cancel");
  }
  fam.domain = Domain{};

  auto exponential = [](double coef, double rate, Domain dom) {
    return Profile(
        [coef, rate](double xi) { return coef * std::exp(rate * xi); },
        [coef, rate](double xi) { return coef * rate * std::exp(rate * xi); },
        [coef, rate](double xi) {
          return coef * rate * rate * std::exp(rate * xi);
        },
        dom);
  };
  fam.f = exponential(p.k1, p.A, fam.domain);
  fam.phi = exponential(p.k2, p.B, fam.domain);

  const double c1 = p.c1_h, c2 = p.c2_h;
  const double ep = fam.exponent_plus, em = fam.exponent_minus;
  fam.h = Profile(
      [c1, c2, ep, em](double xi) {
        return c1 * std::exp(ep * xi) + c2 * std::exp(em * xi);
      },
      [c1, c2, ep, em](double xi) {
        return c1 * ep * std::exp(ep * xi) + c2 * em * std::exp(em * xi);
      },
      [c1, c2, ep, em](double xi) {
        return c1 * ep * ep * std::exp(ep * xi) +
               c2 * em * em * std::exp(em * xi);
      },
      fam.domain);
  return fam;
}

std::string to_string(CauchyEulerRegime regime) {
  switch (regime) {
    case CauchyEulerRegime::two_real_roots:
      return "two-real-roots";
    case CauchyEulerRegime::double_root:
      return "double-root";
    case CauchyEulerRegime::complex_roots:
      return "complex-roots";
  }
  throw Error("unreachable regime");
}

CauchyEulerFamily cauchy_euler_family(int n, int m, double r,
                                      const CauchyEulerParams& p) {
  if (n < 3) throw DimensionError("base dimension n must be >= 3");
  if (m < 1) throw DimensionError("fiber dimension m must be >= 1");
  if (!(r > 0.0)) throw AdmissibilityError("parameter r must be positive");

  CauchyEulerFamily fam;
  fam.q = (10.0 * m - 2.0 * (n - 2)) / r;
  const double disc = 9.0 - 4.0 * fam.q;
  fam.lambda = 0.5 * std::sqrt(std::abs(disc));
  fam.regime = disc > 0.0   ? CauchyEulerRegime::two_real_roots
               : disc < 0.0 ? CauchyEulerRegime::complex_roots
                            : CauchyEulerRegime::double_root;
  fam.domain = Domain{Interval{}, 0.0};

  fam.f = Profile([](double xi) { return xi * xi; },
                  [](double xi) { return 2.0 * xi; },
                  [](double) { return 2.0; }, fam.domain);
  fam.phi = fam.f;

  const double c1 = p.c1_h, c2 = p.c2_h, lam = fam.lambda;
  switch (fam.regime) {
    case CauchyEulerRegime::two_real_roots: {
      // h = c1 |xi|^{-3/2+lam} + c2 |xi|^{-3/2-lam}
      const double p1 = -1.5 + lam, p2 = -1.5 - lam;
      fam.h = Profile(
          [c1, c2, p1, p2](double xi) {
            const double u = std::abs(xi);
            return c1 * std::pow(u, p1) + c2 * std::pow(u, p2);
          },
          [c1, c2, p1, p2](double xi) {
            const double u = std::abs(xi), sg = xi < 0 ? -1.0 : 1.0;
            return sg * (c1 * p1 * std::pow(u, p1 - 1) +
                         c2 * p2 * std::pow(u, p2 - 1));
          },
          [c1, c2, p1, p2](double xi) {
            const double u = std::abs(xi);
            return c1 * p1 * (p1 - 1) * std::pow(u, p1 - 2) +
                   c2 * p2 * (p2 - 1) * std::pow(u, p2 - 2);
          },
          fam.domain);
      break;
    }
    case CauchyEulerRegime::double_root: {
      // h = |xi|^{-3/2} (c1 + c2 ln|xi|)
      fam.h = Profile(
          [c1, c2](double xi) {
            const double u = std::abs(xi);
            return std::pow(u, -1.5) * (c1 + c2 * std::log(u));
          },
          [c1, c2](double xi) {
            const double u = std::abs(xi), sg = xi < 0 ? -1.0 : 1.0;
            return sg * std::pow(u, -2.5) *
                   (-1.5 * c1 + c2 * (1.0 - 1.5 * std::log(u)));
          },
          [c1, c2](double xi) {
            const double u = std::abs(xi);
            return std::pow(u, -3.5) *
                   (3.75 * c1 + c2 * (-4.0 + 3.75 * std::log(u)));
          },
          fam.domain);
      break;
    }
    case CauchyEulerRegime::complex_roots: {
      // h = |xi|^{-3/2} [c1 sin(lam ln|xi|) + c2 cos(lam ln|xi|)]
      fam.h = Profile(
          [c1, c2, lam](double xi) {
            const double u = std::abs(xi), t = lam * std::log(u);
            return std::pow(u, -1.5) * (c1 * std::sin(t) + c2 * std::cos(t));
          },
          [c1, c2, lam](double xi) {
            const double u = std::abs(xi), t = lam * std::log(u);
            const double sg = xi < 0 ? -1.0 : 1.0;
            const double s = std::sin(t), co = std::cos(t);
            return sg * std::pow(u, -2.5) *
                   (c1 * (-1.5 * s + lam * co) + c2 * (-1.5 * co - lam * s));
          },
          [c1, c2, lam](double xi) {
            const double u = std::abs(xi), t = lam * std::log(u);
            const double s = std::sin(t), co = std::cos(t);
            const double As = 3.75 - lam * lam, Bc = 4.0 * lam;
            return std::pow(u, -3.5) *
                   (c1 * (As * s - Bc * co) + c2 * (As * co + Bc * s));
          },
          fam.domain);
      break;
    }
  }
  return fam;
}

}  // namespace qewarp
