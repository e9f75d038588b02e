#pragma once

/// @file families.hpp
/// Closed-form solution families. Power-law triples proportional through
/// phi'/phi = k f'/f (generic r and the r = 1 branch), and the two
/// null-direction potentials (exponential base pair and f = phi = xi^2).

#include <string>

#include "qewarp/geometry.hpp"

namespace qewarp {

enum class Branch { plus, minus };

// Power-law family inputs. k is the proportionality exponent phi'/phi = k f'/f;
// c shifts the half-space boundary; c1, c2, c3 scale f, h, phi.
struct FamilyParams {
  double k = 1.0;
  double c = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  Branch branch = Branch::plus;
};

struct PowerLawFamily {
  Profile f, phi, h;
  Domain domain;
  double a = 0.0;           // (n-2)k - m
  double b = 0.0;           // m(2k+1) - (n-2)k^2
  double N = 0.0;           // selected root
  double discriminant = 0;  // r^2(k+a)^2 - r(r-1)(a^2-b); zero slot at r = 1
  double boundary = 0.0;    // finite end of the half-space
};

// f = c1 W^{-1/(a-rN)}, h = c2 W^{-N/(a-rN)}, phi = c3 W^{-k/(a-rN)} with
// W = (a-rN) xi + c > 0 and N a root of r(r-1)N^2 - 2r(k+a)N + (a^2-b) = 0.
// Requires r > 0, r != 1, r(k+a)^2 >= (r-1)(a^2-b), and a - rN != 0.
PowerLawFamily power_law_family(int n, int m, double r, const FamilyParams& p);

// r = 1 branch: N = (a^2-b)/(2(k+a)), requires k + a != 0 and a - N != 0.
PowerLawFamily power_law_r1_family(int n, int m, const FamilyParams& p);

// Null-direction exponential pair f = k1 e^{A xi}, phi = k2 e^{B xi} with
// h = c1_h e^{p+ xi} + c2_h e^{p- xi}, p+- = (-rB +- sqrt(C))/r and
// C = r^2 B^2 + r[(n-2)B^2 - m A^2 - 2 m A B] >= 0.
struct ExpNullParams {
  double k1 = 1.0;
  double k2 = 1.0;
  double A = 0.0;
  double B = 0.0;
  double c1_h = 1.0;
  double c2_h = 1.0;
};

struct ExpNullFamily {
  Profile f, phi, h;
  Domain domain;
  double C = 0.0;
  double exponent_plus = 0.0;
  double exponent_minus = 0.0;
};

ExpNullFamily exp_null_family(int n, int m, double r, const ExpNullParams& p);

// Null-direction family with f = phi = xi^2 on R minus {0}. The potential
// solves xi^2 h'' + 4 xi h' + q h = 0, q = (10m - 2(n-2))/r; the regime is
// the sign of 9 - 4q and lambda = 0.5 sqrt(|9 - 4q|).
struct CauchyEulerParams {
  double c1_h = 1.0;
  double c2_h = 1.0;
};

enum class CauchyEulerRegime { two_real_roots, double_root, complex_roots };

std::string to_string(CauchyEulerRegime regime);

struct CauchyEulerFamily {
  Profile f, phi, h;
  Domain domain;
  double q = 0.0;
  double lambda = 0.0;
  CauchyEulerRegime regime = CauchyEulerRegime::two_real_roots;
};

CauchyEulerFamily cauchy_euler_family(int n, int m, double r,
                                      const CauchyEulerParams& p);

// Shared arithmetic for the power-law families.
double family_a(int n, int m, double k);
double family_b(int n, int m, double k);

}  // namespace qewarp
