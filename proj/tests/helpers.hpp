#pragma once

// Shared builders for the test binaries: canonical signatures/directions,
// specs assembled from each family, and controlled profile corruptions.

#include <cmath>
#include <vector>

#include "qewarp/families.hpp"
#include "qewarp/geometry.hpp"

namespace qetest {

using namespace qewarp;

inline Signature plus_signature(int n) {
  return Signature(std::vector<int>(static_cast<size_t>(n), 1));
}

inline Signature lorentz_signature(int n) {
  std::vector<int> eps(static_cast<size_t>(n), 1);
  eps[0] = -1;
  return Signature(eps);
}

inline Direction axis_direction(const Signature& sig, int axis = 0) {
  std::vector<double> alpha(static_cast<size_t>(sig.n()), 0.0);
  alpha[static_cast<size_t>(axis)] = 1.0;
  return Direction(sig, alpha);
}

// (1, 1, 0, ...) against a Lorentz signature: exactly lightlike.
inline Direction null_direction(const Signature& sig) {
  std::vector<double> alpha(static_cast<size_t>(sig.n()), 0.0);
  alpha[0] = 1.0;
  alpha[1] = 1.0;
  return Direction(sig, alpha);
}

// Power-law spec on the all-plus signature, first-axis direction.
inline WarpedSpec power_law_spec(int n, int m, double r, const FamilyParams& p,
                                 PowerLawFamily* built = nullptr) {
  PowerLawFamily fam =
      r == 1.0 ? power_law_r1_family(n, m, p) : power_law_family(n, m, r, p);
  Signature sig = plus_signature(n);
  Direction dir = axis_direction(sig);
  if (built) *built = fam;
  return WarpedSpec::make(n, m, r, 0.0, 0.0, std::move(sig), std::move(dir),
                          fam.f, fam.phi, fam.h);
}

inline WarpedSpec exp_null_spec(int n, int m, double r, const ExpNullParams& p,
                                ExpNullFamily* built = nullptr) {
  ExpNullFamily fam = exp_null_family(n, m, r, p);
  Signature sig = lorentz_signature(n);
  Direction dir = null_direction(sig);
  if (built) *built = fam;
  return WarpedSpec::make(n, m, r, 0.0, 0.0, std::move(sig), std::move(dir),
                          fam.f, fam.phi, fam.h);
}

inline WarpedSpec cauchy_euler_spec(int n, int m, double r,
                                    const CauchyEulerParams& p,
                                    CauchyEulerFamily* built = nullptr) {
  CauchyEulerFamily fam = cauchy_euler_family(n, m, r, p);
  Signature sig = lorentz_signature(n);
  Direction dir = null_direction(sig);
  if (built) *built = fam;
  return WarpedSpec::make(n, m, r, 0.0, 0.0, std::move(sig), std::move(dir),
                          fam.f, fam.phi, fam.h);
}

// Multiplicative defect p -> p (1 + amp sin xi) with exact derivatives, so a
// corrupted profile still passes its own consistency check.
inline Profile perturb_profile(const Profile& p, double amp) {
  auto value = [p, amp](double xi) {
    return p.value(xi) * (1.0 + amp * std::sin(xi));
  };
  auto d1 = [p, amp](double xi) {
    return p.d1(xi) * (1.0 + amp * std::sin(xi)) +
           p.value(xi) * amp * std::cos(xi);
  };
  auto d2 = [p, amp](double xi) {
    return p.d2(xi) * (1.0 + amp * std::sin(xi)) +
           2.0 * p.d1(xi) * amp * std::cos(xi) -
           p.value(xi) * amp * std::sin(xi);
  };
  return Profile(value, d1, d2, p.domain());
}

// Same spec with one profile replaced.
inline WarpedSpec with_profiles(const WarpedSpec& spec, Profile f, Profile phi,
                                Profile h, double lambda_F_override) {
  return WarpedSpec::make(spec.n, spec.m, spec.r, spec.rho, lambda_F_override,
                          spec.signature, spec.direction, std::move(f),
                          std::move(phi), std::move(h));
}

}  // namespace qetest
