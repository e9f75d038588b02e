#pragma once

/// @file geometry.hpp
/// Base-space primitives: pseudo-Euclidean signatures, translation-invariance
/// directions with causal classification, scalar profiles of xi = sum_i a_i x_i,
/// and the assembled warped-product spec.

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "qewarp/errors.hpp"

namespace qewarp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Diagonal pseudo-Euclidean signature: eps[i] in {-1, +1}.
class Signature {
 public:
  explicit Signature(std::vector<int> eps);

  int n() const { return static_cast<int>(eps_.size()); }
  int eps(int i) const { return eps_[static_cast<size_t>(i)]; }
  const std::vector<int>& entries() const { return eps_; }

 private:
  std::vector<int> eps_;
};

// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const { return lo > -kInf && hi < kInf; }
};

// Profile domain: an open interval with at most one excluded interior point
// (the Cauchy-Euler family lives on R minus {0}).
struct Domain {
  Interval span;
  std::optional<double> puncture;

  bool contains(double x) const {
    return span.contains(x) && !(puncture && x == *puncture);
  }
};

// Direction of translation invariance. Stored normalized: the quadratic form
// s = sum_i eps_i alpha_i^2 is rescaled to -1, 0, or +1; its sign is the
// causal class.
class Direction {
 public:
  Direction(const Signature& sig, std::vector<double> alpha);

  const std::vector<double>& alpha() const { return alpha_; }
  int causal_class() const { return causal_class_; }
  int n() const { return static_cast<int>(alpha_.size()); }

  // xi(p) = sum_i alpha_i p_i
  double xi_at(std::span<const double> point) const;

  // The point p = xi * alpha / |alpha|^2 (Euclidean), so that xi_at(p) = xi.
  std::vector<double> point_at(double xi) const;

 private:
  std::vector<double> alpha_;
  int causal_class_ = 0;
};

// Scalar function of xi with analytic first and second derivatives, defined
// on an explicit domain. Evaluation outside the domain throws DomainError.
class Profile {
 public:
  using Fn = std::function<double(double)>;

  Profile() = default;
  Profile(Fn value, Fn d1, Fn d2, Domain domain);

  static Profile constant(double c);

  double value(double xi) const { return eval(value_, xi); }
  double d1(double xi) const { return eval(d1_, xi); }
  double d2(double xi) const { return eval(d2_, xi); }
  const Domain& domain() const { return domain_; }

 private:
  double eval(const Fn& fn, double xi) const;

  Fn value_, d1_, d2_;
  Domain domain_{};
};

struct ConsistencyResult {
  bool pass = false;
  double worst_rel_error = 0.0;
  double worst_xi = 0.0;
};

// Checks that central finite differences sourced from the profile reproduce
// the stored derivatives: d1 against the difference of value, d2 against the
// difference of d1. Step 1e-5 * max(1, |xi|), relative tolerance 1e-6.
ConsistencyResult profile_consistency_check(const Profile& p,
                                            std::span<const double> xis);

// Everything the curvature engine and verifier need about one metric:
//   g~ = (1/phi^2) g_eps  (+)  f^2 g_F  on R^n x F^m,
// with quasi-Einstein parameters (r, rho) and Einstein fiber constant
// lambda_F, all functions depending on xi only.
struct WarpedSpec {
  int n = 0;
  int m = 0;
  double r = 0.0;
  double rho = 0.0;
  double lambda_F = 0.0;
  Signature signature{std::vector<int>{1, 1, 1}};
  Direction direction{Signature{std::vector<int>{1, 1, 1}},
                      std::vector<double>{1, 0, 0}};
  Profile f, phi, h;

  static WarpedSpec make(int n, int m, double r, double rho, double lambda_F,
                         Signature signature, Direction direction, Profile f,
                         Profile phi, Profile h);

  bool r_is_integral() const;

  // sum_i eps_i alpha_i^2 of the stored (normalized) direction: -1, 0, or +1.
  int causal_class() const { return direction.causal_class(); }
};

// Deterministic sampling window for residual evaluation: the central 80% of a
// bounded domain; a width-10 strip beside the boundary of a half-line;
// [-4, 4] on all of R. Punctured domains are split at the puncture.
Interval sample_window(const Interval& span);
std::vector<double> sample_xis(const Domain& domain, int count);

}  // namespace qewarp
