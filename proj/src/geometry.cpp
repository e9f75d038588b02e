#include "qewarp/geometry.hpp"

#include <cmath>
#include <cstdio>

namespace qewarp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Signature::Signature(std::vector<int> eps) : eps_(std::move(eps)) {
  if (eps_.size() < 3) {
    throw DimensionError("signature needs n >= 3 entries, got " +
                         std::to_string(eps_.size()));
  }
  for (int e : eps_) {
    if (e != 1 && e != -1) {
      throw DimensionError("signature entries must be +1 or -1, got " +
                           std::to_string(e));
    }
  }
}

Direction::Direction(const Signature& sig, std::vector<double> alpha)
    : alpha_(std::move(alpha)) {
  if (static_cast<int>(alpha_.size()) != sig.n()) {
    throw DimensionError("direction has " + std::to_string(alpha_.size()) +
                         " entries for an n=" + std::to_string(sig.n()) +
                         " signature");
  }
  bool all_zero = true;
  for (double a : alpha_) {
    if (a != 0.0) all_zero = false;
    if (!std::isfinite(a)) {
      throw InvalidDirectionError("direction entries must be finite");
    }
  }
  if (all_zero) {
    throw InvalidDirectionError("direction must not be the zero vector");
  }

  double s = 0.0;
  for (int i = 0; i < sig.n(); ++i) {
    s += sig.eps(i) * alpha_[static_cast<size_t>(i)] *
         alpha_[static_cast<size_t>(i)];
  }
  if (s == 0.0) {
    causal_class_ = 0;
    return;
  }
  causal_class_ = s > 0.0 ? 1 : -1;
  // Already normalized within rounding: skip the rescale so that normalizing
  // twice is bit-identical.
  if (std::abs(std::abs(s) - 1.0) <= 16.0 * kEps) return;
  const double scale = 1.0 / std::sqrt(std::abs(s));
  for (double& a : alpha_) a *= scale;
}

double Direction::xi_at(std::span<const double> point) const {
  if (point.size() != alpha_.size()) {
    throw DimensionError("point has " + std::to_string(point.size()) +
                         " coordinates, direction expects " +
                         std::to_string(alpha_.size()));
  }
  double xi = 0.0;
  for (size_t i = 0; i < alpha_.size(); ++i) xi += alpha_[i] * point[i];
  return xi;
}

std::vector<double> Direction::point_at(double xi) const {
  double norm2 = 0.0;
  for (double a : alpha_) norm2 += a * a;
  std::vector<double> p(alpha_.size());
  for (size_t i = 0; i < alpha_.size(); ++i) p[i] = xi * alpha_[i] / norm2;
  return p;
}

Profile::Profile(Fn value, Fn d1, Fn d2, Domain domain)
    : value_(std::move(value)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      domain_(domain) {}

Profile Profile::constant(double c) {
  return Profile([c](double) { return c; }, [](double) { return 0.0; },
                 [](double) { return 0.0; }, Domain{});
}

double Profile::eval(const Fn& fn, double xi) const {
  if (!fn) throw Error("profile is empty");
  if (!domain_.contains(xi)) {
    throw DomainError("xi = " + fmt(xi) + " is outside the profile domain (" +
                      fmt(domain_.span.lo) + ", " + fmt(domain_.span.hi) +
                      ")" + (domain_.puncture ? " minus a puncture" : ""));
  }
  return fn(xi);
}

ConsistencyResult profile_consistency_check(const Profile& p,
                                            std::span<const double> xis) {
  if (xis.empty()) {
    throw InvalidRequestError("profile_consistency_check needs sample points");
  }
  ConsistencyResult res;
  res.pass = true;
  for (double xi : xis) {
    const double step = 1e-5 * std::max(1.0, std::abs(xi));
    if (!p.domain().contains(xi - step) || !p.domain().contains(xi + step)) {
      throw DomainError("consistency stencil at xi = " + fmt(xi) +
                        " leaves the profile domain");
    }
    const double fd1 = (p.value(xi + step) - p.value(xi - step)) / (2 * step);
    const double fd2 = (p.d1(xi + step) - p.d1(xi - step)) / (2 * step);
    const double e1 =
        std::abs(fd1 - p.d1(xi)) / std::max(1.0, std::abs(p.d1(xi)));
    const double e2 =
        std::abs(fd2 - p.d2(xi)) / std::max(1.0, std::abs(p.d2(xi)));
    const double worst = std::max(e1, e2);
    if (worst > res.worst_rel_error) {
      res.worst_rel_error = worst;
      res.worst_xi = xi;
    }
  }
  res.pass = res.worst_rel_error <= 1e-6;
  return res;
}

WarpedSpec WarpedSpec::make(int n, int m, double r, double rho, double lambda_F,
                            Signature signature, Direction direction, Profile f,
                            Profile phi, Profile h) {
  if (n < 3) throw DimensionError("base dimension n must be >= 3");
  if (m < 1) throw DimensionError("fiber dimension m must be >= 1");
  if (signature.n() != n) {
    throw DimensionError("signature size does not match n");
  }
  if (direction.n() != n) {
    throw DimensionError("direction size does not match n");
  }
  if (!(r > 0.0)) throw AdmissibilityError("parameter r must be positive");
  if (direction.causal_class() == 0 && (rho != 0.0 || lambda_F != 0.0)) {
    throw InvalidDirectionError(
        "a null direction forces rho = 0 and lambda_F = 0");
  }
  WarpedSpec spec;
  spec.n = n;
  spec.m = m;
  spec.r = r;
  spec.rho = rho;
  spec.lambda_F = lambda_F;
  spec.signature = std::move(signature);
  spec.direction = std::move(direction);
  spec.f = std::move(f);
  spec.phi = std::move(phi);
  spec.h = std::move(h);
  return spec;
}

bool WarpedSpec::r_is_integral() const {
  return r > 0.0 && r == std::round(r);
}

Interval sample_window(const Interval& span) {
  if (span.bounded()) {
    const double w = span.hi - span.lo;
    return {span.lo + 0.1 * w, span.hi - 0.1 * w};
  }
  if (span.lo > -kInf) return {span.lo + 1.0, span.lo + 9.0};
  if (span.hi < kInf) return {span.hi - 9.0, span.hi - 1.0};
  return {-4.0, 4.0};
}

std::vector<double> sample_xis(const Domain& domain, int count) {
  if (count < 3) throw InvalidRequestError("sample count must be >= 3");
  std::vector<double> xis;
  xis.reserve(static_cast<size_t>(count));
  auto fill = [&xis](const Interval& w, int k) {
    if (k == 1) {
      xis.push_back(0.5 * (w.lo + w.hi));
      return;
    }
    for (int i = 0; i < k; ++i) {
      xis.push_back(w.lo + (w.hi - w.lo) * i / (k - 1));
    }
  };
  if (domain.puncture) {
    const double p = *domain.puncture;
    const int left = count / 2;
    const int right = count - left;
    Interval lw = sample_window({domain.span.lo, p});
    Interval rw = sample_window({p, domain.span.hi});
    fill(lw, left);
    fill(rw, right);
    return xis;
  }
  fill(sample_window(domain.span), count);
  return xis;
}

}  // namespace qewarp
