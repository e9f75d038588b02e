#include "qewarp/oracle/random_specs.hpp"

#include <cmath>

namespace qewarp::oracle {
namespace {

Profile exp_quadratic(double c0, double c1, double c2) {
  auto q = [c0, c1, c2](double xi) { return c0 + c1 * xi + c2 * xi * xi; };
  auto v = [q](double xi) { return std::exp(q(xi)); };
  auto d1 = [q, c1, c2](double xi) {
    return (c1 + 2.0 * c2 * xi) * std::exp(q(xi));
  };
  auto d2 = [q, c1, c2](double xi) {
    const double qp = c1 + 2.0 * c2 * xi;
    return (qp * qp + 2.0 * c2) * std::exp(q(xi));
  };
  return Profile(v, d1, d2, Domain{});
}

}  // namespace

double uniform(std::mt19937_64& eng, double lo, double hi) {
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

WarpedSpec random_smooth_spec(std::mt19937_64& eng) {
  const int n = 3 + static_cast<int>(uniform(eng, 0.0, 3.0));
  const int m = 1 + static_cast<int>(uniform(eng, 0.0, 3.0));
  const double r = uniform(eng, 0.5, 3.5);

  std::vector<int> eps(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) eps[static_cast<size_t>(i)] =
      uniform(eng, 0.0, 1.0) < 0.5 ? -1 : 1;
  Signature sig(eps);

  std::vector<double> alpha(static_cast<size_t>(n));
  for (;;) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      alpha[static_cast<size_t>(i)] = uniform(eng, -1.0, 1.0);
      s += eps[static_cast<size_t>(i)] * alpha[static_cast<size_t>(i)] *
           alpha[static_cast<size_t>(i)];
    }
    if (std::abs(s) >= 0.5) break;
  }
  Direction dir(sig, alpha);

  auto coef = [&](double cap) { return uniform(eng, -cap, cap); };
  Profile f = exp_quadratic(coef(0.3), coef(0.3), coef(0.15));
  Profile phi = exp_quadratic(coef(0.3), coef(0.3), coef(0.15));
  Profile h = exp_quadratic(coef(0.3), coef(0.3), coef(0.15));

  return WarpedSpec::make(n, m, r, 0.0, 0.0, std::move(sig), std::move(dir),
                          std::move(f), std::move(phi), std::move(h));
}

std::vector<double> random_point(std::mt19937_64& eng, const WarpedSpec& spec,
                                 int dim) {
  double a1 = 0.0;
  for (double a : spec.direction.alpha()) a1 += std::abs(a);
  const double c = 0.8 / std::max(1.0, a1);
  std::vector<double> p(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) p[static_cast<size_t>(i)] = uniform(eng, -c, c);
  return p;
}

}  // namespace qewarp::oracle
