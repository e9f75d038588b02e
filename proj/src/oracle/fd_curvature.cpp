#include "qewarp/oracle/fd_curvature.hpp"

namespace qewarp::oracle {
namespace {

using Eigen::MatrixXd;

std::vector<double> shifted(const std::vector<double>& p, int a, double da,
                            int b = -1, double db = 0.0) {
  std::vector<double> q = p;
  q[static_cast<size_t>(a)] += da;
  if (b >= 0) q[static_cast<size_t>(b)] += db;
  return q;
}

// d_a g at p, central difference.
MatrixXd metric_d1(const MetricFn& g, const std::vector<double>& p, int a,
                   double s) {
  return (g(shifted(p, a, s)) - g(shifted(p, a, -s))) / (2.0 * s);
}

// d_a d_b g at p; 3-point stencil on the diagonal, 4-point off it.
MatrixXd metric_d2(const MetricFn& g, const std::vector<double>& p, int a,
                   int b, double s) {
  if (a == b) {
    return (g(shifted(p, a, s)) - 2.0 * g(p) + g(shifted(p, a, -s))) /
           (s * s);
  }
  return (g(shifted(p, a, s, b, s)) - g(shifted(p, a, s, b, -s)) -
          g(shifted(p, a, -s, b, s)) + g(shifted(p, a, -s, b, -s))) /
         (4.0 * s * s);
}

std::vector<MatrixXd> christoffel_from(const MatrixXd& inv,
                                       const std::vector<MatrixXd>& d1) {
  const int d = static_cast<int>(inv.rows());
  std::vector<MatrixXd> gamma(static_cast<size_t>(d), MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double sum = 0.0;
        for (int l = 0; l < d; ++l) {
          sum += inv(k, l) * (d1[static_cast<size_t>(i)](j, l) +
                              d1[static_cast<size_t>(j)](i, l) -
                              d1[static_cast<size_t>(l)](i, j));
        }
        gamma[static_cast<size_t>(k)](i, j) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

}  // namespace

std::vector<MatrixXd> fd_christoffel(const MetricFn& g,
                                     const std::vector<double>& p,
                                     const FdConfig& cfg) {
  const int d = static_cast<int>(p.size());
  const MatrixXd inv = g(p).inverse();
  std::vector<MatrixXd> d1;
  d1.reserve(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) d1.push_back(metric_d1(g, p, a, cfg.step));
  return christoffel_from(inv, d1);
}

MatrixXd fd_ricci(const MetricFn& g, const std::vector<double>& p,
                  const FdConfig& cfg) {
  const int d = static_cast<int>(p.size());
  const double s = cfg.step;
  const MatrixXd g0 = g(p);
  const MatrixXd inv = g0.inverse();

  std::vector<MatrixXd> d1;
  d1.reserve(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) d1.push_back(metric_d1(g, p, a, s));

  const std::vector<MatrixXd> gamma = christoffel_from(inv, d1);

  // dGamma[m][k](i, j) = d_m Gamma^k_{ij}
  std::vector<std::vector<MatrixXd>> dgamma(
      static_cast<size_t>(d),
      std::vector<MatrixXd>(static_cast<size_t>(d), MatrixXd::Zero(d, d)));
  for (int mi = 0; mi < d; ++mi) {
    const MatrixXd dinv = -inv * d1[static_cast<size_t>(mi)] * inv;
    std::vector<MatrixXd> d2;
    d2.reserve(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) d2.push_back(metric_d2(g, p, mi, a, s));
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          double sum = 0.0;
          for (int l = 0; l < d; ++l) {
            const double bracket = d1[static_cast<size_t>(i)](j, l) +
                                   d1[static_cast<size_t>(j)](i, l) -
                                   d1[static_cast<size_t>(l)](i, j);
            const double dbracket = d2[static_cast<size_t>(i)](j, l) +
                                    d2[static_cast<size_t>(j)](i, l) -
                                    d2[static_cast<size_t>(l)](i, j);
            sum += dinv(k, l) * bracket + inv(k, l) * dbracket;
          }
          dgamma[static_cast<size_t>(mi)][static_cast<size_t>(k)](i, j) =
              0.5 * sum;
        }
      }
    }
  }

  MatrixXd ric = MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double v = 0.0;
      for (int k = 0; k < d; ++k) {
        v += dgamma[static_cast<size_t>(k)][static_cast<size_t>(k)](i, j);
        v -= dgamma[static_cast<size_t>(j)][static_cast<size_t>(k)](i, k);
        for (int l = 0; l < d; ++l) {
          v += gamma[static_cast<size_t>(k)](k, l) *
               gamma[static_cast<size_t>(l)](i, j);
          v -= gamma[static_cast<size_t>(k)](j, l) *
               gamma[static_cast<size_t>(l)](i, k);
        }
      }
      ric(i, j) = v;
    }
  }
  return ric;
}

MatrixXd fd_hessian(const MetricFn& g, const ScalarFn& u,
                    const std::vector<double>& p, const FdConfig& cfg) {
  const int d = static_cast<int>(p.size());
  const double s = cfg.step;
  const std::vector<MatrixXd> gamma = fd_christoffel(g, p, cfg);

  Eigen::VectorXd du(d);
  for (int a = 0; a < d; ++a)
    du(a) = (u(shifted(p, a, s)) - u(shifted(p, a, -s))) / (2.0 * s);

  MatrixXd hess(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double d2u;
      if (i == j) {
        d2u = (u(shifted(p, i, s)) - 2.0 * u(p) + u(shifted(p, i, -s))) /
              (s * s);
      } else {
        d2u = (u(shifted(p, i, s, j, s)) - u(shifted(p, i, s, j, -s)) -
               u(shifted(p, i, -s, j, s)) + u(shifted(p, i, -s, j, -s))) /
              (4.0 * s * s);
      }
      double corr = 0.0;
      for (int k = 0; k < d; ++k)
        corr += gamma[static_cast<size_t>(k)](i, j) * du(k);
      hess(i, j) = d2u - corr;
    }
  }
  return hess;
}

MetricFn conformal_base_metric(const WarpedSpec& spec) {
  return [spec](const std::vector<double>& p) {
    const double xi = spec.direction.xi_at(p);
    const double phi = spec.phi.value(xi);
    MatrixXd g = MatrixXd::Zero(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i)
      g(i, i) = spec.signature.eps(i) / (phi * phi);
    return g;
  };
}

MetricFn warped_product_metric(const WarpedSpec& spec) {
  return [spec](const std::vector<double>& p) {
    const std::vector<double> base(p.begin(), p.begin() + spec.n);
    const double xi = spec.direction.xi_at(base);
    const double phi = spec.phi.value(xi);
    const double f = spec.f.value(xi);
    const int d = spec.n + spec.m;
    MatrixXd g = MatrixXd::Zero(d, d);
    for (int i = 0; i < spec.n; ++i)
      g(i, i) = spec.signature.eps(i) / (phi * phi);
    for (int a = spec.n; a < d; ++a) g(a, a) = f * f;
    return g;
  };
}

ScalarFn potential_scalar(const WarpedSpec& spec) {
  return [spec](const std::vector<double>& p) {
    const std::vector<double> base(p.begin(), p.begin() + spec.n);
    return spec.h.value(spec.direction.xi_at(base));
  };
}

}  // namespace qewarp::oracle
