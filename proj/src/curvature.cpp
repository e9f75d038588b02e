#include "qewarp/curvature.hpp"

#include <cmath>

namespace qewarp {

namespace {

void require_phi(const PointData& d) {
  if (d.phi0 == 0.0) {
    throw DomainError("conformal factor phi vanishes at xi = " +
                      std::to_string(d.xi));
  }
}

void require_f_positive(const PointData& d) {
  if (!(d.f0 > 0.0)) {
    throw DomainError("warping function f must be positive at xi = " +
                      std::to_string(d.xi));
  }
}

void require_h_positive(const PointData& d) {
  if (!(d.h0 > 0.0)) {
    throw DomainError("potential h must be positive at xi = " +
                      std::to_string(d.xi));
  }
}

// Hess_{g_bar} u(X_i, X_j) from already-fetched derivatives u0, u1, u2.
Eigen::MatrixXd conformal_hessian_from(const WarpedSpec& spec,
                                       const PointData& d, double u1,
                                       double u2) {
  const int n = spec.n;
  const auto& alpha = spec.direction.alpha();
  Eigen::MatrixXd H(n, n);
  const double lphi = d.phi1 / d.phi0;  // phi'/phi
  // sum_k eps_k (phi_{,k}/phi) u_{,k} = S (phi'/phi) u'
  const double cross = d.S * lphi * u1;
  for (int i = 0; i < n; ++i) {
    const double ai = alpha[static_cast<size_t>(i)];
    for (int j = i; j < n; ++j) {
      const double aj = alpha[static_cast<size_t>(j)];
      double v = u2 * ai * aj + lphi * aj * u1 * ai + lphi * ai * u1 * aj;
      if (i == j) v -= spec.signature.eps(i) * cross;
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

}  // namespace

PointData point_data(const WarpedSpec& spec, std::span<const double> point) {
  return point_data_at_xi(spec, spec.direction.xi_at(point));
}

PointData point_data_at_xi(const WarpedSpec& spec, double xi) {
  PointData d;
  d.xi = xi;
  d.f0 = spec.f.value(xi);
  d.f1 = spec.f.d1(xi);
  d.f2 = spec.f.d2(xi);
  d.phi0 = spec.phi.value(xi);
  d.phi1 = spec.phi.d1(xi);
  d.phi2 = spec.phi.d2(xi);
  d.h0 = spec.h.value(xi);
  d.h1 = spec.h.d1(xi);
  d.h2 = spec.h.d2(xi);
  double s = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double a = spec.direction.alpha()[static_cast<size_t>(i)];
    s += spec.signature.eps(i) * a * a;
  }
  d.S = s;
  return d;
}

std::vector<Eigen::MatrixXd> christoffel_conformal(
    const WarpedSpec& spec, std::span<const double> point) {
  const PointData d = point_data(spec, point);
  require_phi(d);
  const int n = spec.n;
  const auto& alpha = spec.direction.alpha();
  auto dphi = [&](int i) { return d.phi1 * alpha[static_cast<size_t>(i)]; };

  std::vector<Eigen::MatrixXd> gamma(static_cast<size_t>(n),
                                     Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        if (i == j && j == k) {
          v = -dphi(i) / d.phi0;
        } else if (i == j) {
          v = spec.signature.eps(i) * spec.signature.eps(k) * dphi(k) / d.phi0;
        } else if (k == i) {
          v = -dphi(j) / d.phi0;
        } else if (k == j) {
          v = -dphi(i) / d.phi0;
        }
        gamma[static_cast<size_t>(k)](i, j) = v;
      }
    }
  }
  return gamma;
}

Eigen::MatrixXd hessian_conformal(const WarpedSpec& spec, Which which,
                                  std::span<const double> point) {
  const PointData d = point_data(spec, point);
  require_phi(d);
  switch (which) {
    case Which::f:
      return conformal_hessian_from(spec, d, d.f1, d.f2);
    case Which::phi:
      return conformal_hessian_from(spec, d, d.phi1, d.phi2);
    case Which::h:
      return conformal_hessian_from(spec, d, d.h1, d.h2);
  }
  throw InvalidRequestError("unknown profile selector");
}

Eigen::MatrixXd ricci_conformal(const WarpedSpec& spec,
                                std::span<const double> point) {
  const PointData d = point_data(spec, point);
  require_phi(d);
  const int n = spec.n;
  const auto& alpha = spec.direction.alpha();
  // sum_k eps_k phi_{,kk} = S phi'',  sum_k eps_k phi_{,k}^2 = S phi'^2
  const double lap_flat = d.S * d.phi2;
  const double grad2 = d.S * d.phi1 * d.phi1;
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i) {
    const double ai = alpha[static_cast<size_t>(i)];
    for (int j = i; j < n; ++j) {
      const double aj = alpha[static_cast<size_t>(j)];
      double v = (n - 2) * d.phi2 * ai * aj / d.phi0;
      if (i == j) {
        v += spec.signature.eps(i) *
             (lap_flat / d.phi0 - (n - 1) * grad2 / (d.phi0 * d.phi0));
      }
      R(i, j) = v;
      R(j, i) = v;
    }
  }
  return R;
}

CurvatureBlock warped_ricci(const WarpedSpec& spec,
                            std::span<const double> point) {
  const PointData d = point_data(spec, point);
  require_phi(d);
  require_f_positive(d);
  CurvatureBlock block;
  block.base = ricci_conformal(spec, point) -
               (spec.m / d.f0) * conformal_hessian_from(spec, d, d.f1, d.f2);
  // gamma = lambda_F - f phi^2 S f'' + (n-2) f phi S phi' f'
  //         - (m-1) phi^2 S f'^2, with the 1-dimensional fiber dropping
  // lambda_F (a 1-dimensional fiber is flat).
  const double lam = spec.m == 1 ? 0.0 : spec.lambda_F;
  block.fiber_coeff = lam - d.f0 * d.phi0 * d.phi0 * d.S * d.f2 +
                      (spec.n - 2) * d.f0 * d.phi0 * d.S * d.phi1 * d.f1 -
                      (spec.m - 1) * d.phi0 * d.phi0 * d.S * d.f1 * d.f1;
  return block;
}

CurvatureBlock warped_hessian_h(const WarpedSpec& spec,
                                std::span<const double> point) {
  const PointData d = point_data(spec, point);
  require_phi(d);
  require_f_positive(d);
  CurvatureBlock block;
  block.base = conformal_hessian_from(spec, d, d.h1, d.h2);
  block.fiber_coeff = d.f0 * d.phi0 * d.phi0 * d.S * d.f1 * d.h1;
  return block;
}

CurvatureBlock bakry_emery(const WarpedSpec& spec,
                           std::span<const double> point) {
  const PointData d = point_data(spec, point);
  require_phi(d);
  require_f_positive(d);
  require_h_positive(d);
  CurvatureBlock ric = warped_ricci(spec, point);
  CurvatureBlock hess = warped_hessian_h(spec, point);
  CurvatureBlock be;
  be.base = ric.base - (spec.r / d.h0) * hess.base;
  be.fiber_coeff = ric.fiber_coeff - (spec.r / d.h0) * hess.fiber_coeff;
  return be;
}

double laplacian_base(const WarpedSpec& spec, Which which, double xi) {
  const PointData d = point_data_at_xi(spec, xi);
  require_phi(d);
  require_f_positive(d);
  double u1 = 0, u2 = 0;
  switch (which) {
    case Which::f:
      u1 = d.f1;
      u2 = d.f2;
      break;
    case Which::phi:
      u1 = d.phi1;
      u2 = d.phi2;
      break;
    case Which::h:
      u1 = d.h1;
      u2 = d.h2;
      break;
  }
  return d.S * d.phi0 * d.phi0 *
         (u2 - (spec.n - 2) * d.phi1 * u1 / d.phi0 +
          spec.m * u1 * d.f1 / d.f0);
}

double grad_norm_base(const WarpedSpec& spec, Which which, double xi) {
  const PointData d = point_data_at_xi(spec, xi);
  require_phi(d);
  double u1 = 0;
  switch (which) {
    case Which::f:
      u1 = d.f1;
      break;
    case Which::phi:
      u1 = d.phi1;
      break;
    case Which::h:
      u1 = d.h1;
      break;
  }
  return d.S * d.phi0 * d.phi0 * u1 * u1;
}

}  // namespace qewarp
