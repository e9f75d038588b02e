#include "qewarp/verifier.hpp"

#include <cmath>

#include "qewarp/curvature.hpp"

namespace qewarp {

namespace {

constexpr double kMuSpreadTol = 1e-8;
constexpr double kAssemblyTol = 1e-8;

void track(EquationResidual& eq, double value, double xi) {
  const double mag = std::abs(value);
  if (mag > eq.max_abs) {
    eq.max_abs = mag;
    eq.argmax_xi = xi;
  }
}

double mu_at(const WarpedSpec& spec, double xi) {
  const double h0 = spec.h.value(xi);
  return h0 * laplacian_base(spec, Which::h, xi) +
         (spec.r - 1.0) * grad_norm_base(spec, Which::h, xi) +
         spec.rho * h0 * h0;
}

MuTrace mu_trace_impl(const WarpedSpec& spec, std::span<const double> xis) {
  MuTrace mu;
  mu.trace.reserve(xis.size());
  double sum = 0.0;
  for (double xi : xis) {
    const double v = mu_at(spec, xi);
    mu.trace.emplace_back(xi, v);
    sum += v;
  }
  mu.mean = sum / static_cast<double>(xis.size());
  double lo = mu.trace.front().second, hi = lo;
  for (const auto& [_, v] : mu.trace) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  mu.spread = hi - lo;
  mu.constant = mu.spread <= kMuSpreadTol * (1.0 + std::abs(mu.mean));
  return mu;
}

bool residuals_pass(const ResidualReport& rep, double tol) {
  return rep.pde_offdiag.max_abs <= tol && rep.pde_diag.max_abs <= tol &&
         rep.pde_fiber.max_abs <= tol && rep.ode_system.max_abs <= tol;
}

}  // namespace

std::string to_string(ToleranceProfile profile) {
  return profile == ToleranceProfile::analytic ? "analytic" : "numeric";
}

double residual_tolerance(ToleranceProfile profile) {
  return profile == ToleranceProfile::analytic ? 1e-9 : 1e-6;
}

PdeResiduals pde_residuals_at(const WarpedSpec& spec,
                              std::span<const double> point) {
  const PointData d = point_data(spec, point);
  const int n = spec.n;
  const int m = spec.m;
  const double r = spec.r;
  const auto& alpha = spec.direction.alpha();
  auto eps = [&](int i) { return static_cast<double>(spec.signature.eps(i)); };
  auto df = [&](int i) { return d.f1 * alpha[static_cast<size_t>(i)]; };
  auto dphi = [&](int i) { return d.phi1 * alpha[static_cast<size_t>(i)]; };
  auto dh = [&](int i) { return d.h1 * alpha[static_cast<size_t>(i)]; };
  auto ddf = [&](int i, int j) {
    return d.f2 * alpha[static_cast<size_t>(i)] * alpha[static_cast<size_t>(j)];
  };
  auto ddphi = [&](int i, int j) {
    return d.phi2 * alpha[static_cast<size_t>(i)] *
           alpha[static_cast<size_t>(j)];
  };
  auto ddh = [&](int i, int j) {
    return d.h2 * alpha[static_cast<size_t>(i)] * alpha[static_cast<size_t>(j)];
  };

  PdeResiduals out;
  out.offdiag = Eigen::MatrixXd::Zero(n, n);
  out.diag = Eigen::VectorXd::Zero(n);

  const double f = d.f0, phi = d.phi0, h = d.h0;

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = (n - 2) * f * h * ddphi(i, j) - r * f * phi * ddh(i, j) -
                       m * h * phi * ddf(i, j) - m * h * dphi(i) * df(j) -
                       m * h * dphi(j) * df(i) - r * f * dphi(i) * dh(j) -
                       r * f * dphi(j) * dh(i);
      out.offdiag(i, j) = v;
      out.offdiag(j, i) = v;
    }
  }

  // sum_k eps_k [ f h phi phi_{,kk} - (n-1) f h phi_{,k}^2
  //              + m h phi phi_{,k} f_{,k} + r f phi phi_{,k} h_{,k} ]
  double trace_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    trace_sum += eps(k) * (f * h * phi * ddphi(k, k) -
                           (n - 1) * f * h * dphi(k) * dphi(k) +
                           m * h * phi * dphi(k) * df(k) +
                           r * f * phi * dphi(k) * dh(k));
  }
  for (int i = 0; i < n; ++i) {
    out.diag(i) =
        phi * ((n - 2) * f * h * ddphi(i, i) - r * f * phi * ddh(i, i) -
               m * h * phi * ddf(i, i) - 2 * m * h * dphi(i) * df(i) -
               2 * r * f * dphi(i) * dh(i)) +
        eps(i) * trace_sum - eps(i) * spec.rho * f * h;
  }

  if (m >= 2) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      s += eps(k) * (-f * h * phi * phi * ddf(k, k) +
                     (n - 2) * f * h * phi * dphi(k) * df(k) -
                     (m - 1) * h * phi * phi * df(k) * df(k) -
                     r * f * phi * phi * df(k) * dh(k));
    }
    out.fiber = s - h * (spec.rho * f * f - spec.lambda_F);
  } else {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      s += eps(k) * (-h * phi * phi * ddf(k, k) +
                     (n - 2) * h * phi * dphi(k) * df(k) -
                     r * phi * phi * df(k) * dh(k));
    }
    out.fiber = s - spec.rho * f * h + spec.lambda_F * h / f;
  }
  return out;
}

OdeResiduals ode_residuals_at(const WarpedSpec& spec, double xi) {
  const PointData d = point_data_at_xi(spec, xi);
  const int n = spec.n;
  const int m = spec.m;
  const double r = spec.r;
  const double S = d.S;
  const double f = d.f0, f1 = d.f1, f2 = d.f2;
  const double phi = d.phi0, phi1 = d.phi1, phi2 = d.phi2;
  const double h = d.h0, h1 = d.h1, h2 = d.h2;

  OdeResiduals out;
  out.eq1 = (n - 2) * f * h * phi2 - r * f * phi * h2 - m * h * phi * f2 -
            2 * m * h * phi1 * f1 - 2 * r * f * phi1 * h1;

  if (spec.causal_class() == 0) {
    if (spec.rho != 0.0 || spec.lambda_F != 0.0) {
      throw SpecError("null direction with nonzero rho or lambda_F");
    }
    return out;
  }

  out.eq2 = S * (f * h * phi * phi2 - (n - 1) * f * h * phi1 * phi1 +
                 m * h * phi * phi1 * f1 + r * f * phi * phi1 * h1) -
            spec.rho * f * h;

  if (m >= 2) {
    out.eq3 = S * (-f * h * phi * phi * f2 + (n - 2) * f * h * phi * phi1 * f1 -
                   (m - 1) * h * phi * phi * f1 * f1 -
                   r * f * phi * phi * f1 * h1) -
              h * (spec.rho * f * f - spec.lambda_F);
  } else {
    out.eq3 = S * (-h * phi * phi * f2 + (n - 2) * h * phi * phi1 * f1 -
                   r * phi * phi * f1 * h1) -
              spec.rho * f * h + spec.lambda_F * h / f;
  }
  return out;
}

ResidualReport residual_pde(const WarpedSpec& spec,
                            const std::vector<std::vector<double>>& points,
                            ToleranceProfile profile) {
  if (points.empty()) {
    throw InvalidRequestError("residual_pde needs at least one sample point");
  }
  ResidualReport rep;
  rep.profile = profile;
  for (const auto& p : points) {
    const double xi = spec.direction.xi_at(p);
    const PdeResiduals res = pde_residuals_at(spec, p);
    for (int i = 0; i < spec.n; ++i) {
      for (int j = i + 1; j < spec.n; ++j) {
        track(rep.pde_offdiag, res.offdiag(i, j), xi);
      }
      track(rep.pde_diag, res.diag(i), xi);
    }
    track(rep.pde_fiber, res.fiber, xi);
  }
  rep.pass = residuals_pass(rep, residual_tolerance(profile));
  return rep;
}

ResidualReport residual_ode(const WarpedSpec& spec,
                            std::span<const double> xis,
                            ToleranceProfile profile) {
  if (xis.empty()) {
    throw InvalidRequestError("residual_ode needs at least one sample");
  }
  ResidualReport rep;
  rep.profile = profile;
  for (double xi : xis) {
    const OdeResiduals res = ode_residuals_at(spec, xi);
    track(rep.ode_system, res.eq1, xi);
    track(rep.ode_system, res.eq2, xi);
    track(rep.ode_system, res.eq3, xi);
  }
  rep.pass = residuals_pass(rep, residual_tolerance(profile));
  return rep;
}

MuTrace assembly_mu(const WarpedSpec& spec, std::span<const double> xis,
                  ToleranceProfile profile, bool report_only) {
  if (xis.empty()) {
    throw InvalidRequestError("assembly_mu needs at least one sample");
  }
  if (!report_only) {
    const ResidualReport rep = residual_ode(spec, xis, profile);
    if (!rep.pass) {
      throw PreconditionError(
          "assembly_mu requires a spec whose quasi-Einstein residuals pass; "
          "max residual " +
          std::to_string(rep.ode_system.max_abs));
    }
  }
  return mu_trace_impl(spec, xis);
}

ResidualReport verify_spec(const WarpedSpec& spec, std::span<const double> xis,
                           ToleranceProfile profile) {
  if (xis.empty()) {
    throw InvalidRequestError("verify_spec needs at least one sample");
  }
  ResidualReport rep;
  rep.profile = profile;
  for (double xi : xis) {
    const OdeResiduals res = ode_residuals_at(spec, xi);
    track(rep.ode_system, res.eq1, xi);
    track(rep.ode_system, res.eq2, xi);
    track(rep.ode_system, res.eq3, xi);

    const std::vector<double> p = spec.direction.point_at(xi);
    const PdeResiduals pres = pde_residuals_at(spec, p);
    for (int i = 0; i < spec.n; ++i) {
      for (int j = i + 1; j < spec.n; ++j) {
        track(rep.pde_offdiag, pres.offdiag(i, j), xi);
      }
      track(rep.pde_diag, pres.diag(i), xi);
    }
    track(rep.pde_fiber, pres.fiber, xi);
  }
  const MuTrace mu = mu_trace_impl(spec, xis);
  rep.mu_trace = mu.trace;
  rep.mu_mean = mu.mean;
  rep.mu_spread = mu.spread;
  rep.mu_constant = mu.constant;
  rep.pass = residuals_pass(rep, residual_tolerance(profile)) && mu.constant;
  return rep;
}

AssemblyCertificate einstein_assembly(const WarpedSpec& spec, int fiber2_dim,
                                      double fiber2_mu,
                                      std::span<const double> xis,
                                      ToleranceProfile profile) {
  if (spec.rho != 0.0) {
    throw PreconditionError("Ricci-flat assembly requires rho = 0");
  }
  if (fiber2_dim < 1) {
    throw PreconditionError("second fiber dimension must be >= 1");
  }
  if (!spec.r_is_integral() ||
      static_cast<int>(std::llround(spec.r)) != fiber2_dim) {
    throw PreconditionError(
        "assembly needs integral r equal to the second fiber dimension");
  }
  const ResidualReport rep = verify_spec(spec, xis, profile);
  if (!residuals_pass(rep, residual_tolerance(profile))) {
    throw PreconditionError(
        "assembly requires a certified quasi-Einstein spec");
  }

  AssemblyCertificate cert;
  cert.fiber2_dim = fiber2_dim;
  cert.mu_certified = rep.mu_mean;
  cert.fiber2_mu = fiber2_mu;
  cert.mismatch = std::abs(rep.mu_mean - fiber2_mu);
  if (!rep.mu_constant) {
    cert.granted = false;
    cert.detail = "mu trace is not constant within tolerance";
    return cert;
  }
  if (cert.mismatch > kAssemblyTol * (1.0 + std::abs(rep.mu_mean))) {
    cert.granted = false;
    cert.detail = "assembly rejected: certified mu " +
                  std::to_string(rep.mu_mean) + " vs supplied " +
                  std::to_string(fiber2_mu);
    return cert;
  }
  cert.granted = true;
  cert.detail = "Ricci-flat warped product certified";
  return cert;
}

MixedHessianResult mixed_hessian_check(
    const WarpedSpec& spec, const std::vector<std::vector<double>>& points,
    const FiberDependence* injected) {
  if (points.empty()) {
    throw InvalidRequestError(
        "mixed_hessian_check needs at least one sample point");
  }
  MixedHessianResult out;
  for (const auto& p : points) {
    const double xi = spec.direction.xi_at(p);
    const double f0 = spec.f.value(xi);
    if (!(f0 > 0.0)) {
      throw DomainError("warping function f must be positive");
    }
    const double f1 = spec.f.d1(xi);
    for (int i = 0; i < spec.n; ++i) {
      const double dfi =
          f1 * spec.direction.alpha()[static_cast<size_t>(i)];
      for (int j = 0; j < spec.m; ++j) {
        double cross = 0.0, dy = 0.0;
        if (injected) {
          if (injected->d2h_dxdy) cross = injected->d2h_dxdy(i, j, p);
          if (injected->dh_dy) dy = injected->dh_dy(j, p);
        }
        const double v = cross - (dfi / f0) * dy;
        out.max_abs = std::max(out.max_abs, std::abs(v));
      }
    }
  }
  out.pass = out.max_abs <= 1e-12;
  return out;
}

}  // namespace qewarp
