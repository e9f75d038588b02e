#include "qewarp/ode.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "qewarp/families.hpp"

namespace qewarp {

namespace {

using State = std::vector<double>;

struct Knot {
  double xi;
  State y;
};

template <typename Deriv>
State rk4_step(const Deriv& f, double t, const State& y, double h) {
  const size_t d = y.size();
  State k1 = f(t, y);
  State tmp(d);
  for (size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  State k2 = f(t + 0.5 * h, tmp);
  for (size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  State k3 = f(t + 0.5 * h, tmp);
  for (size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
  State k4 = f(t + h, tmp);
  State out(d);
  for (size_t i = 0; i < d; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return out;
}

// One nominal step with halving-based error control. Accepted sub-steps are
// appended to `knots`; returns the largest local error estimate seen.
template <typename Deriv>
double advance(const Deriv& f, double t, State& y, double h, double tol,
               std::vector<Knot>& knots, long& budget, int depth) {
  if (depth > 24) {
    throw IntegrationError("step underflow: error control halved below 2^-24");
  }
  if (budget <= 0) throw IntegrationError("max_steps exhausted");
  budget -= 3;
  const State y_full = rk4_step(f, t, y, h);
  const State y_mid = rk4_step(f, t, y, 0.5 * h);
  const State y_half = rk4_step(f, t + 0.5 * h, y_mid, 0.5 * h);
  double err = 0.0;
  double scale = 1.0;
  for (size_t i = 0; i < y.size(); ++i) {
    err = std::max(err, std::abs(y_full[i] - y_half[i]));
    scale = std::max(scale, std::abs(y[i]));
  }
  err /= 15.0;
  if (err <= tol * scale || !std::isfinite(err)) {
    knots.push_back({t + 0.5 * h, y_mid});
    knots.push_back({t + h, y_half});
    y = y_half;
    return err;
  }
  const double e1 = advance(f, t, y, 0.5 * h, tol, knots, budget, depth + 1);
  const double e2 =
      advance(f, t + 0.5 * h, y, 0.5 * h, tol, knots, budget, depth + 1);
  return std::max(e1, e2);
}

bool finite(const State& y) {
  return std::all_of(y.begin(), y.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::range_end:
      return "range-end";
    case StopReason::singularity_guard:
      return "singularity-guard";
    case StopReason::max_steps:
      return "max-steps";
  }
  throw Error("unreachable stop reason");
}

void HermiteSeries::add_knot(double xi, double value, double d1, double d2) {
  if (!xi_.empty() && xi <= xi_.back()) {
    throw Error("dense-output knots must be strictly increasing");
  }
  xi_.push_back(xi);
  data_.push_back({value, d1, d2});
}

double HermiteSeries::eval(double xi, int deriv) const {
  if (xi_.size() < 2) throw Error("dense output needs at least two knots");
  if (xi < xi_.front() - 1e-12 || xi > xi_.back() + 1e-12) {
    throw DomainError("dense-output evaluation outside the integrated range");
  }
  auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  size_t seg = static_cast<size_t>(
      std::clamp<ptrdiff_t>(it - xi_.begin() - 1, 0,
                            static_cast<ptrdiff_t>(xi_.size()) - 2));
  const double h = xi_[seg + 1] - xi_[seg];
  const double t = (xi - xi_[seg]) / h;
  const auto& [p0, m0, s0] = data_[seg];
  const auto& [p1, m1, s1] = data_[seg + 1];
  const double a0 = p0;
  const double a1 = m0 * h;
  const double a2 = 0.5 * s0 * h * h;
  const double A = p1 - a0 - a1 - a2;
  const double B = m1 * h - a1 - 2 * a2;
  const double C = s1 * h * h - 2 * a2;
  const double a3 = 10 * A - 4 * B + 0.5 * C;
  const double a4 = -15 * A + 7 * B - C;
  const double a5 = 6 * A - 3 * B + 0.5 * C;
  switch (deriv) {
    case 0:
      return a0 + t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
    case 1:
      return (a1 + t * (2 * a2 + t * (3 * a3 + t * (4 * a4 + t * 5 * a5)))) /
             h;
    case 2:
      return (2 * a2 + t * (6 * a3 + t * (12 * a4 + t * 20 * a5))) / (h * h);
    default:
      throw InvalidRequestError("dense output supports derivatives 0..2");
  }
}

double v_of_z(int n, int m, double r, double k, double z, double guard) {
  const double a = family_a(n, m, k);
  const double b = family_b(n, m, k);
  const double den = r * (r - 1) * z * z - 2 * r * (k + a) * z + (a * a - b);
  if (std::abs(den) <= guard) {
    throw IntegrationError(
        "v(z) evaluated within the guard of a constant-branch root");
  }
  return r * (a - r * z) / den;
}

ImplicitFamily integrate_implicit_family(int n, int m, double r, double k,
                                         double x0, double z0,
                                         Interval xi_range,
                                         const IntegratorConfig& cfg) {
  if (n < 3) throw DimensionError("base dimension n must be >= 3");
  if (m < 1) throw DimensionError("fiber dimension m must be >= 1");
  if (!(r > 0.0)) throw AdmissibilityError("parameter r must be positive");
  if (!(k > 0.0)) throw AdmissibilityError("exponent k must be positive");
  if (x0 == 0.0) {
    throw InvalidRequestError("x0 = 0 freezes the system; choose x0 != 0");
  }
  if (!(xi_range.lo < xi_range.hi) || !std::isfinite(xi_range.lo) ||
      !std::isfinite(xi_range.hi)) {
    throw InvalidRequestError("xi_range must be a finite increasing interval");
  }
  if (!(cfg.step > 0.0) || !(cfg.tolerance > 0.0) ||
      !(cfg.singularity_guard > 0.0)) {
    throw InvalidRequestError("integrator config must be positive");
  }

  const double a = family_a(n, m, k);
  const double b = family_b(n, m, k);
  auto Q = [a, b, r, k](double z) {
    return r * (r - 1) * z * z - 2 * r * (k + a) * z + (a * a - b);
  };
  auto Qp = [a, r, k](double z) { return 2 * r * (r - 1) * z - 2 * r * (k + a); };

  // state = (x, z, log f, log phi, log h)
  auto deriv = [&](double, const State& u) {
    const double x = u[0], z = u[1];
    return State{(a - r * z) * x * x, x * Q(z) / r, x, k * x, x * z};
  };
  auto second = [&](const State& u) {
    const double x = u[0], z = u[1];
    const double xp = (a - r * z) * x * x;
    const double zp = x * Q(z) / r;
    return State{-r * zp * x * x + 2 * (a - r * z) * x * xp,
                 (xp * Q(z) + x * Qp(z) * zp) / r, xp, k * xp,
                 xp * z + x * zp};
  };

  ImplicitFamily fam;
  fam.a = a;
  fam.b = b;

  auto lf = std::make_shared<HermiteSeries>();
  auto lphi = std::make_shared<HermiteSeries>();
  auto lh = std::make_shared<HermiteSeries>();
  auto record = [&](double xi, const State& u) {
    const State d1 = deriv(xi, u);
    const State d2 = second(u);
    lf->add_knot(xi, u[2], d1[2], d2[2]);
    lphi->add_knot(xi, u[3], d1[3], d2[3]);
    lh->add_knot(xi, u[4], d1[4], d2[4]);
  };

  State u{x0, z0, 0.0, 0.0, 0.0};
  record(xi_range.lo, u);
  fam.table.push_back({xi_range.lo, x0, z0, 1.0, 1.0, 1.0, 0.0});

  const double cap = 1.0 / cfg.singularity_guard;
  long budget = cfg.max_steps;
  double xi = xi_range.lo;
  fam.stop = StopReason::range_end;
  int i = 0;
  while (xi < xi_range.hi) {
    if (std::abs(u[0]) >= cap || std::abs(u[1]) >= cap) {
      fam.stop = StopReason::singularity_guard;
      break;
    }
    ++i;
    double xi_next = xi_range.lo + i * cfg.step;
    if (xi_next > xi_range.hi - 0.5 * cfg.step) xi_next = xi_range.hi;
    std::vector<Knot> pending;
    State trial = u;
    double err = 0.0;
    try {
      err = advance(deriv, xi, trial, xi_next - xi, cfg.tolerance, pending,
                    budget, 0);
    } catch (const IntegrationError&) {
      if (budget <= 0) {
        fam.stop = StopReason::max_steps;
        break;
      }
      throw;
    }
    if (!finite(trial)) {
      fam.stop = StopReason::singularity_guard;
      break;
    }
    for (const Knot& kn : pending) record(kn.xi, kn.y);
    u = trial;
    xi = xi_next;
    fam.table.push_back({xi, u[0], u[1], std::exp(u[2]), std::exp(u[3]),
                         std::exp(u[4]), err});
  }

  if (fam.table.size() < 2) {
    throw IntegrationError(
        "integration stopped before completing a single step");
  }
  fam.domain = Domain{Interval{xi_range.lo, fam.table.back().xi}, {}};

  auto log_profile = [&fam](std::shared_ptr<HermiteSeries> s) {
    return Profile(
        [s](double xi) { return std::exp(s->eval(xi, 0)); },
        [s](double xi) { return s->eval(xi, 1) * std::exp(s->eval(xi, 0)); },
        [s](double xi) {
          const double d1 = s->eval(xi, 1);
          return (s->eval(xi, 2) + d1 * d1) * std::exp(s->eval(xi, 0));
        },
        fam.domain);
  };
  fam.f = log_profile(lf);
  fam.phi = log_profile(lphi);
  fam.h = log_profile(lh);
  return fam;
}

Profile solve_null_h(int n, int m, double r, const Profile& f,
                     const Profile& phi, double h0, double h0p,
                     Interval xi_range, const IntegratorConfig& cfg) {
  if (n < 3) throw DimensionError("base dimension n must be >= 3");
  if (m < 1) throw DimensionError("fiber dimension m must be >= 1");
  if (!(r > 0.0)) throw AdmissibilityError("parameter r must be positive");
  if (!(xi_range.lo < xi_range.hi) || !std::isfinite(xi_range.lo) ||
      !std::isfinite(xi_range.hi)) {
    throw InvalidRequestError("xi_range must be a finite increasing interval");
  }

  auto rhs = [&](double xi, double hv, double hp) {
    const double f0 = f.value(xi), f1 = f.d1(xi), f2 = f.d2(xi);
    const double p0 = phi.value(xi), p1 = phi.d1(xi), p2 = phi.d2(xi);
    if (!(f0 > 0.0) || !(p0 > 0.0)) {
      throw DomainError("f and phi must stay positive over the solve range");
    }
    return (-2 * r * f0 * p1 * hp +
            ((n - 2) * f0 * p2 - m * p0 * f2 - 2 * m * p1 * f1) * hv) /
           (r * f0 * p0);
  };
  auto deriv = [&](double xi, const State& u) {
    return State{u[1], rhs(xi, u[0], u[1])};
  };

  auto series = std::make_shared<HermiteSeries>();
  auto record = [&](double xi, const State& u) {
    series->add_knot(xi, u[0], u[1], rhs(xi, u[0], u[1]));
  };

  State u{h0, h0p};
  record(xi_range.lo, u);
  long budget = cfg.max_steps;
  double xi = xi_range.lo;
  int i = 0;
  while (xi < xi_range.hi) {
    ++i;
    double xi_next = xi_range.lo + i * cfg.step;
    if (xi_next > xi_range.hi - 0.5 * cfg.step) xi_next = xi_range.hi;
    std::vector<Knot> pending;
    advance(deriv, xi, u, xi_next - xi, cfg.tolerance, pending, budget, 0);
    if (!finite(u)) {
      throw IntegrationError("null potential solve produced nonfinite values");
    }
    for (const Knot& kn : pending) record(kn.xi, kn.y);
    xi = xi_next;
  }

  const Domain domain{Interval{xi_range.lo, xi_range.hi}, {}};
  Profile fc = f, pc = phi;
  const int nn = n, mm = m;
  const double rr = r;
  auto closure = [fc, pc, nn, mm, rr, series](double xi) {
    const double f0 = fc.value(xi), f1 = fc.d1(xi), f2 = fc.d2(xi);
    const double p0 = pc.value(xi), p1 = pc.d1(xi), p2 = pc.d2(xi);
    const double hv = series->eval(xi, 0), hp = series->eval(xi, 1);
    return (-2 * rr * f0 * p1 * hp +
            ((nn - 2) * f0 * p2 - mm * p0 * f2 - 2 * mm * p1 * f1) * hv) /
           (rr * f0 * p0);
  };
  return Profile([series](double xi) { return series->eval(xi, 0); },
                 [series](double xi) { return series->eval(xi, 1); }, closure,
                 domain);
}

}  // namespace qewarp
