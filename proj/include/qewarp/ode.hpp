#pragma once

/// @file ode.hpp
/// Fixed-step RK4 integration with step-halving error control, dense output
/// through piecewise-quintic Hermite interpolants, the first-order (x, z)
/// system behind the implicit family, and the null-direction potential solve.

#include <array>
#include <vector>

#include "qewarp/geometry.hpp"

namespace qewarp {

struct IntegratorConfig {
  double step = 1e-3;
  double tolerance = 1e-8;
  long max_steps = 2000000;
  double singularity_guard = 1e-6;
};

// One table row of the implicit-family integration.
struct OdeState {
  double xi = 0;
  double x = 0;            // f'/f
  double z = 0;            // (h'/h)/(f'/f)
  double f = 0, phi = 0, h = 0;
  double local_error = 0;
};

enum class StopReason { range_end, singularity_guard, max_steps };

std::string to_string(StopReason reason);

// Piecewise-quintic Hermite interpolant: value, first and second derivative
// are matched at every knot, giving a C^2 dense output whose d2 error is
// O(step^4).
class HermiteSeries {
 public:
  void add_knot(double xi, double value, double d1, double d2);
  double eval(double xi, int deriv) const;
  double front() const { return xi_.front(); }
  double back() const { return xi_.back(); }
  size_t size() const { return xi_.size(); }

 private:
  std::vector<double> xi_;
  std::vector<std::array<double, 3>> data_;
};

// dx/dz integrand of the separated implicit family:
//   v(z) = r (a - r z) / (r(r-1) z^2 - 2 r (k+a) z + (a^2 - b)).
// The denominator roots are exactly the constant-z solutions; a denominator
// magnitude <= guard throws IntegrationError.
double v_of_z(int n, int m, double r, double k, double z, double guard = 1e-6);

struct ImplicitFamily {
  std::vector<OdeState> table;  // rows at the nominal step grid
  StopReason stop = StopReason::range_end;
  Profile f, phi, h;
  Domain domain;  // open interval actually covered
  double a = 0, b = 0;
};

// Integrates z' = x Q(z)/r, x' = (a - rz) x^2 with Q the root quadratic,
// accumulating log f, log phi = k log f, log h along the way. Initial data
// sit at xi_range.lo. Profiles are exp of the interpolated logs.
ImplicitFamily integrate_implicit_family(int n, int m, double r, double k,
                                         double x0, double z0,
                                         Interval xi_range,
                                         const IntegratorConfig& cfg = {});

// Solves -r f phi h'' - 2 r f phi' h' + [(n-2) f phi'' - m phi f'' -
// 2 m phi' f'] h = 0 for h with data (h0, h0p) at xi_range.lo. The returned
// profile's d2 is closed through the ODE itself.
Profile solve_null_h(int n, int m, double r, const Profile& f,
                     const Profile& phi, double h0, double h0p,
                     Interval xi_range, const IntegratorConfig& cfg = {});

}  // namespace qewarp
