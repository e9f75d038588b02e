#pragma once

/// @file curvature.hpp
/// Curvature tensors of g~ = (1/phi^2) g_eps (+) f^2 g_F, evaluated in closed
/// form from the profiles. Base blocks are n x n matrices over the coordinate
/// frame X_i; fiber blocks are scalar multiples of g_F; mixed blocks vanish.

#include <Eigen/Dense>
#include <vector>

#include "qewarp/geometry.hpp"

namespace qewarp {

enum class Which { f, phi, h };

// Profile values at one point, precomputed once per evaluation.
struct PointData {
  double xi = 0;
  double f0 = 0, f1 = 0, f2 = 0;
  double phi0 = 0, phi1 = 0, phi2 = 0;
  double h0 = 0, h1 = 0, h2 = 0;
  double S = 0;  // sum_k eps_k alpha_k^2 (the causal class for stored specs)
};

PointData point_data(const WarpedSpec& spec, std::span<const double> point);
PointData point_data_at_xi(const WarpedSpec& spec, double xi);

// Christoffel symbols of the conformal metric g_bar = g_eps / phi^2.
// Result[k](i,j) = Gamma^k_{ij}. Four cases:
//   all distinct -> 0;  upper equals one lower -> -phi_{,other}/phi;
//   lower pair equal, upper distinct -> eps_i eps_k phi_{,k}/phi;
//   all equal -> -phi_{,i}/phi.
std::vector<Eigen::MatrixXd> christoffel_conformal(
    const WarpedSpec& spec, std::span<const double> point);

// Hess_{g_bar} u (X_i, X_j) for u in {f, phi, h}.
Eigen::MatrixXd hessian_conformal(const WarpedSpec& spec, Which which,
                                  std::span<const double> point);

// Ric_{g_bar}(X_i, X_j).
Eigen::MatrixXd ricci_conformal(const WarpedSpec& spec,
                                std::span<const double> point);

// Ricci tensor of the warped product, block form. The fiber block is
// fiber_coeff * g_F; the mixed block is identically zero.
struct CurvatureBlock {
  Eigen::MatrixXd base;
  double fiber_coeff = 0.0;
};

CurvatureBlock warped_ricci(const WarpedSpec& spec,
                            std::span<const double> point);

// Hessian of h in the warped metric: base block Hess_{g_bar} h, fiber block
// f phi^2 (sum_k eps_k f_{,k} h_{,k}) g_F.
CurvatureBlock warped_hessian_h(const WarpedSpec& spec,
                                std::span<const double> point);

// Bakry-Emery tensor Ric_{g~} - (r/h) Hess_{g~} h, same block layout.
CurvatureBlock bakry_emery(const WarpedSpec& spec,
                           std::span<const double> point);

// Laplacian and gradient norm of u in the warped base metric
// g_B = g_bar (+) f^2 g_F (u a function of xi only):
//   Lap u = S phi^2 [u'' - (n-2) phi' u'/phi + m u' f'/f]
//   |grad u|^2 = S phi^2 u'^2
double laplacian_base(const WarpedSpec& spec, Which which, double xi);
double grad_norm_base(const WarpedSpec& spec, Which which, double xi);

}  // namespace qewarp
