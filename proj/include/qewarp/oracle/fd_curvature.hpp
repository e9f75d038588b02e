#pragma once

/// @file fd_curvature.hpp
/// Independent curvature referee: Christoffel symbols, Ricci tensors and
/// Hessians computed from metric values alone by central finite differences.
/// Shares no code path with the closed-form engine; the only common input is
/// the metric as a black-box matrix function of the point.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qewarp/geometry.hpp"

namespace qewarp::oracle {

using MetricFn = std::function<Eigen::MatrixXd(const std::vector<double>&)>;
using ScalarFn = std::function<double(const std::vector<double>&)>;

struct FdConfig {
  double step = 1e-4;
};

// Gamma^k_{ij} = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}),
// result[k](i, j).
std::vector<Eigen::MatrixXd> fd_christoffel(const MetricFn& g,
                                            const std::vector<double>& p,
                                            const FdConfig& cfg = {});

// R_{ij} = d_k Gamma^k_{ij} - d_j Gamma^k_{ik}
//        + Gamma^k_{kl} Gamma^l_{ij} - Gamma^k_{jl} Gamma^l_{ik},
// with d Gamma assembled from first and second metric differences
// (d g^{-1} = -g^{-1} (d g) g^{-1}).
Eigen::MatrixXd fd_ricci(const MetricFn& g, const std::vector<double>& p,
                         const FdConfig& cfg = {});

// Hess u (i, j) = d_i d_j u - Gamma^k_{ij} d_k u.
Eigen::MatrixXd fd_hessian(const MetricFn& g, const ScalarFn& u,
                           const std::vector<double>& p,
                           const FdConfig& cfg = {});

// The n-dimensional conformal base metric diag(eps_i / phi^2) as a black box.
MetricFn conformal_base_metric(const WarpedSpec& spec);

// The (n+m)-dimensional warped metric diag(eps_i / phi^2, f^2 I_m) with a
// flat fiber factor; profile arguments read xi from the first n coordinates.
MetricFn warped_product_metric(const WarpedSpec& spec);

// h as a function of the first n coordinates (n-dim or (n+m)-dim points).
ScalarFn potential_scalar(const WarpedSpec& spec);

}  // namespace qewarp::oracle
