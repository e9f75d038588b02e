#pragma once

/// @file random_specs.hpp
/// Seeded random smooth specs for oracle comparisons. Profiles are
/// exp(c0 + c1 xi + c2 xi^2) with small coefficients, so every curvature
/// quantity is smooth and moderately sized; these are generic non-solutions,
/// exercising the tensor algebra rather than any family.

#include <random>
#include <vector>

#include "qewarp/geometry.hpp"

namespace qewarp::oracle {

// Uniform double in [lo, hi) built from the top 53 bits of the engine,
// identical across platforms (std::uniform_real_distribution is not).
double uniform(std::mt19937_64& eng, double lo, double hi);

// n in {3,4,5}, m in {1,2,3}, r in [0.5, 3.5], random signature, non-null
// direction (|sum eps alpha^2| >= 0.5 before normalization), rho = lambda_F
// = 0, exp-quadratic profiles with coefficients in [-0.3, 0.3] (|c2| <= 0.15).
WarpedSpec random_smooth_spec(std::mt19937_64& eng);

// Evaluation point with |xi| bounded by ~0.8: coordinates are uniform in
// [-c, c], c = 0.8 / max(1, sum_i |alpha_i|).
std::vector<double> random_point(std::mt19937_64& eng, const WarpedSpec& spec,
                                 int dim);

}  // namespace qewarp::oracle
