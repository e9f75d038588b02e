#pragma once

/// @file oracle_runner.hpp
/// The CLI's oracle command: seeded random specs, engine-vs-finite-difference
/// deviation table, pass iff the worst deviation stays within 1e-5.

#include <cstdint>
#include <ostream>
#include <string>

#include "qewarp/runner.hpp"

namespace qewarp::oracle {

inline constexpr double kOracleTolerance = 1e-5;

struct OracleDeviation {
  double christoffel = 0.0;
  double ricci_base = 0.0;
  double hessian = 0.0;
  double ricci_warped = 0.0;
  double max() const;
};

// Deviations between the closed-form engine and the finite-difference
// referee for one spec at one point.
OracleDeviation compare_curvature(const WarpedSpec& spec,
                                  const std::vector<double>& base_point);

// CSV body: one row per seeded random spec. Stores the largest deviation
// over all rows into worst when non-null.
std::string oracle_csv(uint64_t seed, int count, double* worst);

// Requires cfg.seed; writes the table to cfg.output_path when set. Exit 0
// iff the worst deviation is within tolerance.
int run_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full dispatch including the oracle command; everything else is forwarded
// to qewarp::run.
int run_any(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qewarp::oracle
