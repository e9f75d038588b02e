#pragma once

/// @file runner.hpp
/// Command implementations behind the CLI. Everything here is a pure
/// function of (config, seed): given the same inputs the emitted files are
/// byte-identical. Exit codes: 0 pass, 1 verification fail, 2 usage or I/O
/// error.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qewarp/verifier.hpp"

namespace qewarp {

enum class Command { generate, verify, sweep, oracle };

struct RunConfig {
  Command command = Command::verify;
  std::string spec_path;
  std::string output_path;
  std::optional<ToleranceProfile> profile;  // unset: family default / env
  int samples = 101;
  std::optional<uint64_t> seed;
  // Sweep axes in declaration order; keys from {k, r, n, m, branch}.
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitUsage = 2;

// Dispatches config.command. Diagnostics go to err, results to out. The
// oracle command lives in the finite-difference backend library; run()
// rejects it so the core library never links against its own referee.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Tolerance profile resolution order: --profile flag, QEWARP_DEFAULT_PROFILE
// environment variable, then the family default (numeric for integrated
// profiles, analytic for closed forms).
ToleranceProfile resolve_profile(const std::optional<ToleranceProfile>& flag,
                                 bool family_is_numeric);

// Sweep summary body: one CSV row per grid cell, row-major in the declared
// axis order, inadmissible cells retained with empty residual fields. Sets
// all_pass to whether every admissible cell verified.
std::string sweep_csv(const RunConfig& cfg, bool* all_pass);

}  // namespace qewarp
