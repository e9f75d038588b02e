#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qewarp/runner.hpp"
#include "qewarp/serialization.hpp"

using namespace qewarp;
using ojson = nlohmann::ordered_json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("qewarp_run_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

struct EnvGuard {
  std::string name;
  std::string saved;
  bool had = false;
  explicit EnvGuard(const char* var) : name(var) {
    if (const char* v = std::getenv(var)) {
      had = true;
      saved = v;
    }
  }
  ~EnvGuard() {
    if (had)
      ::setenv(name.c_str(), saved.c_str(), 1);
    else
      ::unsetenv(name.c_str());
  }
};

const char* kPowerLawSpec = R"({
  "n": 3, "m": 1, "r": 2,
  "eps": [1, 1, 1], "alpha": [1, 0, 0],
  "family": {"type": "power_law", "k": 1}
})";

// Exact power-law triple written out as expressions: W = s xi + 1 with
// s = 2 sqrt(2) - 2, f = phi = W^(-1/s), h = W^(1/2).
const char* kCustomSolutionSpec = R"__({
  "n": 3, "m": 1, "r": 2, "rho": 0, "lambda_F": 0,
  "eps": [1, 1, 1], "alpha": [1, 0, 0],
  "family": {
    "type": "custom",
    "f": "pow(0.82842712474619029*xi + 1, -1.2071067811865475)",
    "phi": "pow(0.82842712474619029*xi + 1, -1.2071067811865475)",
    "h": "pow(0.82842712474619029*xi + 1, 0.5)",
    "domain": [-1, 10]
  }
})__";

const char* kCustomShiftedSpec = R"__({
  "n": 3, "m": 1, "r": 2, "rho": 0, "lambda_F": 0.1,
  "eps": [1, 1, 1], "alpha": [1, 0, 0],
  "family": {
    "type": "custom",
    "f": "pow(0.82842712474619029*xi + 1, -1.2071067811865475)",
    "phi": "pow(0.82842712474619029*xi + 1, -1.2071067811865475)",
    "h": "pow(0.82842712474619029*xi + 1, 0.5)",
    "domain": [-1, 10]
  }
})__";

const char* kImplicitSpec = R"({
  "n": 3, "m": 1, "r": 2,
  "eps": [1, 1, 1], "alpha": [1, 0, 0],
  "family": {"type": "implicit", "k": 1, "x0": 1, "z0": 0.5,
             "xi_range": [0, 1]}
})";

int run_quiet(const RunConfig& cfg, std::string* out_text = nullptr,
              std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("tolerance profile resolution order") {
  EnvGuard guard("QEWARP_DEFAULT_PROFILE");
  ::unsetenv("QEWARP_DEFAULT_PROFILE");

  CHECK(resolve_profile(std::nullopt, false) == ToleranceProfile::analytic);
  CHECK(resolve_profile(std::nullopt, true) == ToleranceProfile::numeric);
  CHECK(resolve_profile(ToleranceProfile::numeric, false) ==
        ToleranceProfile::numeric);

  ::setenv("QEWARP_DEFAULT_PROFILE", "numeric", 1);
  CHECK(resolve_profile(std::nullopt, false) == ToleranceProfile::numeric);
  // an explicit flag still wins over the environment
  CHECK(resolve_profile(ToleranceProfile::analytic, true) ==
        ToleranceProfile::analytic);

  ::setenv("QEWARP_DEFAULT_PROFILE", "strict", 1);
  CHECK_THROWS_AS(resolve_profile(std::nullopt, false), SpecError);
}

TEST_CASE("generate writes the profile table and sidecar") {
  TempDir tmp;
  write_file_atomic(tmp.file("spec.json"), kPowerLawSpec);

  RunConfig cfg;
  cfg.command = Command::generate;
  cfg.spec_path = tmp.file("spec.json");
  cfg.output_path = tmp.file("table.csv");
  std::string out;
  CHECK(run_quiet(cfg, &out) == kExitPass);
  CHECK(out.find("wrote") != std::string::npos);

  const std::string csv = read_file(tmp.file("table.csv"));
  CHECK(csv.rfind("xi,f,fp,fpp,phi,php,phpp,h,hp,hpp\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);

  const ojson side = ojson::parse(read_file(tmp.file("table.csv.json")));
  CHECK(side.at("spec").at("n").get<int>() == 3);
  CHECK(side.at("derived").at("N").get<double>() ==
        doctest::Approx(1.0 + std::sqrt(2.0)));
  CHECK_FALSE(std::filesystem::exists(tmp.file("table.csv.integration.csv")));
}

TEST_CASE("generate emits the integration table for implicit specs") {
  TempDir tmp;
  write_file_atomic(tmp.file("spec.json"), kImplicitSpec);

  RunConfig cfg;
  cfg.command = Command::generate;
  cfg.spec_path = tmp.file("spec.json");
  cfg.output_path = tmp.file("table.csv");
  cfg.samples = 25;
  CHECK(run_quiet(cfg) == kExitPass);

  const std::string table =
      read_file(tmp.file("table.csv.integration.csv"));
  CHECK(table.rfind("xi,x,z,f,phi,h,local_error\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1002);
}

TEST_CASE("verify splits exit codes on the verdict") {
  TempDir tmp;
  EnvGuard guard("QEWARP_DEFAULT_PROFILE");
  ::unsetenv("QEWARP_DEFAULT_PROFILE");

  SUBCASE("an exact solution passes") {
    write_file_atomic(tmp.file("spec.json"), kCustomSolutionSpec);
    RunConfig cfg;
    cfg.command = Command::verify;
    cfg.spec_path = tmp.file("spec.json");
    cfg.output_path = tmp.file("report.json");
    std::string out;
    CHECK(run_quiet(cfg, &out) == kExitPass);
    CHECK(out.find("verdict      PASS") != std::string::npos);

    const ojson rep = ojson::parse(read_file(tmp.file("report.json")));
    CHECK(rep.at("pass").get<bool>());
    CHECK(rep.at("pde_fiber").at("max_abs").get<double>() <= 1e-9);
    CHECK(read_file(tmp.file("report.json.txt"))
              .find("residual report") != std::string::npos);
    CHECK(read_file(tmp.file("report.json.mu.csv")).rfind("xi,mu\n", 0) ==
          0);
  }
  SUBCASE("a shifted fiber constant fails with the fiber flagged") {
    write_file_atomic(tmp.file("spec.json"), kCustomShiftedSpec);
    RunConfig cfg;
    cfg.command = Command::verify;
    cfg.spec_path = tmp.file("spec.json");
    cfg.output_path = tmp.file("report.json");
    std::string out;
    CHECK(run_quiet(cfg, &out) == kExitVerifyFail);
    CHECK(out.find("verdict      FAIL") != std::string::npos);

    const ojson rep = ojson::parse(read_file(tmp.file("report.json")));
    CHECK_FALSE(rep.at("pass").get<bool>());
    CHECK(rep.at("pde_fiber").at("max_abs").get<double>() > 1e-2);
    CHECK(rep.at("pde_offdiag").at("max_abs").get<double>() <= 1e-9);
    CHECK(rep.at("pde_diag").at("max_abs").get<double>() <= 1e-9);
  }
}

TEST_CASE("usage errors exit with code 2") {
  TempDir tmp;
  std::string err;

  RunConfig missing;
  missing.command = Command::verify;
  missing.spec_path = tmp.file("absent.json");
  CHECK(run_quiet(missing, nullptr, &err) == kExitUsage);
  CHECK(err.find("error:") != std::string::npos);
  CHECK(err.find("absent.json") != std::string::npos);

  RunConfig no_spec;
  no_spec.command = Command::verify;
  CHECK(run_quiet(no_spec) == kExitUsage);

  RunConfig bad_samples;
  bad_samples.command = Command::verify;
  bad_samples.spec_path = tmp.file("spec.json");
  bad_samples.samples = 2;
  CHECK(run_quiet(bad_samples) == kExitUsage);

  RunConfig oracle_cfg;
  oracle_cfg.command = Command::oracle;
  CHECK(run_quiet(oracle_cfg, nullptr, &err) == kExitUsage);

  RunConfig empty_grid;
  empty_grid.command = Command::sweep;
  CHECK(run_quiet(empty_grid) == kExitUsage);

  RunConfig bad_axis;
  bad_axis.command = Command::sweep;
  bad_axis.grid = {{"q", {"1"}}};
  CHECK(run_quiet(bad_axis) == kExitUsage);

  RunConfig dup_axis;
  dup_axis.command = Command::sweep;
  dup_axis.grid = {{"k", {"1"}}, {"k", {"2"}}};
  CHECK(run_quiet(dup_axis) == kExitUsage);
}

TEST_CASE("sweep enumerates the grid row-major") {
  EnvGuard guard("QEWARP_DEFAULT_PROFILE");
  ::unsetenv("QEWARP_DEFAULT_PROFILE");

  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.samples = 31;
  cfg.grid = {{"k", {"0.5", "1", "2"}}, {"r", {"2", "3"}}};

  bool all_pass = false;
  const std::string body = sweep_csv(cfg, &all_pass);
  CHECK(all_pass);
  CHECK(body.rfind("n,m,k,r,branch,admissible,max_residual,mu_mean\n", 0) ==
        0);
  CHECK(std::count(body.begin(), body.end(), '\n') == 7);

  std::istringstream lines(body);
  std::string line;
  std::getline(lines, line);  // header
  const char* expected[] = {"3,1,0.5,2,plus,yes", "3,1,0.5,3,plus,yes",
                            "3,1,1,2,plus,yes",   "3,1,1,3,plus,yes",
                            "3,1,2,2,plus,yes",   "3,1,2,3,plus,yes"};
  for (const char* prefix : expected) {
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind(prefix, 0) == 0);
  }

  // byte-identical on rerun
  const std::string again = sweep_csv(cfg, nullptr);
  CHECK(body == again);
}

TEST_CASE("sweep keeps inadmissible cells with empty fields") {
  EnvGuard guard("QEWARP_DEFAULT_PROFILE");
  ::unsetenv("QEWARP_DEFAULT_PROFILE");

  // k(n-1) = m makes the r = 1 family degenerate at n=3, m=1, k=0.5
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.samples = 31;
  cfg.grid = {{"k", {"0.5", "1"}}, {"r", {"1"}}};

  bool all_pass = false;
  const std::string body = sweep_csv(cfg, &all_pass);
  CHECK(all_pass);  // inadmissible cells do not fail the sweep
  std::istringstream lines(body);
  std::string line;
  std::getline(lines, line);
  REQUIRE(std::getline(lines, line));
  CHECK(line == "3,1,0.5,1,plus,no,,");
  REQUIRE(std::getline(lines, line));
  CHECK(line.rfind("3,1,1,1,plus,yes,", 0) == 0);

  TempDir tmp;
  RunConfig to_file = cfg;
  to_file.output_path = tmp.file("sweep.csv");
  CHECK(run_quiet(to_file) == kExitPass);
  CHECK(read_file(tmp.file("sweep.csv")) == body);
}
