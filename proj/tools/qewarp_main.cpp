#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qewarp/oracle/oracle_runner.hpp"
#include "qewarp/runner.hpp"

namespace {

// --grid k=0.5,1,2 -> axis ("k", {"0.5","1","2"})
bool parse_grid_axis(const std::string& text,
                     std::pair<std::string, std::vector<std::string>>* axis) {
  const size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) return false;
  axis->first = text.substr(0, eq);
  axis->second.clear();
  size_t pos = eq + 1;
  while (pos <= text.size()) {
    const size_t comma = text.find(',', pos);
    const size_t end = comma == std::string::npos ? text.size() : comma;
    if (end == pos) return false;
    axis->second.push_back(text.substr(pos, end - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return !axis->second.empty();
}

void add_common(CLI::App* cmd, qewarp::RunConfig* cfg,
                std::vector<std::string>* grid_args,
                std::string* profile_arg) {
  cmd->add_option("--spec", cfg->spec_path, "spec JSON path");
  cmd->add_option("--out", cfg->output_path, "output file path");
  cmd->add_option("--samples", cfg->samples, "number of xi samples (>= 3)");
  cmd->add_option("--profile", *profile_arg,
                  "tolerance profile: analytic or numeric");
  cmd->add_option_function<uint64_t>(
      "--seed", [cfg](const uint64_t& s) { cfg->seed = s; },
      "random seed (oracle)");
  cmd->add_option("--grid", *grid_args,
                  "sweep axis KEY=v1,v2,... (repeatable; keys n,m,k,r,branch)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warped-product quasi-Einstein construction and verification"};
  app.require_subcommand(1);

  qewarp::RunConfig cfg;
  std::vector<std::string> grid_args;
  std::string profile_arg;

  CLI::App* generate =
      app.add_subcommand("generate", "construct a family and write its table");
  CLI::App* verify =
      app.add_subcommand("verify", "evaluate every residual for a spec");
  CLI::App* sweep =
      app.add_subcommand("sweep", "verify a grid of power-law cells");
  CLI::App* oracle = app.add_subcommand(
      "oracle", "compare the engine against finite differences");
  for (CLI::App* cmd : {generate, verify, sweep, oracle})
    add_common(cmd, &cfg, &grid_args, &profile_arg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 exits 0 for --help; anything else is a usage error.
    return code == 0 ? qewarp::kExitPass : qewarp::kExitUsage;
  }

  if (generate->parsed()) cfg.command = qewarp::Command::generate;
  if (verify->parsed()) cfg.command = qewarp::Command::verify;
  if (sweep->parsed()) cfg.command = qewarp::Command::sweep;
  if (oracle->parsed()) cfg.command = qewarp::Command::oracle;

  if (!profile_arg.empty()) {
    if (profile_arg == "analytic") {
      cfg.profile = qewarp::ToleranceProfile::analytic;
    } else if (profile_arg == "numeric") {
      cfg.profile = qewarp::ToleranceProfile::numeric;
    } else {
      std::cerr << "error: --profile must be analytic or numeric\n";
      return qewarp::kExitUsage;
    }
  }
  for (const std::string& text : grid_args) {
    std::pair<std::string, std::vector<std::string>> axis;
    if (!parse_grid_axis(text, &axis)) {
      std::cerr << "error: bad --grid value \"" << text
                << "\" (expected KEY=v1,v2,...)\n";
      return qewarp::kExitUsage;
    }
    cfg.grid.push_back(std::move(axis));
  }

  return qewarp::oracle::run_any(cfg, std::cout, std::cerr);
}
