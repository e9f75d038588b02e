#include "qewarp/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qewarp/families.hpp"
#include "qewarp/serialization.hpp"

namespace qewarp {
namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw SpecError(what + ": not a number: \"" + s + "\"");
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  const double v = parse_double(s, what);
  if (v != std::floor(v)) throw SpecError(what + ": not an integer: \"" + s + "\"");
  return static_cast<int>(v);
}

void require_samples(const RunConfig& cfg) {
  if (cfg.samples < 3) throw SpecError("samples must be >= 3");
}

double max_residual(const ResidualReport& rep) {
  return std::max(std::max(rep.pde_offdiag.max_abs, rep.pde_diag.max_abs),
                  std::max(rep.pde_fiber.max_abs, rep.ode_system.max_abs));
}

// One sweep cell: power-law family on the all-plus signature with the first
// coordinate direction.
struct SweepCell {
  int n = 3;
  int m = 1;
  double k = 1.0;
  double r = 2.0;
  Branch branch = Branch::plus;
};

WarpedSpec cell_spec(const SweepCell& cell, PowerLawFamily* built) {
  FamilyParams p;
  p.k = cell.k;
  p.branch = cell.branch;
  PowerLawFamily fam = cell.r == 1.0
                           ? power_law_r1_family(cell.n, cell.m, p)
                           : power_law_family(cell.n, cell.m, cell.r, p);
  Signature sig(std::vector<int>(static_cast<size_t>(cell.n), 1));
  std::vector<double> alpha(static_cast<size_t>(cell.n), 0.0);
  alpha[0] = 1.0;
  Direction dir(sig, alpha);
  if (built) *built = fam;
  return WarpedSpec::make(cell.n, cell.m, cell.r, 0.0, 0.0, std::move(sig),
                          std::move(dir), fam.f, fam.phi, fam.h);
}

}  // namespace

ToleranceProfile resolve_profile(const std::optional<ToleranceProfile>& flag,
                                 bool family_is_numeric) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QEWARP_DEFAULT_PROFILE")) {
    const std::string s = env;
    if (s == "analytic") return ToleranceProfile::analytic;
    if (s == "numeric") return ToleranceProfile::numeric;
    if (!s.empty())
      throw SpecError("QEWARP_DEFAULT_PROFILE must be \"analytic\" or \"numeric\"");
  }
  return family_is_numeric ? ToleranceProfile::numeric
                           : ToleranceProfile::analytic;
}

int run_generate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_samples(cfg);
  if (cfg.spec_path.empty()) throw SpecError("generate requires --spec");
  if (cfg.output_path.empty()) throw SpecError("generate requires --out");
  const SpecDocument doc = load_spec_file(cfg.spec_path);

  const std::vector<double> xis =
      sample_xis(doc.spec.f.domain(), cfg.samples);
  write_file_atomic(cfg.output_path, profile_table_csv(doc.spec, xis));
  out << "wrote " << cfg.output_path << " (" << xis.size() << " rows)\n";

  nlohmann::ordered_json side;
  side["spec"] = save_spec(doc);
  side["derived"] = doc.derived;
  const std::string side_path = cfg.output_path + ".json";
  write_file_atomic(side_path, side.dump(2) + "\n");
  out << "wrote " << side_path << "\n";

  if (doc.implicit) {
    const std::string table_path = cfg.output_path + ".integration.csv";
    write_file_atomic(table_path, integration_table_csv(*doc.implicit));
    out << "wrote " << table_path << " (" << doc.implicit->table.size()
        << " rows)\n";
  }
  return kExitPass;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_samples(cfg);
  if (cfg.spec_path.empty()) throw SpecError("verify requires --spec");
  const SpecDocument doc = load_spec_file(cfg.spec_path);
  const ToleranceProfile profile =
      resolve_profile(cfg.profile, doc.family_tag == "implicit");

  const std::vector<double> xis =
      sample_xis(doc.spec.f.domain(), cfg.samples);
  const ResidualReport rep = verify_spec(doc.spec, xis, profile);

  if (!cfg.output_path.empty()) {
    write_file_atomic(cfg.output_path, report_to_json(rep).dump(2) + "\n");
    write_file_atomic(cfg.output_path + ".txt", report_to_text(rep));
    MuTrace mu;
    mu.trace = rep.mu_trace;
    write_file_atomic(cfg.output_path + ".mu.csv", mu_trace_csv(mu));
  }
  out << report_to_text(rep);
  return rep.pass ? kExitPass : kExitVerifyFail;
}

std::string sweep_csv(const RunConfig& cfg, bool* all_pass) {
  require_samples(cfg);
  if (cfg.grid.empty())
    throw InvalidRequestError("sweep requires at least one --grid axis");

  SweepCell defaults;
  std::vector<std::string> seen;
  for (const auto& [key, values] : cfg.grid) {
    if (key != "n" && key != "m" && key != "k" && key != "r" && key != "branch")
      throw SpecError("unknown grid axis \"" + key +
                      "\" (expected n, m, k, r, branch)");
    for (const auto& s : seen)
      if (s == key) throw SpecError("duplicate grid axis \"" + key + "\"");
    seen.push_back(key);
    if (values.empty())
      throw InvalidRequestError("grid axis \"" + key + "\" has no values");
  }

  // Row-major enumeration: the first declared axis is outermost.
  std::vector<size_t> idx(cfg.grid.size(), 0);
  std::ostringstream os;
  os << "n,m,k,r,branch,admissible,max_residual,mu_mean\n";
  bool pass = true;
  bool done = false;
  while (!done) {
    SweepCell cell = defaults;
    for (size_t a = 0; a < cfg.grid.size(); ++a) {
      const auto& [key, values] = cfg.grid[a];
      const std::string& v = values[idx[a]];
      if (key == "n") cell.n = parse_int(v, "grid n");
      else if (key == "m") cell.m = parse_int(v, "grid m");
      else if (key == "k") cell.k = parse_double(v, "grid k");
      else if (key == "r") cell.r = parse_double(v, "grid r");
      else cell.branch = v == "minus" ? Branch::minus : v == "plus"
                             ? Branch::plus
                             : throw SpecError("grid branch: expected plus or "
                                               "minus, got \"" + v + "\"");
    }

    os << cell.n << ',' << cell.m << ',' << fmt_g(cell.k) << ','
       << fmt_g(cell.r) << ','
       << (cell.branch == Branch::plus ? "plus" : "minus") << ',';
    try {
      PowerLawFamily fam;
      const WarpedSpec spec = cell_spec(cell, &fam);
      const ToleranceProfile profile = resolve_profile(cfg.profile, false);
      const std::vector<double> xis = sample_xis(fam.domain, cfg.samples);
      const ResidualReport rep = verify_spec(spec, xis, profile);
      if (!rep.pass) pass = false;
      os << "yes," << fmt_g(max_residual(rep)) << ',' << fmt_g(rep.mu_mean)
         << '\n';
    } catch (const Error&) {
      os << "no,,\n";
    }

    done = true;
    for (size_t a = cfg.grid.size(); a-- > 0;) {
      if (++idx[a] < cfg.grid[a].second.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
  }
  if (all_pass) *all_pass = pass;
  return os.str();
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  bool all_pass = false;
  const std::string body = sweep_csv(cfg, &all_pass);
  if (!cfg.output_path.empty()) {
    write_file_atomic(cfg.output_path, body);
    out << "wrote " << cfg.output_path << "\n";
  } else {
    out << body;
  }
  return all_pass ? kExitPass : kExitVerifyFail;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::generate:
        return run_generate(cfg, out, err);
      case Command::verify:
        return run_verify(cfg, out, err);
      case Command::sweep:
        return run_sweep(cfg, out, err);
      case Command::oracle:
        throw SpecError("oracle command is provided by the oracle backend");
    }
    throw SpecError("unknown command");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qewarp
