#include "qewarp/serialization.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qewarp/expression.hpp"

namespace qewarp {
namespace {

using ojson = nlohmann::ordered_json;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double number_at(const ojson& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("missing field: ") + key);
  const auto& v = j.at(key);
  if (!v.is_number()) throw SpecError(std::string("field is not a number: ") + key);
  return v.get<double>();
}

double number_or(const ojson& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return number_at(j, key);
}

int int_at(const ojson& j, const char* key) {
  double v = number_at(j, key);
  if (v != std::floor(v)) throw SpecError(std::string("field is not an integer: ") + key);
  return static_cast<int>(v);
}

std::string string_at(const ojson& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("missing field: ") + key);
  const auto& v = j.at(key);
  if (!v.is_string()) throw SpecError(std::string("field is not a string: ") + key);
  return v.get<std::string>();
}

// Infinite interval ends are encoded as null.
ojson endpoint_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

double endpoint_from_json(const ojson& v, double inf_value) {
  if (v.is_null()) return inf_value;
  if (!v.is_number()) throw SpecError("interval endpoint is not a number or null");
  return v.get<double>();
}

ojson interval_to_json(const Interval& iv) {
  return ojson::array({endpoint_to_json(iv.lo), endpoint_to_json(iv.hi)});
}

Interval interval_from_json(const ojson& j, const char* key) {
  if (!j.is_array() || j.size() != 2)
    throw SpecError(std::string(key) + " must be a two-element array");
  Interval iv;
  iv.lo = endpoint_from_json(j.at(0), -kInf);
  iv.hi = endpoint_from_json(j.at(1), kInf);
  if (!(iv.lo < iv.hi)) throw SpecError(std::string(key) + " is empty");
  return iv;
}

ojson domain_to_json(const Domain& d) {
  ojson j;
  j["span"] = interval_to_json(d.span);
  if (d.puncture) j["puncture"] = *d.puncture;
  return j;
}

Branch branch_from_string(const std::string& s) {
  if (s == "plus") return Branch::plus;
  if (s == "minus") return Branch::minus;
  throw SpecError("branch must be \"plus\" or \"minus\", got \"" + s + "\"");
}

FamilyParams family_params_from_json(const ojson& fam) {
  FamilyParams p;
  p.k = number_at(fam, "k");
  p.c = number_or(fam, "c", 1.0);
  p.c1 = number_or(fam, "c1", 1.0);
  p.c2 = number_or(fam, "c2", 1.0);
  p.c3 = number_or(fam, "c3", 1.0);
  if (fam.contains("branch")) p.branch = branch_from_string(string_at(fam, "branch"));
  return p;
}

ojson family_params_to_json(const std::string& type, const FamilyParams& p,
                            bool with_branch) {
  ojson fam;
  fam["type"] = type;
  fam["k"] = p.k;
  fam["c"] = p.c;
  fam["c1"] = p.c1;
  fam["c2"] = p.c2;
  fam["c3"] = p.c3;
  if (with_branch) fam["branch"] = p.branch == Branch::plus ? "plus" : "minus";
  return fam;
}

void require_zero_sources(double rho, double lambda_F, const std::string& type) {
  if (rho != 0.0 || lambda_F != 0.0)
    throw SpecError("family \"" + type + "\" requires rho = 0 and lambda_F = 0");
}

void require_class(const Direction& dir, bool want_null, const std::string& type) {
  const bool is_null = dir.causal_class() == 0;
  if (want_null && !is_null)
    throw SpecError("family \"" + type + "\" requires a null direction");
  if (!want_null && is_null)
    throw SpecError("family \"" + type + "\" requires a non-null direction");
}

ojson equation_residual_to_json(const EquationResidual& e) {
  ojson j;
  j["max_abs"] = e.max_abs;
  j["argmax_xi"] = e.argmax_xi;
  return j;
}

EquationResidual equation_residual_from_json(const ojson& j) {
  EquationResidual e;
  e.max_abs = number_at(j, "max_abs");
  e.argmax_xi = number_at(j, "argmax_xi");
  return e;
}

}  // namespace

SpecDocument load_spec(const ojson& doc) {
  SpecDocument out;
  const int n = int_at(doc, "n");
  const int m = int_at(doc, "m");
  const double r = number_at(doc, "r");
  const double rho = number_or(doc, "rho", 0.0);
  const double lambda_F = number_or(doc, "lambda_F", 0.0);

  if (!doc.contains("eps") || !doc.at("eps").is_array())
    throw SpecError("missing field: eps (array of +-1)");
  std::vector<int> eps;
  for (const auto& e : doc.at("eps")) {
    if (!e.is_number()) throw SpecError("eps entries must be +-1");
    const double v = e.get<double>();
    if (v != 1.0 && v != -1.0) throw SpecError("eps entries must be +-1");
    eps.push_back(static_cast<int>(v));
  }
  if (!doc.contains("alpha") || !doc.at("alpha").is_array())
    throw SpecError("missing field: alpha (array)");
  std::vector<double> alpha;
  for (const auto& a : doc.at("alpha")) {
    if (!a.is_number()) throw SpecError("alpha entries must be numbers");
    alpha.push_back(a.get<double>());
  }

  Signature sig(eps);
  Direction dir(sig, alpha);

  if (!doc.contains("family") || !doc.at("family").is_object())
    throw SpecError("missing field: family (object with a \"type\" tag)");
  const ojson& fam = doc.at("family");
  const std::string type = string_at(fam, "type");
  out.family_tag = type;

  Profile f, phi, h;
  ojson derived;
  derived["family"] = type;

  if (type == "power_law" || type == "power_law_r1") {
    require_zero_sources(rho, lambda_F, type);
    require_class(dir, false, type);
    if (type == "power_law_r1" && r != 1.0)
      throw SpecError("family \"power_law_r1\" requires r = 1");
    FamilyParams p = family_params_from_json(fam);
    PowerLawFamily built =
        type == "power_law" ? power_law_family(n, m, r, p) : power_law_r1_family(n, m, p);
    f = built.f;
    phi = built.phi;
    h = built.h;
    out.family = family_params_to_json(type, p, type == "power_law");
    derived["a"] = built.a;
    derived["b"] = built.b;
    derived["N"] = built.N;
    if (type == "power_law") derived["discriminant"] = built.discriminant;
    derived["boundary"] = built.boundary;
    derived["domain"] = domain_to_json(built.domain);
  } else if (type == "exp_null") {
    require_zero_sources(rho, lambda_F, type);
    require_class(dir, true, type);
    ExpNullParams p;
    p.k1 = number_or(fam, "k1", 1.0);
    p.k2 = number_or(fam, "k2", 1.0);
    p.A = number_at(fam, "A");
    p.B = number_at(fam, "B");
    p.c1_h = number_or(fam, "c1_h", 1.0);
    p.c2_h = number_or(fam, "c2_h", 1.0);
    ExpNullFamily built = exp_null_family(n, m, r, p);
    f = built.f;
    phi = built.phi;
    h = built.h;
    out.family = {{"type", type},     {"k1", p.k1},     {"k2", p.k2},
                  {"A", p.A},         {"B", p.B},       {"c1_h", p.c1_h},
                  {"c2_h", p.c2_h}};
    derived["C"] = built.C;
    derived["exponent_plus"] = built.exponent_plus;
    derived["exponent_minus"] = built.exponent_minus;
    derived["domain"] = domain_to_json(built.domain);
  } else if (type == "cauchy_euler") {
    require_zero_sources(rho, lambda_F, type);
    require_class(dir, true, type);
    CauchyEulerParams p;
    p.c1_h = number_or(fam, "c1_h", 1.0);
    p.c2_h = number_or(fam, "c2_h", 1.0);
    CauchyEulerFamily built = cauchy_euler_family(n, m, r, p);
    f = built.f;
    phi = built.phi;
    h = built.h;
    out.family = {{"type", type}, {"c1_h", p.c1_h}, {"c2_h", p.c2_h}};
    derived["q"] = built.q;
    derived["lambda"] = built.lambda;
    derived["regime"] = to_string(built.regime);
    derived["domain"] = domain_to_json(built.domain);
  } else if (type == "implicit") {
    require_zero_sources(rho, lambda_F, type);
    require_class(dir, false, type);
    const double k = number_at(fam, "k");
    const double x0 = number_at(fam, "x0");
    const double z0 = number_at(fam, "z0");
    if (!fam.contains("xi_range"))
      throw SpecError("missing field: xi_range ([lo, hi])");
    Interval range = interval_from_json(fam.at("xi_range"), "xi_range");
    if (!range.bounded()) throw SpecError("xi_range must be bounded");
    IntegratorConfig cfg;
    cfg.step = number_or(fam, "step", cfg.step);
    cfg.tolerance = number_or(fam, "tolerance", cfg.tolerance);
    cfg.max_steps = static_cast<long>(number_or(
        fam, "max_steps", static_cast<double>(cfg.max_steps)));
    ImplicitFamily built = integrate_implicit_family(n, m, r, k, x0, z0, range, cfg);
    f = built.f;
    phi = built.phi;
    h = built.h;
    out.family = {{"type", type},
                  {"k", k},
                  {"x0", x0},
                  {"z0", z0},
                  {"xi_range", interval_to_json(range)},
                  {"step", cfg.step},
                  {"tolerance", cfg.tolerance},
                  {"max_steps", static_cast<double>(cfg.max_steps)}};
    derived["a"] = built.a;
    derived["b"] = built.b;
    derived["stop"] = to_string(built.stop);
    derived["rows"] = static_cast<double>(built.table.size());
    derived["domain"] = domain_to_json(built.domain);
    out.implicit = std::move(built);
  } else if (type == "custom") {
    const std::string fs = string_at(fam, "f");
    const std::string ps = string_at(fam, "phi");
    const std::string hs = string_at(fam, "h");
    Domain dom;
    if (fam.contains("domain")) dom.span = interval_from_json(fam.at("domain"), "domain");
    if (fam.contains("puncture")) dom.puncture = number_at(fam, "puncture");
    f = Expression::parse(fs).profile(dom);
    phi = Expression::parse(ps).profile(dom);
    h = Expression::parse(hs).profile(dom);
    out.family = {{"type", type}, {"f", fs}, {"phi", ps}, {"h", hs},
                  {"domain", interval_to_json(dom.span)}};
    if (dom.puncture) out.family["puncture"] = *dom.puncture;
    derived["domain"] = domain_to_json(dom);
  } else {
    throw SpecError("unknown family type \"" + type + "\"");
  }

  out.spec = WarpedSpec::make(n, m, r, rho, lambda_F, std::move(sig),
                              std::move(dir), std::move(f), std::move(phi),
                              std::move(h));
  out.derived = std::move(derived);
  return out;
}

SpecDocument load_spec_file(const std::string& path) {
  ojson doc;
  try {
    doc = ojson::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(path + ": " + e.what());
  }
  return load_spec(doc);
}

ojson save_spec(const SpecDocument& doc) {
  ojson j;
  j["n"] = doc.spec.n;
  j["m"] = doc.spec.m;
  j["r"] = doc.spec.r;
  j["rho"] = doc.spec.rho;
  j["lambda_F"] = doc.spec.lambda_F;
  j["eps"] = doc.spec.signature.entries();
  j["alpha"] = doc.spec.direction.alpha();
  j["family"] = doc.family;
  return j;
}

ojson report_to_json(const ResidualReport& rep) {
  ojson j;
  j["profile"] = to_string(rep.profile);
  j["pass"] = rep.pass;
  j["pde_offdiag"] = equation_residual_to_json(rep.pde_offdiag);
  j["pde_diag"] = equation_residual_to_json(rep.pde_diag);
  j["pde_fiber"] = equation_residual_to_json(rep.pde_fiber);
  j["ode_system"] = equation_residual_to_json(rep.ode_system);
  ojson mu;
  mu["mean"] = rep.mu_mean;
  mu["spread"] = rep.mu_spread;
  mu["constant"] = rep.mu_constant;
  ojson trace = ojson::array();
  for (const auto& [xi, v] : rep.mu_trace)
    trace.push_back(ojson::array({xi, v}));
  mu["trace"] = std::move(trace);
  j["mu"] = std::move(mu);
  return j;
}

ResidualReport report_from_json(const ojson& j) {
  ResidualReport rep;
  const std::string prof = string_at(j, "profile");
  if (prof == "analytic")
    rep.profile = ToleranceProfile::analytic;
  else if (prof == "numeric")
    rep.profile = ToleranceProfile::numeric;
  else
    throw SpecError("unknown tolerance profile \"" + prof + "\"");
  if (!j.contains("pass") || !j.at("pass").is_boolean())
    throw SpecError("missing field: pass");
  rep.pass = j.at("pass").get<bool>();
  rep.pde_offdiag = equation_residual_from_json(j.at("pde_offdiag"));
  rep.pde_diag = equation_residual_from_json(j.at("pde_diag"));
  rep.pde_fiber = equation_residual_from_json(j.at("pde_fiber"));
  rep.ode_system = equation_residual_from_json(j.at("ode_system"));
  const ojson& mu = j.at("mu");
  rep.mu_mean = number_at(mu, "mean");
  rep.mu_spread = number_at(mu, "spread");
  rep.mu_constant = mu.at("constant").get<bool>();
  for (const auto& row : mu.at("trace"))
    rep.mu_trace.emplace_back(row.at(0).get<double>(),
                                     row.at(1).get<double>());
  return rep;
}

std::string report_to_text(const ResidualReport& rep) {
  std::ostringstream os;
  char line[160];
  auto row = [&](const char* name, const EquationResidual& e) {
    std::snprintf(line, sizeof line, "  %-12s max |residual| %-24s at xi = %s\n",
                  name, fmt_g(e.max_abs).c_str(), fmt_g(e.argmax_xi).c_str());
    os << line;
  };
  os << "residual report [" << to_string(rep.profile) << "]\n";
  row("pde_offdiag", rep.pde_offdiag);
  row("pde_diag", rep.pde_diag);
  row("pde_fiber", rep.pde_fiber);
  row("ode_system", rep.ode_system);
  std::snprintf(line, sizeof line,
                "  %-12s mean %s  spread %s  constant %s\n", "mu",
                fmt_g(rep.mu_mean).c_str(), fmt_g(rep.mu_spread).c_str(),
                rep.mu_constant ? "yes" : "no");
  os << line;
  os << "  verdict      " << (rep.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

ojson certificate_to_json(const AssemblyCertificate& cert) {
  ojson j;
  j["granted"] = cert.granted;
  j["mu_certified"] = cert.mu_certified;
  j["fiber2_mu"] = cert.fiber2_mu;
  j["mismatch"] = cert.mismatch;
  j["fiber2_dim"] = cert.fiber2_dim;
  j["detail"] = cert.detail;
  return j;
}

std::string profile_table_csv(const WarpedSpec& spec,
                              std::span<const double> xis) {
  std::ostringstream os;
  os << "xi,f,fp,fpp,phi,php,phpp,h,hp,hpp\n";
  for (double xi : xis) {
    os << fmt_g(xi) << ',' << fmt_g(spec.f.value(xi)) << ','
       << fmt_g(spec.f.d1(xi)) << ',' << fmt_g(spec.f.d2(xi)) << ','
       << fmt_g(spec.phi.value(xi)) << ',' << fmt_g(spec.phi.d1(xi)) << ','
       << fmt_g(spec.phi.d2(xi)) << ',' << fmt_g(spec.h.value(xi)) << ','
       << fmt_g(spec.h.d1(xi)) << ',' << fmt_g(spec.h.d2(xi)) << '\n';
  }
  return os.str();
}

std::string integration_table_csv(const ImplicitFamily& fam) {
  std::ostringstream os;
  os << "xi,x,z,f,phi,h,local_error\n";
  for (const OdeState& s : fam.table) {
    os << fmt_g(s.xi) << ',' << fmt_g(s.x) << ',' << fmt_g(s.z) << ','
       << fmt_g(s.f) << ',' << fmt_g(s.phi) << ',' << fmt_g(s.h) << ','
       << fmt_g(s.local_error) << '\n';
  }
  return os.str();
}

std::string mu_trace_csv(const MuTrace& mu) {
  std::ostringstream os;
  os << "xi,mu\n";
  for (const auto& [xi, v] : mu.trace) os << fmt_g(xi) << ',' << fmt_g(v) << '\n';
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("cannot write file: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot move " + tmp + " into place at " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace qewarp
