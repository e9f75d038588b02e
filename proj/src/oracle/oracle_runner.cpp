#include "qewarp/oracle/oracle_runner.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "qewarp/curvature.hpp"
#include "qewarp/oracle/fd_curvature.hpp"
#include "qewarp/oracle/random_specs.hpp"
#include "qewarp/serialization.hpp"

namespace qewarp::oracle {
namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

double OracleDeviation::max() const {
  return std::max(std::max(christoffel, ricci_base),
                  std::max(hessian, ricci_warped));
}

OracleDeviation compare_curvature(const WarpedSpec& spec,
                                  const std::vector<double>& base_point) {
  OracleDeviation dev;
  const MetricFn base_metric = conformal_base_metric(spec);

  const auto engine_gamma = christoffel_conformal(spec, base_point);
  const auto fd_gamma = fd_christoffel(base_metric, base_point);
  for (int k = 0; k < spec.n; ++k) {
    dev.christoffel =
        std::max(dev.christoffel,
                 max_abs_diff(engine_gamma[static_cast<size_t>(k)],
                              fd_gamma[static_cast<size_t>(k)]));
  }

  dev.ricci_base = max_abs_diff(ricci_conformal(spec, base_point),
                                fd_ricci(base_metric, base_point));

  dev.hessian = max_abs_diff(
      hessian_conformal(spec, Which::h, base_point),
      fd_hessian(base_metric, potential_scalar(spec), base_point));

  // Full warped metric: engine base block and fiber coefficient against the
  // finite-difference Ricci of the (n+m)-dimensional metric. The fiber block
  // must be fiber_coeff * I_m and the mixed block must vanish.
  const CurvatureBlock engine_warped = warped_ricci(spec, base_point);
  std::vector<double> full_point = base_point;
  full_point.resize(static_cast<size_t>(spec.n + spec.m), 0.1);
  const Eigen::MatrixXd fd_full =
      fd_ricci(warped_product_metric(spec), full_point);
  dev.ricci_warped = max_abs_diff(engine_warped.base,
                                  fd_full.topLeftCorner(spec.n, spec.n));
  for (int a = 0; a < spec.m; ++a) {
    for (int b = 0; b < spec.m; ++b) {
      const double want = a == b ? engine_warped.fiber_coeff : 0.0;
      dev.ricci_warped =
          std::max(dev.ricci_warped,
                   std::abs(fd_full(spec.n + a, spec.n + b) - want));
    }
  }
  dev.ricci_warped = std::max(
      dev.ricci_warped,
      fd_full.topRightCorner(spec.n, spec.m).cwiseAbs().maxCoeff());
  return dev;
}

std::string oracle_csv(uint64_t seed, int count, double* worst) {
  if (count < 1) throw InvalidRequestError("oracle needs at least one spec");
  std::mt19937_64 eng(seed);
  std::ostringstream os;
  os << "index,n,m,r,causal_class,dev_christoffel,dev_ricci,dev_hessian,"
        "dev_ricci_warped,max_deviation\n";
  double w = 0.0;
  for (int i = 0; i < count; ++i) {
    const WarpedSpec spec = random_smooth_spec(eng);
    const std::vector<double> p = random_point(eng, spec, spec.n);
    const OracleDeviation dev = compare_curvature(spec, p);
    w = std::max(w, dev.max());
    os << i << ',' << spec.n << ',' << spec.m << ',' << fmt_g(spec.r) << ','
       << spec.causal_class() << ',' << fmt_g(dev.christoffel) << ','
       << fmt_g(dev.ricci_base) << ',' << fmt_g(dev.hessian) << ','
       << fmt_g(dev.ricci_warped) << ',' << fmt_g(dev.max()) << '\n';
  }
  if (worst) *worst = w;
  return os.str();
}

int run_oracle(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (!cfg.seed) throw SpecError("oracle requires --seed");
  double worst = 0.0;
  const std::string body = oracle_csv(*cfg.seed, 20, &worst);
  if (!cfg.output_path.empty()) {
    write_file_atomic(cfg.output_path, body);
    out << "wrote " << cfg.output_path << "\n";
  } else {
    out << body;
  }
  out << "worst deviation " << fmt_g(worst) << " (tolerance "
      << fmt_g(kOracleTolerance) << ")\n";
  return worst <= kOracleTolerance ? kExitPass : kExitVerifyFail;
}

int run_any(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == Command::oracle) {
    try {
      return run_oracle(cfg, out, err);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return qewarp::run(cfg, out, err);
}

}  // namespace qewarp::oracle
