#include "concentra/cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "concentra/deviation.hpp"
#include "concentra/dvoretzky.hpp"
#include "concentra/estimators.hpp"
#include "concentra/grassmann.hpp"
#include "concentra/nets.hpp"
#include "concentra/parallel.hpp"
#include "concentra/special.hpp"

namespace concentra {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(Index v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_double(v[i]);
  return os.str();
}

Report base_report(const ExperimentConfig& cfg) {
  Report r;
  r.metadata["experiment"] = cfg.experiment;
  r.metadata["version"] = kVersion;
  r.metadata["rng"] = kRngIdentity;
  r.metadata["seed"] = std::to_string(cfg.seed);
  if (!cfg.space.empty()) r.metadata["space"] = cfg.space;
  if (!cfg.measure.empty()) r.metadata["measure"] = cfg.measure;
  r.metadata["samples"] = std::to_string(cfg.samples);
  return r;
}

NormedSpace cfg_space(const ExperimentConfig& cfg) {
  if (cfg.space.empty()) throw ConfigError(cfg.experiment + ": --space is required");
  return parse_space(cfg.space);
}

Measure cfg_measure(const ExperimentConfig& cfg, Index dim) {
  return parse_measure(cfg.measure, dim);
}

std::vector<double> require_grid(const std::vector<double>& grid, const char* flag,
                                 std::vector<double> fallback) {
  if (!grid.empty()) return grid;
  if (!fallback.empty()) return fallback;
  throw ConfigError(std::string("missing required grid flag ") + flag);
}

void add_inequality_rows(Report& r, const std::vector<InequalityRow>& rows,
                         const std::string& verdict_name) {
  bool all = true;
  for (const auto& row : rows) {
    r.add_row({fmt(row.parameter), fmt(row.events), fmt(row.trials), fmt(row.p_hat),
               fmt(row.ci.lower), fmt(row.ci.upper), fmt(row.bound), fmt(row.pass)});
    all = all && row.pass;
  }
  r.add_verdict(verdict_name, all);
}

constexpr const char* kIneqColumns[] = {"param",    "events", "trials", "p_hat",
                                        "ci_lower", "ci_upper", "bound", "pass"};

void set_ineq_columns(Report& r) {
  r.columns.assign(std::begin(kIneqColumns), std::end(kIneqColumns));
}

Report run_beta(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  const Measure mu = cfg_measure(cfg, x.dim());
  const ParamEstimate e = beta_parameter(x, mu, cfg.samples, RngStream(cfg.seed));
  Report r = base_report(cfg);
  r.columns = {"space", "measure", "n", "beta", "se", "samples"};
  r.add_row({x.label(), mu.label(), fmt(x.dim()), fmt(e.value), fmt(e.std_error),
             fmt(e.n)});
  return r;
}

Report run_kdim(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  RngStream rng(cfg.seed);
  const ParamEstimate e = dvoretzky_dimension(x, cfg.samples, rng.substream(1));
  const ParamEstimate ov = ov_parameter(x, cfg.samples, rng.substream(2));
  const double nd = static_cast<double>(x.dim());
  Report r = base_report(cfg);
  r.columns = {"space", "n", "b", "k_hat", "se", "k_over_log_n", "k_over_n", "ov"};
  r.add_row({x.label(), fmt(x.dim()), fmt(x.constants().b), fmt(e.value), fmt(e.std_error),
             fmt(e.value / std::log(nd)), fmt(e.value / nd), fmt(ov.value)});
  return r;
}

Report run_theta(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  const Measure mu = cfg_measure(cfg, x.dim());
  const ThetaEstimate e = theta_parameter(x, mu, cfg.samples, RngStream(cfg.seed));
  Report r = base_report(cfg);
  r.columns = {"space", "measure", "median", "density", "bandwidth", "theta", "se"};
  r.add_row({x.label(), mu.label(), fmt(e.median), fmt(e.density), fmt(e.bandwidth),
             fmt(e.theta.value), fmt(e.theta.std_error)});
  return r;
}

Report run_moment(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  const std::vector<double> qs = require_grid(cfg.q_list, "--q", {1.0});
  Report r = base_report(cfg);
  r.metadata["q"] = join_doubles(qs);
  r.columns = {"q", "value", "se"};
  RngStream rng(cfg.seed);
  std::uint64_t idx = 0;
  for (double q : qs) {
    ParamEstimate e;
    if (cfg.experiment == "sphere-moment")
      e = sphere_moment(x, q, cfg.samples, rng.substream(idx++));
    else if (cfg.experiment == "width-moment")
      e = width_moment(x, q, cfg.samples, rng.substream(idx++));
    else
      e = body_moment(x, q, cfg.samples, rng.substream(idx++));
    r.add_row({fmt(q), fmt(e.value), fmt(e.std_error)});
  }
  return r;
}

Report run_anq(const ExperimentConfig& cfg) {
  const std::vector<double> qs = require_grid(cfg.q_list, "--q", {1.0, 2.0, 4.0});
  const double n = static_cast<double>(cfg.n);
  Report r = base_report(cfg);
  r.metadata["n"] = std::to_string(cfg.n);
  r.columns = {"n", "q", "a_nq", "implied_c"};
  for (double q : qs) {
    const double a = a_constant(n, q);
    const double c = q >= n ? a_constant_implied_c(n, q) : std::nan("");
    r.add_row({fmt(n), fmt(q), fmt(a), std::isnan(c) ? "" : fmt(c)});
  }
  return r;
}

Report run_vrad_identity(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  const std::vector<double> ps = require_grid(cfg.q_list, "--q", {1.0, 2.0, 4.0});
  Report r = base_report(cfg);
  r.columns = {"p", "residual", "pass"};
  bool all = true;
  for (double p : ps) {
    const double res = vrad_identity_residual(x, p);
    const bool pass = res < 1e-6;
    all = all && pass;
    r.add_row({fmt(p), fmt(res), fmt(pass)});
  }
  r.add_verdict("vrad-identity-residual<1e-6", all);
  return r;
}

Report run_net(const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed);
  const std::size_t probes = cfg.probes ? cfg.probes : 100000;
  const Net net = build_net(cfg.k, cfg.delta, probes, rng);
  Report r = base_report(cfg);
  r.metadata["k"] = std::to_string(cfg.k);
  r.metadata["delta"] = fmt(cfg.delta);
  r.columns = {"k", "delta", "cardinality", "bound", "probes", "max_gap", "bound_exceeded"};
  r.add_row({fmt(cfg.k), fmt(cfg.delta), fmt(net.cardinality()),
             fmt(net_cardinality_bound(cfg.k, cfg.delta)), fmt(net.certificate.probe_count),
             fmt(net.certificate.max_observed_gap), fmt(net.cardinality_bound_exceeded)});
  r.add_verdict("coverage", net.certificate.max_observed_gap <= cfg.delta);
  r.add_verdict("cardinality-bound", !net.cardinality_bound_exceeded, /*asserted=*/false);
  return r;
}

Report run_dvoretzky(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  const double eps = require_grid(cfg.eps, "--eps", {0.3}).front();
  RngStream rng(cfg.seed);

  Index k = cfg.k2;  // 0 means derive from the variance-method arithmetic
  const bool auto_k = k == 0;
  double beta_hat = std::nan("");
  if (auto_k) {
    beta_hat =
        beta_parameter(x, Measure::gaussian(x.dim()), cfg.samples, rng.substream(1)).value;
    k = variance_method_dimension(beta_hat, eps);
  }

  Report r = base_report(cfg);
  r.metadata["eps"] = fmt(eps);
  r.metadata["k"] = std::to_string(k);
  if (auto_k) {
    r.metadata["beta_hat"] = fmt(beta_hat);
    // Union-bound mass (6/eps)^{3k} beta; the net event is guaranteed more
    // likely than 1/2 whenever this sits below 1/2.
    r.metadata["union_bound"] =
        fmt(std::pow(6.0 / eps, 3.0 * static_cast<double>(k)) * beta_hat);
  }
  r.columns = {"trial", "k",            "net_event", "net_min",     "net_max",
               "cert_lo", "cert_hi",    "sampled_min", "sampled_max", "violations"};

  const std::size_t probes = cfg.probes ? cfg.probes : 100000;
  std::size_t successes = 0;
  bool certified_ok = true;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const EmbeddingReport rep =
        embed(x, k, eps, cfg.samples, probes, rng.substream(100 + t));
    std::size_t violations = 0;
    if (rep.net_event) {
      if (rep.sampled_min < rep.certified.lower * (1.0 - 1e-9) ||
          rep.sampled_max > rep.certified.upper * (1.0 + 1e-9))
        violations = 1;
    }
    certified_ok = certified_ok && violations == 0;
    successes += rep.net_event ? 1 : 0;
    r.add_row({fmt(t), fmt(k), fmt(rep.net_event), fmt(rep.net_min), fmt(rep.net_max),
               fmt(rep.certified.lower), fmt(rep.certified.upper), fmt(rep.sampled_min),
               fmt(rep.sampled_max), fmt(violations)});
  }
  const double rate = static_cast<double>(successes) / static_cast<double>(cfg.trials);
  r.metadata["net_event_rate"] = fmt(rate);
  r.add_verdict("certified-interval", certified_ok);
  r.add_verdict("net-event-rate>=0.5", rate >= 0.5, /*asserted=*/auto_k);
  return r;
}

Report run_spherical(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  const double eps = require_grid(cfg.eps, "--eps", {}).front();
  const SphericalityResult res = spherical_probability(x, cfg.k, eps, cfg.trials, cfg.probes,
                                                       RngStream(cfg.seed));
  Report r = base_report(cfg);
  r.metadata["trials"] = std::to_string(cfg.trials);
  r.columns = {"k", "eps", "successes", "trials", "p_hat", "ci_lower", "ci_upper", "safety"};
  r.add_row({fmt(res.k), fmt(res.epsilon), fmt(res.successes), fmt(res.trials), fmt(res.p_hat),
             fmt(res.ci95.lower), fmt(res.ci95.upper), fmt(res.safety_factor)});
  return r;
}

Report run_k_eps(const ExperimentConfig& cfg) {
  const NormedSpace x = cfg_space(cfg);
  const std::vector<double> eps_grid = require_grid(cfg.eps, "--eps", {});
  const ThresholdMode mode =
      cfg.mode == "exp_k" ? ThresholdMode::ExpK : ThresholdMode::Half;
  Report r = base_report(cfg);
  r.metadata["mode"] = cfg.mode.empty() ? "half" : cfg.mode;
  r.metadata["trials"] = std::to_string(cfg.trials);
  r.columns = {"eps", "k_hat"};
  RngStream rng(cfg.seed);
  std::uint64_t idx = 0;
  for (double eps : eps_grid) {
    const Index khat = estimate_k_eps(x, eps, mode, cfg.trials, rng.substream(idx++));
    r.add_row({fmt(eps), fmt(khat)});
  }
  return r;
}

Report run_grassmann(const ExperimentConfig& cfg) {
  const NormedSpace body = cfg_space(cfg);
  const ProjectionMode mode =
      cfg.mode == "section" ? ProjectionMode::Section : ProjectionMode::Width;
  const ConcentrationTable table = concentration_experiment(
      body, mode, cfg.k, cfg.trials, cfg.samples, RngStream(cfg.seed), cfg.t_grid);
  Report r = base_report(cfg);
  r.metadata["mode"] = mode == ProjectionMode::Section ? "section" : "width";
  r.metadata["k"] = std::to_string(cfg.k);
  r.metadata["trials"] = std::to_string(cfg.trials);
  r.metadata["reference"] = fmt(table.reference);
  r.metadata["ratio_mean"] = fmt(table.ratio_mean);
  r.metadata["ratio_std"] = fmt(table.ratio_std);
  r.metadata["std_ratio_4k"] = fmt(table.std_ratio_4k);
  r.columns = {"t", "events", "tail_prob"};
  for (const auto& row : table.tail)
    r.add_row({fmt(row.t), fmt(row.events), fmt(row.tail_prob)});
  return r;
}

Report run_sandwich(const ExperimentConfig& cfg) {
  const NormedSpace a = cfg_space(cfg);
  Report r = base_report(cfg);
  r.metadata["k"] = std::to_string(cfg.k);
  r.metadata["trials"] = std::to_string(cfg.trials);
  r.columns = {"trial", "s_min", "s_max", "w_ta", "w_pfa", "pass"};
  RngStream rng(cfg.seed);
  bool all = true;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    RngStream trial = rng.substream(t);
    const Matrix m = gaussian_matrix(cfg.k, a.dim(), trial);
    const SandwichVerdict v = polar_sandwich_check(a, m, cfg.samples, trial.substream(1));
    all = all && v.pass;
    r.add_row({fmt(t), fmt(v.s_min), fmt(v.s_max), fmt(v.w_ta), fmt(v.w_pfa), fmt(v.pass)});
  }
  r.add_verdict("polar-sandwich", all);
  return r;
}

Report run_lipschitz(const ExperimentConfig& cfg) {
  const NormedSpace a = cfg_space(cfg);
  const LipschitzProbeResult res =
      lipschitz_probe(a, cfg.k, cfg.trials, cfg.samples, RngStream(cfg.seed));
  Report r = base_report(cfg);
  r.metadata["k"] = std::to_string(cfg.k);
  r.metadata["pairs"] = std::to_string(cfg.trials);
  r.columns = {"max_ratio_op", "max_ratio_hs", "pairs_used"};
  r.add_row({fmt(res.max_ratio_op), fmt(res.max_ratio_hs), fmt(res.pairs_used)});
  r.add_verdict("lipschitz-envelope<10", res.max_ratio_op < 10.0 && res.max_ratio_hs < 10.0);
  return r;
}

Report run_sphere_identity(const ExperimentConfig& cfg) {
  const Index n = cfg.n;
  if (n < 2) throw ConfigError("sphere-identity: needs --n >= 2");
  if (!(cfg.dot > -1.0 + 1e-12 && cfg.dot < 1.0 - 1e-12) && cfg.dot != 0.0)
    throw ConfigError("sphere-identity: --dot must lie in (-1, 1)");
  Vector u = Vector::Unit(n, 0);
  Vector v = cfg.dot * Vector::Unit(n, 0) +
             std::sqrt(1.0 - cfg.dot * cfg.dot) * Vector::Unit(n, 1);
  const SphereIdentityResult res = sphere_identity_check(u, v, cfg.samples, RngStream(cfg.seed));
  Report r = base_report(cfg);
  r.metadata["n"] = std::to_string(n);
  r.metadata["dot"] = fmt(cfg.dot);
  r.columns = {"n", "dot", "estimate", "exact", "residual", "se"};
  r.add_row({fmt(n), fmt(cfg.dot), fmt(res.estimate), fmt(res.exact), fmt(res.residual),
             fmt(res.se)});
  r.add_verdict("residual<=3se", std::fabs(res.residual) <= 3.0 * res.se);
  return r;
}

Report run_width_variance(const ExperimentConfig& cfg) {
  const NormedSpace a = cfg_space(cfg);
  const std::size_t inner = cfg.probes ? cfg.probes : 1000;
  const WidthVarianceVerdict v =
      gaussian_width_variance_check(a, cfg.k, cfg.trials, inner, RngStream(cfg.seed));
  Report r = base_report(cfg);
  r.metadata["k"] = std::to_string(cfg.k);
  r.metadata["matrices"] = std::to_string(cfg.trials);
  r.columns = {"var_stat", "se_var", "bound_radius", "bound_var_h", "se_bound", "pass"};
  r.add_row({fmt(v.var_stat), fmt(v.se_var_stat), fmt(v.bound_radius), fmt(v.bound_var_h),
             fmt(v.se_bound_var_h), fmt(v.pass)});
  r.add_verdict("width-variance-bound", v.pass);
  return r;
}

Report run_inclusion(const ExperimentConfig& cfg) {
  const NormedSpace a = cfg_space(cfg);
  const double eps = require_grid(cfg.eps, "--eps", {}).front();
  const Index k_lower = cfg.k2 ? cfg.k2 : cfg.k;
  const std::size_t probes = cfg.probes ? cfg.probes : 20000;
  const InclusionRates res = one_sided_inclusion_rates(a, eps, cfg.k, k_lower, cfg.trials,
                                                       probes, RngStream(cfg.seed));
  Report r = base_report(cfg);
  r.metadata["eps"] = fmt(eps);
  r.metadata["k_upper"] = std::to_string(cfg.k);
  r.metadata["k_lower"] = std::to_string(k_lower);
  r.columns = {"rate_upper", "rate_lower", "trials", "width_reference"};
  r.add_row({fmt(res.rate_upper), fmt(res.rate_lower), fmt(res.trials),
             fmt(res.width_reference)});
  return r;
}

Report run_deviation_check(const ExperimentConfig& cfg, const std::string& check) {
  const std::uint64_t seed = cfg.seed;
  Report r = base_report(cfg);

  if (check == "exp-norms") {
    std::vector<Index> ns = cfg.n_list;
    if (ns.empty()) ns = {256, 1024, 4096};
    const auto rows = exponential_norm_profile(cfg.p, ns, cfg.samples, RngStream(seed));
    r.metadata["p"] = fmt(cfg.p);
    r.columns = {"n", "mean", "variance", "mean_diag", "var_diag"};
    for (const auto& row : rows)
      r.add_row({fmt(row.n), fmt(row.mean), fmt(row.variance), fmt(row.mean_diag),
                 fmt(row.var_diag)});
    return r;
  }

  const NormedSpace x = cfg_space(cfg);
  const Measure mu = cfg_measure(cfg, x.dim());
  RngStream rng(seed);

  if (check == "smalldev") {
    const auto grid = require_grid(cfg.t_grid, "--t-grid", {2, 4, 8, 16, 32});
    r.metadata["t-grid"] = join_doubles(grid);
    set_ineq_columns(r);
    r.columns.push_back("implied_c");
    bool all = true;
    for (const auto& row : logconcave_smalldev_check(x, mu, grid, cfg.samples, rng)) {
      r.add_row({fmt(row.parameter), fmt(row.events), fmt(row.trials), fmt(row.p_hat),
                 fmt(row.ci.lower), fmt(row.ci.upper), fmt(row.bound), fmt(row.pass),
                 std::isnan(row.implied_c) ? "" : fmt(row.implied_c)});
      all = all && row.pass;
    }
    r.add_verdict("small-deviation", all);
    return r;
  }
  if (check == "density") {
    const DensityVerdict v = density_lower_check(x, mu, cfg.samples, rng);
    r.columns = {"median", "density", "pos_part_mean", "product", "tolerance", "pass"};
    r.add_row({fmt(v.median), fmt(v.density), fmt(v.positive_part_mean), fmt(v.product),
               fmt(v.tolerance), fmt(v.pass)});
    r.add_verdict("density-lower", v.pass);
    return r;
  }
  if (check == "smallball") {
    const auto grid = require_grid(cfg.eps, "--eps", {0.3, 0.5, 0.7});
    r.metadata["eps"] = join_doubles(grid);
    set_ineq_columns(r);
    add_inequality_rows(r, small_ball_check(x, mu, grid, cfg.samples, rng), "small-ball");
    return r;
  }
  if (check == "borell") {
    const auto grid = require_grid(cfg.t_grid, "--t-grid", {1.5, 2.0, 3.0});
    r.metadata["s"] = fmt(cfg.s_mult);
    r.metadata["t-grid"] = join_doubles(grid);
    set_ineq_columns(r);
    add_inequality_rows(r, borell_check(x, mu, cfg.s_mult, grid, cfg.samples, rng),
                        "upper-tail");
    return r;
  }
  if (check == "logconcavity") {
    const auto grid =
        require_grid(cfg.t_grid, "--t-grid", {0.5, 0.75, 1.0, 1.25, 1.5, 1.75});
    r.metadata["t-grid"] = join_doubles(grid);
    const CdfProfile prof = logconcavity_profile(x, mu, grid, cfg.samples, rng);
    r.columns = {"t", "cdf", "log_cdf", "second_diff", "noise_band"};
    for (std::size_t i = 0; i < prof.grid.size(); ++i) {
      const bool interior = i >= 1 && i + 1 < prof.grid.size();
      r.add_row({fmt(prof.grid[i]), fmt(prof.cdf[i]), fmt(prof.log_cdf[i]),
                 interior ? fmt(prof.second_diff[i - 1]) : "",
                 interior ? fmt(prof.noise_band[i - 1]) : ""});
    }
    r.add_verdict("log-concavity", prof.pass);
    return r;
  }
  if (check == "seminorm") {
    const std::vector<std::array<double, 3>> grid = {
        {1.2, 0.8, 0.3}, {1.5, 1.0, 0.5}, {2.0, 0.5, 0.25}};
    const auto rows = seminorm_logconcavity_check(x, mu, grid, cfg.samples, rng);
    r.columns = {"t", "s", "lambda", "lhs", "rhs", "lhs_upper", "rhs_slack", "pass"};
    bool all = true;
    for (const auto& row : rows) {
      all = all && row.pass;
      r.add_row({fmt(row.t), fmt(row.s), fmt(row.lambda), fmt(row.lhs), fmt(row.rhs),
                 fmt(row.lhs_upper), fmt(row.rhs_slack), fmt(row.pass)});
    }
    r.add_verdict("seminorm-two-sided", all);
    return r;
  }
  if (check == "transport") {
    if (mu.kind != Measure::Kind::Gaussian)
      throw ConfigError("transport: the quadratic-cost tail is instantiated for gaussian");
    const auto grid = require_grid(cfg.t_grid, "--t-grid", {1.0, 2.0, 3.0});
    r.metadata["t-grid"] = join_doubles(grid);
    r.metadata["rho"] = "2";
    set_ineq_columns(r);
    add_inequality_rows(r, transport_tail_check(x, grid, cfg.samples, rng), "transport-tail");
    return r;
  }
  if (check == "transport-derivative") {
    const TransportDerivative v = transport_derivative_probe(x, mu, cfg.samples, rng);
    r.columns = {"median", "derivative", "abs_dev_mean", "ratio", "pass"};
    r.add_row({fmt(v.median), fmt(v.derivative), fmt(v.abs_dev_mean), fmt(v.ratio),
               fmt(v.pass)});
    r.add_verdict("transport-derivative-floor", v.pass);
    return r;
  }
  throw ConfigError("unknown deviation check '" + check + "'");
}

Report run_list(const ExperimentConfig& cfg) {
  Report r = base_report(cfg);
  r.columns = {"experiment", "op", "description"};
  for (const auto& e : experiment_catalog()) r.add_row({e.name, e.op, e.description});
  return r;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = {
      {"anq", "estimators.a_constant", "moment-stability constant a(n,q) from the Beta function"},
      {"beta", "estimators.beta", "normalized variance of the norm under a measure"},
      {"body-moment", "estimators.body_moment_J", "Euclidean moments under the uniform law on a ball"},
      {"borell", "deviation.borell_check", "upper tail against the log-concave CDF ratio bound"},
      {"density", "deviation.density_lower_check", "density at the median against 1/(32 E(.)_+)"},
      {"deviation", "deviation.*", "umbrella: pick a check with --check"},
      {"dvoretzky", "dvoretzky.embed", "random Gaussian embeddings with certified distortion"},
      {"exp-norms", "deviation.exponential_norm_profile", "lp-norm mean/variance under the exponential law"},
      {"grassmann", "grassmann.concentration_experiment", "concentration of projected width / section mean"},
      {"inclusion", "grassmann.one_sided_inclusion_rates", "one-sided inclusion rates for projections"},
      {"k-eps", "dvoretzky.estimate_k_eps", "largest k with spherical sections at a given eps"},
      {"kdim", "estimators.dvoretzky_number", "critical dimension n (M/b)^2"},
      {"lipschitz", "grassmann.lipschitz_probe", "width increments against the two metric envelopes"},
      {"list", "cli.list", "this catalog"},
      {"logconcavity", "deviation.logconcavity_profile", "second differences of log F on a grid"},
      {"net", "nets.build_net", "certified delta-net on the sphere"},
      {"sandwich", "grassmann.polar_sandwich_check", "singular-value sandwich for image widths"},
      {"seminorm", "deviation.seminorm_logconcavity_check", "two-sided seminorm CDF inequality"},
      {"smallball", "deviation.small_ball_check", "dilation small-ball bound with exponent 2 theta"},
      {"smalldev", "deviation.logconcave_smalldev_check", "lower deviation below the median"},
      {"sphere-identity", "grassmann.sphere_identity_check", "rank-one projector difference integral"},
      {"sphere-moment", "estimators.sphere_moment", "spherical moments of the gauge"},
      {"spherical", "dvoretzky.spherical_probability", "probability a random section is spherical"},
      {"theta", "estimators.theta", "median times density at the median"},
      {"transport", "deviation.transport_tail_check", "gradient-scaled lower tail under gaussian"},
      {"transport-derivative", "deviation.transport_derivative_probe", "transport map derivative at the median"},
      {"vrad-identity", "estimators.vrad_identity_check", "planar volume-ratio identity residual"},
      {"width-moment", "estimators.width_moment", "spherical moments of the support function"},
      {"width-variance", "grassmann.gaussian_width_variance_check", "variance bound for Gaussian image widths"},
  };
  return catalog;
}

Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) set_worker_threads(cfg.threads);
  const std::string& e = cfg.experiment;
  if (e == "list") return run_list(cfg);
  if (e == "beta") return run_beta(cfg);
  if (e == "kdim") return run_kdim(cfg);
  if (e == "theta") return run_theta(cfg);
  if (e == "sphere-moment" || e == "width-moment" || e == "body-moment") return run_moment(cfg);
  if (e == "anq") return run_anq(cfg);
  if (e == "vrad-identity") return run_vrad_identity(cfg);
  if (e == "net") return run_net(cfg);
  if (e == "dvoretzky") return run_dvoretzky(cfg);
  if (e == "spherical") return run_spherical(cfg);
  if (e == "k-eps") return run_k_eps(cfg);
  if (e == "grassmann") return run_grassmann(cfg);
  if (e == "sandwich") return run_sandwich(cfg);
  if (e == "lipschitz") return run_lipschitz(cfg);
  if (e == "sphere-identity") return run_sphere_identity(cfg);
  if (e == "width-variance") return run_width_variance(cfg);
  if (e == "inclusion") return run_inclusion(cfg);
  if (e == "deviation") {
    if (cfg.check.empty()) throw ConfigError("deviation: --check is required");
    return run_deviation_check(cfg, cfg.check);
  }
  for (const char* check : {"smalldev", "density", "smallball", "borell", "logconcavity",
                            "seminorm", "transport", "transport-derivative", "exp-norms"})
    if (e == check) return run_deviation_check(cfg, e);
  throw ConfigError("unknown experiment '" + e + "'; see `concentra list`");
}

namespace {

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    out.push_back(std::stod(tok, &pos));
    if (pos != tok.size()) throw ConfigError("bad numeric list entry '" + tok + "'");
  }
  return out;
}

std::size_t parse_count(const std::string& s, const char* flag) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size() || !(v >= 0.0) || v > 1e12)
    throw ConfigError(std::string("bad count for ") + flag + ": '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"concentra: Monte Carlo laboratory for norm concentration on R^n"};
  app.require_subcommand(0);

  ExperimentConfig cfg;
  std::string samples_str = "1e5", trials_str = "200", probes_str = "0";
  std::string eps_str, t_grid_str, q_str, n_list_str;

  app.add_option("experiment", cfg.experiment, "experiment name (see `concentra list`)")
      ->required();
  app.add_option("--space", cfg.space, "space spec, e.g. lp:n=64:p=1");
  app.add_option("--body", cfg.space, "alias of --space for dual-role bodies");
  app.add_option("--measure", cfg.measure, "measure spec, e.g. gaussian");
  app.add_option("--mode", cfg.mode, "experiment mode (width|section, half|exp_k)");
  app.add_option("--check", cfg.check, "deviation check name");
  app.add_option("--k", cfg.k, "subspace / embedding dimension");
  app.add_option("--k2", cfg.k2, "second dimension (inclusion lower leg, dvoretzky k)");
  app.add_option("--n", cfg.n, "ambient dimension for space-free experiments");
  app.add_option("--eps", eps_str, "epsilon or comma list");
  app.add_option("--t-grid", t_grid_str, "comma list of thresholds / grid multipliers");
  app.add_option("--q", q_str, "moment exponent or comma list");
  app.add_option("--n-list", n_list_str, "comma list of dimensions (exp-norms)");
  app.add_option("--delta", cfg.delta, "net mesh");
  app.add_option("--dot", cfg.dot, "inner product for sphere-identity");
  app.add_option("--p", cfg.p, "norm exponent (exp-norms)");
  app.add_option("--s", cfg.s_mult, "s as a median multiple (borell)");
  app.add_option("--samples", samples_str, "Monte Carlo sample count (scientific ok)");
  app.add_option("--trials", trials_str, "trial count (scientific ok)");
  app.add_option("--probes", probes_str, "probe count override (scientific ok)");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--threads", cfg.threads, "worker threads (default CONCENTRA_THREADS)");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  auto* format_opt = app.add_option("--format", cfg.format, "csv or json")
                         ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
    if (format_opt->count() == 0 && cfg.out.size() >= 5 &&
        cfg.out.compare(cfg.out.size() - 5, 5, ".json") == 0)
      cfg.format = "json";
    cfg.samples = parse_count(samples_str, "--samples");
    cfg.trials = parse_count(trials_str, "--trials");
    cfg.probes = parse_count(probes_str, "--probes");
    if (!eps_str.empty()) cfg.eps = parse_double_list(eps_str);
    if (!t_grid_str.empty()) cfg.t_grid = parse_double_list(t_grid_str);
    if (!q_str.empty()) cfg.q_list = parse_double_list(q_str);
    if (!n_list_str.empty())
      for (double v : parse_double_list(n_list_str)) cfg.n_list.push_back(static_cast<Index>(v));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bad arguments: " << e.what() << "\n";
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const Report report = run_experiment(cfg);
    if (cfg.out.empty()) {
      std::cout << (cfg.format == "json" ? report.to_json() : report.to_csv());
    } else {
      report.write(cfg.out, cfg.format);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << cfg.experiment << ": done in " << secs << " s\n";
    return report.all_asserted_pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace concentra
