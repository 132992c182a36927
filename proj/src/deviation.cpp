#include "concentra/deviation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "concentra/estimators.hpp"
#include "concentra/parallel.hpp"
#include "concentra/special.hpp"

namespace concentra {

namespace {

SampleStats gauge_sample(const NormedSpace& x, const Measure& mu, std::size_t n_samples,
                         const RngStream& rng) {
  if (x.dim() != mu.dim) throw DimensionMismatch("deviation check: space/measure dimension");
  return scalar_stats(mu, [&x](const Vector& z) { return x.gauge(z); }, n_samples, rng);
}

double mean_abs_dev(const SampleStats& s, double center) {
  double acc = 0.0;
  for (double v : s.sample()) acc += std::fabs(v - center);
  return acc / static_cast<double>(s.count());
}

double mean_pos_dev(const SampleStats& s, double center) {
  double acc = 0.0;
  for (double v : s.sample()) acc += std::max(0.0, v - center);
  return acc / static_cast<double>(s.count());
}

double cdf_density(const SampleStats& s, double at, double* bandwidth_out = nullptr) {
  const double h = 1.8 * s.std_dev() * std::pow(static_cast<double>(s.count()), -0.2);
  if (bandwidth_out) *bandwidth_out = h;
  return (s.cdf(at + h) - s.cdf(at - h)) / (2.0 * h);
}

InequalityRow lower_tail_row(const SampleStats& s, double param, double threshold, double bound,
                             double alpha) {
  InequalityRow row;
  row.parameter = param;
  row.trials = s.count();
  row.events = s.count_below(threshold);
  row.p_hat = static_cast<double>(row.events) / static_cast<double>(row.trials);
  row.ci = clopper_pearson(row.events, row.trials, alpha);
  row.bound = bound;
  row.pass = row.ci.lower <= bound;
  return row;
}

double bonferroni_alpha(std::size_t rows) {
  return 0.05 / static_cast<double>(std::max<std::size_t>(1, rows));
}

}  // namespace

std::vector<InequalityRow> logconcave_smalldev_check(const NormedSpace& x, const Measure& mu,
                                                     const std::vector<double>& t_grid,
                                                     std::size_t n_samples,
                                                     const RngStream& rng) {
  const SampleStats s = gauge_sample(x, mu, n_samples, rng);
  const double m = s.median();
  const double d = mean_abs_dev(s, m);
  const double alpha = bonferroni_alpha(t_grid.size());
  std::vector<InequalityRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    InequalityRow row = lower_tail_row(s, t, m - t * d, 0.5 * std::exp(-t / 16.0), alpha);
    if (row.p_hat > 0.0 && t > 0.0)
      row.implied_c = -std::log(2.0 * row.p_hat) / (t * t);
    rows.push_back(row);
  }
  return rows;
}

DensityVerdict density_lower_check(const NormedSpace& x, const Measure& mu,
                                   std::size_t n_samples, const RngStream& rng) {
  const SampleStats s = gauge_sample(x, mu, n_samples, rng);
  DensityVerdict v;
  v.median = s.median();
  if (s.std_dev() < 1e-12 * std::fabs(s.mean()))
    throw DegenerateDistribution("density_lower_check: sample is numerically constant");
  v.density = cdf_density(s, v.median);
  v.positive_part_mean = mean_pos_dev(s, v.median);
  v.product = 32.0 * v.density * v.positive_part_mean;
  v.pass = v.product >= 1.0 - v.tolerance;
  return v;
}

std::vector<InequalityRow> small_ball_check(const NormedSpace& x, const Measure& mu,
                                            const std::vector<double>& eps_grid,
                                            std::size_t n_samples, const RngStream& rng) {
  if (mu.kind != Measure::Kind::Gaussian && mu.kind != Measure::Kind::Exponential)
    throw ConfigError("small_ball_check: dilation bound licensed for gaussian/exponential only");
  const SampleStats s = gauge_sample(x, mu, n_samples, rng);
  const double m = s.median();
  const double theta = m * cdf_density(s, m);
  const double alpha = bonferroni_alpha(eps_grid.size());
  std::vector<InequalityRow> rows;
  rows.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("small_ball_check: eps must be in (0,1)");
    // Counts <=, not <; the bound covers the closed event as well.
    InequalityRow row;
    row.parameter = eps;
    row.trials = s.count();
    row.events = static_cast<std::size_t>(
        std::llround(s.cdf(eps * m) * static_cast<double>(s.count())));
    row.p_hat = static_cast<double>(row.events) / static_cast<double>(row.trials);
    row.ci = clopper_pearson(row.events, row.trials, alpha);
    row.bound = 0.5 * std::pow(eps, 2.0 * theta);
    row.pass = row.ci.lower <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

std::vector<InequalityRow> borell_check(const NormedSpace& x, const Measure& mu, double s_mult,
                                        const std::vector<double>& t_mults,
                                        std::size_t n_samples, const RngStream& rng) {
  const SampleStats stats = gauge_sample(x, mu, n_samples, rng);
  const double m = stats.median();
  const double s_abs = s_mult * m;
  const double fs = stats.cdf(s_abs);
  if (!(fs > 0.5)) throw ConfigError("borell_check: need F(s) > 1/2; raise s");
  const double alpha = bonferroni_alpha(t_mults.size());

  std::vector<InequalityRow> rows;
  rows.reserve(t_mults.size());
  for (double tm : t_mults) {
    const double t_abs = tm * m;
    if (!(t_abs > s_abs)) throw ConfigError("borell_check: grid must satisfy t > s");
    InequalityRow row;
    row.parameter = tm;
    row.trials = stats.count();
    row.events =
        stats.count() - static_cast<std::size_t>(std::llround(
                            stats.cdf(t_abs) * static_cast<double>(stats.count())));
    row.p_hat = static_cast<double>(row.events) / static_cast<double>(row.trials);
    row.ci = clopper_pearson(row.events, row.trials, alpha);
    row.bound = fs * std::pow((1.0 - fs) / fs, (t_abs + s_abs) / (2.0 * s_abs));
    row.pass = row.ci.lower <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

CdfProfile logconcavity_profile(const NormedSpace& x, const Measure& mu,
                                const std::vector<double>& grid_mults, std::size_t n_samples,
                                const RngStream& rng) {
  if (grid_mults.size() < 3)
    throw ConfigError("logconcavity_profile: need at least three grid points");
  const SampleStats s = gauge_sample(x, mu, n_samples, rng);
  const double m = s.median();
  const double n = static_cast<double>(s.count());

  CdfProfile prof;
  for (double gm : grid_mults) {
    const double t = gm * m;
    const double f = s.cdf(t);
    if (!(f > 0.0)) throw ConfigError("logconcavity_profile: empty CDF at grid start");
    prof.grid.push_back(t);
    prof.cdf.push_back(f);
    prof.log_cdf.push_back(std::log(f));
  }

  prof.pass = true;
  for (std::size_t i = 1; i + 1 < prof.grid.size(); ++i) {
    const double d =
        prof.log_cdf[i + 1] - 2.0 * prof.log_cdf[i] + prof.log_cdf[i - 1];
    // Delta-method variance of the second difference of log F; empirical
    // CDF values at s <= t have covariance F(s)(1 - F(t))/N.
    const std::array<double, 3> g = {1.0 / prof.cdf[i - 1], -2.0 / prof.cdf[i],
                                     1.0 / prof.cdf[i + 1]};
    const std::array<double, 3> f = {prof.cdf[i - 1], prof.cdf[i], prof.cdf[i + 1]};
    double var = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        var += g[a] * g[b] * (f[std::min(a, b)] * (1.0 - f[std::max(a, b)])) / n;
    const double band = 3.0 * std::sqrt(std::max(0.0, var));
    prof.second_diff.push_back(d);
    prof.noise_band.push_back(band);
    if (d > band) prof.pass = false;
  }
  return prof;
}

std::vector<SeminormCheckRow> seminorm_logconcavity_check(
    const NormedSpace& x, const Measure& mu,
    const std::vector<std::array<double, 3>>& tsl_grid, std::size_t n_samples,
    const RngStream& rng) {
  const SampleStats s = gauge_sample(x, mu, n_samples, rng);
  const double m = s.median();
  const double n = static_cast<double>(s.count());
  const double alpha = bonferroni_alpha(tsl_grid.size());

  std::vector<SeminormCheckRow> rows;
  for (const auto& [tm, sm, lambda] : tsl_grid) {
    const double t = tm * m, sv = sm * m;
    if (!(lambda > 0.0 && lambda < t / (t + sv)))
      throw ConfigError("seminorm check: need 0 < lambda < t/(t+s)");
    SeminormCheckRow row;
    row.t = t;
    row.s = sv;
    row.lambda = lambda;
    const double mix = (1.0 - lambda) * t - lambda * sv;
    const std::size_t below = static_cast<std::size_t>(std::llround(s.cdf(mix) * n));
    row.lhs = 1.0 - s.cdf(mix);
    const double ft = s.cdf(t);
    const double fs = s.cdf(sv);
    row.rhs = std::pow(1.0 - ft, 1.0 - lambda) * std::pow(fs, lambda);
    row.lhs_upper = clopper_pearson(s.count() - below, s.count(), alpha).upper;
    // First-order error of the right side in (F(t), F(s)).
    const double dft = -(1.0 - lambda) * std::pow(1.0 - ft, -lambda) * std::pow(fs, lambda);
    const double dfs = lambda * std::pow(1.0 - ft, 1.0 - lambda) * std::pow(fs, lambda - 1.0);
    const double var = dft * dft * ft * (1.0 - ft) / n + dfs * dfs * fs * (1.0 - fs) / n;
    row.rhs_slack = 3.0 * std::sqrt(std::max(0.0, var));
    row.pass = row.lhs_upper >= row.rhs - row.rhs_slack;
    rows.push_back(row);
  }
  return rows;
}

std::vector<InequalityRow> transport_tail_rows(
    const Measure& mu, const std::function<double(const Vector&)>& f,
    const std::function<Vector(const Vector&)>& grad_f, const std::vector<double>& t_grid,
    std::size_t n_samples, const RngStream& rng) {
  struct Acc {
    SampleStats values{true};
    double grad_sq_sum = 0.0;
  };
  Acc acc = chunked_reduce<Acc>(
      n_samples, kSampleChunk, rng,
      [&](std::size_t, std::size_t count, RngStream& stream) {
        Acc part;
        Vector z(mu.dim);
        for (std::size_t i = 0; i < count; ++i) {
          sample_into(mu, stream, z);
          const double v = f(z);
          if (!std::isfinite(v)) throw NonFinite("transport_tail: f returned NaN/Inf");
          part.values.add(v);
          part.grad_sq_sum += grad_f(z).squaredNorm();
        }
        return part;
      },
      [](Acc& a, Acc&& p) {
        a.values.merge(p.values);
        a.grad_sq_sum += p.grad_sq_sum;
      });

  const double mean = acc.values.mean();
  const double grad_scale =
      std::sqrt(acc.grad_sq_sum / static_cast<double>(acc.values.count()));
  const double alpha = bonferroni_alpha(t_grid.size());

  std::vector<InequalityRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid)
    rows.push_back(lower_tail_row(acc.values, t, mean - t * grad_scale,
                                  std::exp(-t * t / 2.0), alpha));
  return rows;
}

std::vector<InequalityRow> transport_tail_check(const NormedSpace& x,
                                                const std::vector<double>& t_grid,
                                                std::size_t n_samples, const RngStream& rng) {
  return transport_tail_rows(
      Measure::gaussian(x.dim()), [&x](const Vector& z) { return x.gauge(z); },
      [&x](const Vector& z) { return x.gauge_gradient(z); }, t_grid, n_samples, rng);
}

double exponential_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw ConfigError("exponential_quantile: u outside (0,1)");
  return u <= 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

TransportDerivative transport_derivative_probe(const NormedSpace& x, const Measure& mu,
                                               std::size_t n_samples, const RngStream& rng) {
  const SampleStats s = gauge_sample(x, mu, n_samples, rng);
  TransportDerivative out;
  out.median = s.median();
  if (s.std_dev() < 1e-12 * std::fabs(s.mean()))
    throw DegenerateDistribution("transport_derivative_probe: constant sample");
  const double h = 1.8 * s.std_dev() * std::pow(static_cast<double>(s.count()), -0.2);
  const double u_hi = s.cdf(out.median + h);
  const double u_lo = s.cdf(out.median - h);
  out.derivative =
      (exponential_quantile(u_hi) - exponential_quantile(u_lo)) / (2.0 * h);
  out.abs_dev_mean = mean_abs_dev(s, out.median);
  out.ratio = out.derivative * out.abs_dev_mean;
  out.pass = out.ratio >= 0.02;
  return out;
}

std::vector<ExpNormRow> exponential_norm_profile(double p, const std::vector<Index>& n_list,
                                                 std::size_t n_samples, const RngStream& rng) {
  const bool is_inf = !(p < std::numeric_limits<double>::infinity());
  if (!is_inf && !(p >= 1.0)) throw ConfigError("exponential_norm_profile: p must be >= 1");
  std::vector<ExpNormRow> rows;
  std::uint64_t idx = 0;
  for (Index n : n_list) {
    const NormedSpace space =
        is_inf ? NormedSpace::lp(n, std::numeric_limits<double>::infinity())
               : NormedSpace::lp(n, p);
    const SampleStats s =
        scalar_stats(Measure::exponential(n),
                     [&space](const Vector& w) { return space.gauge(w); }, n_samples,
                     rng.substream(idx++), /*keep_sample=*/false);
    ExpNormRow row;
    row.n = n;
    row.mean = s.mean();
    row.variance = s.variance();
    const double nd = static_cast<double>(n);
    if (is_inf) {
      row.mean_diag = row.mean / std::log(nd);
      row.var_diag = row.variance;
    } else {
      row.mean_diag = row.mean / std::pow(nd, 1.0 / p);
      row.var_diag = row.variance * std::pow(nd, 1.0 - 2.0 / p);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace concentra
