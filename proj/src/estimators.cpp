#include "concentra/estimators.hpp"

#include <cmath>
#include <limits>

#include "concentra/parallel.hpp"
#include "concentra/special.hpp"

namespace concentra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ParamEstimate power_mean_estimate(const SampleStats& stats, double q, std::size_t n,
                                  std::string method) {
  // (E y)^{1/q} for y = f^q, with the delta-method error
  // SE = (1/|q|) value * SE(mean y) / mean y.
  ParamEstimate e;
  const double mean = stats.mean();
  e.value = std::pow(mean, 1.0 / q);
  e.std_error = std::fabs(1.0 / q) * e.value * stats.se_mean() / mean;
  e.n = n;
  e.method = std::move(method);
  return e;
}

}  // namespace

SampleStats scalar_stats(const Measure& m, const std::function<double(const Vector&)>& f,
                         std::size_t n_samples, const RngStream& rng, bool keep_sample) {
  if (n_samples < 100) throw ConfigError("scalar_stats: needs N >= 100");
  // Quantiles stay exact order statistics up to this scale; beyond it the
  // sample is not retained.
  keep_sample = keep_sample && n_samples <= 10000000;
  SampleStats total = chunked_reduce<SampleStats>(
      n_samples, kSampleChunk, rng,
      [&](std::size_t, std::size_t count, RngStream& stream) {
        SampleStats s(keep_sample);
        Vector z(m.dim);
        for (std::size_t i = 0; i < count; ++i) {
          sample_into(m, stream, z);
          const double v = f(z);
          if (!std::isfinite(v)) throw NonFinite("scalar_stats: f returned NaN/Inf");
          s.add(v);
        }
        return s;
      },
      [](SampleStats& acc, SampleStats&& part) { acc.merge(part); });
  return total;
}

ParamEstimate beta_parameter(const NormedSpace& x, const Measure& m, std::size_t n_samples,
                             const RngStream& rng) {
  if (x.dim() != m.dim) throw DimensionMismatch("beta_parameter: space/measure dimension");
  const SampleStats s =
      scalar_stats(m, [&x](const Vector& z) { return x.gauge(z); }, n_samples, rng,
                   /*keep_sample=*/false);
  const double mean = s.mean();
  if (!(mean > 10.0 * s.se_mean()))
    throw MeanNearZero("beta_parameter: mean norm does not clear 10 standard errors");

  const double v = s.moment2();
  const double mu3 = s.moment3();
  const double mu4 = s.moment4();
  const double n = static_cast<double>(s.count());
  ParamEstimate e;
  e.value = v / (mean * mean);
  // First-order propagation for g(mean, var) = var / mean^2.
  const double var_beta =
      (4.0 * v * v * v / std::pow(mean, 6.0) - 4.0 * v * mu3 / std::pow(mean, 5.0) +
       (mu4 - v * v) / std::pow(mean, 4.0)) /
      n;
  e.std_error = std::sqrt(std::max(0.0, var_beta));
  e.n = s.count();
  e.method = "mc-delta";
  return e;
}

ParamEstimate dvoretzky_dimension(const NormedSpace& x, std::size_t n_samples,
                                  const RngStream& rng) {
  const double b = x.constants().b;
  const SampleStats s = scalar_stats(Measure::sphere(x.dim()),
                                     [&x](const Vector& z) { return x.gauge(z); }, n_samples,
                                     rng, /*keep_sample=*/false);
  const double mean = s.mean();
  const double nd = static_cast<double>(x.dim());
  ParamEstimate e;
  e.value = nd * (mean / b) * (mean / b);
  e.std_error = nd * 2.0 * mean / (b * b) * s.se_mean();
  e.n = s.count();
  e.method = "mc-delta";
  return e;
}

namespace {

struct ThetaParts {
  double median = 0.0;
  double density = 0.0;
  double theta = 0.0;
};

ThetaParts theta_from_sample(const SampleStats& s) {
  ThetaParts p;
  p.median = s.median();
  const double sd = s.std_dev();
  if (sd < 1e-12 * std::fabs(s.mean()))
    throw DegenerateDistribution("theta_parameter: sample is numerically constant");
  const double h = 1.8 * sd * std::pow(static_cast<double>(s.count()), -0.2);
  p.density = (s.cdf(p.median + h) - s.cdf(p.median - h)) / (2.0 * h);
  p.theta = p.median * p.density;
  return p;
}

}  // namespace

ThetaEstimate theta_parameter(const NormedSpace& x, const Measure& m, std::size_t n_samples,
                              const RngStream& rng) {
  if (n_samples < 100000) throw ConfigError("theta_parameter: needs N >= 1e5");
  const SampleStats s =
      scalar_stats(m, [&x](const Vector& z) { return x.gauge(z); }, n_samples, rng);
  const ThetaParts full = theta_from_sample(s);
  const double sd = s.std_dev();

  // Standard error from 20 contiguous batches, each re-estimating its own
  // median and density.
  constexpr std::size_t kBatches = 20;
  const auto& sample = s.sample();
  const std::size_t per = sample.size() / kBatches;
  std::vector<double> batch_thetas;
  batch_thetas.reserve(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) {
    SampleStats bs;
    const std::size_t hi = (b + 1 == kBatches) ? sample.size() : (b + 1) * per;
    for (std::size_t i = b * per; i < hi; ++i) bs.add(sample[i]);
    batch_thetas.push_back(theta_from_sample(bs).theta);
  }

  ThetaEstimate out;
  out.median = full.median;
  out.density = full.density;
  out.bandwidth = 1.8 * sd * std::pow(static_cast<double>(s.count()), -0.2);
  out.theta.value = full.theta;
  out.theta.std_error = batch_se(batch_thetas);
  out.theta.n = s.count();
  out.theta.method = "mc-cdf-batch";
  return out;
}

namespace {

ParamEstimate spherical_power_mean(const NormedSpace& x, double q, std::size_t n_samples,
                                   const RngStream& rng, bool dual) {
  if (q == 0.0) throw ConfigError("moment exponent must be nonzero");
  const double nd = static_cast<double>(x.dim());
  if (!(q > -nd + 1.0))
    throw HeavyTail("negative-moment exponent beyond the Monte Carlo gate q > -n+1");
  if (dual && !x.has_support()) throw UnsupportedDual("width moment needs a support function");
  const SampleStats s = scalar_stats(
      Measure::sphere(x.dim()),
      [&x, q, dual](const Vector& z) {
        return std::pow(dual ? x.support(z) : x.gauge(z), q);
      },
      n_samples, rng, /*keep_sample=*/false);
  return power_mean_estimate(s, q, n_samples, dual ? "mc-width" : "mc-sphere");
}

}  // namespace

ParamEstimate sphere_moment(const NormedSpace& x, double q, std::size_t n_samples,
                            const RngStream& rng) {
  return spherical_power_mean(x, q, n_samples, rng, /*dual=*/false);
}

ParamEstimate width_moment(const NormedSpace& a, double q, std::size_t n_samples,
                           const RngStream& rng) {
  return spherical_power_mean(a, q, n_samples, rng, /*dual=*/true);
}

ParamEstimate body_moment(const NormedSpace& k, double q, std::size_t n_samples,
                          const RngStream& rng) {
  if (q == 0.0) throw ConfigError("moment exponent must be nonzero");
  const double nd = static_cast<double>(k.dim());
  if (!(q > -nd + 1.0)) throw HeavyTail("body moment exponent beyond q > -n+1");

  Measure m = Measure::uniform_cube(k.dim());
  if (k.kind() == NormedSpace::Kind::Lp) {
    const double p = k.exponent();
    m = (p == kInf) ? Measure::uniform_cube(k.dim()) : Measure::uniform_lp_ball(k.dim(), p);
  } else if (k.kind() == NormedSpace::Kind::Euclidean) {
    m = Measure::uniform_lp_ball(k.dim(), 2.0);
  } else {
    throw UnsupportedBody("body_moment: uniform sampling only on lp balls and the cube");
  }
  const SampleStats s = scalar_stats(
      m, [q](const Vector& z) { return std::pow(z.norm(), q); }, n_samples, rng,
      /*keep_sample=*/false);
  return power_mean_estimate(s, q, n_samples, "mc-body");
}

double a_constant(double n, double q) {
  if (!(q > 0.0)) throw ConfigError("a_constant: needs q > 0");
  // a^{-q} = (q/2) B(q, n+1)  =>  log a = -(log(q/2) + logB(q, n+1)) / q.
  const double log_a = -(std::log(0.5 * q) + log_beta(q, n + 1.0)) / q;
  return std::exp(log_a);
}

double a_constant_implied_c(double n, double q) {
  if (!(q >= n)) throw ConfigError("a_constant_implied_c: needs q >= n");
  const double log_a = std::log(a_constant(n, q));
  return log_a * q / (n * std::log(M_E * q / n));
}

namespace {

// Composite Simpson over [0, 2pi) on a uniform grid (periodic integrand).
double simpson_periodic(const std::function<double(double)>& f, int nodes) {
  const int n = nodes % 2 == 0 ? nodes : nodes + 1;
  const double h = 2.0 * M_PI / n;
  double acc = f(0.0) + f(2.0 * M_PI);
  for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Composite two-point Gauss-Legendre on the same interval.
double gauss2_periodic(const std::function<double(double)>& f, int nodes) {
  const double h = 2.0 * M_PI / nodes;
  const double off = h * 0.5 / std::sqrt(3.0);
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double c = (i + 0.5) * h;
    acc += f(c - off) + f(c + off);
  }
  return acc * h * 0.5;
}

}  // namespace

double vrad_identity_residual(const NormedSpace& k2, double p, int nodes) {
  if (k2.dim() != 2) throw ConfigError("vrad_identity_residual: body must be 2-dimensional");
  if (!(p > -1.0 && p <= 8.0)) throw ConfigError("vrad_identity_residual: p outside (-1, 8]");

  const auto radial = [&k2](double theta) {
    Vector u(2);
    u << std::cos(theta), std::sin(theta);
    const double g = k2.gauge(u);
    if (!(g > 0.0) || !std::isfinite(g))
      throw QuadratureFail("vrad_identity_residual: degenerate radial function");
    return 1.0 / g;
  };

  // Left side from area and radial moments (Simpson), right side from the
  // negative spherical moment (Gauss), so agreement is a real check.
  const double area = simpson_periodic([&](double t) { return 0.5 * std::pow(radial(t), 2.0); },
                                       nodes);
  const double jp_num = simpson_periodic(
      [&](double t) { return std::pow(radial(t), p + 2.0) / (p + 2.0); }, nodes);
  const double vrad2 = area / M_PI;
  const double lhs = vrad2 * (jp_num / area);

  const double m_neg = gauss2_periodic(
      [&](double t) { return std::pow(radial(t), p + 2.0) / (2.0 * M_PI); }, nodes);
  const double rhs = (2.0 / (2.0 + p)) * m_neg;

  return std::fabs(lhs - rhs) / std::fabs(rhs);
}

ParamEstimate ov_parameter(const NormedSpace& x, std::size_t n_samples, const RngStream& rng) {
  const SampleStats s = scalar_stats(Measure::gaussian(x.dim()),
                                     [&x](const Vector& z) { return x.gauge(z); }, n_samples,
                                     rng, /*keep_sample=*/false);
  const double b = x.constants().b;
  ParamEstimate e;
  e.value = s.std_dev() / b;
  const double var = s.variance();
  const double se_var = std::sqrt(std::max(0.0, s.moment4() - s.moment2() * s.moment2()) /
                                  static_cast<double>(s.count()));
  e.std_error = se_var / (2.0 * std::sqrt(var)) / b;
  e.n = s.count();
  e.method = "mc-delta";
  return e;
}

double beta_l2_gaussian(int n) {
  const double c = gaussian_l2_mean(n);
  return static_cast<double>(n) / (c * c) - 1.0;
}

}  // namespace concentra
