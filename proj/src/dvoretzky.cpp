#include "concentra/dvoretzky.hpp"

#include <cmath>

#include "concentra/estimators.hpp"
#include "concentra/parallel.hpp"

namespace concentra {

Index variance_method_dimension(double beta, double epsilon) {
  const double k = std::floor(std::log(1.0 / beta) / (3.0 * std::log(6.0 * M_E / epsilon)));
  return std::max<Index>(1, static_cast<Index>(k));
}

EmbeddingReport embed(const NormedSpace& x, Index k, double epsilon, std::size_t n_mean,
                      std::size_t probe_count, const RngStream& rng,
                      std::size_t net_probe_count) {
  if (!(epsilon > 0.0 && epsilon < 1.0 / 3.0))
    throw ConfigError("embed: epsilon must lie in (0, 1/3)");
  if (k < 1 || k > 12) throw ConfigError("embed: k must be in [1, 12]");
  const Index n = x.dim();

  EmbeddingReport rep;
  rep.space_label = x.label();
  rep.k = k;
  rep.seed = rng.seed();
  rep.epsilon = epsilon;
  rep.net_delta = epsilon / 2.0;

  RngStream net_rng = rng.substream(1);
  const Net net = build_net(k, rep.net_delta, net_probe_count, net_rng);
  rep.net_cardinality = net.cardinality();

  rep.mean_norm_estimate =
      scalar_stats(Measure::gaussian(n), [&x](const Vector& z) { return x.gauge(z); }, n_mean,
                   rng.substream(2), /*keep_sample=*/false)
          .mean();

  RngStream g_rng = rng.substream(3);
  const Matrix g = gaussian_matrix(n, k, g_rng);  // operator l_2^k -> X

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const Vector& z : net.points) {
    const double v = x.gauge(g * z) / rep.mean_norm_estimate;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.net_min = lo;
  rep.net_max = hi;
  rep.net_event = (hi <= 1.0 + epsilon) && (lo >= 1.0 - epsilon);
  rep.certified = extension_bounds(epsilon, rep.net_delta);

  RngStream probe_rng = rng.substream(4);
  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (std::size_t i = 0; i < probe_count; ++i) {
    const Vector theta = probe_rng.sphere_point(k);
    const double v = x.gauge(g * theta) / rep.mean_norm_estimate;
    smin = std::min(smin, v);
    smax = std::max(smax, v);
  }
  rep.sampled_min = smin;
  rep.sampled_max = smax;
  return rep;
}

namespace {

bool sphericality_trial(const NormedSpace& x, Index k, double epsilon, std::size_t probe_count,
                        double safety, RngStream& stream) {
  const Subspace f = haar_grassmann(x.dim(), k, stream);
  const Matrix embed_t = f.basis().transpose();  // n x k
  const double fail_ratio = (1.0 + epsilon) / safety;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  Vector coords(k);
  for (std::size_t i = 0; i < probe_count; ++i) {
    double n2;
    do {
      stream.fill_normal(coords);
      n2 = coords.squaredNorm();
    } while (n2 == 0.0);
    const double v = x.gauge(embed_t * coords) / std::sqrt(n2);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    // The running ratio only grows, so failure is final.
    if (hi >= fail_ratio * lo) return false;
  }
  return safety * hi / lo < 1.0 + epsilon;
}

}  // namespace

SphericalityResult spherical_probability(const NormedSpace& x, Index k, double epsilon,
                                         std::size_t trials, std::size_t probe_count,
                                         const RngStream& rng) {
  if (trials < 50) throw ConfigError("spherical_probability: needs trials >= 50");
  if (k < 1 || k > x.dim() - 1)
    throw ConfigError("spherical_probability: needs 1 <= k <= n-1");
  probe_count = std::max<std::size_t>(probe_count, 10000 * static_cast<std::size_t>(k));

  SphericalityResult res;
  res.k = k;
  res.epsilon = epsilon;
  res.trials = trials;

  res.successes = chunked_reduce<std::size_t>(
      trials, 1, rng,
      [&](std::size_t, std::size_t, RngStream& stream) -> std::size_t {
        return sphericality_trial(x, k, epsilon, probe_count, res.safety_factor, stream) ? 1 : 0;
      },
      [](std::size_t& acc, std::size_t&& part) { acc += part; });

  res.p_hat = static_cast<double>(res.successes) / static_cast<double>(trials);
  res.ci95 = clopper_pearson(res.successes, trials);
  return res;
}

namespace {

double k_eps_threshold(ThresholdMode mode, Index k) {
  return mode == ThresholdMode::Half ? 0.5 : 1.0 - std::exp(-static_cast<double>(k));
}

}  // namespace

Index estimate_k_eps(const NormedSpace& x, double epsilon, ThresholdMode mode,
                     std::size_t trials, const RngStream& rng, Index k_max) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("estimate_k_eps: epsilon in (0,1)");
  k_max = std::min<Index>(k_max, x.dim() - 1);

  const auto passes = [&](Index k) {
    const SphericalityResult r =
        spherical_probability(x, k, epsilon, trials, 0, rng.substream(static_cast<std::uint64_t>(k)));
    return r.ci95.lower >= k_eps_threshold(mode, k);
  };

  Index last_pass = 0;
  Index first_fail = 0;
  for (Index k = 1; k <= k_max; k *= 2) {
    if (passes(k)) {
      last_pass = k;
    } else {
      first_fail = k;
      break;
    }
  }
  if (last_pass == 0) return 0;
  if (first_fail == 0) {
    if (last_pass == k_max || passes(k_max)) return k_max;
    first_fail = k_max;
  }

  while (first_fail - last_pass > 1) {
    const Index mid = (last_pass + first_fail) / 2;
    if (passes(mid))
      last_pass = mid;
    else
      first_fail = mid;
  }
  return last_pass;
}

}  // namespace concentra
