#include "concentra/grassmann.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "concentra/parallel.hpp"
#include "concentra/special.hpp"

namespace concentra {

namespace {

// Mean of fn over the unit sphere of F, sampled as normalized Gaussians in
// the basis coordinates.
SampleStats subspace_sphere_stats(const std::function<double(const Vector&)>& fn,
                                  const Subspace& f, std::size_t n_samples,
                                  const RngStream& rng, bool keep_sample = false) {
  const Matrix embed_t = f.basis().transpose();  // n x k
  const Index k = f.dim();
  return chunked_reduce<SampleStats>(
      n_samples, kSampleChunk, rng,
      [&](std::size_t, std::size_t count, RngStream& stream) {
        SampleStats s(keep_sample);
        Vector coords(k);
        for (std::size_t i = 0; i < count; ++i) {
          double n2;
          do {
            stream.fill_normal(coords);
            n2 = coords.squaredNorm();
          } while (n2 == 0.0);
          s.add(fn(embed_t * coords) / std::sqrt(n2));
        }
        return s;
      },
      [](SampleStats& acc, SampleStats&& part) { acc.merge(part); });
}

ParamEstimate estimate_from(const SampleStats& s, std::string method) {
  ParamEstimate e;
  e.value = s.mean();
  e.std_error = s.se_mean();
  e.n = s.count();
  e.method = std::move(method);
  return e;
}

// Local minimization of a 1-homogeneous function over the sphere of R^k by
// projected subgradient steps with a backtracking line search.
Vector descend_on_sphere(const std::function<double(const Vector&)>& f,
                         const std::function<Vector(const Vector&)>& grad, Vector theta,
                         int iterations = 300) {
  double val = f(theta);
  double step = 0.25;
  for (int it = 0; it < iterations && step > 1e-12; ++it) {
    const Vector g = grad(theta);
    Vector tangent = g - g.dot(theta) * theta;
    const double tn = tangent.norm();
    if (tn < 1e-14) break;
    Vector trial = theta - (step / tn) * tangent;
    trial /= trial.norm();
    const double tv = f(trial);
    if (tv < val) {
      theta = trial;
      val = tv;
      step = std::min(1.0, step * 1.4);
    } else {
      step *= 0.5;
    }
  }
  return theta;
}

}  // namespace

ProjectionView::ProjectionView(NormedSpace a, Subspace f)
    : body(std::move(a)), subspace(std::move(f)) {
  if (!body.has_support()) throw UnsupportedDual("ProjectionView needs a support function");
  if (body.dim() != subspace.ambient_dim())
    throw DimensionMismatch("ProjectionView: body/subspace dimension");
}

double ProjectionView::restriction_residual(std::size_t probe_count,
                                            const RngStream& rng) const {
  RngStream stream = rng.substream(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < probe_count; ++i) {
    const Vector theta = sphere_point_in(subspace, stream);
    worst = std::max(worst,
                     std::fabs(body.support(subspace.project(theta)) - body.support(theta)));
  }
  return worst;
}

ParamEstimate projected_width(const NormedSpace& a, const Subspace& f, std::size_t n_samples,
                              const RngStream& rng) {
  if (!a.has_support()) throw UnsupportedDual("projected_width needs a support function");
  return estimate_from(
      subspace_sphere_stats([&a](const Vector& x) { return a.support(x); }, f, n_samples, rng),
      "mc-projected-width");
}

ParamEstimate section_mean(const NormedSpace& x, const Subspace& f, std::size_t n_samples,
                           const RngStream& rng) {
  return estimate_from(
      subspace_sphere_stats([&x](const Vector& v) { return x.gauge(v); }, f, n_samples, rng),
      "mc-section-mean");
}

double projected_inradius(const NormedSpace& a, const Subspace& f, std::size_t probe_count,
                          const RngStream& rng) {
  if (!a.has_support()) throw UnsupportedDual("projected_inradius needs a support function");
  const Matrix embed_t = f.basis().transpose();
  const Index k = f.dim();
  RngStream stream = rng.substream(0);

  // Keep the ten best probe directions as starting points for refinement.
  constexpr std::size_t kStarts = 10;
  std::vector<std::pair<double, Vector>> best;
  Vector coords(k);
  for (std::size_t i = 0; i < probe_count; ++i) {
    double n2;
    do {
      stream.fill_normal(coords);
      n2 = coords.squaredNorm();
    } while (n2 == 0.0);
    const Vector unit = coords / std::sqrt(n2);
    const double v = a.support(embed_t * unit);
    if (best.size() < kStarts) {
      best.emplace_back(v, unit);
      std::sort(best.begin(), best.end(),
                [](const auto& p, const auto& q) { return p.first < q.first; });
    } else if (v < best.back().first) {
      best.back() = {v, unit};
      std::sort(best.begin(), best.end(),
                [](const auto& p, const auto& q) { return p.first < q.first; });
    }
  }

  const auto value = [&](const Vector& u) { return a.support(embed_t * u); };
  const auto gradient = [&](const Vector& u) {
    return (f.basis() * a.support_gradient(embed_t * u)).eval();
  };
  double r = best.front().first;
  for (const auto& [v, u] : best) {
    const Vector refined = descend_on_sphere(value, gradient, u);
    r = std::min(r, value(refined));
  }
  return r;
}

ConcentrationTable concentration_experiment(const NormedSpace& body, ProjectionMode mode,
                                            Index k, std::size_t trials, std::size_t n_samples,
                                            const RngStream& rng, std::vector<double> t_grid) {
  if (trials < 100) throw ConfigError("concentration_experiment: needs trials >= 100");
  if (mode == ProjectionMode::Width && !body.has_support())
    throw UnsupportedDual("width mode needs a support function");
  const Index n = body.dim();
  if (k < 1 || k > n - 1) throw ConfigError("concentration_experiment: needs 1 <= k <= n-1");

  const auto fn = [&body, mode](const Vector& v) {
    return mode == ProjectionMode::Width ? body.support(v) : body.gauge(v);
  };

  ConcentrationTable table;
  table.mode = mode;
  table.k = k;
  table.trials = trials;

  const SampleStats ref = scalar_stats(Measure::sphere(n), fn, std::max<std::size_t>(4 * n_samples, 100000),
                                       rng.substream(1), /*keep_sample=*/false);
  table.reference = ref.mean();

  const auto ratios_for = [&](Index dim_k, std::size_t count) {
    return chunked_reduce<std::vector<double>>(
        count, 1, rng.substream(2 + static_cast<std::uint64_t>(dim_k)),
        [&](std::size_t, std::size_t, RngStream& stream) {
          const Subspace f = haar_grassmann(n, dim_k, stream);
          const SampleStats s = subspace_sphere_stats(fn, f, n_samples, stream.substream(1));
          return std::vector<double>{s.mean() / table.reference};
        },
        [](std::vector<double>& acc, std::vector<double>&& part) {
          acc.insert(acc.end(), part.begin(), part.end());
        });
  };

  table.ratios = ratios_for(k, trials);
  SampleStats rs(false);
  for (double r : table.ratios) rs.add(r);
  table.ratio_mean = rs.mean();
  table.ratio_std = rs.std_dev();

  if (4 * k <= n - 1) {
    std::vector<double> r4 = ratios_for(4 * k, trials);
    SampleStats rs4(false);
    for (double r : r4) rs4.add(r);
    table.std_ratio_4k = rs4.std_dev() / table.ratio_std;
  }

  const double t_floor = 2.0 * std::sqrt(static_cast<double>(k) / static_cast<double>(n));
  if (t_grid.empty()) {
    // Default grid, extended so at least a few rows clear the floor.
    t_grid = {0.02, 0.05, 0.1, 0.2, 0.4, t_floor, 1.5 * t_floor, 2.0 * t_floor};
    std::sort(t_grid.begin(), t_grid.end());
  }
  for (double t : t_grid) {
    if (t < t_floor) continue;
    std::size_t events = 0;
    for (double r : table.ratios)
      if (std::fabs(r - 1.0) > t) ++events;
    table.tail.push_back(
        {t, events, static_cast<double>(events) / static_cast<double>(trials)});
  }
  return table;
}

SandwichVerdict polar_sandwich_check(const NormedSpace& a, const Matrix& t,
                                     std::size_t n_samples, const RngStream& rng) {
  if (!a.has_support()) throw UnsupportedDual("polar_sandwich_check needs a support function");
  const PolarDecomposition polar = polar_decompose(t);
  const Vector sv = singular_values(t);
  const Index k = t.rows();

  SandwichVerdict v;
  v.s_max = sv(0);
  v.s_min = sv(k - 1);

  // w(TA): mean over the sphere of R^k of h_A(T^T u).
  const SampleStats wta = scalar_stats(
      Measure::sphere(k),
      [&](const Vector& u) { return a.support(t.transpose() * u); }, n_samples,
      rng.substream(1), /*keep_sample=*/false);
  const ParamEstimate wpfa = projected_width(a, polar.row_space, n_samples, rng.substream(2));

  v.w_ta = wta.mean();
  v.se_ta = wta.se_mean();
  v.w_pfa = wpfa.value;
  v.se_pfa = wpfa.std_error;

  const double slack_lo = 3.0 * (v.s_min * v.se_pfa + v.se_ta);
  const double slack_hi = 3.0 * (v.s_max * v.se_pfa + v.se_ta);
  v.pass = (v.s_min * v.w_pfa <= v.w_ta + slack_lo) && (v.w_ta <= v.s_max * v.w_pfa + slack_hi);
  return v;
}

LipschitzProbeResult lipschitz_probe(const NormedSpace& a, Index k, std::size_t pair_count,
                                     std::size_t n_samples, const RngStream& rng) {
  if (!a.has_support()) throw UnsupportedDual("lipschitz_probe needs a support function");
  const Index n = a.dim();
  const double width = scalar_stats(Measure::sphere(n),
                                    [&a](const Vector& v) { return a.support(v); },
                                    std::max<std::size_t>(4 * n_samples, 100000),
                                    rng.substream(1), /*keep_sample=*/false)
                           .mean();
  const double radius = a.constants().R;

  struct Maxima {
    double op = 0.0, hs = 0.0;
    std::size_t used = 0;
  };
  const Maxima m = chunked_reduce<Maxima>(
      pair_count, 1, rng.substream(2),
      [&](std::size_t, std::size_t, RngStream& stream) {
        Maxima part;
        const Subspace e = haar_grassmann(n, k, stream);
        const Subspace f = haar_grassmann(n, k, stream);
        const Matrix diff = e.projection_matrix() - f.projection_matrix();
        const double sigma_2 = diff.norm() / std::sqrt(static_cast<double>(k));
        if (sigma_2 < 1e-9) return part;
        const double sigma_inf = singular_values(diff)(0);
        const double we = subspace_sphere_stats([&a](const Vector& v) { return a.support(v); },
                                                e, n_samples, stream.substream(1))
                              .mean();
        const double wf = subspace_sphere_stats([&a](const Vector& v) { return a.support(v); },
                                                f, n_samples, stream.substream(2))
                              .mean();
        const double dw = std::fabs(we - wf);
        part.op = dw / (std::sqrt(static_cast<double>(n) / static_cast<double>(k)) * width *
                        sigma_inf);
        part.hs = dw / (radius * sigma_2);
        part.used = 1;
        return part;
      },
      [](Maxima& acc, Maxima&& part) {
        acc.op = std::max(acc.op, part.op);
        acc.hs = std::max(acc.hs, part.hs);
        acc.used += part.used;
      });

  return {m.op, m.hs, m.used};
}

SphereIdentityResult sphere_identity_check(const Vector& u, const Vector& v,
                                           std::size_t n_samples, const RngStream& rng) {
  if (u.size() != v.size()) throw DimensionMismatch("sphere_identity_check: dimension");
  if (std::fabs(u.norm() - 1.0) > 1e-9 || std::fabs(v.norm() - 1.0) > 1e-9)
    throw ConfigError("sphere_identity_check: u, v must be unit vectors");
  const Index n = u.size();
  const double dot = u.dot(v);

  const SampleStats s = scalar_stats(
      Measure::sphere(n),
      [&](const Vector& theta) {
        return (u.dot(theta) * u - v.dot(theta) * v).squaredNorm();
      },
      n_samples, rng, /*keep_sample=*/false);

  SphereIdentityResult r;
  r.estimate = s.mean();
  r.exact = 2.0 / static_cast<double>(n) * (1.0 - dot * dot);
  r.residual = r.estimate - r.exact;
  r.se = s.se_mean();
  return r;
}

WidthVarianceVerdict gaussian_width_variance_check(const NormedSpace& a, Index k,
                                                   std::size_t n_matrices,
                                                   std::size_t inner_samples,
                                                   const RngStream& rng) {
  if (!a.has_support()) throw UnsupportedDual("width variance check needs a support function");
  const Index n = a.dim();
  const double c_k = gaussian_l2_mean(static_cast<int>(k));

  // Statistic per matrix: w(GA) = c_k^{-1} E_Y h_A(G^T Y).
  const SampleStats stat = chunked_reduce<SampleStats>(
      n_matrices, 16, rng.substream(1),
      [&](std::size_t, std::size_t count, RngStream& stream) {
        SampleStats s(false);
        Vector y(k);
        for (std::size_t i = 0; i < count; ++i) {
          const Matrix g = gaussian_matrix(k, n, stream);
          double acc = 0.0;
          for (std::size_t j = 0; j < inner_samples; ++j) {
            stream.fill_normal(y);
            acc += a.support(g.transpose() * y);
          }
          s.add(acc / (static_cast<double>(inner_samples) * c_k));
        }
        return s;
      },
      [](SampleStats& acc, SampleStats&& part) { acc.merge(part); });

  const SampleStats var_h = scalar_stats(Measure::gaussian(n),
                                         [&a](const Vector& z) { return a.support(z); },
                                         std::max<std::size_t>(n_matrices, 100000),
                                         rng.substream(2), /*keep_sample=*/false);

  WidthVarianceVerdict v;
  v.var_stat = stat.variance();
  const double nm = static_cast<double>(stat.count());
  v.se_var_stat = std::sqrt(std::max(0.0, stat.moment4() - stat.moment2() * stat.moment2()) / nm);
  v.bound_radius = a.constants().R * a.constants().R / static_cast<double>(k);
  v.bound_var_h = var_h.variance();
  const double nh = static_cast<double>(var_h.count());
  v.se_bound_var_h =
      std::sqrt(std::max(0.0, var_h.moment4() - var_h.moment2() * var_h.moment2()) / nh);
  v.pass = (v.var_stat <= v.bound_radius + 3.0 * v.se_var_stat) &&
           (v.var_stat <= v.bound_var_h + 3.0 * (v.se_var_stat + v.se_bound_var_h));
  return v;
}

InclusionRates one_sided_inclusion_rates(const NormedSpace& a, double epsilon, Index k_upper,
                                         Index k_lower, std::size_t trials,
                                         std::size_t probe_count, const RngStream& rng) {
  if (!a.has_support()) throw UnsupportedDual("inclusion rates need a support function");
  const Index n = a.dim();
  if (k_upper < 1 || k_upper > n - 1 || k_lower < 1 || k_lower > n - 1)
    throw ConfigError("one_sided_inclusion_rates: subspace dimensions out of range");

  InclusionRates rates;
  rates.trials = trials;
  rates.width_reference = scalar_stats(Measure::sphere(n),
                                       [&a](const Vector& v) { return a.support(v); },
                                       std::max<std::size_t>(probe_count, 100000),
                                       rng.substream(1), /*keep_sample=*/false)
                              .mean();
  constexpr double kSafety = 1.01;

  const std::size_t upper_hits = chunked_reduce<std::size_t>(
      trials, 1, rng.substream(2),
      [&](std::size_t, std::size_t, RngStream& stream) -> std::size_t {
        const Subspace e = haar_grassmann(n, k_upper, stream);
        const Matrix embed_t = e.basis().transpose();
        double hi = 0.0;
        Vector coords(k_upper);
        for (std::size_t i = 0; i < probe_count; ++i) {
          double n2;
          do {
            stream.fill_normal(coords);
            n2 = coords.squaredNorm();
          } while (n2 == 0.0);
          hi = std::max(hi, a.support(embed_t * coords) / std::sqrt(n2));
        }
        return kSafety * hi <= (1.0 + epsilon) * rates.width_reference ? 1 : 0;
      },
      [](std::size_t& acc, std::size_t&& part) { acc += part; });

  const std::size_t lower_hits = chunked_reduce<std::size_t>(
      trials, 1, rng.substream(3),
      [&](std::size_t, std::size_t, RngStream& stream) -> std::size_t {
        const Subspace f = haar_grassmann(n, k_lower, stream);
        const double r = projected_inradius(a, f, probe_count, stream.substream(1));
        return r >= (1.0 - epsilon) * rates.width_reference ? 1 : 0;
      },
      [](std::size_t& acc, std::size_t&& part) { acc += part; });

  rates.rate_upper = static_cast<double>(upper_hits) / static_cast<double>(trials);
  rates.rate_lower = static_cast<double>(lower_hits) / static_cast<double>(trials);
  return rates;
}

WidthSmallBallProfile width_small_ball_profile(const NormedSpace& a, Index k,
                                               std::size_t trials, std::size_t n_samples,
                                               std::vector<double> eps_grid,
                                               const RngStream& rng) {
  if (eps_grid.empty()) eps_grid = {0.85, 0.9, 0.95, 0.98};
  const ConcentrationTable table =
      concentration_experiment(a, ProjectionMode::Width, k, trials, n_samples, rng);

  WidthSmallBallProfile prof;
  prof.eps_grid = eps_grid;
  std::vector<std::pair<double, double>> pts;  // (log eps, log P)
  for (double eps : eps_grid) {
    std::size_t events = 0;
    for (double r : table.ratios) events += r <= eps ? 1 : 0;
    const double p = static_cast<double>(events) / static_cast<double>(trials);
    prof.tail_prob.push_back(p);
    if (events > 0) pts.push_back({std::log(eps), std::log(p)});
  }
  if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (auto& [x, y] : pts) mx += x, my += y;
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0, sxx = 0;
    for (auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    prof.slope = sxy / sxx;
  }
  return prof;
}

}  // namespace concentra
