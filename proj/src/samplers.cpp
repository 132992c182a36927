#include "concentra/samplers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "concentra/errors.hpp"

namespace concentra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rejection-free sampler for the uniform law on the unit lp ball:
//   x = y / (||y||_p^p + E)^{1/p}
// with y_i iid density proportional to exp(-|t|^p) and E ~ Exp(1)
// independent. The p-generalized normals come from a Gamma transform,
// |y_i| = Gamma(1/p, 1)^{1/p} with a random sign.
void lp_ball_sample(Index n, double p, RngStream& rng, Vector& out) {
  double sum_p = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double g = rng.gamma(1.0 / p);
    const double y = rng.sign() * std::pow(g, 1.0 / p);
    out[i] = y;
    sum_p += g;
  }
  const double e = rng.exponential();
  out *= std::pow(sum_p + e, -1.0 / p);
}

}  // namespace

std::string Measure::label() const {
  switch (kind) {
    case Kind::Gaussian:
      return "gaussian";
    case Kind::Exponential:
      return "exponential";
    case Kind::SphereUniform:
      return "sphere";
    case Kind::UniformCube:
      return "uniform-cube";
    case Kind::UniformLpBall: {
      std::ostringstream os;
      os << "uniform-ball:p=" << p;
      return os.str();
    }
  }
  return "?";
}

void sample_into(const Measure& m, RngStream& rng, Vector& out) {
  if (out.size() != m.dim) out.resize(m.dim);
  switch (m.kind) {
    case Measure::Kind::Gaussian:
      rng.fill_normal(out);
      return;
    case Measure::Kind::Exponential:
      for (Index i = 0; i < m.dim; ++i) out[i] = rng.laplace();
      return;
    case Measure::Kind::SphereUniform: {
      double norm2;
      do {
        rng.fill_normal(out);
        norm2 = out.squaredNorm();
      } while (norm2 == 0.0);
      out /= std::sqrt(norm2);
      return;
    }
    case Measure::Kind::UniformCube:
      for (Index i = 0; i < m.dim; ++i) out[i] = rng.uniform_sym();
      return;
    case Measure::Kind::UniformLpBall:
      lp_ball_sample(m.dim, m.p, rng, out);
      return;
  }
}

Matrix gaussian_matrix(Index k, Index n, RngStream& rng) {
  if (k < 1 || n < 1) throw DimensionMismatch("gaussian_matrix: needs k, n >= 1");
  Vector buf(k * n);
  rng.fill_normal(buf);
  Matrix g(k, n);
  // Row-major draw order, independent of the matrix storage layout.
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = buf[i * n + j];
  return g;
}

Subspace haar_grassmann(Index n, Index k, RngStream& rng) {
  if (k < 1 || k > n - 1) throw DimensionMismatch("haar_grassmann: needs 1 <= k <= n-1");
  return orthonormalize(gaussian_matrix(k, n, rng));
}

Vector sphere_point_in(const Subspace& f, RngStream& rng) {
  Vector coords = rng.sphere_point(f.dim());
  return f.basis().transpose() * coords;
}

Measure parse_measure(const std::string& spec, Index dim) {
  if (spec == "gaussian") return Measure::gaussian(dim);
  if (spec == "exponential") return Measure::exponential(dim);
  if (spec == "sphere") return Measure::sphere(dim);
  if (spec == "uniform-cube") return Measure::uniform_cube(dim);
  if (spec.rfind("uniform-ball", 0) == 0) {
    double p = 2.0;
    if (spec.size() > 12) {
      if (spec.compare(12, 3, ":p=") != 0)
        throw ConfigError("uniform-ball spec: expected uniform-ball:p=<value>");
      const std::string v = spec.substr(15);
      if (v == "inf") return Measure::uniform_cube(dim);
      std::size_t pos = 0;
      p = std::stod(v, &pos);
      if (pos != v.size() || !(p >= 1.0)) throw ConfigError("uniform-ball spec: bad p");
    }
    return Measure::uniform_lp_ball(dim, p);
  }
  throw ConfigError("unknown measure '" + spec + "'");
}

}  // namespace concentra
