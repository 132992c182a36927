#include "concentra/bodies.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <vector>

#include "concentra/rng.hpp"

namespace concentra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const Vector& x, double p) {
  if (p == 1.0) return x.lpNorm<1>();
  if (p == 2.0) return x.norm();
  if (p == kInf) return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
  // Scaled evaluation keeps |x_i|^p in range for large p.
  const double m = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

Vector lp_gradient(const Vector& x, double p) {
  Vector g = Vector::Zero(x.size());
  if (p == 1.0) {
    for (Index i = 0; i < x.size(); ++i) g[i] = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    return g;
  }
  if (p == kInf) {
    Index arg = 0;
    for (Index i = 1; i < x.size(); ++i)
      if (std::fabs(x[i]) > std::fabs(x[arg])) arg = i;
    g[arg] = x[arg] >= 0.0 ? 1.0 : -1.0;
    return g;
  }
  const double nrm = lp_norm(x, p);
  if (nrm == 0.0) return g;
  for (Index i = 0; i < x.size(); ++i) {
    const double a = std::fabs(x[i]) / nrm;
    g[i] = (x[i] >= 0.0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
  }
  return g;
}

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

}  // namespace

struct NormedSpace::Impl {
  Kind kind;
  Index dim;
  double p = 2.0;  // Lp exponent or AbsPlusLq exponent
  std::shared_ptr<const Impl> base;
  Matrix t, t_inv;                // LinearImage
  std::optional<Subspace> sub;    // SubspaceRestriction
  std::string label;

  mutable std::once_flag constants_once;
  mutable BodyConstants constants;

  double gauge(const Vector& x) const;
  double support(const Vector& y) const;
  bool has_support() const;
  Vector gauge_gradient(const Vector& x) const;
  Vector support_gradient(const Vector& y) const;
  BodyConstants compute_constants() const;
};

double NormedSpace::Impl::gauge(const Vector& x) const {
  if (x.size() != dim) throw DimensionMismatch("gauge: vector dimension mismatch");
  switch (kind) {
    case Kind::Lp:
      return lp_norm(x, p);
    case Kind::Euclidean:
      return x.norm();
    case Kind::AbsPlusLinf:
      return std::fabs(x[0]) + x.tail(dim - 1).lpNorm<Eigen::Infinity>();
    case Kind::AbsPlusLq:
      return std::fabs(x[0]) + lp_norm(x.tail(dim - 1), p);
    case Kind::LinearImage:
      return base->gauge(t_inv * x);
    case Kind::SubspaceRestriction:
      return base->gauge(sub->basis().transpose() * x);
  }
  return 0.0;
}

bool NormedSpace::Impl::has_support() const {
  switch (kind) {
    case Kind::Lp:
    case Kind::Euclidean:
    case Kind::AbsPlusLinf:
    case Kind::AbsPlusLq:
      return true;
    case Kind::LinearImage:
      return base->has_support();
    case Kind::SubspaceRestriction:
      return false;
  }
  return false;
}

double NormedSpace::Impl::support(const Vector& y) const {
  if (y.size() != dim) throw DimensionMismatch("support: vector dimension mismatch");
  switch (kind) {
    case Kind::Lp:
      return lp_norm(y, conjugate_exponent(p));
    case Kind::Euclidean:
      return y.norm();
    // The unit ball of |t| + ||x||_q is the l1-sum of a segment and a
    // q-ball; the support of an l1-sum is the max of the two supports.
    case Kind::AbsPlusLinf:
      return std::max(std::fabs(y[0]), y.tail(dim - 1).lpNorm<1>());
    case Kind::AbsPlusLq:
      return std::max(std::fabs(y[0]), lp_norm(y.tail(dim - 1), conjugate_exponent(p)));
    case Kind::LinearImage:
      return base->support(t.transpose() * y);
    case Kind::SubspaceRestriction:
      throw UnsupportedDual("no closed-form support for subspace restrictions");
  }
  return 0.0;
}

Vector NormedSpace::Impl::gauge_gradient(const Vector& x) const {
  if (x.size() != dim) throw DimensionMismatch("gauge_gradient: vector dimension mismatch");
  switch (kind) {
    case Kind::Lp:
      return lp_gradient(x, p);
    case Kind::Euclidean: {
      const double nrm = x.norm();
      return nrm == 0.0 ? Vector::Zero(dim).eval() : (x / nrm).eval();
    }
    case Kind::AbsPlusLinf:
    case Kind::AbsPlusLq: {
      Vector g(dim);
      g[0] = x[0] >= 0.0 ? 1.0 : -1.0;
      g.tail(dim - 1) = lp_gradient(x.tail(dim - 1), kind == Kind::AbsPlusLinf ? kInf : p);
      return g;
    }
    case Kind::LinearImage:
      return t_inv.transpose() * base->gauge_gradient(t_inv * x);
    case Kind::SubspaceRestriction:
      return sub->basis() * base->gauge_gradient(sub->basis().transpose() * x);
  }
  return Vector::Zero(dim);
}

Vector NormedSpace::Impl::support_gradient(const Vector& y) const {
  if (y.size() != dim) throw DimensionMismatch("support_gradient: vector dimension mismatch");
  switch (kind) {
    case Kind::Lp:
      return lp_gradient(y, conjugate_exponent(p));
    case Kind::Euclidean: {
      const double nrm = y.norm();
      return nrm == 0.0 ? Vector::Zero(dim).eval() : (y / nrm).eval();
    }
    case Kind::AbsPlusLinf:
    case Kind::AbsPlusLq: {
      const double dual_q = kind == Kind::AbsPlusLinf ? 1.0 : conjugate_exponent(p);
      Vector g = Vector::Zero(dim);
      const double head = std::fabs(y[0]);
      const double rest = lp_norm(y.tail(dim - 1), dual_q);
      if (head >= rest)
        g[0] = y[0] >= 0.0 ? 1.0 : -1.0;
      else
        g.tail(dim - 1) = lp_gradient(y.tail(dim - 1), dual_q);
      return g;
    }
    case Kind::LinearImage:
      return t * base->support_gradient(t.transpose() * y);
    case Kind::SubspaceRestriction:
      throw UnsupportedDual("no closed-form support for subspace restrictions");
  }
  return Vector::Zero(dim);
}

double sphere_maximize(const std::function<double(const Vector&)>& f,
                       const std::function<Vector(const Vector&)>& grad, Index n, int restarts,
                       double tol, std::uint64_t seed, Vector* argmax) {
  RngStream rng(seed, 0xB0D1E5);
  double best = -kInf;
  Vector best_arg = Vector::Unit(n, 0);
  for (int r = 0; r < restarts; ++r) {
    Vector theta = rng.sphere_point(n);
    double val = f(theta);
    double step = 0.5;
    for (int it = 0; it < 600 && step > tol * 1e-3; ++it) {
      const Vector g = grad(theta);
      Vector tangent = g - g.dot(theta) * theta;
      const double tn = tangent.norm();
      if (tn < 1e-14) break;
      Vector trial = theta + (step / tn) * tangent;
      trial /= trial.norm();
      const double tv = f(trial);
      if (tv > val + tol * 1e-6) {
        theta = trial;
        val = tv;
        step = std::min(1.0, step * 1.5);
      } else {
        step *= 0.5;
      }
    }
    if (val > best) {
      best = val;
      best_arg = theta;
    }
  }
  if (argmax) *argmax = best_arg;
  return best;
}

BodyConstants NormedSpace::Impl::compute_constants() const {
  BodyConstants c;
  c.analytic = true;
  const double nd = static_cast<double>(dim);
  switch (kind) {
    case Kind::Euclidean:
      c.b = c.R = 1.0;
      return c;
    case Kind::Lp:
      if (p <= 2.0) {
        c.b = std::pow(nd, 1.0 / p - 0.5);
        c.R = 1.0;
      } else {
        c.b = 1.0;
        c.R = std::pow(nd, 0.5 - 1.0 / p);
      }
      return c;
    case Kind::AbsPlusLinf:
      c.b = M_SQRT2;
      c.R = std::sqrt(nd - 1.0);
      return c;
    case Kind::AbsPlusLq:
      c.b = M_SQRT2;
      c.R = std::pow(nd - 1.0, 0.5 - 1.0 / p);
      return c;
    default:
      break;
  }
  // No closed form: multistart maximization of the gauge gives b, of the
  // support (or of 1/gauge when the dual is unavailable) gives R.
  c.analytic = false;
  const std::uint64_t seed = 0xC1CC04D1A5ULL ^ static_cast<std::uint64_t>(dim);
  c.b = sphere_maximize([this](const Vector& x) { return gauge(x); },
                        [this](const Vector& x) { return gauge_gradient(x); }, dim, 64, 1e-6,
                        seed);
  if (has_support()) {
    c.R = sphere_maximize([this](const Vector& y) { return support(y); },
                          [this](const Vector& y) { return support_gradient(y); }, dim, 64, 1e-6,
                          seed + 1);
  } else {
    // max over the sphere of 1/gauge; descend the gauge instead.
    const double min_gauge =
        -sphere_maximize([this](const Vector& x) { return -gauge(x); },
                         [this](const Vector& x) { return (-gauge_gradient(x)).eval(); }, dim, 64,
                         1e-6, seed + 1);
    c.R = 1.0 / min_gauge;
  }
  return c;
}

namespace {

std::string format_exponent(double p) {
  if (p == kInf) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

NormedSpace NormedSpace::lp(Index n, double p) {
  if (n < 1) throw ConfigError("lp space needs n >= 1");
  if (!(p >= 1.0)) throw ConfigError("lp space needs p in [1, inf]");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Lp;
  impl->dim = n;
  impl->p = p;
  impl->label = "lp:n=" + std::to_string(n) + ":p=" + format_exponent(p);
  return NormedSpace(std::move(impl));
}

NormedSpace NormedSpace::euclidean(Index n) {
  if (n < 1) throw ConfigError("euclidean space needs n >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Euclidean;
  impl->dim = n;
  impl->label = "euclidean:n=" + std::to_string(n);
  return NormedSpace(std::move(impl));
}

NormedSpace NormedSpace::abs_plus_linf(Index n) {
  if (n < 2) throw ConfigError("abs+linf space needs n >= 2");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::AbsPlusLinf;
  impl->dim = n;
  impl->label = "abs+linf:n=" + std::to_string(n);
  return NormedSpace(std::move(impl));
}

NormedSpace NormedSpace::abs_plus_lq(Index n, double q) {
  if (n < 2) throw ConfigError("abs+lq space needs n >= 2");
  if (!(q > 2.0) || q == kInf) throw ConfigError("abs+lq space needs q in (2, inf)");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::AbsPlusLq;
  impl->dim = n;
  impl->p = q;
  impl->label = "abs+lq:n=" + std::to_string(n) + ":q=" + format_exponent(q);
  return NormedSpace(std::move(impl));
}

NormedSpace NormedSpace::linear_image(const Matrix& t, const NormedSpace& base,
                                      std::string label) {
  if (t.rows() != t.cols() || t.rows() != base.dim())
    throw DimensionMismatch("linear_image: T must be n x n matching the base space");
  require_finite(t, "linear_image T");
  Eigen::FullPivLU<Matrix> lu(t);
  if (!lu.isInvertible()) throw RankDeficient("linear_image: T is singular");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::LinearImage;
  impl->dim = base.dim();
  impl->base = base.impl_;
  impl->t = t;
  impl->t_inv = lu.inverse();
  impl->label = label.empty() ? "image(" + base.label() + ")" : std::move(label);
  return NormedSpace(std::move(impl));
}

NormedSpace NormedSpace::restriction(const Subspace& f, const NormedSpace& base) {
  if (f.ambient_dim() != base.dim())
    throw DimensionMismatch("restriction: subspace ambient dimension mismatch");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::SubspaceRestriction;
  impl->dim = f.dim();
  impl->base = base.impl_;
  impl->sub = f;
  impl->label = "section(" + base.label() + ",k=" + std::to_string(f.dim()) + ")";
  return NormedSpace(std::move(impl));
}

NormedSpace::Kind NormedSpace::kind() const { return impl_->kind; }
Index NormedSpace::dim() const { return impl_->dim; }
const std::string& NormedSpace::label() const { return impl_->label; }
double NormedSpace::exponent() const { return impl_->p; }

double NormedSpace::gauge(const Vector& x) const { return impl_->gauge(x); }
bool NormedSpace::has_support() const { return impl_->has_support(); }
double NormedSpace::support(const Vector& y) const { return impl_->support(y); }
Vector NormedSpace::gauge_gradient(const Vector& x) const { return impl_->gauge_gradient(x); }
Vector NormedSpace::support_gradient(const Vector& y) const {
  return impl_->support_gradient(y);
}

const BodyConstants& NormedSpace::constants() const {
  std::call_once(impl_->constants_once,
                 [this]() { impl_->constants = impl_->compute_constants(); });
  return impl_->constants;
}

namespace {

struct SpecTokens {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> kv;
};

SpecTokens tokenize_spec(const std::string& spec) {
  SpecTokens out;
  std::stringstream ss(spec);
  std::string tok;
  bool first = true;
  while (std::getline(ss, tok, ':')) {
    if (first) {
      out.kind = tok;
      first = false;
      continue;
    }
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("space spec: expected key=value, got '" + tok + "'");
    out.kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  if (out.kind.empty()) throw ConfigError("empty space spec");
  return out;
}

double parse_exponent_value(const std::string& v) {
  if (v == "inf") return kInf;
  std::size_t pos = 0;
  const double p = std::stod(v, &pos);
  if (pos != v.size()) throw ConfigError("bad exponent '" + v + "'");
  return p;
}

Index parse_dim_value(const std::string& v) {
  std::size_t pos = 0;
  const long n = std::stol(v, &pos);
  if (pos != v.size() || n < 1) throw ConfigError("bad dimension '" + v + "'");
  return static_cast<Index>(n);
}

}  // namespace

NormedSpace parse_space(const std::string& spec) {
  if (spec.rfind("image:", 0) == 0) {
    const auto scale_pos = spec.rfind(":scale=");
    if (scale_pos == std::string::npos)
      throw ConfigError("image spec needs a trailing :scale= entry");
    const double scale = parse_exponent_value(spec.substr(scale_pos + 7));
    if (!(scale > 0.0) || scale == kInf) throw ConfigError("image scale must be positive finite");
    const NormedSpace base = parse_space(spec.substr(6, scale_pos - 6));
    return NormedSpace::linear_image(scale * Matrix::Identity(base.dim(), base.dim()), base,
                                     spec);
  }

  const SpecTokens t = tokenize_spec(spec);
  Index n = 0;
  double p = 0.0, q = 0.0;
  bool have_p = false, have_q = false;
  for (const auto& [k, v] : t.kv) {
    if (k == "n") {
      n = parse_dim_value(v);
    } else if (k == "p") {
      p = parse_exponent_value(v);
      have_p = true;
    } else if (k == "q") {
      q = parse_exponent_value(v);
      have_q = true;
    } else {
      throw ConfigError("space spec: unknown key '" + k + "'");
    }
  }
  if (n == 0) throw ConfigError("space spec: missing n");

  if (t.kind == "lp") {
    if (!have_p) throw ConfigError("lp spec: missing p");
    return NormedSpace::lp(n, p);
  }
  if (t.kind == "euclidean") {
    if (have_p || have_q) throw ConfigError("euclidean spec takes only n");
    return NormedSpace::euclidean(n);
  }
  if (t.kind == "abs+linf") {
    if (have_p || have_q) throw ConfigError("abs+linf spec takes only n");
    return NormedSpace::abs_plus_linf(n);
  }
  if (t.kind == "abs+lq") {
    if (!have_q) throw ConfigError("abs+lq spec: missing q");
    return NormedSpace::abs_plus_lq(n, q);
  }
  throw ConfigError("unknown space kind '" + t.kind + "'");
}

}  // namespace concentra
