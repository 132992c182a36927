#include "concentra/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "concentra/special.hpp"

namespace concentra {

void SampleStats::add(double x) {
  const double n1 = static_cast<double>(n_);
  n_ += 1;
  const double n = static_cast<double>(n_);
  const double delta = x - mean_;
  const double delta_n = delta / n;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean_ += delta_n;
  m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
  m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
  m2_ += term1;
  if (keep_sample_) {
    sample_.push_back(x);
    sorted_valid_ = false;
  }
}

void SampleStats::merge(const SampleStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  const double d2 = delta * delta;

  const double m2 = m2_ + other.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + other.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                    3.0 * delta * (na * other.m2_ - nb * m2_) / n;
  const double m4 = m4_ + other.m4_ +
                    d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * delta * (na * other.m3_ - nb * m3_) / n;

  mean_ = (na * mean_ + nb * other.mean_) / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += other.n_;
  if (keep_sample_) {
    sample_.insert(sample_.end(), other.sample_.begin(), other.sample_.end());
    sorted_valid_ = false;
  }
}

double SampleStats::std_dev() const { return std::sqrt(variance()); }

double SampleStats::se_mean() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

void SampleStats::ensure_sorted() const {
  if (!keep_sample_) throw std::logic_error("SampleStats: no retained sample");
  if (!sorted_valid_) {
    sorted_ = sample_;
    std::sort(sorted_.begin(), sorted_.end());
    sorted_valid_ = true;
  }
}

double SampleStats::quantile(double p) const {
  ensure_sorted();
  if (sorted_.empty()) throw std::logic_error("SampleStats: empty sample");
  if (p <= 0.0) return sorted_.front();
  if (p >= 1.0) return sorted_.back();
  const double pos = p * static_cast<double>(sorted_.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted_.size()) return sorted_.back();
  return sorted_[lo] + frac * (sorted_[lo + 1] - sorted_[lo]);
}

double SampleStats::cdf(double t) const {
  ensure_sorted();
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::size_t SampleStats::count_below(double t) const {
  ensure_sorted();
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<std::size_t>(it - sorted_.begin());
}

BinomialCI clopper_pearson(std::size_t k, std::size_t n, double alpha) {
  if (n == 0) return {0.0, 1.0};
  BinomialCI ci;
  ci.lower = (k == 0) ? 0.0
                      : regularized_ibeta_inv(static_cast<double>(k),
                                              static_cast<double>(n - k + 1), alpha / 2.0);
  ci.upper = (k == n) ? 1.0
                      : regularized_ibeta_inv(static_cast<double>(k + 1),
                                              static_cast<double>(n - k), 1.0 - alpha / 2.0);
  return ci;
}

TailEstimate TailEstimate::from_counts(double threshold, std::size_t events, std::size_t trials,
                                       double alpha) {
  TailEstimate t;
  t.threshold = threshold;
  t.events = events;
  t.trials = trials;
  t.p_hat = trials > 0 ? static_cast<double>(events) / static_cast<double>(trials) : 0.0;
  t.ci = clopper_pearson(events, trials, alpha);
  return t;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double batch_se(const std::vector<double>& batches) {
  if (batches.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : batches) mean += v;
  mean /= static_cast<double>(batches.size());
  double ss = 0.0;
  for (double v : batches) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(batches.size() - 1);
  return std::sqrt(var / static_cast<double>(batches.size()));
}

}  // namespace concentra
