#pragma once

#include <cstddef>
#include <vector>

namespace concentra {

/// One-pass accumulator for count / mean / central moments up to order four,
/// with an exact pairwise merge (Chan-Golub-LeVeque updates extended by
/// Pebay). Merging partials in a fixed order makes parallel reductions
/// bit-reproducible across thread counts. The raw sample is retained by
/// default so that medians and tail counts are exact order statistics.
class SampleStats {
 public:
  explicit SampleStats(bool keep_sample = true) : keep_sample_(keep_sample) {}

  void add(double x);
  void merge(const SampleStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance.
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  /// Population central moments (divide-by-n), used for delta-method errors.
  double moment2() const { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }
  double moment3() const { return n_ > 0 ? m3_ / static_cast<double>(n_) : 0.0; }
  double moment4() const { return n_ > 0 ? m4_ / static_cast<double>(n_) : 0.0; }
  double std_dev() const;
  double se_mean() const;

  bool has_sample() const { return keep_sample_; }
  const std::vector<double>& sample() const { return sample_; }

  /// Exact order-statistic quantile (linear interpolation between adjacent
  /// order statistics). Requires a retained sample.
  double quantile(double p) const;
  double median() const { return quantile(0.5); }

  /// Empirical CDF value P(x <= t) from the retained sample.
  double cdf(double t) const;

  /// Count of retained values strictly below t.
  std::size_t count_below(double t) const;

 private:
  void ensure_sorted() const;

  bool keep_sample_;
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
  std::vector<double> sample_;
  mutable std::vector<double> sorted_;
  mutable bool sorted_valid_ = false;
};

struct BinomialCI {
  double lower;
  double upper;
};

/// Exact (conservative) Clopper-Pearson interval for a binomial proportion.
BinomialCI clopper_pearson(std::size_t successes, std::size_t trials, double alpha = 0.05);

/// Empirical event probability with its exact binomial confidence interval.
struct TailEstimate {
  double threshold = 0.0;
  std::size_t events = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;
  BinomialCI ci{0.0, 1.0};

  static TailEstimate from_counts(double threshold, std::size_t events, std::size_t trials,
                                  double alpha = 0.05);
};

/// Two-sample Kolmogorov-Smirnov statistic sup_t |F1 - F2|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Standard error of the mean of per-batch estimates.
double batch_se(const std::vector<double>& batch_values);

}  // namespace concentra
