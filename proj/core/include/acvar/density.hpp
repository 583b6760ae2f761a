#pragma once

#include <vector>

namespace acvar {

/// Gaussian kernel density estimate of a reward distribution. The mixture
/// CDF is continuous and strictly increasing, so its inverse is well
/// defined everywhere on (0,1). Immutable after fit.
class KdeModel {
 public:
  KdeModel(std::vector<double> samples, double bandwidth);

  /// (1/N) sum_i Phi((x - sample_i) / h)
  double cdf(double x) const;

  /// Unique x with cdf(x) = c, by bisection on
  /// [min sample - 10h, max sample + 10h] to bracket width 1e-10.
  double inverse_cdf(double c) const;

  std::size_t sample_count() const { return samples_.size(); }
  double bandwidth() const { return bandwidth_; }
  double min_sample() const { return lo_; }
  double max_sample() const { return hi_; }

 private:
  std::vector<double> samples_;
  double bandwidth_;
  double lo_;
  double hi_;
};

KdeModel fit_kde(std::vector<double> samples, double bandwidth);

/// True when the bandwidth is below the smallest gap between distinct
/// sample values, the condition under which the estimate keeps one mode
/// per distinct reward. Callers warn (not error) when this fails.
bool bandwidth_preserves_multimodality(const std::vector<double>& samples,
                                       double bandwidth);

}  // namespace acvar
