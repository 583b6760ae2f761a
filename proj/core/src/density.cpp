#include "acvar/density.hpp"

#include <algorithm>
#include <cmath>

#include "acvar/errors.hpp"

namespace acvar {

namespace {

double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

KdeModel::KdeModel(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
  if (samples_.empty()) {
    throw InvalidInputError("KDE needs at least one sample");
  }
  if (!(bandwidth_ > 0.0)) {
    throw InvalidParameterError("KDE bandwidth must be positive");
  }
  auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
  lo_ = *lo;
  hi_ = *hi;
}

double KdeModel::cdf(double x) const {
  double acc = 0.0;
  for (double s : samples_) {
    acc += standard_normal_cdf((x - s) / bandwidth_);
  }
  return acc / static_cast<double>(samples_.size());
}

double KdeModel::inverse_cdf(double c) const {
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidParameterError("inverse_cdf requires c in (0,1)");
  }
  double lo = lo_ - 10.0 * bandwidth_;
  double hi = hi_ + 10.0 * bandwidth_;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < c) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

KdeModel fit_kde(std::vector<double> samples, double bandwidth) {
  return KdeModel(std::move(samples), bandwidth);
}

bool bandwidth_preserves_multimodality(const std::vector<double>& samples,
                                       double bandwidth) {
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 2) {
    return true;
  }
  double min_gap = sorted[1] - sorted[0];
  for (std::size_t i = 2; i < sorted.size(); ++i) {
    min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
  }
  return bandwidth < min_gap;
}

}  // namespace acvar
