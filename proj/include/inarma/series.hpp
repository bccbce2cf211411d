#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace inarma {

/// Non-empty sequence of non-negative counts with optional time labels.
class CountSeries {
 public:
  explicit CountSeries(std::vector<int> values);
  CountSeries(std::vector<int> values, std::vector<std::string> labels);

  std::span<const int> values() const { return values_; }
  const std::optional<std::vector<std::string>>& labels() const { return labels_; }
  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  int max() const;

  /// First n observations (labels carried along). 1 <= n <= size().
  CountSeries head(std::size_t n) const;

 private:
  std::vector<int> values_;
  std::optional<std::vector<std::string>> labels_;
};

/// Sample summaries used for method-of-moments starts and data checks.
double sample_mean(std::span<const int> x);
/// Variance with denominator n - 1.
double sample_variance(std::span<const int> x);
/// Lag-h sample autocorrelation (biased, denominator n times the variance).
/// NaN when the series is constant.
double sample_acf(std::span<const int> x, int h);

}  // namespace inarma
