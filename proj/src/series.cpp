#include "inarma/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inarma {

CountSeries::CountSeries(std::vector<int> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("count series must be non-empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) {
      throw std::invalid_argument("count series value at index " + std::to_string(i) +
                                  " is negative");
    }
  }
}

CountSeries::CountSeries(std::vector<int> values, std::vector<std::string> labels)
    : CountSeries(std::move(values)) {
  if (labels.size() != values_.size()) {
    throw std::invalid_argument("labels must have the same length as the values");
  }
  labels_ = std::move(labels);
}

int CountSeries::max() const { return *std::max_element(values_.begin(), values_.end()); }

CountSeries CountSeries::head(std::size_t n) const {
  if (n == 0 || n > values_.size()) throw std::out_of_range("CountSeries::head: bad length");
  std::vector<int> v(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n));
  if (!labels_) return CountSeries(std::move(v));
  std::vector<std::string> l(labels_->begin(), labels_->begin() + static_cast<std::ptrdiff_t>(n));
  return CountSeries(std::move(v), std::move(l));
}

double sample_mean(std::span<const int> x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0;
  for (int v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const int> x) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = sample_mean(x);
  double ss = 0;
  for (int v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double sample_acf(std::span<const int> x, int h) {
  if (h < 0 || static_cast<std::size_t>(h) >= x.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double m = sample_mean(x);
  double denom = 0;
  for (int v : x) denom += (v - m) * (v - m);
  if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
  double num = 0;
  for (std::size_t t = static_cast<std::size_t>(h); t < x.size(); ++t) {
    num += (x[t] - m) * (x[t - static_cast<std::size_t>(h)] - m);
  }
  return num / denom;
}

}  // namespace inarma
