#include "inarma/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "inarma/pmf.hpp"

namespace inarma {

namespace {
constexpr double kNegligible = 1e-40;
}  // namespace

double inar1_transition_logprob(const Inar1Params& p, int x_prev, int x) {
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(std::min(x_prev, x)) + 1);
  for (int k = 0; k <= std::min(x_prev, x); ++k) {
    terms.push_back(binomial_logpmf(x_prev, p.alpha(), k) + poisson_logpmf(p.nu(), x - k));
  }
  return log_sum_exp(terms);
}

double inar1_loglik(const Inar1Params& p, const CountSeries& x) {
  double ll = poisson_logpmf(p.nu() / (1.0 - p.alpha()), x[0]);
  for (std::size_t t = 1; t < x.size(); ++t) ll += inar1_transition_logprob(p, x[t - 1], x[t]);
  return ll;
}

double inarch1_loglik(const Inarch1Params& p, double lambda1, const CountSeries& x) {
  if (!(lambda1 > 0) || !std::isfinite(lambda1)) {
    throw std::invalid_argument("lambda1 must be > 0");
  }
  double ll = poisson_logpmf(lambda1, x[0]);
  for (std::size_t t = 1; t < x.size(); ++t) {
    ll += poisson_logpmf(p.nu() + p.alpha() * x[t - 1], x[t]);
  }
  return ll;
}

double ingarch11_loglik(const Ingarch11Params& p, double s1, const CountSeries& x) {
  if (!(s1 >= 0) || !std::isfinite(s1)) throw std::invalid_argument("s1 must be >= 0");
  const double one_minus_beta = 1.0 - p.beta();
  double lambda = one_minus_beta * s1 + p.nu() / one_minus_beta;
  double ll = poisson_logpmf(lambda, x[0]);
  for (std::size_t t = 1; t < x.size(); ++t) {
    lambda = p.nu() + p.alpha() * x[t - 1] + p.beta() * lambda;
    ll += poisson_logpmf(lambda, x[t]);
  }
  return ll;
}

TransitionKernel::TransitionKernel(const DerivedInarma& d, int y_max) : y_max_(y_max) {
  if (y_max < 1) throw std::domain_error("y_max must be >= 1");
  const auto n = static_cast<std::size_t>(y_max) + 1;
  probs_.assign(n * n, 0.0);

  std::vector<double> immigration(n);
  for (int j = 0; j <= y_max; ++j) {
    immigration[static_cast<std::size_t>(j)] = std::exp(poisson_logpmf(d.latent_immigration, j));
  }
  std::vector<double> survivors;
  for (int i = 0; i <= y_max; ++i) {
    survivors.resize(static_cast<std::size_t>(i) + 1);
    for (int k = 0; k <= i; ++k) {
      survivors[static_cast<std::size_t>(k)] = std::exp(binomial_logpmf(i, d.xi, k));
    }
    double below_top = 0.0;
    for (int j = 0; j < y_max; ++j) {
      double acc = 0.0;
      for (int k = 0; k <= std::min(i, j); ++k) {
        acc += survivors[static_cast<std::size_t>(k)] * immigration[static_cast<std::size_t>(j - k)];
      }
      probs_[index(i, j)] = acc;
      below_top += acc;
    }
    double exact_top = 0.0;
    for (int k = 0; k <= i; ++k) {
      exact_top += survivors[static_cast<std::size_t>(k)] * immigration[static_cast<std::size_t>(y_max - k)];
    }
    const double top = std::max(0.0, 1.0 - below_top);
    probs_[index(i, y_max)] = top;
    max_folded_mass_ = std::max(max_folded_mass_, std::max(0.0, top - exact_top));
  }

  bands_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = probs_.data() + i * n;
    std::size_t lo = 0, hi = n;
    while (lo < n && r[lo] < kNegligible) ++lo;
    while (hi > lo && r[hi - 1] < kNegligible) --hi;
    bands_[i] = {lo, hi};
  }
}

double TransitionKernel::log_prob(int from, int to) const {
  const double v = prob(from, to);
  return v > 0 ? std::log(v) : kNegInf;
}

std::span<const double> TransitionKernel::row(int from) const {
  const auto n = static_cast<std::size_t>(y_max_) + 1;
  return std::span<const double>(probs_).subspan(static_cast<std::size_t>(from) * n, n);
}

std::vector<double> TransitionKernel::propagate(std::span<const double> dist) const {
  const auto n = static_cast<std::size_t>(y_max_) + 1;
  if (dist.size() != n) throw std::invalid_argument("propagate: size mismatch");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = dist[i];
    if (w < kNegligible) continue;
    const double* r = probs_.data() + i * n;
    const auto [lo, hi] = bands_[i];
    for (std::size_t j = lo; j < hi; ++j) out[j] += w * r[j];
  }
  return out;
}

TransitionKernel build_transition_kernel(const DerivedInarma& d, int y_max) {
  return TransitionKernel(d, y_max);
}

std::vector<double> initial_latent_distribution(const DerivedInarma& d, int y_max) {
  std::vector<double> logs(static_cast<std::size_t>(y_max) + 1);
  for (int y = 0; y <= y_max; ++y) {
    logs[static_cast<std::size_t>(y)] = poisson_logpmf(d.latent_stationary_mean, y);
  }
  const double norm = log_sum_exp(logs);
  std::vector<double> out(logs.size());
  for (std::size_t y = 0; y < logs.size(); ++y) out[y] = std::exp(logs[y] - norm);
  return out;
}

ForwardFilter::ForwardFilter(const InarmaParams& p, int y_max)
    : derived_(derive(p)),
      kernel_(derived_, y_max),
      filtered_(initial_latent_distribution(derived_, y_max)) {}

std::span<const double> ForwardFilter::emission_column(int x) {
  if (x < 0 || x > y_max()) {
    throw std::domain_error("observation " + std::to_string(x) + " exceeds y_max " +
                            std::to_string(y_max()));
  }
  const auto xi = static_cast<std::size_t>(x);
  if (emission_.size() <= xi) emission_.resize(xi + 1);
  auto& col = emission_[xi];
  if (col.empty()) {
    col.resize(static_cast<std::size_t>(y_max()) + 1);
    for (int y = 0; y <= y_max(); ++y) {
      col[static_cast<std::size_t>(y)] = std::exp(binomial_logpmf(y, derived_.emission_prob, x));
    }
  }
  return col;
}

double ForwardFilter::update(int x) {
  const std::span<const double> emit = emission_column(x);
  std::vector<double> next = steps_ == 0 ? filtered_ : kernel_.propagate(filtered_);
  double norm = 0.0;
  for (std::size_t y = 0; y < next.size(); ++y) {
    next[y] *= emit[y];
    norm += next[y];
  }
  if (!(norm > 0)) {
    filtered_.assign(filtered_.size(), 0.0);
    loglik_ = kNegInf;
    ++steps_;
    return kNegInf;
  }
  for (double& v : next) v /= norm;
  filtered_ = std::move(next);
  const double increment = std::log(norm);
  loglik_ += increment;
  ++steps_;
  return increment;
}

std::vector<double> ForwardFilter::filtered_log() const {
  std::vector<double> out(filtered_.size());
  std::transform(filtered_.begin(), filtered_.end(), out.begin(),
                 [](double v) { return v > 0 ? std::log(v) : kNegInf; });
  return out;
}

std::vector<double> ForwardFilter::predict_latent() const {
  if (steps_ == 0) return filtered_;
  return kernel_.propagate(filtered_);
}

double inarma_loglik_forward(const InarmaParams& p, const CountSeries& x, int y_max) {
  if (y_max < x.max()) {
    throw std::domain_error("y_max (" + std::to_string(y_max) + ") is below the largest observation (" +
                            std::to_string(x.max()) + ")");
  }
  ForwardFilter filter(p, y_max);
  for (int v : x.values()) {
    if (filter.update(v) == kNegInf) return kNegInf;
  }
  return filter.loglik();
}

double inarma_loglik_forward(const InarmaParams& p, const CountSeries& x) {
  return inarma_loglik_forward(p, x, choose_ymax(p, x));
}

int choose_ymax(const InarmaParams& p, const CountSeries& x, double tol) {
  const DerivedInarma d = derive(p);
  const int quantile = poisson_quantile_upper(d.latent_stationary_mean, tol);
  const double scaled = static_cast<double>(x.max()) / d.emission_prob;
  const int floor_bound = static_cast<int>(std::ceil(scaled)) +
                          10 * static_cast<int>(std::ceil(std::sqrt(scaled + 1.0)));
  return std::max({quantile, floor_bound, x.max(), 1});
}

}  // namespace inarma
