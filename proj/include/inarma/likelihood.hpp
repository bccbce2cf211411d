#pragma once

// Exact log-likelihoods for the four count models.
//
// INARMA(1,1) is evaluated as a hidden Markov model through its thinned INAR(1)
// representation: latent Y_t = J_t + xi o Y_{t-1} on {0, ..., y_max} and
// emission X_t | Y_t ~ Bin(Y_t, phi kappa / xi). Transition mass beyond y_max
// is folded into the top state so every kernel row stays a proper distribution.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "inarma/model.hpp"
#include "inarma/series.hpp"

namespace inarma {

inline constexpr double kDefaultYmaxTol = 1e-10;

double inar1_loglik(const Inar1Params& p, const CountSeries& x);

/// Conditional Poisson likelihood with lambda_1 = lambda1 and
/// lambda_t = nu + alpha X_{t-1}.
double inarch1_loglik(const Inarch1Params& p, double lambda1, const CountSeries& x);

/// Conditional Poisson likelihood with lambda_1 = (1 - beta) s1 + nu / (1 - beta)
/// and lambda_t = nu + alpha X_{t-1} + beta lambda_{t-1}.
double ingarch11_loglik(const Ingarch11Params& p, double s1, const CountSeries& x);

/// log P(X_t = x_t | X_{t-1} = x_prev) under INAR(1): Bin(x_prev, alpha) + Pois(nu).
double inar1_transition_logprob(const Inar1Params& p, int x_prev, int x);

/// Latent transition matrix of the thinned INAR(1) chain, row-major, linear scale.
class TransitionKernel {
 public:
  TransitionKernel(const DerivedInarma& d, int y_max);

  int y_max() const { return y_max_; }
  double prob(int from, int to) const { return probs_[index(from, to)]; }
  double log_prob(int from, int to) const;
  std::span<const double> row(int from) const;
  /// Largest probability (over rows) of jumping beyond y_max before folding.
  double max_folded_mass() const { return max_folded_mass_; }

  /// Row vector times kernel: out[j] = sum_i dist[i] K(i, j).
  /// Terms below 1e-40 are skipped; they cannot move a double-precision result.
  std::vector<double> propagate(std::span<const double> dist) const;

 private:
  std::size_t index(int from, int to) const {
    return static_cast<std::size_t>(from) * static_cast<std::size_t>(y_max_ + 1) +
           static_cast<std::size_t>(to);
  }

  int y_max_;
  std::vector<double> probs_;
  std::vector<std::pair<std::size_t, std::size_t>> bands_;  // [lo, hi) per row
  double max_folded_mass_ = 0.0;
};

TransitionKernel build_transition_kernel(const DerivedInarma& d, int y_max);

/// Stationary Pois(mu_Y) truncated to {0..y_max} and renormalized.
std::vector<double> initial_latent_distribution(const DerivedInarma& d, int y_max);

/// Scaled forward recursion over the latent chain, one observation at a time.
class ForwardFilter {
 public:
  ForwardFilter(const InarmaParams& p, int y_max);

  /// Absorbs the next observation; returns log P(x_t | x_1..x_{t-1}).
  /// Throws std::domain_error if x > y_max.
  double update(int x);

  int y_max() const { return kernel_.y_max(); }
  double loglik() const { return loglik_; }
  std::size_t steps() const { return steps_; }
  const DerivedInarma& derived() const { return derived_; }
  const TransitionKernel& kernel() const { return kernel_; }

  /// P(Y_t = y | x_1..x_t), normalized; the initial law before any update.
  std::span<const double> filtered() const { return filtered_; }
  std::vector<double> filtered_log() const;
  /// P(Y_{t+1} = y | x_1..x_t).
  std::vector<double> predict_latent() const;

  /// Bin(y, emission_prob)(x) for y = 0..y_max.
  std::span<const double> emission_column(int x);

 private:
  DerivedInarma derived_;
  TransitionKernel kernel_;
  std::vector<double> filtered_;
  std::vector<std::vector<double>> emission_;
  double loglik_ = 0.0;
  std::size_t steps_ = 0;
};

/// Forward-algorithm log-likelihood. Throws std::domain_error if y_max < max(x).
double inarma_loglik_forward(const InarmaParams& p, const CountSeries& x, int y_max);
/// Same with y_max = choose_ymax(p, x, kDefaultYmaxTol).
double inarma_loglik_forward(const InarmaParams& p, const CountSeries& x);

/// Truncation bound: max of the (1 - tol) quantile of the stationary latent law
/// and ceil(m / p) + 10 ceil(sqrt(m / p + 1)) with m = max(x), p the emission
/// probability.
int choose_ymax(const InarmaParams& p, const CountSeries& x, double tol = kDefaultYmaxTol);

inline constexpr std::size_t kBruteForceMaxLength = 8;
inline constexpr int kBruteForceMaxYmax = 30;

/// Test oracle: log of the sum over every latent path y_1..y_T in {0..y_max}^T of
/// pi(y_1) prod K(y_{t-1}, y_t) prod Bin(y_t, p)(x_t), by explicit enumeration.
/// Uses the same truncated model (top state absorbs the excess) as the forward
/// filter but shares none of its code. Refuses T > 8 or y_max > 30.
double brute_force_loglik(const InarmaParams& p, std::span<const int> x, int y_max);

}  // namespace inarma
