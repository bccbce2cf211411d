#pragma once

// Log-space probability mass functions on {0, ..., n} with explicit tail mass.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace inarma {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(sum(exp(values))); -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> values);
/// log(exp(a) + exp(b)).
double log_add_exp(double a, double b);
/// log(1 - exp(log_p)) for log_p <= 0, accurate near both ends.
double log1m_exp(double log_p);

/// Finite distribution over {0, ..., support_max()} stored as natural-log
/// probabilities. `tail_log_mass` is the log of the probability not represented
/// in `log_probs` (mass above support_max for truncated laws); -inf when the
/// law is fully represented.
struct LogPmf {
  std::vector<double> log_probs;
  double tail_log_mass = kNegInf;

  int support_max() const { return static_cast<int>(log_probs.size()) - 1; }
  /// log P(X = k); -inf outside the represented support.
  double log_prob(std::int64_t k) const;
  /// logsumexp over all entries and the tail; 0 for a normalized pmf.
  double total_log_mass() const;
};

/// log Pois(rate)(k). rate == 0 gives the point mass at zero.
double poisson_logpmf(double rate, std::int64_t k);
/// log Bin(n, p)(k); -inf for k < 0 or k > n.
double binomial_logpmf(std::int64_t n, double p, std::int64_t k);

LogPmf point_mass(int k);
/// Pois(rate) on {0..n}; mass above n goes to the tail.
LogPmf poisson_pmf(double rate, int n);
/// Bin(n, p) on {0..n}, exact.
LogPmf binomial_pmf(int n, double p);

/// Law of the sum of independent draws from `a` and `b`.
LogPmf convolve(const LogPmf& a, const LogPmf& b);

/// Smallest n with P(Pois(rate) <= n) >= 1 - tol.
int poisson_quantile_upper(double rate, double tol);

}  // namespace inarma
