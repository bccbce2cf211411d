#include "inarma/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace inarma {

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return kNegInf;
  const double top = *std::max_element(values.begin(), values.end());
  if (top == kNegInf) return kNegInf;
  if (top == std::numeric_limits<double>::infinity()) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double top = std::max(a, b);
  return top + std::log1p(std::exp(-std::fabs(a - b)));
}

double log1m_exp(double log_p) {
  if (log_p > 0) throw std::domain_error("log1m_exp: argument must be <= 0");
  if (log_p == 0) return kNegInf;
  return log_p > -std::numbers::ln2 ? std::log(-std::expm1(log_p)) : std::log1p(-std::exp(log_p));
}

double LogPmf::log_prob(std::int64_t k) const {
  if (k < 0 || k > support_max()) return kNegInf;
  return log_probs[static_cast<std::size_t>(k)];
}

double LogPmf::total_log_mass() const {
  return log_add_exp(log_sum_exp(log_probs), tail_log_mass);
}

double poisson_logpmf(double rate, std::int64_t k) {
  if (!(rate >= 0)) throw std::domain_error("poisson_logpmf: rate must be >= 0");
  if (k < 0) return kNegInf;
  if (rate == 0) return k == 0 ? 0.0 : kNegInf;
  const double kd = static_cast<double>(k);
  return kd * std::log(rate) - rate - std::lgamma(kd + 1.0);
}

double binomial_logpmf(std::int64_t n, double p, std::int64_t k) {
  if (n < 0 || !(p >= 0 && p <= 1)) throw std::domain_error("binomial_logpmf: bad n or p");
  if (k < 0 || k > n) return kNegInf;
  if (p == 0) return k == 0 ? 0.0 : kNegInf;
  if (p == 1) return k == n ? 0.0 : kNegInf;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
         kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

LogPmf point_mass(int k) {
  if (k < 0) throw std::domain_error("point_mass: k must be >= 0");
  LogPmf out;
  out.log_probs.assign(static_cast<std::size_t>(k) + 1, kNegInf);
  out.log_probs.back() = 0.0;
  return out;
}

LogPmf poisson_pmf(double rate, int n) {
  if (n < 0) throw std::domain_error("poisson_pmf: n must be >= 0");
  LogPmf out;
  out.log_probs.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out.log_probs[static_cast<std::size_t>(k)] = poisson_logpmf(rate, k);

  // Sum the upper tail directly instead of 1 - cdf to keep tiny tails accurate.
  if (rate > 0) {
    std::vector<double> tail_terms;
    double largest = kNegInf;
    for (std::int64_t k = n + 1;; ++k) {
      const double term = poisson_logpmf(rate, k);
      tail_terms.push_back(term);
      largest = std::max(largest, term);
      if (static_cast<double>(k) > rate && term < largest - 40.0) break;
    }
    out.tail_log_mass = log_sum_exp(tail_terms);
  }
  return out;
}

LogPmf binomial_pmf(int n, double p) {
  if (n < 0) throw std::domain_error("binomial_pmf: n must be >= 0");
  LogPmf out;
  out.log_probs.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out.log_probs[static_cast<std::size_t>(k)] = binomial_logpmf(n, p, k);
  return out;
}

LogPmf convolve(const LogPmf& a, const LogPmf& b) {
  if (a.log_probs.empty() || b.log_probs.empty()) {
    throw std::invalid_argument("convolve: empty pmf");
  }
  const int na = a.support_max();
  const int nb = b.support_max();
  LogPmf out;
  out.log_probs.resize(static_cast<std::size_t>(na + nb) + 1);
  std::vector<double> terms;
  for (int k = 0; k <= na + nb; ++k) {
    terms.clear();
    for (int i = std::max(0, k - nb); i <= std::min(k, na); ++i) {
      terms.push_back(a.log_probs[static_cast<std::size_t>(i)] +
                      b.log_probs[static_cast<std::size_t>(k - i)]);
    }
    out.log_probs[static_cast<std::size_t>(k)] = log_sum_exp(terms);
  }
  // Unrepresented mass: 1 - (1 - ta)(1 - tb) = ta + tb (1 - ta).
  const double b_part = b.tail_log_mass == kNegInf ? kNegInf : b.tail_log_mass + log1m_exp(a.tail_log_mass);
  out.tail_log_mass = log_add_exp(a.tail_log_mass, b_part);
  return out;
}

int poisson_quantile_upper(double rate, double tol) {
  if (!(rate >= 0)) throw std::domain_error("poisson_quantile_upper: rate must be >= 0");
  if (!(tol > 0 && tol < 1)) throw std::domain_error("poisson_quantile_upper: tol must lie in (0, 1)");
  if (rate == 0) return 0;
  double cdf = 0.0;
  for (int n = 0;; ++n) {
    cdf += std::exp(poisson_logpmf(rate, n));
    if (1.0 - cdf <= tol) return n;
    if (n > 10 * rate + 1000) return n;
  }
}

}  // namespace inarma
