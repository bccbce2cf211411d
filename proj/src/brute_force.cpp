// Path-enumeration oracle for the INARMA(1,1) likelihood. Kept apart from the
// forward filter on purpose: all tables are rebuilt here in log space from the
// raw parameters.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "inarma/likelihood.hpp"
#include "inarma/pmf.hpp"

namespace inarma {

namespace {

struct LogAccumulator {
  double top = kNegInf;
  double scaled = 0.0;

  void add(double v) {
    if (v == kNegInf) return;
    if (v <= top) {
      scaled += std::exp(v - top);
    } else {
      scaled = scaled * std::exp(top - v) + 1.0;
      top = v;
    }
  }
  double value() const { return top == kNegInf ? kNegInf : top + std::log(scaled); }
};

struct Tables {
  int n = 0;
  std::vector<double> log_init;
  std::vector<double> log_trans;  // row-major
  std::vector<std::vector<double>> log_emit;  // [t][y]
};

void enumerate(const Tables& tab, std::size_t t, int prev, double acc, LogAccumulator& out) {
  if (t == tab.log_emit.size()) {
    out.add(acc);
    return;
  }
  for (int y = 0; y < tab.n; ++y) {
    const double e = tab.log_emit[t][static_cast<std::size_t>(y)];
    if (e == kNegInf) continue;
    const double step = t == 0 ? tab.log_init[static_cast<std::size_t>(y)]
                               : tab.log_trans[static_cast<std::size_t>(prev * tab.n + y)];
    if (step == kNegInf) continue;
    enumerate(tab, t + 1, y, acc + step + e, out);
  }
}

}  // namespace

double brute_force_loglik(const InarmaParams& p, std::span<const int> x, int y_max) {
  if (x.empty() || x.size() > kBruteForceMaxLength) {
    throw std::invalid_argument("brute_force_loglik: series length must be in 1..8");
  }
  if (y_max < 1 || y_max > kBruteForceMaxYmax) {
    throw std::invalid_argument("brute_force_loglik: y_max must be in 1..30");
  }

  const double xi = 1.0 - p.phi() * (1.0 - p.kappa());
  const double emit_p = std::min(1.0, p.phi() * p.kappa() / xi);
  const double immigration = p.tau() * xi / p.kappa();
  const double stationary = immigration / (1.0 - xi);

  Tables tab;
  tab.n = y_max + 1;
  const auto n = static_cast<std::size_t>(tab.n);

  tab.log_init.resize(n);
  for (int y = 0; y <= y_max; ++y) tab.log_init[static_cast<std::size_t>(y)] = poisson_logpmf(stationary, y);
  const double init_norm = log_sum_exp(tab.log_init);
  for (double& v : tab.log_init) v -= init_norm;

  tab.log_trans.assign(n * n, kNegInf);
  std::vector<double> terms;
  for (int i = 0; i <= y_max; ++i) {
    std::vector<double> lower;
    for (int j = 0; j < y_max; ++j) {
      terms.clear();
      for (int k = 0; k <= std::min(i, j); ++k) {
        terms.push_back(binomial_logpmf(i, xi, k) + poisson_logpmf(immigration, j - k));
      }
      const double v = log_sum_exp(terms);
      tab.log_trans[static_cast<std::size_t>(i * tab.n + j)] = v;
      lower.push_back(v);
    }
    tab.log_trans[static_cast<std::size_t>(i * tab.n + y_max)] = log1m_exp(std::min(0.0, log_sum_exp(lower)));
  }

  tab.log_emit.resize(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    tab.log_emit[t].resize(n);
    for (int y = 0; y <= y_max; ++y) {
      tab.log_emit[t][static_cast<std::size_t>(y)] = binomial_logpmf(y, emit_p, x[t]);
    }
  }

  LogAccumulator total;
  enumerate(tab, 0, 0, 0.0, total);
  return total.value();
}

}  // namespace inarma
