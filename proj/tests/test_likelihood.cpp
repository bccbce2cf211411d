#include "doctest.h"

#include <boost/math/distributions/poisson.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "inarma/likelihood.hpp"
#include "inarma/pmf.hpp"
#include "inarma/simulate.hpp"

using namespace inarma;

namespace {

CountSeries series(std::vector<int> v) { return CountSeries(std::move(v)); }

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

InarmaParams random_inarma(RandomStream& rs) {
  return InarmaParams(0.05 + 1.5 * rs.uniform(), 0.05 + 0.95 * rs.uniform(), 0.05 + 0.9 * rs.uniform());
}

}  // namespace

TEST_CASE("inar1_loglik") {
  const Inar1Params p(0.73, 0.53);
  CHECK(inar1_loglik(p, series({0})) == doctest::Approx(-0.73 / 0.47).epsilon(1e-14));

  // Transition probability against an explicit Bin + Pois convolution.
  const Inar1Params weak(1.2, 0.02);
  for (int x1 : {0, 3, 7}) {
    const LogPmf conv = convolve(binomial_pmf(x1, 0.02), poisson_pmf(1.2, 80));
    for (int x2 : {0, 1, 4, 9}) {
      const double want = poisson_logpmf(1.2 / 0.98, x1) + conv.log_prob(x2);
      CHECK(std::fabs(inar1_loglik(weak, series({x1, x2})) - want) < 1e-10);
      CHECK(std::fabs(inar1_transition_logprob(weak, x1, x2) - conv.log_prob(x2)) < 1e-10);
    }
  }
}

TEST_CASE("inarch1_loglik") {
  CHECK(inarch1_loglik(Inarch1Params(1.0, 0.5), 1.0, series({0, 0})) == doctest::Approx(-2.0).epsilon(1e-15));
  const std::vector<int> v{3, 0, 2, 5, 1};
  double iid = poisson_logpmf(4.0, 3);
  for (std::size_t t = 1; t < v.size(); ++t) iid += poisson_logpmf(1.7, v[t]);
  CHECK(inarch1_loglik(Inarch1Params(1.7, 0.0), 4.0, series(v)) == doctest::Approx(iid).epsilon(1e-14));
  CHECK_THROWS_AS(inarch1_loglik(Inarch1Params(1.0, 0.5), 0.0, series({1})), std::invalid_argument);
}

TEST_CASE("ingarch11_loglik") {
  const Ingarch11Params p(0.4, 0.3, 0.5);
  const double lambda1 = 0.5 * 2.2 + 0.4 / 0.5;
  CHECK(ingarch11_loglik(p, 2.2, series({4})) == doctest::Approx(poisson_logpmf(lambda1, 4)).epsilon(1e-14));
  CHECK_THROWS_AS(ingarch11_loglik(p, -0.1, series({1})), std::invalid_argument);
}

TEST_CASE("property: INGARCH with beta = 0 equals INARCH") {
  RandomStream rs(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double nu = 0.1 + 3 * rs.uniform();
    const double alpha = 0.95 * rs.uniform();
    const double lambda1 = nu + 5 * rs.uniform();
    const auto sim = simulate_inarch1(Inarch1Params(nu, alpha), 200, rs);
    const double a = inarch1_loglik(Inarch1Params(nu, alpha), lambda1, sim.series);
    const double g = ingarch11_loglik(Ingarch11Params(nu, alpha, 0.0), lambda1 - nu, sim.series);
    CHECK(std::fabs(a - g) < 1e-12 * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("transition kernel") {
  const DerivedInarma d = derive(InarmaParams(0.5, 0.6, 0.5));
  const int y_max = 25;
  const TransitionKernel k = build_transition_kernel(d, y_max);
  const double j_rate = d.latent_immigration;

  for (int y = 0; y < y_max; ++y) {
    CHECK(k.prob(0, y) == doctest::Approx(std::exp(poisson_logpmf(j_rate, y))).epsilon(1e-12));
  }
  const boost::math::poisson jd(j_rate);
  CHECK(k.prob(0, y_max) == doctest::Approx(boost::math::cdf(boost::math::complement(jd, y_max - 1.0))).epsilon(1e-9));

  for (int i = 0; i <= y_max; ++i) {
    const auto row = k.row(i);
    CHECK(std::fabs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) < 1e-10);
    // Entries below the top bin are the exact Bin(i, xi) + Pois convolution.
    const LogPmf want = convolve(binomial_pmf(i, d.xi), poisson_pmf(j_rate, 2 * y_max));
    for (int j = 0; j < y_max; ++j) CHECK(std::fabs(row[static_cast<std::size_t>(j)] - std::exp(want.log_prob(j))) < 1e-12);
  }
}

TEST_CASE("kernel preserves the stationary latent law") {
  for (const InarmaParams& p : {InarmaParams(0.31, 0.67, 0.80), InarmaParams(2.0, 0.3, 0.4)}) {
    const DerivedInarma d = derive(p);
    const int y_max = poisson_quantile_upper(d.latent_stationary_mean, 1e-12);
    const std::vector<double> pi = initial_latent_distribution(d, y_max);
    const std::vector<double> next = build_transition_kernel(d, y_max).propagate(pi);
    for (int y = 0; y <= y_max; ++y) CHECK(std::fabs(next[static_cast<std::size_t>(y)] - pi[static_cast<std::size_t>(y)]) < 1e-6);
  }
}

TEST_CASE("inarma_loglik_forward examples") {
  RandomStream rs(5);
  for (int trial = 0; trial < 50; ++trial) {
    const InarmaParams p = random_inarma(rs);
    CHECK(std::fabs(inarma_loglik_forward(p, series({0})) + p.tau() / (1 - p.kappa())) < 1e-9);
  }

  const InarmaParams p(0.5, 0.6, 0.5);
  const std::vector<int> v{1, 0, 2, 1, 0, 1};
  const double fwd = inarma_loglik_forward(p, series(v), 20);
  const double brute = brute_force_loglik(p, v, 20);
  CHECK(rel_err(fwd, brute) < 1e-9);

  CHECK_THROWS_AS(inarma_loglik_forward(p, series({0, 9}), 8), std::domain_error);
}

TEST_CASE("brute-force oracle") {
  const InarmaParams p(0.4, 0.7, 0.6);
  // [0] matches the closed form up to the truncation of the initial law.
  CHECK(std::fabs(brute_force_loglik(p, std::vector<int>{0}, 30) + 0.4 / 0.4) < 1e-9);

  // phi = 1 reduces to INAR(1).
  const std::vector<int> v{1, 2, 0, 1, 3};
  CHECK(std::fabs(brute_force_loglik(InarmaParams(0.4, 1.0, 0.6), v, 30) -
                  inar1_loglik(Inar1Params(0.4, 0.6), series(v))) < 1e-8);

  CHECK_THROWS(brute_force_loglik(p, std::vector<int>(9, 0), 10));
  CHECK_THROWS(brute_force_loglik(p, std::vector<int>{0}, 31));
}

TEST_CASE("property: forward algorithm equals brute-force enumeration") {
  RandomStream rs(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const InarmaParams p = random_inarma(rs);
    const std::size_t len = 1 + static_cast<std::size_t>(rs.uniform() * 6);
    std::vector<int> v(len);
    for (int& x : v) x = static_cast<int>(rs.uniform() * 4);
    const int y_max = 8 + static_cast<int>(rs.uniform() * 4);
    CAPTURE(trial);
    CHECK(rel_err(inarma_loglik_forward(p, series(v), y_max), brute_force_loglik(p, v, y_max)) < 1e-9);
  }
}

TEST_CASE("forward filter stays normalized and increments are log-probabilities") {
  const InarmaParams p(0.31, 0.67, 0.80);
  RandomStream rs(6);
  const auto sim = simulate_inarma_state(p, 400, rs);
  ForwardFilter f(p, choose_ymax(p, sim.series));
  for (int x : sim.series.values()) {
    CHECK(f.update(x) <= 0.0);
    CHECK(std::fabs(log_sum_exp(f.filtered_log())) < 1e-9);
  }
  CHECK(f.steps() == 400);
  CHECK(f.loglik() == doctest::Approx(inarma_loglik_forward(p, sim.series)).epsilon(1e-15));
}

TEST_CASE("property: phi = 1 forward likelihood equals INAR(1)") {
  RandomStream rs(7);
  for (int trial = 0; trial < 10; ++trial) {
    const double tau = 0.2 + 2 * rs.uniform();
    const double kappa = 0.05 + 0.85 * rs.uniform();
    const std::size_t len = 50 + static_cast<std::size_t>(rs.uniform() * 450);
    const auto sim = simulate_inar1(Inar1Params(tau, kappa), len, rs);
    const double a = inarma_loglik_forward(InarmaParams(tau, 1.0, kappa), sim.series);
    const double b = inar1_loglik(Inar1Params(tau, kappa), sim.series);
    CHECK(std::fabs(a - b) < 1e-6);
  }
}

TEST_CASE("choose_ymax") {
  CHECK(choose_ymax(InarmaParams(0.01, 1.0, 0.1), series({5, 1})) >= 5);

  const InarmaParams big(10, 0.5, 0.9);
  const DerivedInarma d = derive(big);
  const boost::math::poisson dist(d.latent_stationary_mean);
  // Smallest n with upper tail <= 1e-10, by cumulative search.
  int q = 0;
  while (boost::math::cdf(boost::math::complement(dist, static_cast<double>(q))) > 1e-10) ++q;
  CHECK(q == 310);
  CHECK(choose_ymax(big, series({3})) >= q);

  // Stability under 25% inflation on a gold-sized simulated series.
  const InarmaParams p(0.31, 0.67, 0.80);
  RandomStream rs(8);
  const auto sim = simulate_inarma_state(p, 370, rs);
  const int y = choose_ymax(p, sim.series);
  CHECK(y >= sim.series.max());
  const double base = inarma_loglik_forward(p, sim.series, y);
  const double inflated = inarma_loglik_forward(p, sim.series, static_cast<int>(std::ceil(1.25 * y)));
  CHECK(std::fabs(base - inflated) < 1e-8);
}
