#include "inarma/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace inarma {

namespace {

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

// Stirling series correction log(k!) - [(k + 1/2) log(k + 1) - (k + 1) + log(2 pi)/2].
double stirling_tail(std::int64_t k) {
  static constexpr double table[] = {
      0.08106146679532726, 0.04134069595540929, 0.02767792568499834,
      0.02079067210376509, 0.01664469118982119, 0.01387612882307075,
      0.01189670994589177, 0.01041126526197209, 0.009255462182712733,
      0.008330563433362871};
  if (k < 10) return table[k];
  const double r = 1.0 / static_cast<double>(k + 1);
  const double r2 = r * r;
  return (1.0 / 12 - (1.0 / 360 - r2 / 1260) * r2) * r;
}

}  // namespace

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * kTwoPow53Inv;
}

double RandomStream::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPow53Inv;
}

double RandomStream::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t RandomStream::poisson(double rate) {
  if (!(rate >= 0) || !std::isfinite(rate)) {
    throw std::domain_error("poisson: rate must be finite and >= 0");
  }
  if (rate == 0) return 0;
  return rate < 10 ? poisson_inversion(rate) : poisson_ptrs(rate);
}

std::int64_t RandomStream::poisson_inversion(double rate) {
  for (;;) {
    double prob = std::exp(-rate);
    double cum = prob;
    const double u = uniform();
    std::int64_t x = 0;
    while (u > cum) {
      ++x;
      prob *= rate / static_cast<double>(x);
      cum += prob;
      // Rounding can leave cum just below u; redraw rather than loop forever.
      if (prob == 0 && x > rate) break;
    }
    if (u <= cum) return x;
  }
}

std::int64_t RandomStream::poisson_ptrs(double rate) {
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform_open();
    const double us = 0.5 - std::fabs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2 * a / us + b) * u + rate + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -rate + static_cast<double>(k) * loglam - std::lgamma(static_cast<double>(k) + 1.0)) {
      return k;
    }
  }
}

std::int64_t RandomStream::binomial(std::int64_t n, double p) {
  if (n < 0) throw std::domain_error("binomial: n must be >= 0");
  if (!(p >= 0 && p <= 1)) throw std::domain_error("binomial: p must lie in [0, 1]");
  if (n == 0 || p == 0) return 0;
  if (p == 1) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  return static_cast<double>(n) * p < 10 ? binomial_inversion(n, p) : binomial_btrd(n, p);
}

std::int64_t RandomStream::binomial_inversion(std::int64_t n, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = static_cast<double>(n + 1) * s;
  const double q_pow_n = std::exp(static_cast<double>(n) * std::log1p(-p));
  for (;;) {
    double r = q_pow_n;
    double u = uniform();
    std::int64_t x = 0;
    while (u > r) {
      u -= r;
      ++x;
      if (x > n) break;
      r *= a / static_cast<double>(x) - s;
    }
    if (x <= n) return x;
  }
}

// BTRD: transformed rejection with decomposition. Requires p <= 1/2, n p >= 10.
std::int64_t RandomStream::binomial_btrd(std::int64_t n, double p) {
  const double q = 1.0 - p;
  const double nd = static_cast<double>(n);
  const auto m = static_cast<std::int64_t>(std::floor((nd + 1) * p));
  const double r = p / q;
  const double nr = (nd + 1) * r;
  const double npq = nd * p * q;
  const double spq = std::sqrt(npq);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double v_r = 0.92 - 4.2 / b;
  const double u_rv_r = 0.86 * v_r;

  for (;;) {
    double v = uniform();
    double u;
    if (v <= u_rv_r) {
      u = v / v_r - 0.43;
      return static_cast<std::int64_t>(std::floor((2 * a / (0.5 - std::fabs(u)) + b) * u + c));
    }
    if (v >= v_r) {
      u = uniform() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = std::copysign(0.5, u) - u;
      v = v_r * uniform();
    }
    const double us = 0.5 - std::fabs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2 * a / us + b) * u + c));
    if (k < 0 || k > n) continue;
    v *= alpha / (a / (us * us) + b);
    const std::int64_t km = k > m ? k - m : m - k;
    if (km <= 15) {
      double f = 1.0;
      if (m < k) {
        for (std::int64_t i = m + 1; i <= k; ++i) f *= nr / static_cast<double>(i) - r;
      } else if (m > k) {
        for (std::int64_t i = k + 1; i <= m; ++i) v *= nr / static_cast<double>(i) - r;
      }
      if (v <= f) return k;
      continue;
    }
    const double kmd = static_cast<double>(km);
    v = std::log(v);
    const double rho = (kmd / npq) * (((kmd / 3.0 + 0.625) * kmd + 1.0 / 6.0) / npq + 0.5);
    const double t = -kmd * kmd / (2.0 * npq);
    if (v < t - rho) return k;
    if (v > t + rho) continue;
    const double nm = nd - static_cast<double>(m) + 1;
    const double h = (static_cast<double>(m) + 0.5) * std::log((static_cast<double>(m) + 1) / (r * nm)) +
                     stirling_tail(m) + stirling_tail(n - m);
    const double nk = nd - static_cast<double>(k) + 1;
    const double bound = h + (nd + 1) * std::log(nm / nk) +
                         (static_cast<double>(k) + 0.5) * std::log(nk * r / (static_cast<double>(k) + 1)) -
                         stirling_tail(k) - stirling_tail(n - k);
    if (v <= bound) return k;
  }
}

std::int64_t binomial_thin(RandomStream& stream, double alpha, std::int64_t y) {
  return stream.binomial(y, alpha);
}

std::int64_t poisson_star(RandomStream& stream, double alpha, double y) {
  if (!(alpha >= 0) || !(y >= 0)) throw std::domain_error("poisson_star: alpha, y must be >= 0");
  return stream.poisson(alpha * y);
}

std::pair<std::int64_t, std::int64_t> partition_thin(RandomStream& stream, double phi,
                                                     std::int64_t s) {
  const std::int64_t first = stream.binomial(s, phi);
  return {first, s - first};
}

std::int64_t geometric_waiting(RandomStream& stream, double phi) {
  if (!(phi > 0 && phi <= 1)) throw std::domain_error("geometric_waiting: phi must lie in (0, 1]");
  if (phi == 1) return 1;
  return 1 + static_cast<std::int64_t>(std::floor(std::log(stream.uniform_open()) / std::log1p(-phi)));
}

}  // namespace inarma
