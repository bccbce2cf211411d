#include "inarma/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <variant>

#include "inarma/likelihood.hpp"
#include "inarma/optimizer.hpp"
#include "inarma/random.hpp"

namespace inarma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Offset keeping log(S_1 + eps) finite at S_1 = 0.
constexpr double kInitialStateEps = 1e-8;
// Candidates whose truncation bound exceeds this are rejected during the search;
// they need emission probabilities far below anything the data support.
constexpr int kSearchYmaxLimit = 300;
// Distance from the boundary used to embed a nested fit.
constexpr double kNestedBoundaryGap = 1e-9;

double logit(double p) { return std::log(p) - std::log1p(-p); }
// Both maps are clamped so that every finite input lands strictly inside the
// parameter domain (logistic(30) < 1, exp(-300) > 0).
double logistic(double u) { return 1.0 / (1.0 + std::exp(-std::clamp(u, -30.0, 30.0))); }
double positive(double u) { return std::exp(std::clamp(u, -300.0, 300.0)); }
double clamp_prob(double p) { return std::clamp(p, 0.01, 0.99); }

void require_finite(std::span<const double> u) {
  for (double v : u) {
    if (!std::isfinite(v)) throw std::invalid_argument("unconstrained vector has non-finite entries");
  }
}

std::size_t expected_dim(ModelId id) {
  switch (id) {
    case ModelId::inar1: return 2;
    case ModelId::inarch1: return 3;
    case ModelId::ingarch11: return 4;
    case ModelId::inarma11: return 3;
  }
  return 0;
}

}  // namespace

double aic(double loglik, int k) { return 2.0 * k - 2.0 * loglik; }

double evaluate_loglik(const FittedParams& params, const CountSeries& x, std::optional<int> y_max) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Inar1Params>) {
          return inar1_loglik(p, x);
        } else if constexpr (std::is_same_v<T, Inarch1Params>) {
          if (!params.initial_state) throw std::invalid_argument("INARCH(1) needs lambda_1");
          return inarch1_loglik(p, *params.initial_state, x);
        } else if constexpr (std::is_same_v<T, Ingarch11Params>) {
          if (!params.initial_state) throw std::invalid_argument("INGARCH(1,1) needs S_1");
          return ingarch11_loglik(p, *params.initial_state, x);
        } else {
          return inarma_loglik_forward(p, x, y_max ? *y_max : choose_ymax(p, x));
        }
      },
      params.model);
}

std::vector<double> to_unconstrained(const FittedParams& params) {
  return std::visit(
      [&](const auto& p) -> std::vector<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Inar1Params>) {
          return {std::log(p.nu()), logit(p.alpha())};
        } else if constexpr (std::is_same_v<T, Inarch1Params>) {
          if (!params.initial_state) throw std::invalid_argument("INARCH(1) needs lambda_1");
          return {std::log(p.nu()), logit(p.alpha()), std::log(*params.initial_state)};
        } else if constexpr (std::is_same_v<T, Ingarch11Params>) {
          if (!params.initial_state) throw std::invalid_argument("INGARCH(1,1) needs S_1");
          const double total = p.alpha() + p.beta();
          return {std::log(p.nu()), logit(total), logit(p.alpha() / total),
                  std::log(*params.initial_state + kInitialStateEps)};
        } else {
          return {std::log(p.tau()), logit(p.phi()), logit(p.kappa())};
        }
      },
      params.model);
}

FittedParams from_unconstrained(ModelId id, std::span<const double> u) {
  if (u.size() != expected_dim(id)) throw std::invalid_argument("unconstrained vector has wrong size");
  require_finite(u);
  switch (id) {
    case ModelId::inar1:
      return {Inar1Params(positive(u[0]), logistic(u[1])), std::nullopt};
    case ModelId::inarch1:
      return {Inarch1Params(positive(u[0]), logistic(u[1])), positive(u[2])};
    case ModelId::ingarch11: {
      const double total = logistic(u[1]);
      const double share = logistic(u[2]);
      const double s1 = std::max(0.0, positive(u[3]) - kInitialStateEps);
      return {Ingarch11Params(positive(u[0]), total * share, total * (1.0 - share)), s1};
    }
    case ModelId::inarma11:
      return {InarmaParams(positive(u[0]), logistic(u[1]), logistic(u[2])), std::nullopt};
  }
  throw std::invalid_argument("unknown model");
}

ArmaForm inarma_from_moments(double mean, double rho1, double rho2) {
  const double rate = std::max(mean, 0.05);
  if (!(rho1 > 0)) return {rate / 2.0, 0.5, 0.5};
  const double xi = clamp_prob(std::isfinite(rho2) ? rho2 / rho1 : 0.0);
  // rho1 = phi kappa and xi = 1 - phi + phi kappa.
  const double phi = clamp_prob(1.0 - xi + rho1);
  const double kappa = clamp_prob(rho1 / phi);
  return {rate * (1.0 - kappa), phi, kappa};
}

FittedParams method_of_moments_seed(ModelId id, const CountSeries& x) {
  if (x.size() < 3) throw std::invalid_argument("series must have at least 3 observations");
  const auto v = x.values();
  const double mean = std::max(sample_mean(v), 0.05);
  const double rho1 = sample_acf(v, 1);
  const double rho2 = sample_acf(v, 2);
  const bool fallback = !(rho1 > 0);

  switch (id) {
    case ModelId::inar1:
    case ModelId::inarch1: {
      const double alpha = fallback ? 0.5 : clamp_prob(rho1);
      const double nu = mean * (1.0 - alpha);
      if (id == ModelId::inar1) return {Inar1Params(nu, alpha), std::nullopt};
      return {Inarch1Params(nu, alpha), std::max(static_cast<double>(x[0]), 0.1)};
    }
    case ModelId::inarma11: {
      const ArmaForm f = inarma_from_moments(mean, rho1, rho2);
      return {InarmaParams(f.tau, f.phi, f.kappa), std::nullopt};
    }
    case ModelId::ingarch11: {
      ArmaForm f = inarma_from_moments(mean, rho1, rho2);
      const double dispersion = sample_variance(v) / mean;
      if (!fallback && std::isfinite(dispersion) && dispersion > 1.0) {
        // Var/mean = (1 - xi^2 + (kappa phi)^2) / (1 - xi^2).
        const double xi = 1.0 - f.phi * (1.0 - f.kappa);
        const double kappa_phi = std::sqrt((dispersion - 1.0) * (1.0 - xi * xi));
        f.phi = clamp_prob(1.0 - xi + kappa_phi);
        f.kappa = clamp_prob(kappa_phi / f.phi);
        f.tau = mean * (1.0 - f.kappa);
      }
      const double s1 = std::max((mean - f.tau) / f.phi, 0.01);
      return {ingarch_from_arma_form(f), s1};
    }
  }
  throw std::invalid_argument("unknown model");
}

namespace {

std::optional<FittedParams> nested_embedding(ModelId id, const CountSeries& x, const FitOptions& opts) {
  FitOptions inner = opts;
  inner.nested_start = false;
  inner.extra_starts.clear();
  inner.y_max_override.reset();
  if (id == ModelId::ingarch11) {
    const FitResult base = fit(ModelId::inarch1, x, inner);
    const auto& p = std::get<Inarch1Params>(base.params.model);
    const double alpha = std::max(p.alpha(), kNestedBoundaryGap);
    const double beta = kNestedBoundaryGap;
    if (alpha + beta >= 1.0) return std::nullopt;
    // lambda_1 = (1 - beta) S_1 + nu / (1 - beta); S_1 cannot go negative.
    const double s1 = std::max(0.0, (*base.params.initial_state - p.nu() / (1.0 - beta)) / (1.0 - beta));
    return FittedParams{Ingarch11Params(p.nu(), alpha, beta), s1};
  }
  if (id == ModelId::inarma11) {
    const FitResult base = fit(ModelId::inar1, x, inner);
    const auto& p = std::get<Inar1Params>(base.params.model);
    return FittedParams{InarmaParams(p.nu(), 1.0 - kNestedBoundaryGap, p.alpha()), std::nullopt};
  }
  return std::nullopt;
}

}  // namespace

FitResult fit(ModelId id, const CountSeries& x, const FitOptions& opts) {
  if (x.size() < 3) throw std::invalid_argument("series must have at least 3 observations");
  if (opts.n_starts < 1 || opts.max_evals < 1 || !(opts.tol > 0)) {
    throw std::invalid_argument("fit options must be positive");
  }

  auto objective = [&](std::span<const double> u) -> double {
    try {
      const FittedParams candidate = from_unconstrained(id, u);
      std::optional<int> y_max = opts.y_max_override;
      if (id == ModelId::inarma11 && !y_max) {
        const int chosen = choose_ymax(std::get<InarmaParams>(candidate.model), x);
        if (chosen > kSearchYmaxLimit) return kInf;
        y_max = chosen;
      }
      const double ll = evaluate_loglik(candidate, x, y_max);
      return std::isfinite(ll) ? -ll : kInf;
    } catch (const std::exception&) {
      return kInf;
    }
  };

  std::vector<std::vector<double>> starts;
  const std::vector<double> seed_point = to_unconstrained(method_of_moments_seed(id, x));
  starts.push_back(seed_point);
  RandomStream stream(opts.seed);
  for (int i = 1; i < opts.n_starts; ++i) {
    std::vector<double> u = seed_point;
    for (double& v : u) v += 0.5 * stream.normal();
    starts.push_back(std::move(u));
  }
  auto add_start = [&](const FittedParams& fp) {
    if (fp.id() != id) return;
    try {
      std::vector<double> u = to_unconstrained(fp);
      if (std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); })) {
        starts.push_back(std::move(u));
      }
    } catch (const std::exception&) {
    }
  };
  for (const auto& extra : opts.extra_starts) add_start(extra);
  if (opts.nested_start) {
    if (auto nested = nested_embedding(id, x, opts)) add_start(*nested);
  }

  NelderMeadOptions nm{opts.max_evals, opts.tol, 0.5};
  NelderMeadResult best;
  best.value = kInf;
  int total_evals = 0;
  bool have_best = false;
  for (const auto& s : starts) {
    NelderMeadResult r = nelder_mead(objective, s, nm);
    total_evals += r.n_evals;
    if (!have_best || r.value < best.value) {
      best = std::move(r);
      have_best = true;
    }
  }
  // Restart once from the winner with a fresh simplex; guards against collapse.
  nm.initial_step = 0.05;
  NelderMeadResult polished = nelder_mead(objective, best.x, nm);
  total_evals += polished.n_evals;
  if (polished.value <= best.value) best = std::move(polished);

  bool converged = best.converged && std::isfinite(best.value);
  std::optional<FittedParams> params;
  try {
    params = from_unconstrained(id, best.x);
  } catch (const std::exception&) {
    params = method_of_moments_seed(id, x);
    converged = false;
  }
  std::optional<int> y_max_used;
  if (id == ModelId::inarma11) {
    y_max_used = opts.y_max_override ? *opts.y_max_override
                                     : choose_ymax(std::get<InarmaParams>(params->model), x);
  }
  const double ll = evaluate_loglik(*params, x, y_max_used);
  const int k = parameter_count(id);
  FitResult result{id, std::move(*params), ll, k, aic(ll, k), converged, total_evals, y_max_used};
  return result;
}

}  // namespace inarma
