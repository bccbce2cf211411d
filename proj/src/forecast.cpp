#include "inarma/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <variant>

#include "inarma/likelihood.hpp"

namespace inarma {

namespace {

// Cuts a normalized sequence of log-probabilities at the smallest n whose
// cumulative mass reaches 1 - tol (but not below min_cap) and records the rest as tail.
LogPmf truncate_normalized(const std::vector<double>& logs, int min_cap) {
  double cum = 0.0;
  std::size_t cut = logs.size() - 1;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    cum += std::exp(logs[k]);
    if (cum >= 1.0 - kPredictiveTailTol && static_cast<int>(k) >= min_cap) {
      cut = k;
      break;
    }
  }
  LogPmf out;
  out.log_probs.assign(logs.begin(), logs.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  while (out.support_max() < min_cap) out.log_probs.push_back(kNegInf);
  const double kept = std::min(0.0, log_sum_exp(out.log_probs));
  out.tail_log_mass = log1m_exp(kept);
  return out;
}

// Evaluates log pmf(x) for x = 0, 1, ... until the cumulative mass reaches 1 - tol
// and x >= min_cap.
template <typename LogPmfAt>
LogPmf build_open_support(LogPmfAt&& log_pmf_at, int min_cap) {
  LogPmf out;
  double cum = 0.0;
  for (int x = 0;; ++x) {
    const double lp = log_pmf_at(x);
    out.log_probs.push_back(lp);
    cum += std::exp(lp);
    if (x >= min_cap && cum >= 1.0 - kPredictiveTailTol) break;
    if (x > 100000) break;
  }
  out.tail_log_mass = log1m_exp(std::min(0.0, log_sum_exp(out.log_probs)));
  return out;
}

double conditional_intensity(const FittedParams& params, const CountSeries& history) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        const int last = history[history.size() - 1];
        if constexpr (std::is_same_v<T, Inarch1Params>) {
          return p.nu() + p.alpha() * last;
        } else if constexpr (std::is_same_v<T, Ingarch11Params>) {
          const double omb = 1.0 - p.beta();
          double lambda = omb * params.initial_state.value_or(0.0) + p.nu() / omb;
          for (std::size_t t = 1; t < history.size(); ++t) {
            lambda = p.nu() + p.alpha() * history[t - 1] + p.beta() * lambda;
          }
          return p.nu() + p.alpha() * last + p.beta() * lambda;
        } else {
          throw std::logic_error("conditional_intensity: not a conditional Poisson model");
        }
      },
      params.model);
}

LogPmf inarma_predictive(const InarmaParams& p, const CountSeries& history, int y_max, int min_cap) {
  ForwardFilter filter(p, y_max);
  for (int v : history.values()) filter.update(v);
  const std::vector<double> latent = filter.predict_latent();
  const double emit = filter.derived().emission_prob;

  std::vector<double> logs(static_cast<std::size_t>(y_max) + 1);
  for (int x = 0; x <= y_max; ++x) {
    double acc = 0.0;
    for (int y = x; y <= y_max; ++y) {
      const double w = latent[static_cast<std::size_t>(y)];
      if (w > 0) acc += w * std::exp(binomial_logpmf(y, emit, x));
    }
    logs[static_cast<std::size_t>(x)] = acc > 0 ? std::log(acc) : kNegInf;
  }
  // Renormalise away rounding from the filter so the tail bookkeeping is exact.
  const double norm = log_sum_exp(logs);
  for (double& v : logs) v -= norm;
  return truncate_normalized(logs, min_cap);
}

int inarma_ymax_for(const InarmaParams& p, const CountSeries& history, int covered,
                    std::optional<int> hint) {
  const int top = std::max(history.max(), covered);
  int y_max = choose_ymax(p, CountSeries(std::vector<int>{top}));
  if (hint) y_max = std::max(y_max, *hint);
  return y_max;
}

LogPmf predictive_pmf(const FittedParams& params, const CountSeries& history, int min_cap,
                      std::optional<int> y_max_hint) {
  min_cap = std::max(min_cap, 2 * history.max());
  return std::visit(
      [&](const auto& p) -> LogPmf {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Inar1Params>) {
          const int last = history[history.size() - 1];
          return build_open_support([&](int x) { return inar1_transition_logprob(p, last, x); }, min_cap);
        } else if constexpr (std::is_same_v<T, InarmaParams>) {
          const int y_max = inarma_ymax_for(p, history, min_cap, y_max_hint);
          return inarma_predictive(p, history, y_max, min_cap);
        } else {
          const double lambda = conditional_intensity(params, history);
          return build_open_support([&](int x) { return poisson_logpmf(lambda, x); }, min_cap);
        }
      },
      params.model);
}

}  // namespace

PredictiveDistribution predictive_one_step(const FittedParams& params, const CountSeries& history,
                                           std::optional<int> y_max_hint) {
  PredictiveDistribution out;
  out.pmf = predictive_pmf(params, history, 0, y_max_hint);
  out.origin_index = history.size();
  out.extend = [params, history, y_max_hint](int cap) {
    return predictive_pmf(params, history, cap, y_max_hint);
  };
  return out;
}

PredictiveDistribution predictive_one_step(const FitResult& fit, const CountSeries& history) {
  return predictive_one_step(fit.params, history, fit.y_max_used);
}

double log_score(const PredictiveDistribution& pred, int observed) {
  if (observed < 0) throw std::invalid_argument("log_score: observed must be >= 0");
  if (observed <= pred.pmf.support_max()) return -pred.pmf.log_prob(observed);
  if (!pred.extend) return std::numeric_limits<double>::infinity();
  return -pred.extend(observed).log_prob(observed);
}

std::size_t default_rolling_start(std::size_t n) { return n / 2; }

namespace {

struct StepOutcome {
  FitResult fit;
  bool failed;
};

std::optional<FitResult> try_fit(ModelId id, const CountSeries& history, const FitOptions& opts) {
  try {
    FitResult r = fit(id, history, opts);
    if (!std::isfinite(r.loglik)) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

RollingStep score_step(const CountSeries& x, std::size_t t, FitResult fitted, bool failed) {
  const CountSeries history = x.head(t);
  const PredictiveDistribution pred = predictive_one_step(fitted, history);
  const double score = log_score(pred, x[t]);
  return RollingStep{t, x[t], score, std::move(fitted), failed};
}

}  // namespace

RollingReport rolling_forecast(ModelId id, const CountSeries& x, std::size_t start_index,
                               const FitOptions& opts, const RollingOptions& rolling) {
  if (start_index < 3 || start_index >= x.size()) {
    throw std::invalid_argument("rolling start must satisfy 3 <= start < series length");
  }
  const std::size_t n_steps = x.size() - start_index;
  std::vector<std::optional<FitResult>> fits(n_steps);

  if (rolling.warm_start) {
    for (std::size_t i = 0; i < n_steps; ++i) {
      FitOptions step_opts = opts;
      if (i > 0 && fits[i - 1]) {
        step_opts.n_starts = 1;
        step_opts.nested_start = false;
        step_opts.extra_starts.push_back(fits[i - 1]->params);
      }
      fits[i] = try_fit(id, x.head(start_index + i), step_opts);
    }
  } else {
    const unsigned threads = std::max(1u, rolling.threads);
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < n_steps; i += threads) {
          fits[i] = try_fit(id, x.head(start_index + i), opts);
        }
      }));
    }
    for (auto& f : workers) f.get();
  }

  RollingReport report{id, start_index, {}, 0.0};
  report.steps.reserve(n_steps);
  std::optional<FitResult> last_good;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const bool failed = !fits[i].has_value();
    if (!failed) last_good = fits[i];
    if (!last_good) {
      throw std::runtime_error("rolling forecast: fit failed at origin " +
                               std::to_string(start_index + i) + " with no earlier fit to fall back on");
    }
    report.steps.push_back(score_step(x, start_index + i, failed ? *last_good : *fits[i], failed));
  }
  double total = 0.0;
  for (const auto& s : report.steps) total += s.log_score;
  report.mean_log_score = total / static_cast<double>(report.steps.size());
  return report;
}

}  // namespace inarma
