#pragma once

// One-step-ahead predictive distributions, log scores and rolling-origin
// forecast evaluation with re-fitting at every origin.

#include <cstddef>
#include <functional>
#include <vector>

#include "inarma/estimate.hpp"
#include "inarma/pmf.hpp"
#include "inarma/series.hpp"

namespace inarma {

inline constexpr double kPredictiveTailTol = 1e-12;

struct PredictiveDistribution {
  LogPmf pmf;
  /// Number of observations the forecast conditions on.
  std::size_t origin_index = 0;
  /// Recomputes the same law on a support reaching at least the given value.
  std::function<LogPmf(int)> extend;
};

/// P(X_{t+1} = . | x_1..x_t) under a fitted model. `y_max_hint` (INARMA only)
/// is a lower bound for the latent truncation; it is raised as the history requires.
PredictiveDistribution predictive_one_step(const FittedParams& params, const CountSeries& history,
                                           std::optional<int> y_max_hint = std::nullopt);
PredictiveDistribution predictive_one_step(const FitResult& fit, const CountSeries& history);

/// -log P(observed); the pmf is extended when `observed` lies beyond its support.
double log_score(const PredictiveDistribution& pred, int observed);

struct RollingStep {
  std::size_t origin_index;  // forecast of x[origin_index] from x[0..origin_index)
  int observed;
  double log_score;
  FitResult fit;
  bool refit_failed = false;
};

struct RollingReport {
  ModelId model_id;
  std::size_t start_index;
  std::vector<RollingStep> steps;
  double mean_log_score;
};

struct RollingOptions {
  /// Warm mode seeds each refit from the previous optimum; cold mode refits from
  /// scratch and may run on several threads.
  bool warm_start = true;
  unsigned threads = 1;
};

/// floor(n / 2): forecasts cover the second half of the series.
std::size_t default_rolling_start(std::size_t n);

/// For t = start_index .. n-1: fit on x[0..t), forecast x[t], score it.
/// Requires 3 <= start_index < n.
RollingReport rolling_forecast(ModelId id, const CountSeries& x, std::size_t start_index,
                               const FitOptions& opts, const RollingOptions& rolling = {});

}  // namespace inarma
