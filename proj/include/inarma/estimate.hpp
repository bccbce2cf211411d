#pragma once

// Maximum-likelihood fitting by multi-start Nelder-Mead over an unconstrained
// reparameterisation, plus AIC.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "inarma/model.hpp"
#include "inarma/series.hpp"

namespace inarma {

/// Model parameters plus the estimated initial state: lambda_1 for INARCH(1),
/// S_1 for INGARCH(1,1); empty for the other two models.
struct FittedParams {
  ModelParams model;
  std::optional<double> initial_state;

  ModelId id() const { return model_id(model); }
};

struct FitOptions {
  int n_starts = 5;
  int max_evals = 2000;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::optional<int> y_max_override;
  /// Additional starting points (e.g. the previous optimum in rolling refits).
  std::vector<FittedParams> extra_starts;
  /// Also start from the fitted nested model (INARCH(1) inside INGARCH(1,1),
  /// INAR(1) inside INARMA(1,1)) embedded at the boundary.
  bool nested_start = true;
};

struct FitResult {
  ModelId model_id = ModelId::inar1;
  FittedParams params;
  double loglik = 0.0;
  int k = 0;
  double aic = 0.0;
  bool converged = false;
  int n_evals = 0;
  std::optional<int> y_max_used;
};

double aic(double loglik, int k);

/// Log-likelihood of a parameter bundle. For INARMA the truncation bound is
/// `y_max` if given, choose_ymax otherwise.
double evaluate_loglik(const FittedParams& params, const CountSeries& x,
                       std::optional<int> y_max = std::nullopt);

/// log for rates, logit for probabilities; INGARCH(1,1) uses
/// (log nu, logit(alpha + beta), logit(alpha / (alpha + beta)), log(S_1 + eps)).
std::vector<double> to_unconstrained(const FittedParams& params);
FittedParams from_unconstrained(ModelId id, std::span<const double> u);

/// Moment-matching start. Throws std::invalid_argument for series shorter than 3.
FittedParams method_of_moments_seed(ModelId id, const CountSeries& x);

/// Inverts mean, lag-1 and lag-2 autocorrelation of INARMA(1,1), clamping
/// probabilities into [0.01, 0.99]. Falls back to (mean / 2, 0.5, 0.5) when
/// rho1 <= 0.
ArmaForm inarma_from_moments(double mean, double rho1, double rho2);

/// Throws std::invalid_argument for series shorter than 3.
FitResult fit(ModelId id, const CountSeries& x, const FitOptions& opts = {});

}  // namespace inarma
