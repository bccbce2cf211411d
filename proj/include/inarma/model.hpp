#pragma once

// Parameter bundles for the four Poisson count models (INAR(1), INARCH(1),
// INGARCH(1,1), INARMA(1,1)) together with their closed-form stationary
// moments and autocorrelation functions.
//
// Every parameter type validates its invariants in the constructor and is
// immutable afterwards, so downstream code never re-checks them.

#include <string>
#include <string_view>
#include <variant>

namespace inarma {

enum class ModelId { inar1, inarch1, ingarch11, inarma11 };

/// Short machine name ("inar1", "inarch1", "ingarch11", "inarma11").
std::string_view model_name(ModelId id);
/// Human-readable label as used in comparison tables, e.g. "Poisson INARMA(1, 1)".
std::string_view model_label(ModelId id);
/// Parses a machine name; throws std::invalid_argument on unknown names.
ModelId parse_model_id(std::string_view name);

/// X_t = I_t + alpha o X_{t-1}, I_t ~ Pois(nu).
class Inar1Params {
 public:
  Inar1Params(double nu, double alpha);
  double nu() const { return nu_; }
  double alpha() const { return alpha_; }

 private:
  double nu_;
  double alpha_;
};

/// X_t | past ~ Pois(nu + alpha X_{t-1}).
class Inarch1Params {
 public:
  Inarch1Params(double nu, double alpha);
  double nu() const { return nu_; }
  double alpha() const { return alpha_; }

 private:
  double nu_;
  double alpha_;
};

/// X_t | past ~ Pois(lambda_t), lambda_t = nu + alpha X_{t-1} + beta lambda_{t-1}.
class Ingarch11Params {
 public:
  Ingarch11Params(double nu, double alpha, double beta);
  double nu() const { return nu_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double nu_;
  double alpha_;
  double beta_;
};

/// X_t = phi o S_t + I_t, S_t = S_{t-1} - (X_{t-1} - I_{t-1}) + kappa o X_{t-1},
/// I_t ~ Pois(tau).
class InarmaParams {
 public:
  InarmaParams(double tau, double phi, double kappa);
  double tau() const { return tau_; }
  double phi() const { return phi_; }
  double kappa() const { return kappa_; }

 private:
  double tau_;
  double phi_;
  double kappa_;
};

using ModelParams = std::variant<Inar1Params, Inarch1Params, Ingarch11Params, InarmaParams>;

ModelId model_id(const ModelParams& params);

/// (tau, phi, kappa) form shared by INGARCH(1,1) and INARMA(1,1).
struct ArmaForm {
  double tau;
  double phi;
  double kappa;
};

/// Quantities of the binomially thinned INAR(1) representation
/// Y_t = J_t + xi o Y_{t-1}, X_t | Y_t ~ Bin(Y_t, emission_prob).
struct DerivedInarma {
  double xi;
  double emission_prob;
  double latent_immigration;      // rate of J_t
  double latent_stationary_mean;  // E(Y_t)
  double s_immigration;           // immigration rate of the juvenile chain S_t
  double mean;                    // E(X_t)
};

/// 1 - phi (1 - kappa). Requires 0 < phi <= 1 and 0 < kappa < 1.
double xi_of(double phi, double kappa);

ArmaForm ingarch_to_arma_form(const Ingarch11Params& p);
/// Inverse map: nu = tau phi, alpha = kappa phi, beta = 1 - phi.
/// Accepts 0 <= kappa < 1 and 0 < phi <= 1.
Ingarch11Params ingarch_from_arma_form(const ArmaForm& form);

DerivedInarma derive(const InarmaParams& p);

double stationary_mean(const ModelParams& params);
double stationary_variance(const ModelParams& params);
/// Autocorrelation at lag h >= 0; acf(_, 0) == 1.
double acf(const ModelParams& params, int h);

/// Number of free parameters of each model as counted for AIC
/// (initial intensity included for INARCH(1) and INGARCH(1,1)).
int parameter_count(ModelId id);

}  // namespace inarma
