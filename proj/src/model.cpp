#include "inarma/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace inarma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::string_view model_name(ModelId id) {
  switch (id) {
    case ModelId::inar1: return "inar1";
    case ModelId::inarch1: return "inarch1";
    case ModelId::ingarch11: return "ingarch11";
    case ModelId::inarma11: return "inarma11";
  }
  return "unknown";
}

std::string_view model_label(ModelId id) {
  switch (id) {
    case ModelId::inar1: return "Poisson INAR(1)";
    case ModelId::inarch1: return "Poisson INARCH(1)";
    case ModelId::ingarch11: return "Poisson INGARCH(1, 1)";
    case ModelId::inarma11: return "Poisson INARMA(1, 1)";
  }
  return "unknown";
}

ModelId parse_model_id(std::string_view name) {
  if (name == "inar1") return ModelId::inar1;
  if (name == "inarch1" || name == "inarch") return ModelId::inarch1;
  if (name == "ingarch11" || name == "ingarch") return ModelId::ingarch11;
  if (name == "inarma11" || name == "inarma") return ModelId::inarma11;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected inar1, inarch1, ingarch11 or inarma11)");
}

Inar1Params::Inar1Params(double nu, double alpha) : nu_(nu), alpha_(alpha) {
  require(finite(nu) && nu > 0, "nu must be > 0");
  require(finite(alpha) && alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
}

Inarch1Params::Inarch1Params(double nu, double alpha) : nu_(nu), alpha_(alpha) {
  require(finite(nu) && nu > 0, "nu must be > 0");
  require(finite(alpha) && alpha >= 0 && alpha < 1, "alpha must lie in [0, 1)");
}

Ingarch11Params::Ingarch11Params(double nu, double alpha, double beta)
    : nu_(nu), alpha_(alpha), beta_(beta) {
  require(finite(nu) && nu > 0, "nu must be > 0");
  require(finite(alpha) && alpha >= 0, "alpha must be >= 0");
  require(finite(beta) && beta >= 0, "beta must be >= 0");
  require(alpha + beta < 1, "alpha + beta must be < 1 (stationarity)");
}

InarmaParams::InarmaParams(double tau, double phi, double kappa)
    : tau_(tau), phi_(phi), kappa_(kappa) {
  require(finite(tau) && tau > 0, "tau must be > 0");
  require(finite(phi) && phi > 0 && phi <= 1, "phi must lie in (0, 1]");
  require(finite(kappa) && kappa > 0 && kappa < 1, "kappa must lie in (0, 1)");
}

ModelId model_id(const ModelParams& params) {
  return static_cast<ModelId>(params.index());
}

double xi_of(double phi, double kappa) {
  if (!(phi > 0 && phi <= 1) || !(kappa > 0 && kappa < 1)) {
    throw std::domain_error("xi_of: requires 0 < phi <= 1 and 0 < kappa < 1");
  }
  // Written so that phi = 1 gives exactly kappa.
  return (1.0 - phi) + phi * kappa;
}

ArmaForm ingarch_to_arma_form(const Ingarch11Params& p) {
  const double one_minus_beta = 1.0 - p.beta();
  return {p.nu() / one_minus_beta, one_minus_beta, p.alpha() / one_minus_beta};
}

Ingarch11Params ingarch_from_arma_form(const ArmaForm& form) {
  require(form.phi > 0 && form.phi <= 1, "phi must lie in (0, 1]");
  require(form.kappa >= 0 && form.kappa < 1, "kappa must lie in [0, 1)");
  return Ingarch11Params(form.tau * form.phi, form.kappa * form.phi, 1.0 - form.phi);
}

DerivedInarma derive(const InarmaParams& p) {
  DerivedInarma d{};
  d.xi = xi_of(p.phi(), p.kappa());
  // xi >= kappa > 0, so none of the ratios below can divide by zero.
  d.emission_prob = std::min(1.0, p.phi() * p.kappa() / d.xi);
  d.latent_immigration = p.tau() * d.xi / p.kappa();
  d.latent_stationary_mean = d.latent_immigration / (1.0 - d.xi);
  d.s_immigration = p.kappa() * p.tau();
  d.mean = p.tau() / (1.0 - p.kappa());
  return d;
}

namespace {

// Helpers on the (tau, phi, kappa) form of INGARCH(1,1).
double ingarch_dispersion_core(const ArmaForm& f, double xi) {
  return 1.0 - xi * xi + f.kappa * f.kappa * f.phi * f.phi;
}

}  // namespace

double stationary_mean(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Inar1Params> || std::is_same_v<T, Inarch1Params>) {
          return p.nu() / (1.0 - p.alpha());
        } else if constexpr (std::is_same_v<T, Ingarch11Params>) {
          const ArmaForm f = ingarch_to_arma_form(p);
          return f.tau / (1.0 - f.kappa);
        } else {
          return p.tau() / (1.0 - p.kappa());
        }
      },
      params);
}

double stationary_variance(const ModelParams& params) {
  const double mean = stationary_mean(params);
  return std::visit(
      [mean](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Inarch1Params>) {
          return mean / (1.0 - p.alpha() * p.alpha());
        } else if constexpr (std::is_same_v<T, Ingarch11Params>) {
          const ArmaForm f = ingarch_to_arma_form(p);
          const double xi = 1.0 - f.phi * (1.0 - f.kappa);
          return ingarch_dispersion_core(f, xi) / (1.0 - xi * xi) * mean;
        } else {
          // INAR(1) and INARMA(1,1) have Poisson marginals.
          return mean;
        }
      },
      params);
}

double acf(const ModelParams& params, int h) {
  if (h < 0) throw std::domain_error("acf: lag must be >= 0");
  if (h == 0) return 1.0;
  return std::visit(
      [h](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Inar1Params> || std::is_same_v<T, Inarch1Params>) {
          return std::pow(p.alpha(), h);
        } else if constexpr (std::is_same_v<T, Ingarch11Params>) {
          const ArmaForm f = ingarch_to_arma_form(p);
          const double xi = 1.0 - f.phi * (1.0 - f.kappa);
          const double core = ingarch_dispersion_core(f, xi);
          const double prefactor = (core + f.kappa * f.phi * (1.0 - f.phi)) / core;
          return prefactor * f.kappa * f.phi * std::pow(xi, h - 1);
        } else {
          const double xi = xi_of(p.phi(), p.kappa());
          return p.phi() * p.kappa() * std::pow(xi, h - 1);
        }
      },
      params);
}

int parameter_count(ModelId id) {
  switch (id) {
    case ModelId::inar1: return 2;
    case ModelId::inarch1: return 3;
    case ModelId::ingarch11: return 4;
    case ModelId::inarma11: return 3;
  }
  return 0;
}

}  // namespace inarma
