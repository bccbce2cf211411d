#pragma once

// Seeded trajectory generation. The INARMA(1,1) process has three simulators,
// one per representation:
//   state       X_t = phi o S_t + I_t with the juvenile pool S_t
//   population  INAR(infinity) form with geometric maturation delays
//   thinned     X_t ~ Bin(Y_t, phi kappa / xi), Y_t an INAR(1) chain
// All three produce the same law; tests compare them against each other.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "inarma/model.hpp"
#include "inarma/random.hpp"
#include "inarma/series.hpp"

namespace inarma {

struct SimulationOutput {
  CountSeries series;
  /// S_t (state and population forms) or Y_t (thinned form), aligned with series.
  std::optional<std::vector<int>> latent;
  /// lambda_t for the conditional Poisson models, aligned with series.
  std::optional<std::vector<double>> intensity;
  /// Population form only: count of offspring by realised maturation delay
  /// (index i holds delay i; index 0 unused).
  std::vector<std::uint64_t> delay_histogram;
  std::size_t burn_in_discarded = 0;
};

inline constexpr std::size_t kDefaultIngarchBurnIn = 1000;

SimulationOutput simulate_inar1(const Inar1Params& p, std::size_t t_len, RandomStream& stream);
SimulationOutput simulate_inarch1(const Inarch1Params& p, std::size_t t_len, RandomStream& stream);
SimulationOutput simulate_ingarch11(const Ingarch11Params& p, std::size_t t_len,
                                    RandomStream& stream,
                                    std::size_t burn_in = kDefaultIngarchBurnIn);

/// One transition of the juvenile-pool representation, with every component exposed.
struct InarmaStateStep {
  std::int64_t matured;     // phi o S_t
  std::int64_t remaining;   // S_t - matured
  std::int64_t immigrants;  // I_t
  std::int64_t x;           // matured + immigrants
  std::int64_t offspring;   // kappa o X_t
  std::int64_t s_next;      // remaining + offspring
};

InarmaStateStep inarma_state_step(const InarmaParams& p, std::int64_t s, RandomStream& stream);

SimulationOutput simulate_inarma_state(const InarmaParams& p, std::size_t t_len,
                                       RandomStream& stream);

/// Default burn-in for the population form: max(1000, ceil(50 / phi)).
std::size_t default_population_burn_in(const InarmaParams& p);

SimulationOutput simulate_inarma_population(const InarmaParams& p, std::size_t t_len,
                                            RandomStream& stream);
SimulationOutput simulate_inarma_population(const InarmaParams& p, std::size_t t_len,
                                            RandomStream& stream, std::size_t burn_in);

SimulationOutput simulate_inarma_thinned(const InarmaParams& p, std::size_t t_len,
                                         RandomStream& stream);

/// Dispatches on the parameter variant (INARMA uses the state form).
SimulationOutput simulate(const ModelParams& p, std::size_t t_len, RandomStream& stream);

}  // namespace inarma
