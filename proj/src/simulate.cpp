#include "inarma/simulate.hpp"

#include <cmath>
#include <deque>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <variant>

namespace inarma {

namespace {

void require_length(std::size_t t_len) {
  if (t_len == 0) throw std::invalid_argument("simulation length must be >= 1");
}

int to_count(std::int64_t v) {
  if (v > std::numeric_limits<int>::max()) throw std::overflow_error("simulated count overflows int");
  return static_cast<int>(v);
}

}  // namespace

SimulationOutput simulate_inar1(const Inar1Params& p, std::size_t t_len, RandomStream& stream) {
  require_length(t_len);
  std::vector<int> x(t_len);
  std::int64_t prev = stream.poisson(p.nu() / (1.0 - p.alpha()));
  x[0] = to_count(prev);
  for (std::size_t t = 1; t < t_len; ++t) {
    prev = stream.poisson(p.nu()) + binomial_thin(stream, p.alpha(), prev);
    x[t] = to_count(prev);
  }
  return SimulationOutput{CountSeries(std::move(x)), std::nullopt, std::nullopt, {}, 0};
}

SimulationOutput simulate_inarch1(const Inarch1Params& p, std::size_t t_len, RandomStream& stream) {
  require_length(t_len);
  std::vector<int> x(t_len);
  std::vector<double> lambda(t_len);
  lambda[0] = p.nu() / (1.0 - p.alpha());
  x[0] = to_count(stream.poisson(lambda[0]));
  for (std::size_t t = 1; t < t_len; ++t) {
    lambda[t] = p.nu() + p.alpha() * x[t - 1];
    x[t] = to_count(stream.poisson(lambda[t]));
  }
  return SimulationOutput{CountSeries(std::move(x)), std::nullopt, std::move(lambda), {}, 0};
}

SimulationOutput simulate_ingarch11(const Ingarch11Params& p, std::size_t t_len,
                                    RandomStream& stream, std::size_t burn_in) {
  require_length(t_len);
  std::vector<int> x(t_len);
  std::vector<double> lambda(t_len);
  double lam = p.nu() / (1.0 - p.alpha() - p.beta());
  for (std::size_t t = 0; t < burn_in + t_len; ++t) {
    const std::int64_t draw = stream.poisson(lam);
    if (t >= burn_in) {
      x[t - burn_in] = to_count(draw);
      lambda[t - burn_in] = lam;
    }
    lam = p.nu() + p.alpha() * static_cast<double>(draw) + p.beta() * lam;
  }
  return SimulationOutput{CountSeries(std::move(x)), std::nullopt, std::move(lambda), {}, burn_in};
}

InarmaStateStep inarma_state_step(const InarmaParams& p, std::int64_t s, RandomStream& stream) {
  InarmaStateStep step{};
  std::tie(step.matured, step.remaining) = partition_thin(stream, p.phi(), s);
  step.immigrants = stream.poisson(p.tau());
  step.x = step.matured + step.immigrants;
  step.offspring = binomial_thin(stream, p.kappa(), step.x);
  step.s_next = step.remaining + step.offspring;
  return step;
}

SimulationOutput simulate_inarma_state(const InarmaParams& p, std::size_t t_len,
                                       RandomStream& stream) {
  require_length(t_len);
  const DerivedInarma d = derive(p);
  std::vector<int> x(t_len);
  std::vector<int> s_path(t_len);
  // S_t is itself INAR(1) with immigration Pois(kappa tau) and thinning xi.
  std::int64_t s = stream.poisson(d.s_immigration / (1.0 - d.xi));
  for (std::size_t t = 0; t < t_len; ++t) {
    s_path[t] = to_count(s);
    const InarmaStateStep step = inarma_state_step(p, s, stream);
    x[t] = to_count(step.x);
    s = step.s_next;
  }
  return SimulationOutput{CountSeries(std::move(x)), std::move(s_path), std::nullopt, {}, 0};
}

std::size_t default_population_burn_in(const InarmaParams& p) {
  return std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil(50.0 / p.phi())));
}

SimulationOutput simulate_inarma_population(const InarmaParams& p, std::size_t t_len,
                                            RandomStream& stream) {
  return simulate_inarma_population(p, t_len, stream, default_population_burn_in(p));
}

SimulationOutput simulate_inarma_population(const InarmaParams& p, std::size_t t_len,
                                            RandomStream& stream, std::size_t burn_in) {
  require_length(t_len);
  std::vector<int> x(t_len);
  std::vector<int> juveniles(t_len);
  std::vector<std::uint64_t> histogram(2, 0);

  // arrivals[i] = number of juveniles maturing i steps after the current step.
  std::deque<std::int64_t> arrivals;
  std::int64_t pending = 0;

  for (std::size_t t = 0; t < burn_in + t_len; ++t) {
    if (arrivals.empty()) arrivals.push_back(0);
    const std::int64_t matured = arrivals.front();
    arrivals.pop_front();
    const std::int64_t juveniles_now = pending;
    pending -= matured;

    const std::int64_t xt = matured + stream.poisson(p.tau());
    const std::int64_t births = binomial_thin(stream, p.kappa(), xt);
    for (std::int64_t j = 0; j < births; ++j) {
      const std::int64_t delay = geometric_waiting(stream, p.phi());
      // Delay 1 means fertile at t + 1, i.e. the new front of the queue.
      const auto slot = static_cast<std::size_t>(delay - 1);
      if (arrivals.size() <= slot) arrivals.resize(slot + 1, 0);
      ++arrivals[slot];
      if (t >= burn_in) {
        if (histogram.size() <= static_cast<std::size_t>(delay)) {
          histogram.resize(static_cast<std::size_t>(delay) + 1, 0);
        }
        ++histogram[static_cast<std::size_t>(delay)];
      }
    }
    pending += births;

    if (t >= burn_in) {
      x[t - burn_in] = to_count(xt);
      juveniles[t - burn_in] = to_count(juveniles_now);
    }
  }
  return SimulationOutput{CountSeries(std::move(x)), std::move(juveniles), std::nullopt,
                          std::move(histogram), burn_in};
}

SimulationOutput simulate_inarma_thinned(const InarmaParams& p, std::size_t t_len,
                                         RandomStream& stream) {
  require_length(t_len);
  const DerivedInarma d = derive(p);
  std::vector<int> x(t_len);
  std::vector<int> y_path(t_len);
  std::int64_t y = stream.poisson(d.latent_stationary_mean);
  for (std::size_t t = 0; t < t_len; ++t) {
    if (t > 0) y = stream.poisson(d.latent_immigration) + binomial_thin(stream, d.xi, y);
    y_path[t] = to_count(y);
    x[t] = to_count(binomial_thin(stream, d.emission_prob, y));
  }
  return SimulationOutput{CountSeries(std::move(x)), std::move(y_path), std::nullopt, {}, 0};
}

SimulationOutput simulate(const ModelParams& p, std::size_t t_len, RandomStream& stream) {
  return std::visit(
      [&](const auto& params) -> SimulationOutput {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, Inar1Params>) return simulate_inar1(params, t_len, stream);
        else if constexpr (std::is_same_v<T, Inarch1Params>) return simulate_inarch1(params, t_len, stream);
        else if constexpr (std::is_same_v<T, Ingarch11Params>) return simulate_ingarch11(params, t_len, stream);
        else return simulate_inarma_state(params, t_len, stream);
      },
      p);
}

}  // namespace inarma
