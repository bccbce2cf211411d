#include "inarma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace inarma {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& opts) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead: empty start vector");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  NelderMeadResult result;
  auto eval = [&](std::span<const double> x) {
    ++result.n_evals;
    const double v = objective(x);
    return std::isfinite(v) ? v : kInf;
  };

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += opts.initial_step;
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);

  auto diameter = [&](std::size_t best) {
    double d = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) d = std::max(d, std::fabs(simplex[i][j] - simplex[best][j]));
    }
    return d;
  };
  auto along = [&](double coef, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + coef * (worst[j] - centroid[j]);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (diameter(best) < opts.tol) {
      result.converged = true;
      break;
    }
    if (result.n_evals >= opts.max_evals) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);
    }

    along(-1.0, trial, simplex[worst]);
    const double reflected = eval(trial);
    if (reflected < values[best]) {
      along(-2.0, trial2, simplex[worst]);
      const double expanded = eval(trial2);
      if (expanded < reflected) {
        simplex[worst] = trial2;
        values[worst] = expanded;
      } else {
        simplex[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }
    // Contraction: outside if the reflection improved on the worst point, inside otherwise.
    const bool outside = reflected < values[worst];
    along(outside ? -0.5 : 0.5, trial2, simplex[worst]);
    const double contracted = eval(trial2);
    if (contracted < (outside ? reflected : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = contracted;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace inarma
