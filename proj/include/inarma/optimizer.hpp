#pragma once

#include <functional>
#include <span>
#include <vector>

namespace inarma {

struct NelderMeadOptions {
  int max_evals = 2000;
  /// Converged once every vertex lies within this sup-norm distance of the best one.
  double tol = 1e-8;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int n_evals = 0;
  bool converged = false;
};

/// Derivative-free minimisation. Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& opts);

}  // namespace inarma
