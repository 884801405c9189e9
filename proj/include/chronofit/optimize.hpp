#pragma once

#include "chronofit/core.hpp"

#include <functional>
#include <vector>

namespace chronofit {

using Objective = std::function<double(const Vector&)>;

struct NelderMeadOptions {
  /// Stop when the simplex objective spread falls below this...
  double f_tolerance = 1e-6;
  /// ...and every vertex lies within this distance of the best one.
  double x_tolerance = 1e-8;
  int max_iterations = 500;
  double initial_step = 0.1;
};

struct OptimizationResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead on the box [lower, upper]; every trial point is projected onto
/// the box before evaluation. Non-finite objective values rank as +inf.
[[nodiscard]] OptimizationResult minimize_box(const Objective& f, const Vector& start, const Vector& lower,
                                              const Vector& upper, const NelderMeadOptions& options = {});

/// Runs minimize_box from every start and keeps the best. Ties go to the
/// lexicographically smaller parameter vector, so the result does not depend
/// on evaluation order.
[[nodiscard]] OptimizationResult minimize_multistart(const Objective& f, const std::vector<Vector>& starts,
                                                     const Vector& lower, const Vector& upper,
                                                     const NelderMeadOptions& options = {});

/// Cartesian grid over the box with `points_per_dim` points per coordinate.
[[nodiscard]] std::vector<Vector> grid_starts(const Vector& lower, const Vector& upper, int points_per_dim);

}  // namespace chronofit
