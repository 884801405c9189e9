#pragma once

#include "chronofit/core.hpp"

#include <vector>

namespace chronofit {

/// Dense least-squares solve via column-pivoted Householder QR.
struct LeastSquares {
  Vector coefficients;
  Vector residuals;
  Vector fitted;
  double sse = 0.0;
  /// (X'X)^{-1}; multiply by the residual variance for the covariance.
  Matrix unscaled_covariance;
};

/// Column indices of `design` found linearly dependent on earlier columns.
[[nodiscard]] std::vector<Index> dependent_columns(const Matrix& design);

/// Throws DataError when the design is rank deficient or has fewer rows than
/// columns.
[[nodiscard]] LeastSquares least_squares(const Matrix& design, const Vector& y);

}  // namespace chronofit
