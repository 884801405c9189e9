#include "chronofit/least_squares.hpp"

#include "chronofit/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>

namespace chronofit {

namespace {

Eigen::ColPivHouseholderQR<Matrix> decompose(const Matrix& design) {
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  // Relative pivot threshold; columns beyond it count as dependent.
  qr.setThreshold(1e-10);
  return qr;
}

std::vector<Index> dependents_from(const Eigen::ColPivHouseholderQR<Matrix>& qr) {
  std::vector<Index> out;
  const auto& perm = qr.colsPermutation().indices();
  for (Index j = qr.rank(); j < perm.size(); ++j) out.push_back(perm[j]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Index> dependent_columns(const Matrix& design) { return dependents_from(decompose(design)); }

LeastSquares least_squares(const Matrix& design, const Vector& y) {
  const Index n = design.rows();
  const Index k = design.cols();
  if (y.size() != n) throw DataError("least squares: response length differs from design rows");
  if (n < k) throw DataError(fmt::format("least squares: {} observations for {} coefficients", n, k));

  const auto qr = decompose(design);
  if (qr.rank() < k) {
    throw DataError(fmt::format("least squares: design is rank deficient; dependent columns {}",
                                dependents_from(qr)));
  }

  LeastSquares out;
  out.coefficients = qr.solve(y);
  out.fitted = design * out.coefficients;
  out.residuals = y - out.fitted;
  out.sse = out.residuals.squaredNorm();

  // (X'X)^{-1} = P R^{-1} R^{-T} P'
  const Matrix r = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  const Matrix r_inv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Matrix inner = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  out.unscaled_covariance = perm * inner * perm.transpose();
  return out;
}

}  // namespace chronofit
