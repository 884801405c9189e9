#pragma once

#include "chronofit/core.hpp"
#include "chronofit/error.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace chronofit {

/// Sample autocovariances c_0..c_K with the n divisor:
/// c_k = (1/n) sum_{t=1}^{n-k} (x_t - mean)(x_{t+k} - mean).
template <typename Derived>
[[nodiscard]] Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> autocovariance(
    const Eigen::MatrixBase<Derived>& x, Index max_lag) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.size();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> centered = x.array() - x.mean();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(max_lag + 1);
  for (Index k = 0; k <= max_lag; ++k) {
    c[k] = centered.head(n - k).dot(centered.tail(n - k)) / static_cast<Scalar>(n);
  }
  return c;
}

/// Durbin-Levinson recursion: partial autocorrelations phi_11..phi_KK from
/// autocorrelations r_0..r_K (r_0 = 1). Element 0 of the result is 1.
template <typename Derived>
[[nodiscard]] Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> durbin_levinson(
    const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Index max_lag = r.size() - 1;
  Vec partial(max_lag + 1);
  partial[0] = Scalar(1);
  if (max_lag == 0) return partial;
  Vec phi = Vec::Zero(max_lag + 1);
  Vec prev = Vec::Zero(max_lag + 1);
  phi[1] = r[1];
  partial[1] = r[1];
  Scalar v = Scalar(1) - r[1] * r[1];
  for (Index k = 2; k <= max_lag; ++k) {
    if (!(v > Scalar(0))) throw NumericalError("partial autocorrelation recursion broke down (degenerate series)");
    prev = phi;
    Scalar num = r[k];
    for (Index j = 1; j < k; ++j) num -= prev[j] * r[k - j];
    const Scalar pkk = num / v;
    for (Index j = 1; j < k; ++j) phi[j] = prev[j] - pkk * prev[k - j];
    phi[k] = pkk;
    partial[k] = pkk;
    v *= Scalar(1) - pkk * pkk;
  }
  return partial;
}

/// Pearson correlation of two equal-length sequences.
template <typename DerivedX, typename DerivedY>
[[nodiscard]] typename DerivedX::Scalar pearson(const Eigen::MatrixBase<DerivedX>& x,
                                                const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  const auto xc = (x.array() - x.mean()).matrix().eval();
  const auto yc = (y.array() - y.mean()).matrix().eval();
  const Scalar sxx = xc.squaredNorm();
  const Scalar syy = yc.squaredNorm();
  return xc.dot(yc) / std::sqrt(sxx * syy);
}

/// Correlation coefficients at lags 0..K with the +/- 1.96/sqrt(n) band.
struct Correlogram {
  Vector coefficients;
  double band = 0.0;
  Index n = 0;

  [[nodiscard]] Index max_lag() const noexcept { return coefficients.size() - 1; }
  [[nodiscard]] bool outside_band(Index k) const { return std::fabs(coefficients[k]) > band; }
};

[[nodiscard]] double white_noise_band(Index n);

[[nodiscard]] Correlogram acf(const Vector& values, int max_lag);
[[nodiscard]] Correlogram acf(const TimeSeries& ts, int max_lag);
[[nodiscard]] Correlogram pacf(const Vector& values, int max_lag);
[[nodiscard]] Correlogram pacf(const TimeSeries& ts, int max_lag);

struct WhiteNoiseVerdict {
  bool white_noise = false;
  double fraction_inside = 0.0;
};

/// White noise iff at least 95% of lags 1..K have both ACF and PACF inside the band.
[[nodiscard]] WhiteNoiseVerdict is_white_noise(const Vector& values, int max_lag);
[[nodiscard]] WhiteNoiseVerdict is_white_noise(const TimeSeries& ts, int max_lag);

enum class AdfRegression { constant, constant_trend };

struct AdfCriticalValues {
  double one = 0.0;
  double five = 0.0;
  double ten = 0.0;
};

struct AdfResult {
  double statistic = 0.0;
  double p_value = 1.0;
  AdfCriticalValues critical;
  int lags_used = 0;
  Index nobs = 0;
  AdfRegression regression = AdfRegression::constant;
};

/// floor(12 (n/100)^{1/4}), reduced if needed so that n >= 20 + max_lag.
[[nodiscard]] int adf_default_max_lag(Index n);

/// Tabulated Dickey-Fuller quantiles, interpolated linearly in 1/nobs.
[[nodiscard]] AdfCriticalValues adf_critical_values(AdfRegression regression, Index nobs);

/// Approximate p-value: piecewise-linear interpolation of the tabulated
/// quantiles on the probit scale, so tails stay inside (0, 1).
[[nodiscard]] double adf_p_value(double statistic, AdfRegression regression, Index nobs);

/// Augmented Dickey-Fuller test. Lag order chosen by AIC over 0..max_lag on a
/// common sample, then refitted on the longest sample for the chosen lag.
/// Without `max_lag` the default schedule applies.
[[nodiscard]] AdfResult adf_test(const Vector& values, AdfRegression regression = AdfRegression::constant,
                                 std::optional<int> max_lag = std::nullopt);
[[nodiscard]] AdfResult adf_test(const TimeSeries& ts, AdfRegression regression = AdfRegression::constant,
                                 std::optional<int> max_lag = std::nullopt);

[[nodiscard]] double correlation(const Vector& x, const Vector& y);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Matrix values;
};

[[nodiscard]] CorrelationMatrix correlation_matrix(const std::vector<std::string>& labels,
                                                   const std::vector<Vector>& columns);
[[nodiscard]] CorrelationMatrix correlation_matrix(const std::vector<TimeSeries>& columns);

}  // namespace chronofit
