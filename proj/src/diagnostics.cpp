#include "chronofit/diagnostics.hpp"

#include "chronofit/distributions.hpp"
#include "chronofit/least_squares.hpp"

#include <fmt/format.h>

#include <array>
#include <limits>

namespace chronofit {

namespace {

void check_correlogram_args(const Vector& x, int max_lag) {
  const Index n = x.size();
  if (n < 3) throw DataError(fmt::format("correlogram needs at least 3 observations, got {}", n));
  if (max_lag < 1 || max_lag > n - 1) {
    throw DataError(fmt::format("max lag {} outside 1..{}", max_lag, n - 1));
  }
  if ((x.array() == x[0]).all()) throw DataError("correlogram undefined for a constant series");
}

// Dickey-Fuller tau distribution quantiles (Fuller 1976 tables) for sample
// sizes 25, 50, 100, 250, 500 and the asymptotic row.
constexpr std::array<double, 8> kProbs = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<double, 6> kSizes = {25, 50, 100, 250, 500, std::numeric_limits<double>::infinity()};

constexpr std::array<std::array<double, 8>, 6> kTauConstant = {{
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
}};

constexpr std::array<std::array<double, 8>, 6> kTauTrend = {{
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
}};

// Quantile row for `nobs`, linear in 1/n between tabulated sizes.
std::array<double, 8> quantiles_for(AdfRegression regression, Index nobs) {
  const auto& table = regression == AdfRegression::constant ? kTauConstant : kTauTrend;
  const double n = static_cast<double>(std::max<Index>(nobs, 1));
  if (n <= kSizes[0]) return table[0];
  const double inv = 1.0 / n;
  for (std::size_t i = 0; i + 1 < kSizes.size(); ++i) {
    if (n <= kSizes[i + 1]) {
      const double a = 1.0 / kSizes[i];
      const double b = std::isinf(kSizes[i + 1]) ? 0.0 : 1.0 / kSizes[i + 1];
      const double w = (a - inv) / (a - b);
      std::array<double, 8> row{};
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = (1.0 - w) * table[i][j] + w * table[i + 1][j];
      return row;
    }
  }
  return table.back();
}

struct AdfRegressionFit {
  double statistic = 0.0;
  double sse = 0.0;
  Index nobs = 0;
  Index params = 0;
};

// Regresses dy_t on [1, (t), y_{t}, dy_{t-1}, .., dy_{t-lags}] over rows
// first_row..end of dy, where dy_t = y_{t+1} - y_t.
AdfRegressionFit adf_regression(const Vector& y, AdfRegression regression, int lags, Index first_row) {
  const Vector dy = y.tail(y.size() - 1) - y.head(y.size() - 1);
  const Index rows = dy.size() - first_row;
  const bool trend = regression == AdfRegression::constant_trend;
  const Index cols = 2 + (trend ? 1 : 0) + lags;
  Matrix x(rows, cols);
  Vector target(rows);
  for (Index r = 0; r < rows; ++r) {
    const Index t = first_row + r;
    Index c = 0;
    x(r, c++) = 1.0;
    if (trend) x(r, c++) = static_cast<double>(t + 1);
    x(r, c++) = y[t];
    for (int i = 1; i <= lags; ++i) x(r, c++) = dy[t - i];
    target[r] = dy[t];
  }
  const Index gamma_col = trend ? 2 : 1;
  const LeastSquares ls = least_squares(x, target);
  const double sigma2 = ls.sse / static_cast<double>(rows - cols);
  const double se = std::sqrt(sigma2 * ls.unscaled_covariance(gamma_col, gamma_col));
  return {ls.coefficients[gamma_col] / se, ls.sse, rows, cols};
}

}  // namespace

double white_noise_band(Index n) { return 1.96 / std::sqrt(static_cast<double>(n)); }

Correlogram acf(const Vector& values, int max_lag) {
  check_correlogram_args(values, max_lag);
  const Vector c = autocovariance(values, max_lag);
  Correlogram out;
  out.coefficients = c / c[0];
  out.coefficients[0] = 1.0;
  out.n = values.size();
  out.band = white_noise_band(out.n);
  return out;
}

Correlogram acf(const TimeSeries& ts, int max_lag) { return acf(ts.values(), max_lag); }

Correlogram pacf(const Vector& values, int max_lag) {
  check_correlogram_args(values, max_lag);
  if (max_lag > values.size() / 2) {
    throw DataError(fmt::format("PACF max lag {} exceeds n/2 = {}", max_lag, values.size() / 2));
  }
  Correlogram r = acf(values, max_lag);
  r.coefficients = durbin_levinson(r.coefficients);
  return r;
}

Correlogram pacf(const TimeSeries& ts, int max_lag) { return pacf(ts.values(), max_lag); }

WhiteNoiseVerdict is_white_noise(const Vector& values, int max_lag) {
  const Correlogram r = acf(values, max_lag);
  const Correlogram p = pacf(values, max_lag);
  int inside = 0;
  for (Index k = 1; k <= max_lag; ++k) {
    if (!r.outside_band(k) && !p.outside_band(k)) ++inside;
  }
  WhiteNoiseVerdict v;
  v.fraction_inside = static_cast<double>(inside) / max_lag;
  v.white_noise = v.fraction_inside >= 0.95;
  return v;
}

WhiteNoiseVerdict is_white_noise(const TimeSeries& ts, int max_lag) { return is_white_noise(ts.values(), max_lag); }

int adf_default_max_lag(Index n) {
  const int rule = static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
  return std::max(0, std::min<int>(rule, static_cast<int>(n) - 20));
}

AdfCriticalValues adf_critical_values(AdfRegression regression, Index nobs) {
  const auto q = quantiles_for(regression, nobs);
  return {q[0], q[2], q[3]};
}

double adf_p_value(double statistic, AdfRegression regression, Index nobs) {
  const auto q = quantiles_for(regression, nobs);
  std::array<double, 8> z{};
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = dist::normal_quantile(kProbs[j]);
  // Segment containing the statistic; the outer segments extrapolate.
  std::size_t j = 0;
  while (j + 2 < q.size() && statistic > q[j + 1]) ++j;
  const double slope = (z[j + 1] - z[j]) / (q[j + 1] - q[j]);
  return dist::normal_cdf(z[j] + slope * (statistic - q[j]));
}

AdfResult adf_test(const Vector& values, AdfRegression regression, std::optional<int> requested_lag) {
  const Index n = values.size();
  const int max_lag = requested_lag ? *requested_lag : adf_default_max_lag(n);
  if (max_lag < 0) throw DataError("ADF max lag must be >= 0");
  if (n < 20 + max_lag) {
    throw DataError(fmt::format("ADF test needs at least {} observations, got {}", 20 + max_lag, n));
  }
  int best_lag = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int lag = 0; lag <= max_lag; ++lag) {
    const AdfRegressionFit fit = adf_regression(values, regression, lag, max_lag);
    const double aic = static_cast<double>(fit.nobs) * std::log(fit.sse / static_cast<double>(fit.nobs)) +
                       2.0 * static_cast<double>(fit.params);
    if (aic < best_aic) {
      best_aic = aic;
      best_lag = lag;
    }
  }
  const AdfRegressionFit fit = adf_regression(values, regression, best_lag, best_lag);
  AdfResult out;
  out.statistic = fit.statistic;
  out.lags_used = best_lag;
  out.nobs = fit.nobs;
  out.regression = regression;
  out.critical = adf_critical_values(regression, fit.nobs);
  out.p_value = adf_p_value(fit.statistic, regression, fit.nobs);
  return out;
}

AdfResult adf_test(const TimeSeries& ts, AdfRegression regression, std::optional<int> max_lag) {
  return adf_test(ts.values(), regression, max_lag);
}

double correlation(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw DataError(fmt::format("correlation: lengths differ ({} vs {})", x.size(), y.size()));
  }
  if (x.size() < 2) throw DataError("correlation needs at least 2 observations");
  if ((x.array() == x[0]).all() || (y.array() == y[0]).all()) {
    throw DataError("correlation undefined for a constant sequence");
  }
  return std::clamp(pearson(x, y), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const std::vector<std::string>& labels, const std::vector<Vector>& columns) {
  if (columns.size() < 2) throw DataError("correlation matrix needs at least 2 columns");
  if (labels.size() != columns.size()) throw DataError("correlation matrix: label count differs from column count");
  const Index k = static_cast<Index>(columns.size());
  CorrelationMatrix out;
  out.labels = labels;
  out.values = Matrix::Identity(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      const double r = correlation(columns[static_cast<std::size_t>(i)], columns[static_cast<std::size_t>(j)]);
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

CorrelationMatrix correlation_matrix(const std::vector<TimeSeries>& columns) {
  std::vector<std::string> labels;
  std::vector<Vector> values;
  for (const auto& c : columns) {
    labels.push_back(c.name());
    values.push_back(c.values());
  }
  return correlation_matrix(labels, values);
}

}  // namespace chronofit
