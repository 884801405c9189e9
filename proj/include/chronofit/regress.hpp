#pragma once

#include "chronofit/arima.hpp"
#include "chronofit/baseline.hpp"
#include "chronofit/core.hpp"

#include <string>
#include <variant>
#include <vector>

namespace chronofit {

/// OLS fit of y on a constant plus k named regressors.
///
/// Coefficient vectors are indexed 0..k with entry 0 the intercept.
struct OlsFit {
  std::vector<std::string> names;
  Vector coefficients;
  Vector stderr_;
  Vector t_stats;
  Vector p_values;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double f_stat = 0.0;
  double f_p_value = 0.0;
  Vector fitted;
  Vector residuals;
  double sse = 0.0;
  Index n = 0;
  Index k = 0;

  [[nodiscard]] Index degrees_of_freedom() const noexcept { return n - k - 1; }
};

/// Regressors are given as columns of equal length. `names` labels them.
[[nodiscard]] OlsFit ols_fit(const Vector& y, const std::vector<std::string>& names,
                             const std::vector<Vector>& regressors);
[[nodiscard]] OlsFit ols_fit(const TimeSeries& y, const std::vector<TimeSeries>& regressors);

struct Formula {
  std::string response;
  std::vector<std::string> predictors;
};

/// Parses `y ~ x1 + x2 + ...`.
[[nodiscard]] Formula parse_formula(std::string_view text);

struct SignificanceReport {
  bool overall = false;
  std::string basis;
  /// One flag per regressor (intercept excluded).
  std::vector<bool> per_variable;
};

/// Overall: R^2 > 0.50 and F p-value < 0.05. Per variable: p < 0.05.
[[nodiscard]] SignificanceReport significance_assessment(const OlsFit& fit);

/// Rows of `future` are regressor values (h x k). Intervals use z sqrt(SSE/n).
[[nodiscard]] ForecastResult regression_forecast(const OlsFit& fit, const Matrix& future, const IntervalLevel& level);

struct HoltMethod {};
using RegressorMethod = std::variant<HoltMethod, ModelOrder>;

struct RegressorPipeline {
  OlsFit fit;
  /// Forecast of each regressor, in input order.
  std::vector<ForecastResult> regressor_forecasts;
  ForecastResult forecast;
  /// Regressors held constant over the sample; they carry no information and
  /// are left out of the regression.
  std::vector<std::string> dropped;
};

/// Fits OLS, forecasts every regressor `horizon` steps, and feeds those
/// forecasts through the regression.
[[nodiscard]] RegressorPipeline forecast_with_regressors(const TimeSeries& y, const std::vector<TimeSeries>& regressors,
                                                         Index horizon, const RegressorMethod& method,
                                                         const IntervalLevel& level);

}  // namespace chronofit
