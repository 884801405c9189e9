#pragma once

#include "chronofit/core.hpp"

#include <optional>
#include <string>
#include <variant>

namespace chronofit {

struct IntervalBounds {
  Vector lower;
  Vector upper;
};

/// In-sample one-step forecasts plus out-of-sample point forecasts.
///
/// `fitted` and `residuals` have the length of the observed series; entries
/// before `fitted_start` are NaN (the method's initialization period).
struct ForecastResult {
  Vector fitted;
  Index fitted_start = 0;
  Vector residuals;
  Vector future;
  std::optional<IntervalBounds> interval;
  std::string method;

  [[nodiscard]] auto defined_fitted() const { return fitted.tail(fitted.size() - fitted_start); }
  [[nodiscard]] auto defined_residuals() const { return residuals.tail(residuals.size() - fitted_start); }
  /// Mean squared residual over the defined range.
  [[nodiscard]] double mse() const;
};

/// Builds a ForecastResult from observed values and one-step forecasts
/// defined from `fitted_start` on.
[[nodiscard]] ForecastResult make_forecast_result(const Vector& observed, Vector fitted, Index fitted_start,
                                                  Vector future, std::string method);

/// F_{t+1} = Y_t.
[[nodiscard]] ForecastResult nf1(const TimeSeries& ts, Index horizon);

/// Seasonally adjusted naive forecast for monthly data: F_{t+1} = Y_t - S_t + S_{t-11}
/// with S_t a running average of the same calendar month.
[[nodiscard]] ForecastResult nf2(const TimeSeries& ts, Index horizon);

/// Number of complete 12-observation cycles strictly preceding 1-based t.
[[nodiscard]] int nf2_cycle_weight(Index t);

struct ErrorReport {
  double me = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  /// Percent; absent when an actual value is 0.
  std::optional<double> mpe;
  std::optional<double> mape;
};

[[nodiscard]] ErrorReport error_measures(const Vector& actual, const Vector& forecast);
/// Measures over the defined in-sample range of `result`.
[[nodiscard]] ErrorReport error_measures(const TimeSeries& actual, const ForecastResult& result);

enum class ConfidenceLevel { p80, p90, p95 };

struct ZScore {
  double value;
};

using IntervalLevel = std::variant<ConfidenceLevel, ZScore>;

[[nodiscard]] double z_value(const IntervalLevel& level);
/// Parses "80", "90", "95" (optionally with '%').
[[nodiscard]] ConfidenceLevel parse_confidence_level(std::string_view text);

/// Pointwise F -/+ z sqrt(mse).
[[nodiscard]] IntervalBounds confidence_interval(const Vector& point, double mse, const IntervalLevel& level);

}  // namespace chronofit
