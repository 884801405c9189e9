#pragma once

#include "chronofit/baseline.hpp"
#include "chronofit/core.hpp"
#include "chronofit/diagnostics.hpp"

#include <optional>
#include <string>

namespace chronofit {

enum class TrendKind { none, additive, multiplicative, damped };
enum class SeasonalKind { none, additive, multiplicative };

[[nodiscard]] std::string to_string(TrendKind kind);
[[nodiscard]] std::string to_string(SeasonalKind kind);

struct SmoothingModel {
  TrendKind trend = TrendKind::none;
  SeasonalKind seasonal = SeasonalKind::none;
  int seasonal_periods = 1;

  [[nodiscard]] static SmoothingModel ses() { return {}; }
  [[nodiscard]] static SmoothingModel holt(TrendKind trend) { return {trend, SeasonalKind::none, 1}; }
  [[nodiscard]] static SmoothingModel holt_winters(SeasonalKind seasonal, int periods) {
    return {TrendKind::additive, seasonal, periods};
  }

  [[nodiscard]] bool has_trend() const noexcept { return trend != TrendKind::none; }
  [[nodiscard]] bool has_seasonal() const noexcept { return seasonal != SeasonalKind::none; }
  /// First 0-based index whose one-step residual enters the MSE.
  [[nodiscard]] Index first_scored_index() const noexcept;
  [[nodiscard]] std::string describe() const;
};

/// Smoothing parameters alpha (level), beta (trend), gamma (seasonal), phi (damping).
struct SmoothingParams {
  double alpha = 0.5;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<double> phi;
};

/// Per-parameter request: a fixed value, or nullopt to optimize it.
struct ParamRequest {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<double> phi;

  [[nodiscard]] static ParamRequest optimize_all() { return {}; }
};

/// Throws DataError unless every parameter the model needs is present and in range.
void validate_params(const SmoothingParams& params, const SmoothingModel& model);

struct SmoothingState {
  double level = 0.0;
  std::optional<double> trend;
  /// Seasonal indices for the s periods following the state's time point.
  Vector seasonals;
};

struct SmoothingFit {
  SmoothingParams params;
  SmoothingModel model;
  SmoothingState initial;
  SmoothingState final_state;
  /// One-step forecasts, NaN before `fitted_start`.
  Vector fitted;
  Index fitted_start = 0;
  Vector observed;
  double mse = 0.0;
  /// False when the optimizer hit its iteration cap on every start.
  bool converged = true;
  TimeSeries series;

  [[nodiscard]] Vector residuals() const;
  [[nodiscard]] Vector forecast_values(Index horizon) const;
  [[nodiscard]] ForecastResult forecast(Index horizon) const;
  [[nodiscard]] ForecastResult forecast(Index horizon, const IntervalLevel& level) const;
};

/// Runs the smoothing recursions with fixed parameters.
[[nodiscard]] SmoothingFit smooth(const TimeSeries& ts, const SmoothingModel& model, const SmoothingParams& params);

/// Parameters minimizing the in-sample one-step MSE. Fixed entries of
/// `request` are held constant. Multistart bounded Nelder-Mead from a 0.25
/// grid over the free coordinates.
struct ParamSearch {
  SmoothingParams params;
  double mse = 0.0;
  bool converged = true;
};
[[nodiscard]] ParamSearch optimize_params(const TimeSeries& ts, const SmoothingModel& model,
                                          const ParamRequest& request = {});

[[nodiscard]] SmoothingFit fit_smoothing(const TimeSeries& ts, const SmoothingModel& model, const ParamRequest& request);

[[nodiscard]] SmoothingFit ses_fit(const TimeSeries& ts, std::optional<double> alpha);
[[nodiscard]] ForecastResult ses_forecast(const SmoothingFit& fit, Index horizon);
[[nodiscard]] SmoothingFit holt_fit(const TimeSeries& ts, TrendKind trend, const ParamRequest& request);
[[nodiscard]] SmoothingFit holt_winters_fit(const TimeSeries& ts, SeasonalKind seasonal, int periods,
                                            const ParamRequest& request);

struct ResidualDiagnostics {
  TimeSeries residuals;
  /// Absent when the residuals are identically zero.
  std::optional<Correlogram> correlogram;
  bool perfect_fit = false;
};

[[nodiscard]] ResidualDiagnostics residual_diagnostics(const SmoothingFit& fit, int max_lag = 24);

}  // namespace chronofit
