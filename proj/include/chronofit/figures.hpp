#pragma once

#include "chronofit/arima.hpp"
#include "chronofit/baseline.hpp"
#include "chronofit/decompose.hpp"
#include "chronofit/diagnostics.hpp"
#include "chronofit/plot.hpp"

#include <string>
#include <vector>

namespace chronofit {

/// Decimal year of observation i, e.g. 1990.25 for April 1990 monthly.
[[nodiscard]] Vector time_axis(const TimeSeries& ts);
/// Decimal years of the `horizon` periods after the end of `ts`.
[[nodiscard]] Vector future_axis(const TimeSeries& ts, Index horizon);

[[nodiscard]] PlotSpec time_plot(const std::vector<TimeSeries>& series, std::string title);
[[nodiscard]] PlotSpec seasonal_plot(const TimeSeries& ts, std::string title);
[[nodiscard]] PlotSpec decomposition_plot(const TimeSeries& ts, const Decomposition& d, std::string title);
[[nodiscard]] PlotSpec correlogram_plot(const Correlogram& c, std::string title);
/// History, in-sample fit, point forecasts and (if present) the interval band.
[[nodiscard]] PlotSpec forecast_plot(const TimeSeries& ts, const ForecastResult& r, std::string title);
/// One forecast panel per series, laid out two per row.
[[nodiscard]] PlotSpec forecast_panels(const std::vector<TimeSeries>& series, const std::vector<ForecastResult>& results,
                                       std::string title);
[[nodiscard]] PlotSpec scatter_plot(const TimeSeries& x, const TimeSeries& y, std::string title);
[[nodiscard]] PlotSpec scatter_matrix_plot(const std::vector<TimeSeries>& columns, std::string title);
/// Standardized residuals, histogram, normal QQ and residual correlogram.
[[nodiscard]] PlotSpec residual_panel_plot(const ResidualSummary& summary, std::string title);

}  // namespace chronofit
