#include "chronofit/baseline.hpp"

#include "chronofit/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace chronofit {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kCycle = 12;
}  // namespace

double ForecastResult::mse() const {
  const Index m = residuals.size() - fitted_start;
  if (m <= 0) return 0.0;
  return defined_residuals().squaredNorm() / static_cast<double>(m);
}

ForecastResult make_forecast_result(const Vector& observed, Vector fitted, Index fitted_start, Vector future,
                                    std::string method) {
  ForecastResult r;
  r.fitted = std::move(fitted);
  r.fitted.head(fitted_start).setConstant(kNaN);
  r.fitted_start = fitted_start;
  r.residuals = Vector::Constant(observed.size(), kNaN);
  const Index m = observed.size() - fitted_start;
  r.residuals.tail(m) = observed.tail(m) - r.fitted.tail(m);
  r.future = std::move(future);
  r.method = std::move(method);
  return r;
}

ForecastResult nf1(const TimeSeries& ts, Index horizon) {
  const Index n = ts.size();
  if (n < 2) throw DataError("NF1 needs at least 2 observations");
  if (horizon < 0) throw DataError("forecast horizon must be >= 0");
  Vector fitted(n);
  fitted[0] = kNaN;
  fitted.tail(n - 1) = ts.values().head(n - 1);
  return make_forecast_result(ts.values(), std::move(fitted), 1, Vector::Constant(horizon, ts[n - 1]), "NF1");
}

int nf2_cycle_weight(Index t) { return static_cast<int>((t - 1) / kCycle); }

ForecastResult nf2(const TimeSeries& ts, Index horizon) {
  const Index n = ts.size();
  if (ts.periods_per_year() != kCycle) throw DataError("NF2 is defined for monthly data (frequency 12)");
  if (n < kCycle + 1) throw DataError(fmt::format("NF2 needs at least {} observations, got {}", kCycle + 1, n));
  if (horizon < 0) throw DataError("forecast horizon must be >= 0");

  // 1-based arrays: y[t], s[t], f[t]; index 0 unused.
  const Index total = n + horizon;
  Vector y = Vector::Zero(total + 1);
  Vector s = Vector::Zero(total + 1);
  Vector f = Vector::Constant(total + 2, kNaN);
  y.segment(1, n) = ts.values();

  for (Index t = 1; t <= total; ++t) {
    if (t > n) y[t] = f[t];
    if (t <= kCycle) {
      s[t] = y[t];
      f[t + 1] = y[t];
    } else {
      const double m = nf2_cycle_weight(t);
      s[t] = (m * s[t - kCycle] + y[t]) / (m + 1.0);
      f[t + 1] = y[t] - s[t] + s[t - kCycle + 1];
    }
  }
  Vector fitted(n);
  fitted[0] = kNaN;
  fitted.tail(n - 1) = f.segment(2, n - 1);
  return make_forecast_result(ts.values(), std::move(fitted), 1, f.segment(n + 1, horizon), "NF2");
}

ErrorReport error_measures(const Vector& actual, const Vector& forecast) {
  if (actual.size() != forecast.size()) {
    throw DataError(fmt::format("error measures: lengths differ ({} vs {})", actual.size(), forecast.size()));
  }
  if (actual.size() == 0) throw DataError("error measures need at least one observation");
  const Vector e = actual - forecast;
  ErrorReport r;
  r.me = e.mean();
  r.mae = e.cwiseAbs().mean();
  r.mse = e.squaredNorm() / static_cast<double>(e.size());
  if ((actual.array() != 0.0).all()) {
    const Vector pe = 100.0 * (e.array() / actual.array()).matrix();
    r.mpe = pe.mean();
    r.mape = pe.cwiseAbs().mean();
  }
  return r;
}

ErrorReport error_measures(const TimeSeries& actual, const ForecastResult& result) {
  const Index m = actual.size() - result.fitted_start;
  return error_measures(actual.values().tail(m), result.defined_fitted());
}

double z_value(const IntervalLevel& level) {
  if (const auto* z = std::get_if<ZScore>(&level)) {
    if (!(z->value >= 0.0) || !std::isfinite(z->value)) throw DataError("z must be a finite non-negative number");
    return z->value;
  }
  switch (std::get<ConfidenceLevel>(level)) {
    case ConfidenceLevel::p80: return 1.282;
    case ConfidenceLevel::p90: return 1.645;
    case ConfidenceLevel::p95: return 1.96;
  }
  return 1.96;
}

ConfidenceLevel parse_confidence_level(std::string_view text) {
  if (!text.empty() && text.back() == '%') text.remove_suffix(1);
  if (text == "80") return ConfidenceLevel::p80;
  if (text == "90") return ConfidenceLevel::p90;
  if (text == "95") return ConfidenceLevel::p95;
  throw DataError(fmt::format("unsupported confidence level '{}' (use 80, 90 or 95)", text));
}

IntervalBounds confidence_interval(const Vector& point, double mse, const IntervalLevel& level) {
  if (!(mse >= 0.0)) throw DataError("confidence interval needs a non-negative MSE");
  const double half = z_value(level) * std::sqrt(mse);
  return {(point.array() - half).matrix(), (point.array() + half).matrix()};
}

}  // namespace chronofit
