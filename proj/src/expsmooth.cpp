#include "chronofit/expsmooth.hpp"

#include "chronofit/error.hpp"
#include "chronofit/optimize.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace chronofit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPhiLower = 1e-3;

void require_positive(const TimeSeries& ts, const char* what) {
  for (Index i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0)) throw DataError(fmt::format("{} requires strictly positive data (index {})", what, i));
  }
}

void check_model(const TimeSeries& ts, const SmoothingModel& model) {
  const Index n = ts.size();
  if (model.has_seasonal()) {
    const int s = model.seasonal_periods;
    if (s < 2) throw DataError("seasonal smoothing needs seasonal_periods >= 2");
    if (model.trend != TrendKind::additive) throw DataError("Holt-Winters supports additive trend only");
    if (n < 2 * static_cast<Index>(s) + 1) {
      throw DataError(fmt::format("Holt-Winters needs at least two complete seasons plus one ({} observations), got {}",
                                  2 * s + 1, n));
    }
    if (model.seasonal == SeasonalKind::multiplicative) require_positive(ts, "multiplicative seasonality");
  } else if (model.has_trend()) {
    if (n < 3) throw DataError(fmt::format("Holt's method needs at least 3 observations, got {}", n));
    if (model.trend == TrendKind::multiplicative) require_positive(ts, "multiplicative trend");
  } else if (n < 2) {
    throw DataError("SES needs at least 2 observations");
  }
}

void check_unit(std::optional<double> v, const char* name) {
  if (v && !(*v >= 0.0 && *v <= 1.0)) throw DataError(fmt::format("{} = {} outside [0, 1]", name, *v));
}

struct Recursion {
  Vector fitted;
  SmoothingState initial;
  SmoothingState final_state;
};

// Non-seasonal models: state after the first observation, recursion from the second.
Recursion run_nonseasonal(const Vector& y, const SmoothingModel& model, const SmoothingParams& p) {
  const Index n = y.size();
  Recursion r;
  r.fitted = Vector::Constant(n, kNaN);
  double level = y[0];
  double trend = 0.0;
  const bool mult = model.trend == TrendKind::multiplicative;
  const double phi = model.trend == TrendKind::damped ? *p.phi : 1.0;
  if (model.has_trend()) trend = mult ? y[1] / y[0] : y[1] - y[0];
  r.initial.level = level;
  if (model.has_trend()) r.initial.trend = trend;

  const double a = p.alpha;
  const double b = p.beta.value_or(0.0);
  for (Index t = 1; t < n; ++t) {
    double forecast = level;
    if (model.has_trend()) forecast = mult ? level * trend : level + phi * trend;
    r.fitted[t] = forecast;
    const double prev = level;
    level = a * y[t] + (1.0 - a) * forecast;
    if (model.has_trend()) {
      trend = mult ? b * (level / prev) + (1.0 - b) * trend : b * (level - prev) + (1.0 - b) * phi * trend;
    }
  }
  r.final_state.level = level;
  if (model.has_trend()) r.final_state.trend = trend;
  return r;
}

// Initial level (one step before the first observation), trend, and seasonal
// indices from the first two complete seasons.
SmoothingState seasonal_initial_state(const Vector& y, const SmoothingModel& model) {
  const int s = model.seasonal_periods;
  const double mean1 = y.head(s).mean();
  const double mean2 = y.segment(s, s).mean();
  SmoothingState st;
  const double trend = (mean2 - mean1) / s;
  st.trend = trend;
  st.level = mean1 - 0.5 * (s + 1) * trend;
  st.seasonals.resize(s);
  const bool mult = model.seasonal == SeasonalKind::multiplicative;
  for (int j = 0; j < s; ++j) {
    const double line = st.level + (j + 1) * trend;
    if (mult && !(line > 0.0)) throw NumericalError("multiplicative seasonal initialization hit a non-positive trend line");
    st.seasonals[j] = mult ? y[j] / line : y[j] - line;
  }
  if (mult) {
    st.seasonals /= st.seasonals.mean();
  } else {
    st.seasonals.array() -= st.seasonals.mean();
  }
  return st;
}

Recursion run_seasonal(const Vector& y, const SmoothingModel& model, const SmoothingParams& p) {
  const Index n = y.size();
  const int s = model.seasonal_periods;
  const bool mult = model.seasonal == SeasonalKind::multiplicative;
  Recursion r;
  r.fitted = Vector::Constant(n, kNaN);
  r.initial = seasonal_initial_state(y, model);
  double level = r.initial.level;
  double trend = *r.initial.trend;
  Vector seas = r.initial.seasonals;
  const double a = p.alpha;
  const double b = *p.beta;
  const double g = *p.gamma;
  for (Index t = 0; t < n; ++t) {
    const Index k = t % s;
    const double base = level + trend;
    r.fitted[t] = mult ? base * seas[k] : base + seas[k];
    const double prev = level;
    level = mult ? a * (y[t] / seas[k]) + (1.0 - a) * base : a * (y[t] - seas[k]) + (1.0 - a) * base;
    trend = b * (level - prev) + (1.0 - b) * trend;
    seas[k] = mult ? g * (y[t] / level) + (1.0 - g) * seas[k] : g * (y[t] - level) + (1.0 - g) * seas[k];
  }
  r.final_state.level = level;
  r.final_state.trend = trend;
  r.final_state.seasonals.resize(s);
  for (int j = 0; j < s; ++j) r.final_state.seasonals[j] = seas[(n + j) % s];
  return r;
}

Recursion run(const Vector& y, const SmoothingModel& model, const SmoothingParams& p) {
  return model.has_seasonal() ? run_seasonal(y, model, p) : run_nonseasonal(y, model, p);
}

double scored_mse(const Vector& y, const Vector& fitted, Index first) {
  const Index m = y.size() - first;
  return (y.tail(m) - fitted.tail(m)).squaredNorm() / static_cast<double>(m);
}

// Maps between the free-parameter vector and SmoothingParams.
struct ParamLayout {
  SmoothingModel model;
  ParamRequest request;
  std::vector<int> free;  // 0 alpha, 1 beta, 2 gamma, 3 phi

  explicit ParamLayout(const SmoothingModel& m, const ParamRequest& r) : model(m), request(r) {
    if (!request.alpha) free.push_back(0);
    if (model.has_trend() && !request.beta) free.push_back(1);
    if (model.has_seasonal() && !request.gamma) free.push_back(2);
    if (model.trend == TrendKind::damped && !request.phi) free.push_back(3);
  }

  [[nodiscard]] SmoothingParams unpack(const Vector& x) const {
    SmoothingParams p;
    p.alpha = request.alpha.value_or(0.0);
    if (model.has_trend()) p.beta = request.beta.value_or(0.0);
    if (model.has_seasonal()) p.gamma = request.gamma.value_or(0.0);
    if (model.trend == TrendKind::damped) p.phi = request.phi.value_or(1.0);
    for (std::size_t i = 0; i < free.size(); ++i) {
      const double v = x[static_cast<Index>(i)];
      switch (free[i]) {
        case 0: p.alpha = v; break;
        case 1: p.beta = v; break;
        case 2: p.gamma = v; break;
        default: p.phi = v; break;
      }
    }
    return p;
  }

  [[nodiscard]] Vector lower() const {
    Vector v(static_cast<Index>(free.size()));
    for (std::size_t i = 0; i < free.size(); ++i) v[static_cast<Index>(i)] = free[i] == 3 ? kPhiLower : 0.0;
    return v;
  }
  [[nodiscard]] Vector upper() const { return Vector::Ones(static_cast<Index>(free.size())); }
};

}  // namespace

std::string to_string(TrendKind kind) {
  switch (kind) {
    case TrendKind::none: return "none";
    case TrendKind::additive: return "additive";
    case TrendKind::multiplicative: return "multiplicative";
    case TrendKind::damped: return "damped";
  }
  return "?";
}

std::string to_string(SeasonalKind kind) {
  switch (kind) {
    case SeasonalKind::none: return "none";
    case SeasonalKind::additive: return "additive";
    case SeasonalKind::multiplicative: return "multiplicative";
  }
  return "?";
}

Index SmoothingModel::first_scored_index() const noexcept {
  return has_seasonal() ? static_cast<Index>(seasonal_periods) + 1 : 1;
}

std::string SmoothingModel::describe() const {
  if (!has_trend()) return "SES";
  if (!has_seasonal()) return fmt::format("Holt ({} trend)", to_string(trend));
  return fmt::format("Holt-Winters ({} seasonal, s={})", to_string(seasonal), seasonal_periods);
}

void validate_params(const SmoothingParams& params, const SmoothingModel& model) {
  check_unit(params.alpha, "alpha");
  check_unit(params.beta, "beta");
  check_unit(params.gamma, "gamma");
  if (params.phi && !(*params.phi > 0.0 && *params.phi <= 1.0)) {
    throw DataError(fmt::format("phi = {} outside (0, 1]", *params.phi));
  }
  if (model.has_trend() && !params.beta) throw DataError("trend model needs beta");
  if (model.has_seasonal() && !params.gamma) throw DataError("seasonal model needs gamma");
  if (model.trend == TrendKind::damped && !params.phi) throw DataError("damped trend needs phi");
}

Vector SmoothingFit::residuals() const {
  Vector r = Vector::Constant(observed.size(), kNaN);
  const Index m = observed.size() - fitted_start;
  r.tail(m) = observed.tail(m) - fitted.tail(m);
  return r;
}

Vector SmoothingFit::forecast_values(Index horizon) const {
  if (horizon < 0) throw DataError("forecast horizon must be >= 0");
  Vector out(horizon);
  const double level = final_state.level;
  const double trend = final_state.trend.value_or(0.0);
  const double phi = model.trend == TrendKind::damped ? *params.phi : 1.0;
  double damp_sum = 0.0;
  double phi_power = 1.0;
  for (Index h = 1; h <= horizon; ++h) {
    phi_power *= phi;
    damp_sum += phi_power;
    double v = level;
    switch (model.trend) {
      case TrendKind::none: break;
      case TrendKind::additive:
      case TrendKind::damped: v = level + damp_sum * trend; break;
      case TrendKind::multiplicative: v = level * std::pow(trend, static_cast<double>(h)); break;
    }
    if (model.has_seasonal()) {
      const double seas = final_state.seasonals[(h - 1) % model.seasonal_periods];
      v = model.seasonal == SeasonalKind::multiplicative ? v * seas : v + seas;
    }
    out[h - 1] = v;
  }
  return out;
}

ForecastResult SmoothingFit::forecast(Index horizon) const {
  ForecastResult r = make_forecast_result(observed, fitted, fitted_start, forecast_values(horizon), model.describe());
  return r;
}

ForecastResult SmoothingFit::forecast(Index horizon, const IntervalLevel& level) const {
  ForecastResult r = forecast(horizon);
  r.interval = confidence_interval(r.future, mse, level);
  return r;
}

SmoothingFit smooth(const TimeSeries& ts, const SmoothingModel& model, const SmoothingParams& params) {
  check_model(ts, model);
  validate_params(params, model);
  Recursion rec = run(ts.values(), model, params);
  SmoothingFit fit{.params = params,
                   .model = model,
                   .initial = rec.initial,
                   .final_state = rec.final_state,
                   .fitted = std::move(rec.fitted),
                   .fitted_start = model.first_scored_index(),
                   .observed = ts.values(),
                   .mse = 0.0,
                   .converged = true,
                   .series = ts};
  fit.fitted.head(fit.fitted_start).setConstant(kNaN);
  fit.mse = scored_mse(fit.observed, fit.fitted, fit.fitted_start);
  return fit;
}

ParamSearch optimize_params(const TimeSeries& ts, const SmoothingModel& model, const ParamRequest& request) {
  check_model(ts, model);
  check_unit(request.alpha, "alpha");
  check_unit(request.beta, "beta");
  check_unit(request.gamma, "gamma");
  if (request.phi && !(*request.phi > 0.0 && *request.phi <= 1.0)) throw DataError("phi outside (0, 1]");

  const ParamLayout layout(model, request);
  const Vector& y = ts.values();
  const Index first = model.first_scored_index();
  const Objective objective = [&](const Vector& x) {
    const Recursion rec = run(y, model, layout.unpack(x));
    return scored_mse(y, rec.fitted, first);
  };

  const Vector lower = layout.lower();
  const Vector upper = layout.upper();
  std::vector<Vector> starts = grid_starts(Vector::Zero(lower.size()), upper, 5);
  for (auto& s : starts) s = s.cwiseMax(lower);

  NelderMeadOptions options;
  options.f_tolerance = 1e-6;
  options.x_tolerance = 1e-7;
  options.max_iterations = 500;
  const OptimizationResult best = minimize_multistart(objective, starts, lower, upper, options);
  if (!std::isfinite(best.value)) throw NumericalError("smoothing parameter search found no finite objective");

  ParamSearch out;
  out.params = layout.unpack(best.x);
  out.mse = best.value;
  out.converged = best.converged;
  return out;
}

SmoothingFit fit_smoothing(const TimeSeries& ts, const SmoothingModel& model, const ParamRequest& request) {
  const bool all_fixed = request.alpha && (!model.has_trend() || request.beta) &&
                         (!model.has_seasonal() || request.gamma) &&
                         (model.trend != TrendKind::damped || request.phi);
  if (all_fixed) {
    SmoothingParams p{*request.alpha, std::nullopt, std::nullopt, std::nullopt};
    if (model.has_trend()) p.beta = request.beta;
    if (model.has_seasonal()) p.gamma = request.gamma;
    if (model.trend == TrendKind::damped) p.phi = request.phi;
    return smooth(ts, model, p);
  }
  const ParamSearch search = optimize_params(ts, model, request);
  SmoothingFit fit = smooth(ts, model, search.params);
  fit.converged = search.converged;
  return fit;
}

SmoothingFit ses_fit(const TimeSeries& ts, std::optional<double> alpha) {
  ParamRequest r;
  r.alpha = alpha;
  return fit_smoothing(ts, SmoothingModel::ses(), r);
}

ForecastResult ses_forecast(const SmoothingFit& fit, Index horizon) {
  if (fit.model.has_trend() || fit.model.has_seasonal()) throw DataError("ses_forecast expects an SES fit");
  return fit.forecast(horizon);
}

SmoothingFit holt_fit(const TimeSeries& ts, TrendKind trend, const ParamRequest& request) {
  if (trend == TrendKind::none) throw DataError("Holt's method needs a trend kind");
  return fit_smoothing(ts, SmoothingModel::holt(trend), request);
}

SmoothingFit holt_winters_fit(const TimeSeries& ts, SeasonalKind seasonal, int periods, const ParamRequest& request) {
  if (seasonal == SeasonalKind::none) throw DataError("Holt-Winters needs a seasonal kind");
  return fit_smoothing(ts, SmoothingModel::holt_winters(seasonal, periods), request);
}

ResidualDiagnostics residual_diagnostics(const SmoothingFit& fit, int max_lag) {
  const Index m = fit.observed.size() - fit.fitted_start;
  if (m < 3) throw DataError("residual diagnostics need at least 3 residuals");
  const Vector res = fit.residuals().tail(m);
  ResidualDiagnostics d{fit.series.with_values(res, fit.fitted_start).renamed(fit.series.name() + " residuals"),
                        std::nullopt, false};
  const double scale = std::max(1.0, fit.observed.cwiseAbs().maxCoeff());
  if (res.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    d.perfect_fit = true;
    return d;
  }
  d.correlogram = acf(res, std::min<int>(max_lag, static_cast<int>(m) - 1));
  return d;
}

}  // namespace chronofit
