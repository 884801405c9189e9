#include "chronofit/regress.hpp"

#include "chronofit/distributions.hpp"
#include "chronofit/error.hpp"
#include "chronofit/expsmooth.hpp"
#include "chronofit/least_squares.hpp"
#include "parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace chronofit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

bool is_constant(const Vector& v) { return v.size() == 0 || (v.array() == v[0]).all(); }

void check_aligned(const TimeSeries& y, const TimeSeries& x) {
  if (x.size() != y.size() || x.start() != y.start() || x.frequency() != y.frequency()) {
    throw DataError(fmt::format("regressor '{}' is not aligned with '{}'", x.name(), y.name()));
  }
}

}  // namespace

OlsFit ols_fit(const Vector& y, const std::vector<std::string>& names, const std::vector<Vector>& regressors) {
  if (names.size() != regressors.size()) throw DataError("ols: one name per regressor required");
  const Index n = y.size();
  const Index k = static_cast<Index>(regressors.size());
  if (n <= k + 1) throw DataError(fmt::format("ols: {} observations is too few for {} regressors", n, k));

  Matrix design(n, k + 1);
  design.col(0).setOnes();
  for (Index j = 0; j < k; ++j) {
    if (regressors[j].size() != n) throw DataError(fmt::format("ols: regressor '{}' has the wrong length", names[j]));
    design.col(j + 1) = regressors[j];
  }
  LeastSquares ls;
  try {
    ls = least_squares(design, y);
  } catch (const DataError& e) {
    // Name the offending columns instead of quoting indices.
    std::string cols;
    for (Index c : dependent_columns(design)) {
      if (!cols.empty()) cols += ", ";
      cols += c == 0 ? "const" : names[c - 1];
    }
    throw DataError(fmt::format("ols: regressors are perfectly collinear; dependent columns: {}", cols));
  }

  OlsFit fit;
  fit.names = names;
  fit.n = n;
  fit.k = k;
  fit.coefficients = ls.coefficients;
  fit.fitted = ls.fitted;
  fit.residuals = ls.residuals;
  fit.sse = ls.sse;

  const double df = static_cast<double>(n - k - 1);
  const double sst = (y.array() - y.mean()).square().sum();
  fit.r_squared = sst > 0.0 ? std::clamp(1.0 - fit.sse / sst, 0.0, 1.0) : 1.0;
  fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * static_cast<double>(n - 1) / df;

  const double s2 = fit.sse / df;
  fit.stderr_ = (s2 * ls.unscaled_covariance.diagonal().array()).sqrt();
  fit.t_stats.resize(k + 1);
  fit.p_values.resize(k + 1);
  for (Index j = 0; j <= k; ++j) {
    const double b = fit.coefficients[j];
    const double se = fit.stderr_[j];
    if (se > 0.0) {
      fit.t_stats[j] = b / se;
      fit.p_values[j] = dist::t_two_sided_p(fit.t_stats[j], df);
    } else {
      fit.t_stats[j] = b == 0.0 ? kNaN : std::copysign(std::numeric_limits<double>::infinity(), b);
      fit.p_values[j] = b == 0.0 ? 1.0 : 0.0;
    }
  }

  if (k == 0) {
    fit.f_stat = kNaN;
    fit.f_p_value = kNaN;
  } else {
    const double ssr = std::max(0.0, sst - fit.sse);
    if (fit.sse > 0.0) {
      fit.f_stat = (ssr / static_cast<double>(k)) / s2;
      fit.f_p_value = dist::f_upper_p(fit.f_stat, static_cast<double>(k), df);
    } else {
      fit.f_stat = std::numeric_limits<double>::infinity();
      fit.f_p_value = 0.0;
    }
  }
  return fit;
}

OlsFit ols_fit(const TimeSeries& y, const std::vector<TimeSeries>& regressors) {
  std::vector<std::string> names;
  std::vector<Vector> cols;
  for (const auto& x : regressors) {
    check_aligned(y, x);
    names.push_back(x.name());
    cols.push_back(x.values());
  }
  return ols_fit(y.values(), names, cols);
}

Formula parse_formula(std::string_view text) {
  const auto tilde = text.find('~');
  if (tilde == std::string_view::npos || text.find('~', tilde + 1) != std::string_view::npos) {
    throw DataError(fmt::format("formula '{}' must have the form 'y ~ x1 + x2'", text));
  }
  Formula f;
  f.response = trim(text.substr(0, tilde));
  if (f.response.empty()) throw DataError(fmt::format("formula '{}' has no response", text));
  std::string_view rhs = text.substr(tilde + 1);
  while (true) {
    const auto plus = rhs.find('+');
    std::string term = trim(rhs.substr(0, plus));
    if (term.empty()) throw DataError(fmt::format("formula '{}' has an empty term", text));
    if (term == f.response || std::find(f.predictors.begin(), f.predictors.end(), term) != f.predictors.end()) {
      throw DataError(fmt::format("formula '{}' repeats '{}'", text, term));
    }
    f.predictors.push_back(std::move(term));
    if (plus == std::string_view::npos) break;
    rhs = rhs.substr(plus + 1);
  }
  return f;
}

SignificanceReport significance_assessment(const OlsFit& fit) {
  SignificanceReport r;
  const bool r2_ok = fit.r_squared > 0.50;
  const bool f_ok = fit.f_p_value < 0.05;
  r.overall = r2_ok && f_ok;
  if (r.overall) {
    r.basis = fmt::format("R^2 = {:.4f} > 0.50 and F p-value = {:.3g} < 0.05", fit.r_squared, fit.f_p_value);
  } else if (!r2_ok && !f_ok) {
    r.basis = fmt::format("R^2 = {:.4f} is not above 0.50 and F p-value = {:.3g} is not below 0.05", fit.r_squared,
                          fit.f_p_value);
  } else if (!r2_ok) {
    r.basis = fmt::format("R^2 = {:.4f} is not above 0.50", fit.r_squared);
  } else {
    r.basis = fmt::format("F p-value = {:.3g} is not below 0.05", fit.f_p_value);
  }
  for (Index j = 1; j <= fit.k; ++j) r.per_variable.push_back(fit.p_values[j] < 0.05);
  return r;
}

ForecastResult regression_forecast(const OlsFit& fit, const Matrix& future, const IntervalLevel& level) {
  if (future.cols() != fit.k) {
    throw DataError(fmt::format("regression forecast: rows have {} values, the model has {} regressors",
                                future.cols(), fit.k));
  }
  Vector point = Vector::Constant(future.rows(), fit.coefficients[0]);
  if (fit.k > 0) point += future * fit.coefficients.tail(fit.k);
  const Vector observed = fit.fitted + fit.residuals;
  ForecastResult r = make_forecast_result(observed, fit.fitted, 0, point, "OLS regression");
  r.interval = confidence_interval(r.future, fit.sse / static_cast<double>(fit.n), level);
  return r;
}

RegressorPipeline forecast_with_regressors(const TimeSeries& y, const std::vector<TimeSeries>& regressors,
                                           Index horizon, const RegressorMethod& method,
                                           const IntervalLevel& level) {
  if (horizon < 1) throw DataError("forecast horizon must be >= 1");
  RegressorPipeline out;
  std::vector<TimeSeries> used;
  for (const auto& x : regressors) {
    check_aligned(y, x);
    if (is_constant(x.values())) {
      out.dropped.push_back(x.name());
    } else {
      used.push_back(x);
    }
  }
  out.fit = ols_fit(y, used);

  std::vector<std::optional<ForecastResult>> slots(used.size());
  std::vector<std::exception_ptr> errors(used.size());
  detail::parallel_for(used.size(), [&](std::size_t j) {
    try {
      if (std::holds_alternative<HoltMethod>(method)) {
        slots[j] = holt_fit(used[j], TrendKind::additive, ParamRequest::optimize_all()).forecast(horizon, level);
      } else {
        slots[j] = arima_forecast(arima_fit(used[j], std::get<ModelOrder>(method)), horizon, level);
      }
    } catch (...) {
      errors[j] = std::current_exception();
    }
  });
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (!errors[j]) continue;
    const std::string who = used[j].name();
    try {
      std::rethrow_exception(errors[j]);
    } catch (const NumericalError& e) {
      throw NumericalError(fmt::format("forecasting regressor '{}': {}", who, e.what()));
    } catch (const DataError& e) {
      throw DataError(fmt::format("forecasting regressor '{}': {}", who, e.what()));
    }
  }

  Matrix future(horizon, static_cast<Index>(used.size()));
  for (std::size_t j = 0; j < used.size(); ++j) {
    future.col(static_cast<Index>(j)) = slots[j]->future;
    out.regressor_forecasts.push_back(std::move(*slots[j]));
  }
  out.forecast = regression_forecast(out.fit, future, level);
  return out;
}

}  // namespace chronofit
