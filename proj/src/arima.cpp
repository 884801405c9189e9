#include "chronofit/arima.hpp"

#include "chronofit/distributions.hpp"
#include "chronofit/error.hpp"
#include "chronofit/optimize.hpp"
#include "chronofit/transform.hpp"
#include "parallel.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace chronofit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Root moduli below this are penalized during estimation.
constexpr double kRootMargin = 1.01;

// Polynomial in "1 - sum c_i x^i" form, as full coefficient vector [1, -c_1, ...].
Vector lag_polynomial(const Vector& coefficients, int spacing) {
  Vector poly = Vector::Zero(coefficients.size() * spacing + 1);
  poly[0] = 1.0;
  for (Index i = 0; i < coefficients.size(); ++i) poly[(i + 1) * spacing] = -coefficients[i];
  return poly;
}

Vector multiply(const Vector& a, const Vector& b) {
  Vector out = Vector::Zero(a.size() + b.size() - 1);
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    out.segment(i, b.size()) += a[i] * b;
  }
  return out;
}

Vector to_coefficients(const Vector& poly) { return -poly.tail(poly.size() - 1); }

// Full AR operator including differencing, as [1, A_1, A_2, ...].
Vector full_ar_polynomial(const ArimaFit& fit) {
  const int s = fit.order.s;
  Vector poly = multiply(lag_polynomial(fit.ar, 1), lag_polynomial(fit.seasonal_ar, s));
  Vector diff1(2);
  diff1 << 1.0, -1.0;
  for (int k = 0; k < fit.order.d; ++k) poly = multiply(poly, diff1);
  if (fit.order.D > 0) {
    Vector diffs = Vector::Zero(s + 1);
    diffs[0] = 1.0;
    diffs[s] = -1.0;
    for (int k = 0; k < fit.order.D; ++k) poly = multiply(poly, diffs);
  }
  return poly;
}

struct Differenced {
  Vector seasonal;  // after seasonal differencing only
  Vector working;   // after seasonal then ordinary differencing
};

Differenced apply_differencing(const Vector& y, const ModelOrder& order) {
  Differenced out;
  out.seasonal = order.D > 0 ? difference(y, DifferenceSpec(order.s, order.D)) : y;
  out.working = order.d > 0 ? difference(out.seasonal, DifferenceSpec(1, order.d)) : out.seasonal;
  return out;
}

struct ParamBlocks {
  Vector ar, ma, sar, sma;
  std::optional<double> intercept;
};

ParamBlocks unpack(const Vector& x, const ModelOrder& o, bool with_intercept) {
  ParamBlocks b;
  Index k = 0;
  b.ar = x.segment(k, o.p);
  k += o.p;
  b.ma = x.segment(k, o.q);
  k += o.q;
  b.sar = x.segment(k, o.P);
  k += o.P;
  b.sma = x.segment(k, o.Q);
  k += o.Q;
  if (with_intercept) b.intercept = x[k];
  return b;
}

double root_penalty(const ParamBlocks& b) {
  double pen = 0.0;
  for (const Vector* poly : {&b.ar, &b.ma, &b.sar, &b.sma}) {
    if (poly->size() == 0) continue;
    const double r = min_root_modulus(*poly);
    if (r < kRootMargin) pen += (kRootMargin - r) * (kRootMargin - r);
  }
  return pen;
}

// Yule-Walker AR(p) estimates, used as a starting point.
Vector yule_walker(const Vector& w, int p) {
  if (p == 0 || w.size() <= p + 1) return Vector::Zero(p);
  const Vector c = autocovariance(w, p);
  if (!(c[0] > 0.0)) return Vector::Zero(p);
  Matrix toeplitz(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) toeplitz(i, j) = c[std::abs(i - j)];
  }
  Vector phi = toeplitz.ldlt().solve(c.segment(1, p));
  if (!phi.allFinite() || min_root_modulus(phi) < kRootMargin) return Vector::Zero(p);
  return phi;
}

bool lex_order_less(const ModelOrder& a, const ModelOrder& b) {
  return std::tie(a.p, a.d, a.q, a.P, a.D, a.Q) < std::tie(b.p, b.d, b.q, b.P, b.D, b.Q);
}

OrderSearch run_search(const TimeSeries& ts, const std::vector<ModelOrder>& candidates) {
  OrderSearch out;
  out.table.resize(candidates.size());
  std::vector<int> param_counts(candidates.size(), 0);
  std::vector<bool> data_failure(candidates.size(), false);
  detail::parallel_for(candidates.size(), [&](std::size_t i) {
    OrderCandidate& row = out.table[i];
    row.order = candidates[i];
    try {
      const ArimaFit fit = arima_fit(ts, candidates[i]);
      row.aic = fit.aic;
      param_counts[i] = fit.parameter_count();
    } catch (const DataError& e) {
      row.failure = e.what();
      data_failure[i] = true;
    } catch (const NumericalError& e) {
      row.failure = e.what();
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < out.table.size(); ++i) {
    if (!out.table[i].aic) continue;
    if (!best) {
      best = i;
      continue;
    }
    const double a = *out.table[i].aic;
    const double b = *out.table[*best].aic;
    if (a < b || (a == b && (param_counts[i] < param_counts[*best] ||
                             (param_counts[i] == param_counts[*best] &&
                              lex_order_less(out.table[i].order, out.table[*best].order))))) {
      best = i;
    }
  }
  if (!best) {
    const bool all_data = std::all_of(data_failure.begin(), data_failure.end(), [](bool b) { return b; });
    const std::string msg = fmt::format("order search: all {} candidate orders failed{}", candidates.size(),
                                        out.table.empty() ? "" : fmt::format(" (first: {})", out.table.front().failure));
    if (all_data) throw DataError(msg);
    throw NumericalError(msg);
  }
  out.best = out.table[*best].order;
  out.best_aic = *out.table[*best].aic;
  return out;
}

// Last significant lag of the leading cluster in 1..limit; the scan stops at
// two consecutive lags inside the band.
int cluster_end(const Correlogram& c, int limit) {
  int last = 0;
  int quiet = 0;
  for (int k = 1; k <= limit && k <= c.max_lag(); ++k) {
    if (c.outside_band(k)) {
      last = k;
      quiet = 0;
    } else if (++quiet >= 2) {
      break;
    }
  }
  return last;
}

// Number of consecutive significant lags step, 2*step, ... from the first.
int leading_run(const Correlogram& c, int step, int max_terms) {
  int run = 0;
  for (int k = 1; k <= max_terms && k * step <= c.max_lag(); ++k) {
    if (!c.outside_band(k * step)) break;
    ++run;
  }
  return run;
}

}  // namespace

void ModelOrder::validate() const {
  if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0) throw DataError(fmt::format("negative entry in order {}", to_string()));
  if (s < 1) throw DataError("seasonal period must be >= 1");
  if (s == 1 && (P != 0 || D != 0 || Q != 0)) throw DataError("seasonal terms need a seasonal period s >= 2");
}

std::string ModelOrder::to_string() const {
  if (s > 1) return fmt::format("ARIMA({},{},{})({},{},{})[{}]", p, d, q, P, D, Q, s);
  return fmt::format("ARIMA({},{},{})", p, d, q);
}

ModelOrder parse_order(std::string_view text) {
  std::vector<int> parts;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto comma = text.find(',', begin);
    auto field = text.substr(begin, comma == std::string_view::npos ? std::string_view::npos : comma - begin);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) throw DataError(fmt::format("bad order '{}'", text));
    parts.push_back(v);
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  ModelOrder o;
  if (parts.size() == 3) {
    o = {parts[0], parts[1], parts[2], 0, 0, 0, 1};
  } else if (parts.size() == 7) {
    o = {parts[0], parts[1], parts[2], parts[3], parts[4], parts[5], parts[6]};
  } else {
    throw DataError(fmt::format("order '{}' must have 3 or 7 comma-separated entries", text));
  }
  o.validate();
  return o;
}

int ArimaFit::parameter_count() const noexcept {
  return order.arma_parameters() + (intercept ? 1 : 0) + 1;
}

Vector combined_ar(const Vector& ar, const Vector& seasonal_ar, int s) {
  return to_coefficients(multiply(lag_polynomial(ar, 1), lag_polynomial(seasonal_ar, s)));
}

Vector combined_ma(const Vector& ma, const Vector& seasonal_ma, int s) {
  return to_coefficients(multiply(lag_polynomial(ma, 1), lag_polynomial(seasonal_ma, s)));
}

double min_root_modulus(const Vector& c) {
  Index k = c.size();
  while (k > 0 && c[k - 1] == 0.0) --k;
  if (k == 0) return kInf;
  if (k == 1) return 1.0 / std::fabs(c[0]);
  // Reciprocal roots are the eigenvalues of the companion matrix.
  Matrix companion = Matrix::Zero(k, k);
  companion.row(0) = c.head(k).transpose();
  companion.bottomLeftCorner(k - 1, k - 1).setIdentity();
  Eigen::EigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success) return 0.0;
  const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  return radius > 0.0 ? 1.0 / radius : kInf;
}

Vector css_residuals(const Vector& w, const Vector& ar_full, const Vector& ma_full, double intercept) {
  const Index n = w.size();
  const double mu = w.mean();
  Vector e(n);
  for (Index t = 0; t < n; ++t) {
    double v = w[t] - intercept;
    for (Index i = 0; i < ar_full.size(); ++i) {
      const Index lag = t - i - 1;
      v -= ar_full[i] * (lag >= 0 ? w[lag] : mu);
    }
    for (Index j = 0; j < ma_full.size(); ++j) {
      const Index lag = t - j - 1;
      if (lag >= 0) v += ma_full[j] * e[lag];
    }
    e[t] = v;
  }
  return e;
}

ArimaFit arima_fit(const TimeSeries& ts, const ModelOrder& order, const ArimaOptions& options) {
  order.validate();
  if (order.is_trivial()) throw DataError("the all-zero ARIMA(0,0,0) order is not a model");
  const Index n = ts.size();
  const Index needed = order.d + static_cast<Index>(order.s) * order.D +
                       std::max(order.p + order.s * order.P, order.q + order.s * order.Q) + 10;
  if (n <= needed) {
    throw DataError(fmt::format("{} needs more than {} observations, got {}", order.to_string(), needed, n));
  }
  const bool with_intercept = options.with_intercept.value_or(order.d + order.D == 0);

  const Differenced diffs = apply_differencing(ts.values(), order);
  const Vector& w = diffs.working;
  const Index m = w.size();
  const double mu = w.mean();
  const double sd = std::sqrt((w.array() - mu).square().mean());

  const Index dim = order.arma_parameters() + (with_intercept ? 1 : 0);
  Vector lower = Vector::Constant(dim, -10.0);
  Vector upper = Vector::Constant(dim, 10.0);
  if (with_intercept) {
    const double span = 10.0 * (std::fabs(mu) + sd) + 1.0;
    lower[dim - 1] = -span;
    upper[dim - 1] = span;
  }

  const double baseline_sse = (w.array() - (with_intercept ? mu : 0.0)).square().sum();
  const double penalty_scale = 1e6 * (baseline_sse + 1.0);
  const Objective objective = [&](const Vector& x) {
    const ParamBlocks b = unpack(x, order, with_intercept);
    const Vector e = css_residuals(w, combined_ar(b.ar, b.sar, order.s), combined_ma(b.ma, b.sma, order.s),
                                   b.intercept.value_or(0.0));
    const double sse = e.squaredNorm();
    if (!std::isfinite(sse)) return kInf;
    return sse + penalty_scale * root_penalty(b);
  };

  std::vector<Vector> starts;
  Vector zero = Vector::Zero(dim);
  if (with_intercept) zero[dim - 1] = mu;
  starts.push_back(zero);
  if (order.p > 0) {
    Vector yw = zero;
    yw.head(order.p) = yule_walker(w, order.p);
    if (with_intercept) yw[dim - 1] = mu * (1.0 - yw.head(order.p).sum());
    starts.push_back(yw);
  }

  NelderMeadOptions nm;
  nm.f_tolerance = 1e-10;
  nm.x_tolerance = 1e-7;
  nm.max_iterations = 1000 + 400 * static_cast<int>(dim);
  nm.initial_step = 0.1;
  OptimizationResult best = minimize_multistart(objective, starts, lower, upper, nm);
  // Restart from the incumbent until the simplex stops finding improvements.
  for (int restart = 0; restart < 5 && dim > 0; ++restart) {
    nm.initial_step = 0.05;
    OptimizationResult again = minimize_box(objective, best.x, lower, upper, nm);
    const bool improved = again.value < best.value - 1e-12 * std::max(1.0, std::fabs(best.value));
    if (again.value <= best.value) best = std::move(again);
    if (!improved) break;
  }
  if (!std::isfinite(best.value)) throw NumericalError(fmt::format("{}: estimation diverged", order.to_string()));

  const ParamBlocks b = unpack(best.x, order, with_intercept);
  for (const Vector* poly : {&b.ar, &b.sar}) {
    if (poly->size() > 0 && !(min_root_modulus(*poly) > 1.0)) {
      throw NumericalError(fmt::format("{}: estimated AR polynomial is not stationary", order.to_string()));
    }
  }
  for (const Vector* poly : {&b.ma, &b.sma}) {
    if (poly->size() > 0 && !(min_root_modulus(*poly) > 1.0)) {
      throw NumericalError(fmt::format("{}: estimated MA polynomial is not invertible", order.to_string()));
    }
  }

  ArimaFit fit{.order = order,
               .ar = b.ar,
               .ma = b.ma,
               .seasonal_ar = b.sar,
               .seasonal_ma = b.sma,
               .intercept = b.intercept,
               .sigma2 = 0.0,
               .loglik = 0.0,
               .aic = 0.0,
               .sse = 0.0,
               .residuals = css_residuals(w, combined_ar(b.ar, b.sar, order.s), combined_ma(b.ma, b.sma, order.s),
                                          b.intercept.value_or(0.0)),
               .n_effective = m,
               .converged = best.converged,
               .series = ts,
               .differenced = w};
  fit.sse = fit.residuals.squaredNorm();
  if (!(fit.sse > 0.0)) throw NumericalError(fmt::format("{}: zero residual variance", order.to_string()));
  const double nm_eff = static_cast<double>(m);
  fit.sigma2 = fit.sse / nm_eff;
  fit.loglik = -0.5 * nm_eff * (std::log(2.0 * M_PI * fit.sse / nm_eff) + 1.0);
  fit.aic = -2.0 * fit.loglik + 2.0 * fit.parameter_count();
  return fit;
}

Vector psi_weights(const ArimaFit& fit, Index horizon) {
  const Vector a = full_ar_polynomial(fit);
  const Vector mpoly = multiply(lag_polynomial(fit.ma, 1), lag_polynomial(fit.seasonal_ma, fit.order.s));
  Vector psi = Vector::Zero(horizon);
  for (Index j = 0; j < horizon; ++j) {
    double v = j < mpoly.size() ? mpoly[j] : 0.0;
    for (Index i = 1; i <= j && i < a.size(); ++i) v -= a[i] * psi[j - i];
    psi[j] = v;
  }
  return psi;
}

ForecastResult arima_forecast(const ArimaFit& fit, Index horizon, const IntervalLevel& level) {
  if (horizon < 1) throw DataError("ARIMA forecast horizon must be >= 1");
  const ModelOrder& o = fit.order;
  const Vector& w = fit.differenced;
  const Index m = w.size();
  const double mu = w.mean();
  const Vector ar = combined_ar(fit.ar, fit.seasonal_ar, o.s);
  const Vector ma = combined_ma(fit.ma, fit.seasonal_ma, o.s);
  const double c = fit.intercept.value_or(0.0);

  Vector w_ext(m + horizon);
  w_ext.head(m) = w;
  for (Index t = m; t < m + horizon; ++t) {
    double v = c;
    for (Index i = 0; i < ar.size(); ++i) {
      const Index lag = t - i - 1;
      v += ar[i] * (lag >= 0 ? w_ext[lag] : mu);
    }
    for (Index j = 0; j < ma.size(); ++j) {
      const Index lag = t - j - 1;
      if (lag >= 0 && lag < m) v -= ma[j] * fit.residuals[lag];
    }
    w_ext[t] = v;
  }

  // Undo ordinary then seasonal differencing.
  const Vector& y = fit.series.values();
  Vector levels = w_ext;
  if (o.d > 0) {
    const Vector seasonal = o.D > 0 ? difference(y, DifferenceSpec(o.s, o.D)) : y;
    levels = invert_difference(levels, DifferenceSpec(1, o.d), seasonal.head(o.d));
  }
  if (o.D > 0) levels = invert_difference(levels, DifferenceSpec(o.s, o.D), y.head(static_cast<Index>(o.s) * o.D));

  const Index n = y.size();
  const Index offset = n - m;
  Vector fitted = Vector::Constant(n, kNaN);
  fitted.tail(m) = y.tail(m) - fit.residuals;

  ForecastResult r = make_forecast_result(y, std::move(fitted), offset, levels.tail(horizon), o.to_string());

  const Vector psi = psi_weights(fit, horizon);
  const double z = z_value(level);
  IntervalBounds bounds{Vector(horizon), Vector(horizon)};
  double cumulative = 0.0;
  for (Index j = 0; j < horizon; ++j) {
    cumulative += psi[j] * psi[j];
    const double half = z * std::sqrt(fit.sigma2 * cumulative);
    bounds.lower[j] = r.future[j] - half;
    bounds.upper[j] = r.future[j] + half;
  }
  r.interval = std::move(bounds);
  return r;
}

OrderSearch auto_order_search(const TimeSeries& ts, int p_max, int d_max, int q_max) {
  if (p_max < 0 || d_max < 0 || q_max < 0) throw DataError("order search bounds must be >= 0");
  std::vector<ModelOrder> candidates;
  for (int p = 0; p <= p_max; ++p) {
    for (int d = 0; d <= d_max; ++d) {
      for (int q = 0; q <= q_max; ++q) {
        ModelOrder o{p, d, q, 0, 0, 0, 1};
        if (!o.is_trivial()) candidates.push_back(o);
      }
    }
  }
  if (candidates.empty()) throw DataError("order search grid contains no admissible order");
  return run_search(ts, candidates);
}

OrderSearch auto_seasonal_search(const TimeSeries& ts, int s, int bound) {
  if (s < 2) throw DataError("seasonal order search needs s >= 2");
  if (bound < 0) throw DataError("order search bound must be >= 0");
  std::vector<ModelOrder> candidates;
  for (int p = 0; p <= bound; ++p)
    for (int d = 0; d <= bound; ++d)
      for (int q = 0; q <= bound; ++q)
        for (int P = 0; P <= bound; ++P)
          for (int D = 0; D <= bound; ++D)
            for (int Q = 0; Q <= bound; ++Q) {
              ModelOrder o{p, d, q, P, D, Q, s};
              if (!o.is_trivial()) candidates.push_back(o);
            }
  if (candidates.empty()) throw DataError("order search grid contains no admissible order");
  return run_search(ts, candidates);
}

OrderSuggestion suggest_order(const TimeSeries& ts, int s, int max_consider) {
  if (max_consider < 1 || max_consider > 10) throw DataError("max_consider must be in 1..10");
  if (s < 1) throw DataError("seasonal period must be >= 1");
  const Index n = ts.size();
  int lags = max_consider + 5;
  if (s >= 2) lags = std::max(lags, 3 * s);
  lags = static_cast<int>(std::min<Index>(lags, n / 2));
  if (lags < 1) throw DataError("series too short for order suggestion");
  const Correlogram r = acf(ts, lags);
  const Correlogram p = pacf(ts, lags);

  OrderSuggestion out;
  out.suggestion.s = s;
  const int limit = std::min(max_consider, lags);
  const int p_star = cluster_end(p, limit);
  const int q_star = cluster_end(r, limit);
  const int acf_run = leading_run(r, 1, lags);
  const int pacf_run = leading_run(p, 1, lags);
  const bool ar_fires = p_star >= 1 && acf_run > p_star;
  const bool ma_fires = q_star >= 1 && pacf_run > q_star;

  std::vector<std::string> notes;
  if (ar_fires && ma_fires) {
    out.suggestion.p = p_star;
    out.suggestion.q = q_star;
    notes.push_back(fmt::format("PACF cuts off after lag {} and ACF after lag {}; both decay, so the pattern is "
                                "mixed: confirm with the AIC search",
                                p_star, q_star));
  } else if (ar_fires) {
    out.suggestion.p = p_star;
    notes.push_back(fmt::format("PACF spike at lag {} with nothing significant beyond; ACF decays over {} lags: AR({})",
                                p_star, acf_run, p_star));
  } else if (ma_fires) {
    out.suggestion.q = q_star;
    notes.push_back(fmt::format("ACF spike at lag {} with nothing significant beyond; PACF decays over {} lags: MA({})",
                                q_star, pacf_run, q_star));
  } else if (p_star == 0 && q_star == 0) {
    notes.push_back("no significant autocorrelation at short lags; no clear pattern (white-noise like); use AIC search");
  } else {
    notes.push_back("no clear pure pattern; use AIC search");
  }

  if (s >= 2 && s <= lags) {
    const int terms = 3;
    const int P_star = leading_run(p, s, terms);
    const int Q_star = leading_run(r, s, terms);
    const bool sar = P_star >= 1 && Q_star > P_star;
    const bool sma = Q_star >= 1 && P_star > Q_star;
    if (sar) {
      out.suggestion.P = P_star;
      notes.push_back(fmt::format("seasonal PACF significant at the first {} multiple(s) of {} while the seasonal ACF "
                                  "persists: seasonal AR({})",
                                  P_star, s, P_star));
    } else if (sma) {
      out.suggestion.Q = Q_star;
      notes.push_back(fmt::format("seasonal ACF significant at the first {} multiple(s) of {} while the seasonal PACF "
                                  "persists: seasonal MA({})",
                                  Q_star, s, Q_star));
    } else if (P_star > 0 || Q_star > 0) {
      notes.push_back(fmt::format("seasonal lags of {} show correlation without a clear pure pattern", s));
    }
  }

  for (std::size_t i = 0; i < notes.size(); ++i) {
    if (i) out.rationale += "; ";
    out.rationale += notes[i];
  }
  return out;
}

ResidualSummary diagnostics_summary(const ArimaFit& fit, int max_lag) {
  const Index m = fit.residuals.size();
  if (m < 20) throw DataError(fmt::format("residual diagnostics need at least 20 residuals, got {}", m));
  if (!(fit.sigma2 > 0.0)) throw DataError("residual diagnostics: degenerate residuals");
  ResidualSummary out;
  out.standardized = fit.residuals / std::sqrt(fit.sigma2);
  out.residual_acf = acf(out.standardized, std::min<int>(max_lag, static_cast<int>(m) - 1));

  constexpr int kBins = 16;
  out.histogram = Eigen::VectorXi::Zero(kBins);
  out.histogram_edges = Vector::LinSpaced(kBins + 1, -4.0, 4.0);
  for (Index i = 0; i < m; ++i) {
    const int bin = static_cast<int>(std::floor((out.standardized[i] + 4.0) / 0.5));
    out.histogram[std::clamp(bin, 0, kBins - 1)] += 1;
  }

  Vector sorted = out.standardized;
  std::sort(sorted.begin(), sorted.end());
  out.qq_points.resize(m, 2);
  for (Index i = 0; i < m; ++i) {
    out.qq_points(i, 0) = dist::normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(m));
    out.qq_points(i, 1) = sorted[i];
  }
  return out;
}

}  // namespace chronofit
