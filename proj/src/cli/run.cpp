#include "chronofit/cli.hpp"

#include "chronofit/arima.hpp"
#include "chronofit/baseline.hpp"
#include "chronofit/decompose.hpp"
#include "chronofit/diagnostics.hpp"
#include "chronofit/error.hpp"
#include "chronofit/expsmooth.hpp"
#include "chronofit/figures.hpp"
#include "chronofit/plot.hpp"
#include "chronofit/regress.hpp"
#include "chronofit/transform.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace chronofit::cli {

namespace {

namespace fs = std::filesystem;

// Diagnostics stream of the running command.
thread_local std::ostream* diagnostics = &std::cerr;

struct DataOptions {
  std::string path;
  std::string column;
  std::string date_column = "date";
  int freq = 0;
};

void add_data_options(CLI::App& cmd, DataOptions& d, bool required = true) {
  auto* opt = cmd.add_option("--data", d.path, "CSV file with a date column and one or more value columns");
  if (required) opt->required();
  cmd.add_option("--column", d.column, "value column (default: the only value column, or 'value')");
  cmd.add_option("--date-column", d.date_column, "date column name")->capture_default_str();
  cmd.add_option("--freq", d.freq, "periods per year, overriding the date format")->check(CLI::PositiveNumber);
}

SeriesTable load_table(const DataOptions& d) {
  if (!fs::exists(d.path)) throw DataError(fmt::format("'{}': no such file", d.path));
  return load_csv_table(d.path, d.date_column, d.freq > 0 ? std::optional<int>(d.freq) : std::nullopt);
}

TimeSeries pick(const SeriesTable& table, const std::string& name) {
  if (!name.empty()) return table.column(name);
  if (table.columns.size() == 1) return table.columns.front();
  for (const auto& c : table.columns) {
    if (c.name() == "value") return c;
  }
  throw DataError(fmt::format("several value columns ({}); choose one with --column", fmt::join(table.names(), ", ")));
}

TimeSeries load_series(const DataOptions& d) { return pick(load_table(d), d.column); }

IntervalLevel level_from(const std::string& text) { return parse_confidence_level(text); }

std::string fmt_opt(const std::optional<double>& v, std::string_view spec = "{:.4f}") {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string("-");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(fmt::format("cannot write '{}'", path));
  f << text;
}

std::string forecast_csv(const TimeSeries& ts, const ForecastResult& r) {
  std::string csv = r.interval ? "date,forecast,lower,upper\n" : "date,forecast\n";
  for (Index j = 0; j < r.future.size(); ++j) {
    csv += fmt::format("{},{}", format_period(ts.period_at(ts.size() + j), ts.frequency()), r.future[j]);
    if (r.interval) csv += fmt::format(",{},{}", r.interval->lower[j], r.interval->upper[j]);
    csv += '\n';
  }
  return csv;
}

void maybe_svg(const std::string& path, const PlotSpec& spec) {
  if (!path.empty()) render_svg(spec, path);
}

void print_forecast(std::ostream& out, const TimeSeries& ts, const ForecastResult& r) {
  if (r.future.size() == 0) return;
  out << fmt::format("\n{:<10} {:>14}", "period", "forecast");
  if (r.interval) out << fmt::format(" {:>14} {:>14}", "lower", "upper");
  out << '\n';
  for (Index j = 0; j < r.future.size(); ++j) {
    out << fmt::format("{:<10} {:>14.4f}", format_period(ts.period_at(ts.size() + j), ts.frequency()), r.future[j]);
    if (r.interval) out << fmt::format(" {:>14.4f} {:>14.4f}", r.interval->lower[j], r.interval->upper[j]);
    out << '\n';
  }
}

// ----------------------------------------------------------------- commands

struct Outputs {
  std::string svg;
  std::string csv;
};

void add_outputs(CLI::App& cmd, Outputs& o, std::string_view what) {
  cmd.add_option("--out", o.svg, fmt::format("SVG path for the {}", what));
  cmd.add_option("--csv", o.csv, "CSV output path");
}

struct PlotArgs {
  DataOptions data;
  Outputs out;
  std::vector<std::string> columns;
  std::string title;
  int white_noise = 0;
  std::uint64_t seed = 1;
  std::string x_column;
};

void cmd_plot(const PlotArgs& a, std::ostream& out) {
  std::vector<TimeSeries> series;
  if (a.white_noise > 0) {
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(a.white_noise);
    for (auto& x : v) x = normal(rng);
    series.emplace_back(v, Period{1, 1}, Frequency(1), "white noise");
  } else {
    if (a.data.path.empty()) throw CLI::RequiredError("--data (or --white-noise)");
    const SeriesTable table = load_table(a.data);
    if (!a.x_column.empty()) {
      const TimeSeries x = table.column(a.x_column);
      const TimeSeries y = pick(table, a.data.column);
      maybe_svg(a.out.svg, scatter_plot(x, y, a.title.empty() ? fmt::format("{} vs {}", y.name(), x.name()) : a.title));
      out << fmt::format("correlation({}, {}) = {:.4f}\n", x.name(), y.name(), correlation(x.values(), y.values()));
      return;
    }
    if (a.columns.empty()) {
      series = a.data.column.empty() ? table.columns : std::vector<TimeSeries>{table.column(a.data.column)};
    } else {
      for (const auto& c : a.columns) series.push_back(table.column(c));
    }
  }
  if (a.white_noise > 0) {
    const WhiteNoiseVerdict v = is_white_noise(series.front(), std::min(40, a.white_noise / 4));
    out << fmt::format("white noise sample n={} seed={}: {:.1f}% of ACF/PACF lags inside the band ({})\n",
                       a.white_noise, a.seed, 100.0 * v.fraction_inside, v.white_noise ? "white noise" : "not white");
  }
  for (const auto& s : series) {
    out << fmt::format("{}: n={} start={} end={} mean={:.4f}\n", s.name(), s.size(),
                       format_period(s.start(), s.frequency()), format_period(s.end(), s.frequency()),
                       s.values().mean());
  }
  if (!a.out.csv.empty()) save_csv(series.front(), a.out.csv);
  maybe_svg(a.out.svg, time_plot(series, a.title.empty() ? series.front().name() : a.title));
}

struct SeasonalArgs {
  DataOptions data;
  Outputs out;
};

void cmd_seasonal(const SeasonalArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  const SeasonalLayout layout = seasonal_layout(ts);
  out << fmt::format("{:<6}", "cycle");
  for (const auto& l : layout.labels) out << fmt::format(" {:>10}", l);
  out << '\n';
  for (std::size_t r = 0; r < layout.rows.size(); ++r) {
    out << fmt::format("{:<6}", ts.period_at(static_cast<Index>(r) * layout.cycle_length).year);
    for (double v : layout.rows[r]) out << fmt::format(" {:>10.4g}", v);
    out << '\n';
  }
  maybe_svg(a.out.svg, seasonal_plot(ts, fmt::format("Seasonal plot: {}", ts.name())));
}

struct TransformArgs {
  DataOptions data;
  Outputs out;
  std::string kind;
  double lambda = 1.0;
  int lag = 1;
  int times = 1;
};

void cmd_transform(const TransformArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  TimeSeries result = ts;
  if (a.kind == "log") {
    result = log_transform(ts);
  } else if (a.kind == "exp") {
    result = exp_transform(ts);
  } else if (a.kind == "sqrt") {
    result = sqrt_transform(ts);
  } else if (a.kind == "power") {
    result = power_transform(ts, a.lambda);
  } else if (a.kind == "calendar") {
    result = calendar_adjust(ts, days_in_month(ts));
  } else {
    result = difference(ts, DifferenceSpec(a.lag, a.times));
  }
  if (!a.out.csv.empty()) {
    save_csv(result, a.out.csv);
  } else {
    out << "date,value\n";
    for (Index i = 0; i < result.size(); ++i) {
      out << fmt::format("{},{}\n", format_period(result.period_at(i), result.frequency()), result[i]);
    }
  }
  maybe_svg(a.out.svg, time_plot({result}, fmt::format("{} ({})", ts.name(), a.kind)));
}

struct DecomposeArgs {
  DataOptions data;
  Outputs out;
  std::string kind = "additive";
};

void cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  const auto kind = a.kind == "multiplicative" ? DecompositionKind::multiplicative : DecompositionKind::additive;
  const Decomposition d = classical_decompose(ts, kind);
  const auto labels = period_labels(ts.periods_per_year(), ts.start().period);
  out << fmt::format("{} decomposition of {} (s = {})\nseasonal indices:\n", a.kind, ts.name(), ts.periods_per_year());
  for (Index i = 0; i < d.seasonal_indices.size(); ++i) {
    out << fmt::format("  {:<6} {:>12.6f}\n", labels[static_cast<std::size_t>(i)], d.seasonal_indices[i]);
  }
  if (!a.out.csv.empty()) {
    std::string csv = "t,observed,trend,seasonal,remainder\n";
    auto cell = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); };
    for (Index i = 0; i < ts.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      csv += fmt::format("{},{},{},{},{}\n", format_period(ts.period_at(i), ts.frequency()), ts[i], cell(d.trend[k]),
                         d.seasonal[i], cell(d.remainder[k]));
    }
    write_text(a.out.csv, csv);
  }
  maybe_svg(a.out.svg, decomposition_plot(ts, d, fmt::format("{} decomposition: {}", a.kind, ts.name())));
}

struct CorrelogramArgs {
  DataOptions data;
  Outputs out;
  int lags = 24;
  int diff = 0;
  int seasonal_diff = 0;
};

TimeSeries differenced_input(const CorrelogramArgs& a) {
  TimeSeries ts = load_series(a.data);
  if (a.seasonal_diff > 0) ts = difference(ts, DifferenceSpec(ts.periods_per_year(), a.seasonal_diff));
  if (a.diff > 0) ts = difference(ts, DifferenceSpec(1, a.diff));
  return ts;
}

void cmd_correlogram(const CorrelogramArgs& a, bool partial, std::ostream& out) {
  const TimeSeries ts = differenced_input(a);
  const Correlogram c = partial ? pacf(ts, a.lags) : acf(ts, a.lags);
  const char* name = partial ? "PACF" : "ACF";
  out << fmt::format("{} of {} (n = {}, band = +/-{:.4f})\n{:>4} {:>10}\n", name, ts.name(), c.n, c.band, "lag", name);
  std::string csv = fmt::format("lag,{}\n", partial ? "pacf" : "acf");
  for (Index k = 1; k <= c.max_lag(); ++k) {
    out << fmt::format("{:>4} {:>10.4f}{}\n", k, c.coefficients[k], c.outside_band(k) ? " *" : "");
    csv += fmt::format("{},{}\n", k, c.coefficients[k]);
  }
  if (!a.out.csv.empty()) write_text(a.out.csv, csv);
  maybe_svg(a.out.svg, correlogram_plot(c, fmt::format("{}: {}", name, ts.name())));
}

struct AdfArgs {
  DataOptions data;
  std::string regression = "c";
  int max_lag = -1;
  int diff = 0;
};

void cmd_adf(const AdfArgs& a, std::ostream& out) {
  TimeSeries ts = load_series(a.data);
  if (a.diff > 0) ts = difference(ts, DifferenceSpec(1, a.diff));
  const auto reg = a.regression == "ct" ? AdfRegression::constant_trend : AdfRegression::constant;
  const AdfResult r = adf_test(ts, reg, a.max_lag >= 0 ? std::optional<int>(a.max_lag) : std::nullopt);
  out << fmt::format("Augmented Dickey-Fuller test: {}{}\n", ts.name(),
                     a.diff > 0 ? fmt::format(" (differenced {}x)", a.diff) : "");
  out << fmt::format("ADF Statistic: {:.6f}\n", r.statistic);
  out << fmt::format("p-value: {:.6f}\n", r.p_value);
  out << fmt::format("Lags used: {}\nObservations: {}\nCritical Values:\n", r.lags_used, r.nobs);
  out << fmt::format("\t1%: {:.3f}\n\t5%: {:.3f}\n\t10%: {:.3f}\n", r.critical.one, r.critical.five, r.critical.ten);
  out << (r.statistic < r.critical.five ? "Reject the unit-root null at 5%: the series looks stationary.\n"
                                        : "Cannot reject the unit-root null at 5%: difference the series.\n");
}

struct CorrArgs {
  DataOptions data;
  Outputs out;
  std::vector<std::string> columns;
};

void cmd_corr(const CorrArgs& a, std::ostream& out) {
  const SeriesTable table = load_table(a.data);
  std::vector<TimeSeries> cols;
  if (a.columns.empty()) {
    cols = table.columns;
  } else {
    for (const auto& c : a.columns) cols.push_back(table.column(c));
  }
  const CorrelationMatrix m = correlation_matrix(cols);
  out << fmt::format("{:>12}", "");
  for (const auto& l : m.labels) out << fmt::format(" {:>10}", l);
  out << '\n';
  std::string csv = fmt::format(",{}\n", fmt::join(m.labels, ","));
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out << fmt::format("{:>12}", m.labels[i]);
    csv += m.labels[i];
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      const double v = m.values(static_cast<Index>(i), static_cast<Index>(j));
      out << fmt::format(" {:>10.4f}", v);
      csv += fmt::format(",{}", v);
    }
    out << '\n';
    csv += '\n';
  }
  if (!a.out.csv.empty()) write_text(a.out.csv, csv);
  maybe_svg(a.out.svg, scatter_matrix_plot(cols, "Scatterplot matrix"));
}

struct AccuracyArgs {
  DataOptions data;
  Outputs out;
};

void cmd_accuracy(const AccuracyArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  const ErrorReport e1 = error_measures(ts, nf1(ts, 1));
  const ErrorReport e2 = error_measures(ts, nf2(ts, 1));
  out << fmt::format("{:<8} | {:>12} | {:>12}\n", "Errors", "NF1", "NF2");
  out << fmt::format("{:-<8}-+-{:->12}-+-{:->12}\n", "", "", "");
  std::string csv = "measure,nf1,nf2\n";
  auto row = [&](std::string_view name, const std::optional<double>& x, const std::optional<double>& y) {
    out << fmt::format("{:<8} | {:>12} | {:>12}\n", name, fmt_opt(x), fmt_opt(y));
    csv += fmt::format("{},{},{}\n", name, x ? fmt::format("{}", *x) : "", y ? fmt::format("{}", *y) : "");
  };
  row("ME", e1.me, e2.me);
  row("MAE", e1.mae, e2.mae);
  row("MSE", e1.mse, e2.mse);
  row("MPE", e1.mpe, e2.mpe);
  row("MAPE", e1.mape, e2.mape);
  if (!a.out.csv.empty()) write_text(a.out.csv, csv);
}

struct NaiveArgs {
  DataOptions data;
  Outputs out;
  std::string method = "nf1";
  int horizon = 12;
  std::string level = "95";
};

void cmd_naive(const NaiveArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  ForecastResult r = a.method == "nf2" ? nf2(ts, a.horizon) : nf1(ts, a.horizon);
  r.interval = confidence_interval(r.future, r.mse(), level_from(a.level));
  const ErrorReport e = error_measures(ts, r);
  out << fmt::format("{} on {}: ME={:.4f} MAE={:.4f} MSE={:.4f} MPE={} MAPE={}\n", r.method, ts.name(), e.me, e.mae,
                     e.mse, fmt_opt(e.mpe), fmt_opt(e.mape));
  print_forecast(out, ts, r);
  if (!a.out.csv.empty()) write_text(a.out.csv, forecast_csv(ts, r));
  maybe_svg(a.out.svg, forecast_plot(ts, r, fmt::format("{} forecast: {}", r.method, ts.name())));
}

struct SmoothingArgs {
  DataOptions data;
  Outputs out;
  std::optional<double> alpha, beta, gamma, phi;
  std::string trend = "additive";
  std::string seasonal = "additive";
  int periods = 0;
  int horizon = 12;
  std::string level = "95";
  bool compare = false;
  std::string residual_svg;
};

TrendKind trend_from(const std::string& s) {
  if (s == "multiplicative" || s == "exponential") return TrendKind::multiplicative;
  if (s == "damped") return TrendKind::damped;
  return TrendKind::additive;
}

void print_param_table_header(std::ostream& out) {
  out << fmt::format("{:<34} {:>8} {:>8} {:>8} {:>8} {:>14}\n", "model", "alpha", "beta", "phi", "gamma", "MSE");
}

void print_param_row(std::ostream& out, std::string_view label, const SmoothingFit& f) {
  out << fmt::format("{:<34} {:>8.4f} {:>8} {:>8} {:>8} {:>14.6g}\n", label, f.params.alpha, fmt_opt(f.params.beta),
                     fmt_opt(f.params.phi), fmt_opt(f.params.gamma), f.mse);
}

void report_smoothing(const SmoothingArgs& a, const TimeSeries& ts, const SmoothingFit& fit, std::ostream& out) {
  const ForecastResult r = fit.forecast(a.horizon, level_from(a.level));
  print_forecast(out, ts, r);
  if (!fit.converged) *diagnostics << "warning: optimizer reached its iteration cap\n";
  if (!a.out.csv.empty()) write_text(a.out.csv, forecast_csv(ts, r));
  maybe_svg(a.out.svg, forecast_plot(ts, r, fmt::format("{}: {}", fit.model.describe(), ts.name())));
  if (!a.residual_svg.empty()) {
    const ResidualDiagnostics diag = residual_diagnostics(fit);
    if (diag.correlogram) {
      render_svg(correlogram_plot(*diag.correlogram, "Residual ACF"), a.residual_svg);
    } else {
      *diagnostics << "note: residuals are identically zero; no correlogram written\n";
    }
  }
}

ParamRequest request_from(const SmoothingArgs& a) { return {a.alpha, a.beta, a.gamma, a.phi}; }

void cmd_ses(const SmoothingArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  const SmoothingFit fit = ses_fit(ts, a.alpha);
  print_param_table_header(out);
  print_param_row(out, a.alpha ? "SES (fixed)" : "SES (optimized)", fit);
  report_smoothing(a, ts, fit, out);
}

void cmd_holt(const SmoothingArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  TrendKind trend = trend_from(a.trend);
  if (a.phi && trend == TrendKind::additive) trend = TrendKind::damped;
  const SmoothingFit fit = holt_fit(ts, trend, request_from(a));
  print_param_table_header(out);
  print_param_row(out, fit.model.describe(), fit);
  report_smoothing(a, ts, fit, out);
}

void cmd_hw(const SmoothingArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  const int s = a.periods > 0 ? a.periods : ts.periods_per_year();
  const SeasonalKind kind = a.seasonal == "multiplicative" ? SeasonalKind::multiplicative : SeasonalKind::additive;
  print_param_table_header(out);
  if (a.compare) {
    // Fixed versus optimized parameters for both seasonal forms.
    const ParamRequest fixed{a.alpha.value_or(0.3), a.beta.value_or(0.5), a.gamma.value_or(0.7), std::nullopt};
    int model = 1;
    for (SeasonalKind k : {SeasonalKind::additive, SeasonalKind::multiplicative}) {
      for (bool optimized : {false, true}) {
        try {
          const SmoothingFit f = holt_winters_fit(ts, k, s, optimized ? ParamRequest{} : fixed);
          print_param_row(out, fmt::format("{}: {} {}", model, to_string(k), optimized ? "optimized" : "fixed"), f);
        } catch (const DataError& e) {
          out << fmt::format("{}: {} {}: {}\n", model, to_string(k), optimized ? "optimized" : "fixed", e.what());
        }
        ++model;
      }
    }
  }
  const SmoothingFit fit = holt_winters_fit(ts, kind, s, request_from(a));
  print_param_row(out, fit.model.describe(), fit);
  report_smoothing(a, ts, fit, out);
}

struct ArimaArgs {
  DataOptions data;
  Outputs out;
  std::string order;
  std::string seasonal;
  std::string max = "2,2,2";
  int seasonal_s = 0;
  int steps = 12;
  std::string level = "95";
  std::string diagnostics_svg;
  int lags = 24;
  bool suggest = false;
};

ModelOrder order_from(const ArimaArgs& a) {
  if (a.order.empty()) throw CLI::RequiredError("--order");
  ModelOrder o = parse_order(a.order);
  if (!a.seasonal.empty()) {
    const ModelOrder s = parse_order("0,0,0," + a.seasonal);
    o.P = s.P;
    o.D = s.D;
    o.Q = s.Q;
    o.s = s.s;
  }
  o.validate();
  return o;
}

void print_arima(std::ostream& out, const ArimaFit& f) {
  out << fmt::format("{} on {} (CSS, n_eff = {})\n", f.order.to_string(), f.series.name(), f.n_effective);
  out << fmt::format("{:<12} {:>12}\n", "coef", "estimate");
  auto block = [&](std::string_view prefix, const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) out << fmt::format("{:<12} {:>12.6f}\n", fmt::format("{}{}", prefix, i + 1), v[i]);
  };
  block("ar.L", f.ar);
  block("ma.L", f.ma);
  block(fmt::format("ar.S{}.L", f.order.s), f.seasonal_ar);
  block(fmt::format("ma.S{}.L", f.order.s), f.seasonal_ma);
  if (f.intercept) out << fmt::format("{:<12} {:>12.6f}\n", "intercept", *f.intercept);
  out << fmt::format("{:<12} {:>12.6f}\n", "sigma2", f.sigma2);
  out << fmt::format("log-likelihood {:.4f}\nAIC {:.4f}\n", f.loglik, f.aic);
  if (!f.converged) *diagnostics << "warning: optimizer reached its iteration cap\n";
}

void arima_outputs(const ArimaArgs& a, const ArimaFit& fit, std::ostream& out, bool with_forecast) {
  if (with_forecast) {
    const ForecastResult r = arima_forecast(fit, a.steps, level_from(a.level));
    print_forecast(out, fit.series, r);
    if (!a.out.csv.empty()) write_text(a.out.csv, forecast_csv(fit.series, r));
    maybe_svg(a.out.svg, forecast_plot(fit.series, r, fmt::format("{} forecast: {}", fit.order.to_string(), fit.series.name())));
  }
  if (!a.diagnostics_svg.empty()) {
    render_svg(residual_panel_plot(diagnostics_summary(fit, a.lags), fmt::format("{} residuals", fit.order.to_string())),
               a.diagnostics_svg);
  }
}

void cmd_arima_fit(const ArimaArgs& a, std::ostream& out) {
  const ArimaFit fit = arima_fit(load_series(a.data), order_from(a));
  print_arima(out, fit);
  arima_outputs(a, fit, out, !a.out.svg.empty() || !a.out.csv.empty());
}

void cmd_arima_auto(const ArimaArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  if (a.suggest) {
    const OrderSuggestion s = suggest_order(ts, a.seasonal_s > 1 ? a.seasonal_s : 1);
    out << fmt::format("suggested order: {}\nrationale: {}\n\n", s.suggestion.to_string(), s.rationale);
  }
  OrderSearch search;
  if (a.seasonal_s > 1) {
    search = auto_seasonal_search(ts, a.seasonal_s, 1);
  } else {
    const ModelOrder bounds = parse_order(a.max);
    search = auto_order_search(ts, bounds.p, bounds.d, bounds.q);
  }
  out << fmt::format("{:<28} {:>14}\n", "order", "AIC");
  for (const auto& c : search.table) {
    out << fmt::format("{:<28} {:>14}\n", c.order.to_string(), c.aic ? fmt::format("{:.4f}", *c.aic) : "failed");
    if (!c.aic) *diagnostics << fmt::format("{}: {}\n", c.order.to_string(), c.failure);
  }
  out << fmt::format("\nbest: {} (AIC {:.4f})\n\n", search.best.to_string(), search.best_aic);
  const ArimaFit fit = arima_fit(ts, search.best);
  print_arima(out, fit);
  arima_outputs(a, fit, out, !a.out.svg.empty() || !a.out.csv.empty());
}

void cmd_arima_forecast(const ArimaArgs& a, std::ostream& out) {
  const TimeSeries ts = load_series(a.data);
  ModelOrder order;
  if (a.order.empty()) {
    order = a.seasonal_s > 1 ? auto_seasonal_search(ts, a.seasonal_s, 1).best : auto_order_search(ts).best;
  } else {
    order = order_from(a);
  }
  const ArimaFit fit = arima_fit(ts, order);
  print_arima(out, fit);
  arima_outputs(a, fit, out, true);
}

struct RegressArgs {
  DataOptions data;
  Outputs out;
  std::string formula;
  int forecast = 0;
  std::string method = "holt";
  std::string level = "80";
  std::string regressor_svg;
};

void cmd_regress(const RegressArgs& a, std::ostream& out) {
  const SeriesTable table = load_table(a.data);
  const Formula f = parse_formula(a.formula);
  const TimeSeries y = table.column(f.response);
  std::vector<TimeSeries> xs;
  for (const auto& name : f.predictors) xs.push_back(table.column(name));
  const OlsFit fit = ols_fit(y, xs);

  out << "OLS Regression Results\n";
  out << fmt::format("Dep. Variable: {:<12} R-squared:          {:.4f}\n", f.response, fit.r_squared);
  out << fmt::format("No. Observations: {:<9} Adj. R-squared:     {:.4f}\n", fit.n, fit.adj_r_squared);
  out << fmt::format("Df Residuals: {:<13} F-statistic:        {:.4f}\n", fit.degrees_of_freedom(), fit.f_stat);
  out << fmt::format("Df Model: {:<17} Prob (F-statistic): {:.3e}\n", fit.k, fit.f_p_value);
  out << fmt::format("\n{:<12} {:>12} {:>12} {:>10} {:>10}\n", "", "coef", "std err", "t", "P>|t|");
  for (Index j = 0; j <= fit.k; ++j) {
    const std::string name = j == 0 ? "const" : fit.names[static_cast<std::size_t>(j - 1)];
    out << fmt::format("{:<12} {:>12.4f} {:>12.4f} {:>10.3f} {:>10.3g}\n", name, fit.coefficients[j], fit.stderr_[j],
                       fit.t_stats[j], fit.p_values[j]);
  }
  const SignificanceReport sig = significance_assessment(fit);
  out << fmt::format("\noverall: {} ({})\n", sig.overall ? "significant" : "not significant", sig.basis);
  for (std::size_t j = 0; j < sig.per_variable.size(); ++j) {
    out << fmt::format("{}: {}\n", fit.names[j], sig.per_variable[j] ? "significant" : "not significant");
  }

  if (a.forecast > 0) {
    RegressorMethod method = HoltMethod{};
    if (a.method != "holt") method = parse_order(a.method);
    const RegressorPipeline p = forecast_with_regressors(y, xs, a.forecast, method, level_from(a.level));
    for (const auto& d : p.dropped) *diagnostics << fmt::format("note: constant regressor '{}' left out\n", d);
    print_forecast(out, y, p.forecast);
    if (!a.out.csv.empty()) write_text(a.out.csv, forecast_csv(y, p.forecast));
    maybe_svg(a.out.svg, forecast_plot(y, p.forecast, fmt::format("Regression forecast: {}", f.response)));
    if (!a.regressor_svg.empty()) {
      std::vector<TimeSeries> used;
      for (const auto& x : xs) {
        if (std::find(p.dropped.begin(), p.dropped.end(), x.name()) == p.dropped.end()) used.push_back(x);
      }
      render_svg(forecast_panels(used, p.regressor_forecasts, "Regressor forecasts"), a.regressor_svg);
    }
  }
}

void add_smoothing_options(CLI::App& cmd, SmoothingArgs& a, bool trend, bool seasonal) {
  add_data_options(cmd, a.data);
  add_outputs(cmd, a.out, "forecast plot");
  cmd.add_option("--alpha,--smoothing-level", a.alpha, "level smoothing (omit to optimize)")->check(CLI::Range(0.0, 1.0));
  if (trend) {
    cmd.add_option("--beta,--smoothing-slope,--smoothing-trend", a.beta, "trend smoothing (omit to optimize)")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--phi,--damping-slope,--damping-trend", a.phi, "damping factor (omit to optimize)")
        ->check(CLI::Range(0.0, 1.0));
  }
  if (trend && !seasonal) {
    cmd.add_option("--trend", a.trend, "additive | multiplicative | damped")
        ->check(CLI::IsMember({"additive", "multiplicative", "exponential", "damped"}))
        ->capture_default_str();
  }
  if (seasonal) {
    cmd.add_option("--gamma,--smoothing-seasonal", a.gamma, "seasonal smoothing (omit to optimize)")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--seasonal", a.seasonal, "additive | multiplicative")
        ->check(CLI::IsMember({"additive", "multiplicative"}))
        ->capture_default_str();
    cmd.add_option("--periods,--seasonal-periods", a.periods, "season length (default: frequency)")
        ->check(CLI::PositiveNumber);
    cmd.add_flag("--compare", a.compare, "also tabulate fixed and optimized additive/multiplicative models");
  }
  cmd.add_option("--horizon", a.horizon, "forecast horizon")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--level", a.level, "interval level: 80, 90 or 95")->capture_default_str();
  cmd.add_option("--residuals-out", a.residual_svg, "SVG path for the residual correlogram");
}

void add_arima_options(CLI::App& cmd, ArimaArgs& a) {
  add_data_options(cmd, a.data);
  add_outputs(cmd, a.out, "forecast fan");
  cmd.add_option("--diagnostics-out", a.diagnostics_svg, "SVG path for the 4-panel residual diagnostics");
  cmd.add_option("--lags", a.lags, "lags in the residual correlogram")->check(CLI::PositiveNumber);
  cmd.add_option("--steps,--horizon", a.steps, "forecast horizon")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--level", a.level, "interval level: 80, 90 or 95")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"chronofit: time-series analysis and forecasting"};
  app.name("chronofit");
  app.require_subcommand(1);
  app.fallthrough(false);

  PlotArgs plot_a;
  auto* plot = app.add_subcommand("plot", "time plot of one or more columns (or a white-noise demo)");
  add_data_options(*plot, plot_a.data, false);
  add_outputs(*plot, plot_a.out, "time plot");
  plot->add_option("--columns", plot_a.columns, "columns to draw (default: all)")->delimiter(',');
  plot->add_option("--x", plot_a.x_column, "draw a scatter plot of --column against this column");
  plot->add_option("--title", plot_a.title);
  plot->add_option("--white-noise", plot_a.white_noise, "generate n Gaussian white-noise values instead of --data")
      ->check(CLI::PositiveNumber);
  plot->add_option("--seed", plot_a.seed, "random seed for generated data")->capture_default_str();

  SeasonalArgs seasonal_a;
  auto* seasonal = app.add_subcommand("seasonal", "seasonal plot and cycle table");
  add_data_options(*seasonal, seasonal_a.data);
  add_outputs(*seasonal, seasonal_a.out, "seasonal plot");

  TransformArgs transform_a;
  auto* transform = app.add_subcommand("transform", "log/sqrt/power/calendar adjustment or differencing");
  add_data_options(*transform, transform_a.data);
  add_outputs(*transform, transform_a.out, "transformed series");
  transform->add_option("--kind", transform_a.kind, "log | exp | sqrt | power | calendar | diff")
      ->required()
      ->check(CLI::IsMember({"log", "exp", "sqrt", "power", "calendar", "diff"}));
  transform->add_option("--lambda", transform_a.lambda, "exponent for --kind power");
  transform->add_option("--lag", transform_a.lag, "differencing lag")->check(CLI::PositiveNumber);
  transform->add_option("--times", transform_a.times, "number of differencing passes")->check(CLI::PositiveNumber);

  DecomposeArgs decompose_a;
  auto* decompose = app.add_subcommand("decompose", "classical decomposition");
  add_data_options(*decompose, decompose_a.data);
  add_outputs(*decompose, decompose_a.out, "4-panel decomposition");
  decompose->add_option("--kind,--model", decompose_a.kind, "additive | multiplicative")
      ->check(CLI::IsMember({"additive", "multiplicative"}))
      ->capture_default_str();

  CorrelogramArgs acf_a;
  CorrelogramArgs pacf_a;
  for (auto [name, args] : {std::pair{"acf", &acf_a}, std::pair{"pacf", &pacf_a}}) {
    auto* c = app.add_subcommand(name, fmt::format("{} correlogram", name));
    add_data_options(*c, args->data);
    add_outputs(*c, args->out, "correlogram");
    c->add_option("--lags", args->lags, "maximum lag")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--diff", args->diff, "ordinary differences before analysis")->check(CLI::NonNegativeNumber);
    c->add_option("--seasonal-diff", args->seasonal_diff, "seasonal differences before analysis")
        ->check(CLI::NonNegativeNumber);
  }

  AdfArgs adf_a;
  auto* adf = app.add_subcommand("adf", "augmented Dickey-Fuller unit-root test");
  add_data_options(*adf, adf_a.data);
  adf->add_option("--regression", adf_a.regression, "c (constant) | ct (constant and trend)")
      ->check(CLI::IsMember({"c", "ct"}))
      ->capture_default_str();
  adf->add_option("--max-lag", adf_a.max_lag, "largest augmentation lag (default: 12(n/100)^0.25)");
  adf->add_option("--diff", adf_a.diff, "ordinary differences before testing")->check(CLI::NonNegativeNumber);

  CorrArgs corr_a;
  auto* corr = app.add_subcommand("corr", "correlation matrix and scatterplot matrix");
  add_data_options(*corr, corr_a.data);
  add_outputs(*corr, corr_a.out, "scatterplot matrix");
  corr->add_option("--columns", corr_a.columns, "columns to correlate (default: all)")->delimiter(',');

  AccuracyArgs accuracy_a;
  auto* accuracy = app.add_subcommand("accuracy", "NF1 versus NF2 error table");
  add_data_options(*accuracy, accuracy_a.data);
  add_outputs(*accuracy, accuracy_a.out, "(unused)");

  NaiveArgs naive_a;
  auto* naive = app.add_subcommand("naive", "naive forecast NF1 or NF2");
  add_data_options(*naive, naive_a.data);
  add_outputs(*naive, naive_a.out, "forecast plot");
  naive->add_option("--method", naive_a.method, "nf1 | nf2")->check(CLI::IsMember({"nf1", "nf2"}))->capture_default_str();
  naive->add_option("--horizon", naive_a.horizon, "forecast horizon")->check(CLI::PositiveNumber)->capture_default_str();
  naive->add_option("--level", naive_a.level, "interval level: 80, 90 or 95")->capture_default_str();

  SmoothingArgs ses_a;
  SmoothingArgs holt_a;
  SmoothingArgs hw_a;
  add_smoothing_options(*app.add_subcommand("ses", "single exponential smoothing"), ses_a, false, false);
  add_smoothing_options(*app.add_subcommand("holt", "Holt linear, exponential or damped trend"), holt_a, true, false);
  add_smoothing_options(*app.add_subcommand("hw", "Holt-Winters seasonal smoothing"), hw_a, true, true);

  ArimaArgs fit_a;
  ArimaArgs auto_a;
  ArimaArgs fc_a;
  auto* arima = app.add_subcommand("arima", "ARIMA / seasonal ARIMA models");
  arima->require_subcommand(1);
  auto* arima_fit_cmd = arima->add_subcommand("fit", "fit a given order");
  add_arima_options(*arima_fit_cmd, fit_a);
  arima_fit_cmd->add_option("--order", fit_a.order, "p,d,q")->required();
  arima_fit_cmd->add_option("--seasonal", fit_a.seasonal, "P,D,Q,s");
  auto* arima_auto_cmd = arima->add_subcommand("auto", "AIC order search");
  add_arima_options(*arima_auto_cmd, auto_a);
  arima_auto_cmd->add_option("--max", auto_a.max, "upper bounds p,d,q")->capture_default_str();
  arima_auto_cmd->add_option("--seasonal-s", auto_a.seasonal_s, "search seasonal orders in [0,1] at this period");
  arima_auto_cmd->add_flag("--suggest", auto_a.suggest, "also print the ACF/PACF order suggestion");
  auto* arima_fc_cmd = arima->add_subcommand("forecast", "fit (or search) and forecast");
  add_arima_options(*arima_fc_cmd, fc_a);
  arima_fc_cmd->add_option("--order", fc_a.order, "p,d,q (default: AIC search)");
  arima_fc_cmd->add_option("--seasonal", fc_a.seasonal, "P,D,Q,s");
  arima_fc_cmd->add_option("--seasonal-s", fc_a.seasonal_s, "seasonal period for the AIC search");

  RegressArgs regress_a;
  auto* regress = app.add_subcommand("regress", "OLS regression and regression-based forecasting");
  add_data_options(*regress, regress_a.data);
  add_outputs(*regress, regress_a.out, "combined forecast");
  regress->add_option("--formula", regress_a.formula, "y ~ x1 + x2 + ...")->required();
  regress->add_option("--forecast", regress_a.forecast, "forecast horizon (0: fit only)")->check(CLI::NonNegativeNumber);
  regress->add_option("--method", regress_a.method, "regressor forecasts: holt, or an ARIMA order p,d,q")
      ->capture_default_str();
  regress->add_option("--level", regress_a.level, "interval level: 80, 90 or 95")->capture_default_str();
  regress->add_option("--regressors-out", regress_a.regressor_svg, "SVG path for the per-regressor forecasts");

  diagnostics = &err;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const CLI::App* s : app.get_subcommands()) sub = s;
    err << (sub != nullptr ? sub->help() : app.help());
    return usage_error;
  }

  try {
    if (*plot) cmd_plot(plot_a, out);
    else if (*seasonal) cmd_seasonal(seasonal_a, out);
    else if (*transform) cmd_transform(transform_a, out);
    else if (*decompose) cmd_decompose(decompose_a, out);
    else if (app.got_subcommand("acf")) cmd_correlogram(acf_a, false, out);
    else if (app.got_subcommand("pacf")) cmd_correlogram(pacf_a, true, out);
    else if (*adf) cmd_adf(adf_a, out);
    else if (*corr) cmd_corr(corr_a, out);
    else if (*accuracy) cmd_accuracy(accuracy_a, out);
    else if (*naive) cmd_naive(naive_a, out);
    else if (app.got_subcommand("ses")) cmd_ses(ses_a, out);
    else if (app.got_subcommand("holt")) cmd_holt(holt_a, out);
    else if (app.got_subcommand("hw")) cmd_hw(hw_a, out);
    else if (*arima_fit_cmd) cmd_arima_fit(fit_a, out);
    else if (*arima_auto_cmd) cmd_arima_auto(auto_a, out);
    else if (*arima_fc_cmd) cmd_arima_forecast(fc_a, out);
    else if (*regress) cmd_regress(regress_a, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return numerical_error;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  }
  return ok;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace chronofit::cli
