#include "chronofit/figures.hpp"

#include "chronofit/error.hpp"

#include <fmt/format.h>

namespace chronofit {

namespace {

double decimal_year(Period p, int s) { return p.year + static_cast<double>(p.period - 1) / s; }

Layer line(std::string name, Vector x, Vector y, StyleRole role, int panel = 0) {
  Layer l;
  l.name = std::move(name);
  l.x = std::move(x);
  l.y = std::move(y);
  l.role = role;
  l.panel = panel;
  return l;
}

Layer optional_line(std::string name, const Vector& x, const std::vector<std::optional<double>>& y, StyleRole role,
                    int panel) {
  Vector v(static_cast<Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Index>(i)] = y[i].value_or(std::numeric_limits<double>::quiet_NaN());
  return line(std::move(name), x, std::move(v), role, panel);
}

void add_forecast_layers(std::vector<Layer>& layers, const TimeSeries& ts, const ForecastResult& r, int panel) {
  const Vector x = time_axis(ts);
  const Vector fx = future_axis(ts, r.future.size());
  if (r.interval) {
    Layer band = line("", fx, r.interval->upper, StyleRole::interval, panel);
    band.y_lower = r.interval->lower;
    band.style = LayerStyle::area;
    layers.push_back(std::move(band));
  }
  layers.push_back(line(ts.name(), x, ts.values(), StyleRole::primary, panel));
  layers.push_back(line("fitted", x, r.fitted, StyleRole::fitted, panel));
  layers.push_back(line("forecast", fx, r.future, StyleRole::forecast, panel));
}

}  // namespace

Vector time_axis(const TimeSeries& ts) {
  Vector x(ts.size());
  for (Index i = 0; i < ts.size(); ++i) x[i] = decimal_year(ts.period_at(i), ts.periods_per_year());
  return x;
}

Vector future_axis(const TimeSeries& ts, Index horizon) {
  Vector x(horizon);
  for (Index j = 0; j < horizon; ++j) x[j] = decimal_year(ts.period_at(ts.size() + j), ts.periods_per_year());
  return x;
}

PlotSpec time_plot(const std::vector<TimeSeries>& series, std::string title) {
  PlotSpec spec;
  spec.kind = PlotKind::time;
  spec.title = std::move(title);
  spec.x_label = "time";
  int slot = 0;
  for (const auto& ts : series) {
    const auto role = static_cast<StyleRole>(std::min(slot++, static_cast<int>(StyleRole::accent)));
    spec.layers.push_back(line(ts.name(), time_axis(ts), ts.values(), role));
  }
  return spec;
}

PlotSpec seasonal_plot(const TimeSeries& ts, std::string title) {
  const SeasonalLayout layout = seasonal_layout(ts);
  PlotSpec spec;
  spec.kind = PlotKind::seasonal;
  spec.title = std::move(title);
  spec.x_label = "season";
  spec.x_tick_labels = layout.labels;
  for (std::size_t r = 0; r < layout.rows.size(); ++r) {
    const auto& row = layout.rows[r];
    Layer l;
    l.name = fmt::format("{}", ts.period_at(static_cast<Index>(r) * layout.cycle_length).year);
    l.y = Eigen::Map<const Vector>(row.data(), static_cast<Index>(row.size()));
    l.x = Vector::LinSpaced(l.y.size(), 0.0, static_cast<double>(l.y.size() - 1));
    l.role = static_cast<StyleRole>(r % 7);
    spec.layers.push_back(std::move(l));
  }
  return spec;
}

PlotSpec decomposition_plot(const TimeSeries& ts, const Decomposition& d, std::string title) {
  PlotSpec spec;
  spec.kind = PlotKind::decomposition;
  spec.title = std::move(title);
  spec.height = 820;
  spec.panel_titles = {"observed", "trend", "seasonal", "remainder"};
  const Vector x = time_axis(ts);
  spec.layers.push_back(line("", x, ts.values(), StyleRole::primary, 0));
  spec.layers.push_back(optional_line("", x, d.trend, StyleRole::primary, 1));
  spec.layers.push_back(line("", x, d.seasonal, StyleRole::primary, 2));
  Layer rem = optional_line("", x, d.remainder, StyleRole::primary, 3);
  rem.style = LayerStyle::points;
  spec.layers.push_back(std::move(rem));
  return spec;
}

PlotSpec correlogram_plot(const Correlogram& c, std::string title) {
  PlotSpec spec;
  spec.kind = PlotKind::correlogram;
  spec.title = std::move(title);
  spec.x_label = "lag";
  spec.band = c.band;
  Layer stems;
  stems.y = c.coefficients;
  stems.x = Vector::LinSpaced(c.coefficients.size(), 0.0, static_cast<double>(c.coefficients.size() - 1));
  stems.style = LayerStyle::stems;
  spec.layers.push_back(std::move(stems));
  return spec;
}

PlotSpec forecast_plot(const TimeSeries& ts, const ForecastResult& r, std::string title) {
  PlotSpec spec;
  spec.kind = PlotKind::forecast_fan;
  spec.title = std::move(title);
  spec.x_label = "time";
  add_forecast_layers(spec.layers, ts, r, 0);
  return spec;
}

PlotSpec forecast_panels(const std::vector<TimeSeries>& series, const std::vector<ForecastResult>& results,
                         std::string title) {
  if (series.size() != results.size()) throw DataError("forecast panels: one result per series required");
  PlotSpec spec;
  spec.kind = PlotKind::forecast_fan;
  spec.title = std::move(title);
  spec.columns = series.size() > 1 ? 2 : 1;
  spec.height = 60 + 300 * static_cast<int>((series.size() + 1) / 2);
  for (std::size_t i = 0; i < series.size(); ++i) {
    spec.panel_titles.push_back(series[i].name());
    add_forecast_layers(spec.layers, series[i], results[i], static_cast<int>(i));
  }
  return spec;
}

PlotSpec scatter_plot(const TimeSeries& x, const TimeSeries& y, std::string title) {
  if (x.size() != y.size()) throw DataError("scatter plot: series lengths differ");
  PlotSpec spec;
  spec.kind = PlotKind::scatter;
  spec.title = std::move(title);
  spec.x_label = x.name();
  spec.y_label = y.name();
  Layer pts = line("", x.values(), y.values(), StyleRole::primary);
  pts.style = LayerStyle::points;
  spec.layers.push_back(std::move(pts));
  return spec;
}

PlotSpec scatter_matrix_plot(const std::vector<TimeSeries>& columns, std::string title) {
  if (columns.empty()) throw DataError("scatter matrix needs at least one column");
  const int k = static_cast<int>(columns.size());
  PlotSpec spec;
  spec.kind = PlotKind::scatter_matrix;
  spec.title = std::move(title);
  spec.columns = k;
  spec.width = std::max(400, 220 * k);
  spec.height = spec.width;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      const int panel = r * k + c;
      spec.panel_titles.push_back(r == c ? columns[r].name() : fmt::format("{} vs {}", columns[r].name(), columns[c].name()));
      if (r == c) {
        spec.layers.push_back(line("", time_axis(columns[r]), columns[r].values(), StyleRole::primary, panel));
      } else {
        if (columns[r].size() != columns[c].size()) throw DataError("scatter matrix: column lengths differ");
        Layer pts = line("", columns[c].values(), columns[r].values(), StyleRole::primary, panel);
        pts.style = LayerStyle::points;
        spec.layers.push_back(std::move(pts));
      }
    }
  }
  return spec;
}

PlotSpec residual_panel_plot(const ResidualSummary& s, std::string title) {
  PlotSpec spec;
  spec.kind = PlotKind::residual_panel;
  spec.title = std::move(title);
  spec.columns = 2;
  spec.height = 700;
  spec.panel_titles = {"standardized residuals", "histogram", "normal Q-Q", "residual correlogram"};

  spec.layers.push_back(line("", {}, s.standardized, StyleRole::primary, 0));

  const Index bins = s.histogram.size();
  Layer hist;
  hist.x = 0.5 * (s.histogram_edges.head(bins) + s.histogram_edges.tail(bins));
  hist.y = s.histogram.cast<double>();
  hist.style = LayerStyle::bars;
  hist.panel = 1;
  spec.layers.push_back(std::move(hist));

  Layer qq = line("", s.qq_points.col(0), s.qq_points.col(1), StyleRole::primary, 2);
  qq.style = LayerStyle::points;
  spec.layers.push_back(std::move(qq));
  const double lo = s.qq_points.col(0).minCoeff();
  const double hi = s.qq_points.col(0).maxCoeff();
  Vector ref(2);
  ref << lo, hi;
  spec.layers.push_back(line("", ref, ref, StyleRole::forecast, 2));

  Layer stems;
  stems.y = s.residual_acf.coefficients;
  stems.x = Vector::LinSpaced(stems.y.size(), 0.0, static_cast<double>(stems.y.size() - 1));
  stems.style = LayerStyle::stems;
  stems.panel = 3;
  spec.layers.push_back(std::move(stems));
  spec.band = s.residual_acf.band;
  spec.band_panels = {3};
  return spec;
}

}  // namespace chronofit
