#include "chronofit/plot.hpp"

#include "chronofit/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace chronofit {

namespace {

struct Theme {
  const char* background;
  const char* foreground;
  const char* grid;
  const char* band;
  const char* palette[7];
};

constexpr Theme kLight{"#ffffff", "#222222", "#e4e4e4", "#9ecae1",
                       {"#1f77b4", "#7f7f7f", "#d62728", "#2ca02c", "#2ca02c", "#555555", "#ff7f0e"}};
constexpr Theme kDark{"#1e1e1e", "#dddddd", "#3a3a3a", "#2b5d80",
                      {"#6baed6", "#aaaaaa", "#fb6a4a", "#74c476", "#74c476", "#bbbbbb", "#fdae6b"}};

const Theme& current_theme() {
  const char* env = std::getenv("CHRONOFIT_PLOT_THEME");
  return env != nullptr && std::string_view(env) == "dark" ? kDark : kLight;
}

const char* colour(const Theme& t, StyleRole role) { return t.palette[static_cast<int>(role)]; }

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed two-decimal coordinates keep output stable across platforms.
std::string num(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  return fmt::format("{:.2f}", v);
}

std::string tick_label(double v) {
  if (std::fabs(v) < 1e-12) v = 0.0;
  return fmt::format("{:.6g}", v);
}

Vector x_of(const Layer& layer) {
  return layer.x.size() > 0 ? layer.x : Vector::LinSpaced(layer.y.size(), 0.0, static_cast<double>(layer.y.size() - 1));
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish(double pad_fraction) {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      const double w = std::max(1.0, std::fabs(lo)) * 0.5;
      lo -= w;
      hi += w;
    }
    const double pad = (hi - lo) * pad_fraction;
    lo -= pad;
    hi += pad;
  }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) ticks.push_back(v);
  return ticks;
}

struct Frame {
  double left, top, width, height;
  Range x, y;

  [[nodiscard]] double px(double v) const { return left + (v - x.lo) / (x.hi - x.lo) * width; }
  [[nodiscard]] double py(double v) const { return top + height - (v - y.lo) / (y.hi - y.lo) * height; }
};

void draw_axes(std::string& svg, const Frame& f, const Theme& t, const PlotSpec& spec) {
  for (double v : nice_ticks(f.y.lo, f.y.hi)) {
    const double y = f.py(v);
    svg += fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1"/>)", num(f.left),
                       num(y), num(f.left + f.width), num(y), t.grid);
    svg += '\n';
    svg += fmt::format(R"(<text x="{}" y="{}" font-size="10" text-anchor="end" fill="{}">{}</text>)",
                       num(f.left - 4), num(y + 3), t.foreground, tick_label(v));
    svg += '\n';
  }
  if (!spec.x_tick_labels.empty()) {
    for (std::size_t i = 0; i < spec.x_tick_labels.size(); ++i) {
      const double v = static_cast<double>(i);
      if (v < f.x.lo || v > f.x.hi) continue;
      svg += fmt::format(R"(<text x="{}" y="{}" font-size="10" text-anchor="middle" fill="{}">{}</text>)",
                         num(f.px(v)), num(f.top + f.height + 13), t.foreground, escape(spec.x_tick_labels[i]));
      svg += '\n';
    }
  } else {
    for (double v : nice_ticks(f.x.lo, f.x.hi)) {
      svg += fmt::format(R"(<text x="{}" y="{}" font-size="10" text-anchor="middle" fill="{}">{}</text>)",
                         num(f.px(v)), num(f.top + f.height + 13), t.foreground, tick_label(v));
      svg += '\n';
    }
  }
  svg += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{}" stroke-width="1"/>)",
                     num(f.left), num(f.top), num(f.width), num(f.height), t.foreground);
  svg += '\n';
}

// Polyline segments split at non-finite values.
void draw_line(std::string& svg, const Frame& f, const Vector& x, const Vector& y, const char* stroke) {
  std::string points;
  auto flush = [&] {
    if (!points.empty()) {
      svg += fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>)", points, stroke);
      svg += '\n';
      points.clear();
    }
  };
  for (Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(x[i])) {
      flush();
      continue;
    }
    if (!points.empty()) points += ' ';
    points += num(f.px(x[i])) + ',' + num(f.py(y[i]));
  }
  flush();
}

void draw_layer(std::string& svg, const Frame& f, const Layer& layer, const Theme& t) {
  const Vector x = x_of(layer);
  const char* c = colour(t, layer.role);
  switch (layer.style) {
    case LayerStyle::line:
      draw_line(svg, f, x, layer.y, c);
      break;
    case LayerStyle::points:
      for (Index i = 0; i < layer.y.size(); ++i) {
        if (!std::isfinite(layer.y[i]) || !std::isfinite(x[i])) continue;
        svg += fmt::format(R"(<circle cx="{}" cy="{}" r="2.5" fill="{}"/>)", num(f.px(x[i])), num(f.py(layer.y[i])), c);
        svg += '\n';
      }
      break;
    case LayerStyle::stems:
      for (Index i = 0; i < layer.y.size(); ++i) {
        if (!std::isfinite(layer.y[i])) continue;
        const double px = f.px(x[i]);
        svg += fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5"/>)", num(px),
                           num(f.py(0.0)), num(px), num(f.py(layer.y[i])), c);
        svg += '\n';
        svg += fmt::format(R"(<circle cx="{}" cy="{}" r="3" fill="{}"/>)", num(px), num(f.py(layer.y[i])), c);
        svg += '\n';
      }
      break;
    case LayerStyle::bars: {
      const double spacing = x.size() > 1 ? std::fabs(f.px(x[1]) - f.px(x[0])) : f.width / 2.0;
      const double w = spacing * 0.8;
      for (Index i = 0; i < layer.y.size(); ++i) {
        if (!std::isfinite(layer.y[i])) continue;
        const double top = std::min(f.py(0.0), f.py(layer.y[i]));
        const double h = std::fabs(f.py(0.0) - f.py(layer.y[i]));
        svg += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>)", num(f.px(x[i]) - w / 2.0),
                           num(top), num(w), num(h), c);
        svg += '\n';
      }
      break;
    }
    case LayerStyle::area: {
      std::string points;
      for (Index i = 0; i < layer.y.size(); ++i) {
        if (!points.empty()) points += ' ';
        points += num(f.px(x[i])) + ',' + num(f.py(layer.y[i]));
      }
      for (Index i = layer.y_lower.size() - 1; i >= 0; --i) {
        points += ' ' + num(f.px(x[i])) + ',' + num(f.py(layer.y_lower[i]));
      }
      svg += fmt::format(R"(<polygon points="{}" fill="{}" fill-opacity="0.3" stroke="none"/>)", points, c);
      svg += '\n';
      break;
    }
  }
}

}  // namespace

void validate(const PlotSpec& spec) {
  if (spec.layers.empty()) throw DataError("plot has no data layers");
  if (spec.width <= 0 || spec.height <= 0) throw DataError("plot dimensions must be positive");
  if (spec.columns < 1) throw DataError("plot needs at least one panel column");
  if (spec.band && !(*spec.band >= 0.0)) throw DataError("plot band must be non-negative");
  for (const auto& layer : spec.layers) {
    if (layer.panel < 0) throw DataError(fmt::format("layer '{}' has a negative panel index", layer.name));
    if (layer.y.size() == 0) throw DataError(fmt::format("layer '{}' is empty", layer.name));
    if (layer.x.size() != 0 && layer.x.size() != layer.y.size()) {
      throw DataError(fmt::format("layer '{}' has {} x values for {} y values", layer.name, layer.x.size(),
                                  layer.y.size()));
    }
    if (layer.style == LayerStyle::area && layer.y_lower.size() != layer.y.size()) {
      throw DataError(fmt::format("area layer '{}' needs a lower edge of matching length", layer.name));
    }
  }
}

std::string render_svg(const PlotSpec& spec) {
  validate(spec);
  const Theme& t = current_theme();

  int panels = 0;
  for (const auto& layer : spec.layers) panels = std::max(panels, layer.panel + 1);
  panels = std::max<int>(panels, static_cast<int>(spec.panel_titles.size()));
  const int cols = std::min(spec.columns, panels);
  const int rows = (panels + cols - 1) / cols;

  const double title_h = spec.title.empty() ? 10.0 : 34.0;
  const double cell_w = static_cast<double>(spec.width) / cols;
  const double cell_h = (static_cast<double>(spec.height) - title_h - 24.0) / rows;

  std::string svg;
  svg += fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif">)",
      spec.width, spec.height, spec.width, spec.height);
  svg += '\n';
  svg += fmt::format(R"(<rect width="{}" height="{}" fill="{}"/>)", spec.width, spec.height, t.background);
  svg += '\n';
  if (!spec.title.empty()) {
    svg += fmt::format(R"(<text x="{}" y="22" font-size="15" text-anchor="middle" fill="{}">{}</text>)",
                       num(spec.width / 2.0), t.foreground, escape(spec.title));
    svg += '\n';
  }

  for (int p = 0; p < panels; ++p) {
    const int r = p / cols;
    const int c = p % cols;
    Frame f{};
    f.left = c * cell_w + 62.0;
    f.top = title_h + r * cell_h + 20.0;
    f.width = cell_w - 62.0 - 18.0;
    f.height = cell_h - 20.0 - 22.0;

    const bool banded = spec.band && (spec.band_panels.empty() ||
                                      std::find(spec.band_panels.begin(), spec.band_panels.end(), p) !=
                                          spec.band_panels.end());
    bool zero_based = false;
    for (const auto& layer : spec.layers) {
      if (layer.panel != p) continue;
      const Vector x = x_of(layer);
      for (Index i = 0; i < x.size(); ++i) f.x.add(x[i]);
      for (Index i = 0; i < layer.y.size(); ++i) f.y.add(layer.y[i]);
      for (Index i = 0; i < layer.y_lower.size(); ++i) f.y.add(layer.y_lower[i]);
      if (layer.style == LayerStyle::stems || layer.style == LayerStyle::bars) zero_based = true;
    }
    if (zero_based) f.y.add(0.0);
    if (banded) {
      f.y.add(*spec.band);
      f.y.add(-*spec.band);
    }
    f.x.finish(0.03);
    f.y.finish(0.06);

    svg += fmt::format("<g id=\"panel-{}\">\n", p);
    draw_axes(svg, f, t, spec);
    if (banded) {
      svg += fmt::format(
          R"(<rect class="band" x="{}" y="{}" width="{}" height="{}" fill="{}" fill-opacity="0.4" stroke="none"/>)",
          num(f.left), num(f.py(*spec.band)), num(f.width), num(f.py(-*spec.band) - f.py(*spec.band)), t.band);
      svg += '\n';
    }
    if (static_cast<std::size_t>(p) < spec.panel_titles.size() && !spec.panel_titles[p].empty()) {
      svg += fmt::format(R"(<text x="{}" y="{}" font-size="12" fill="{}">{}</text>)", num(f.left), num(f.top - 6),
                         t.foreground, escape(spec.panel_titles[p]));
      svg += '\n';
    }
    // Areas first so lines stay visible on top.
    for (const auto& layer : spec.layers) {
      if (layer.panel == p && layer.style == LayerStyle::area) draw_layer(svg, f, layer, t);
    }
    double legend_y = f.top + 14.0;
    for (const auto& layer : spec.layers) {
      if (layer.panel != p) continue;
      if (layer.style != LayerStyle::area) draw_layer(svg, f, layer, t);
      if (layer.name.empty()) continue;
      svg += fmt::format(R"(<text x="{}" y="{}" font-size="10" text-anchor="end" fill="{}">{}</text>)",
                         num(f.left + f.width - 6), num(legend_y), colour(t, layer.role), escape(layer.name));
      svg += '\n';
      legend_y += 13.0;
    }
    svg += "</g>\n";
  }

  if (!spec.x_label.empty()) {
    svg += fmt::format(R"(<text x="{}" y="{}" font-size="12" text-anchor="middle" fill="{}">{}</text>)",
                       num(spec.width / 2.0), num(spec.height - 6.0), t.foreground, escape(spec.x_label));
    svg += '\n';
  }
  if (!spec.y_label.empty()) {
    svg += fmt::format(
        R"svg(<text x="14" y="{}" font-size="12" text-anchor="middle" fill="{}" transform="rotate(-90 14 {})">{}</text>)svg",
        num(spec.height / 2.0), t.foreground, num(spec.height / 2.0), escape(spec.y_label));
    svg += '\n';
  }
  svg += "</svg>\n";
  return svg;
}

void render_svg(const PlotSpec& spec, const std::filesystem::path& path) {
  const std::string doc = render_svg(spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << doc;
  if (!out) throw DataError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace chronofit
