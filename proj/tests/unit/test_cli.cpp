#include "chronofit/cli.hpp"
#include "chronofit/diagnostics.hpp"
#include "chronofit/error.hpp"
#include "chronofit/figures.hpp"
#include "chronofit/plot.hpp"

#include "temp_dir.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

using namespace chronofit;
using chronofit::testing::TempDir;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string monthly_csv(const Vector& v, int start_year = 1990) {
  std::string s = "date,value\n";
  for (Index i = 0; i < v.size(); ++i) {
    s += fmt::format("{}-{:02},{:.17g}\n", start_year + i / 12, i % 12 + 1, v[i]);
  }
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool is_svg(const std::filesystem::path& p) {
  const std::string s = slurp(p);
  return s.rfind("<svg", 0) == 0 || s.find("<svg") != std::string::npos;
}

double attribute(const std::string& tag, const std::string& name) {
  const std::regex re(" " + name + "=\"([-0-9.]+)\"");
  std::smatch m;
  REQUIRE(std::regex_search(tag, m, re));
  return std::stod(m[1].str());
}

}  // namespace

TEST_CASE("svg rendering is deterministic and validated") {
  const Correlogram c = acf(chronofit::testing::gaussian_noise(120, 3), 20);
  const PlotSpec spec = correlogram_plot(c, "ACF");
  const std::string a = render_svg(spec);
  CHECK(a == render_svg(spec));
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a.find("=\"-0.00\"") == std::string::npos);

  PlotSpec empty = spec;
  empty.layers.clear();
  CHECK_THROWS_AS(validate(empty), DataError);
  CHECK_THROWS_AS((void)render_svg(empty), DataError);
  PlotSpec tiny = spec;
  tiny.width = 0;
  CHECK_THROWS_AS((void)render_svg(tiny), DataError);
  PlotSpec ragged = spec;
  ragged.layers[0].x = Vector::Zero(3);
  CHECK_THROWS_AS((void)render_svg(ragged), DataError);
}

TEST_CASE("band rectangle spans exactly plus and minus the band") {
  PlotSpec spec;
  spec.kind = PlotKind::correlogram;
  spec.band = 0.2;
  Layer stems;
  stems.style = LayerStyle::stems;
  stems.y = Vector::Zero(4);
  stems.y << 0.5, 0.2, -0.2, 0.1;
  spec.layers.push_back(stems);
  const std::string svg = render_svg(spec);

  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex("<rect class=\"band\"[^>]*>")));
  const std::string rect = m.str();
  const double top = attribute(rect, "y");
  const double bottom = top + attribute(rect, "height");

  std::vector<double> cys;
  const std::regex circle("<circle cx=\"[-0-9.]+\" cy=\"([-0-9.]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator(); ++it) {
    cys.push_back(std::stod((*it)[1].str()));
  }
  REQUIRE(cys.size() == 4);
  // Coordinates carry two decimals, so the derived bottom edge may differ by one unit in the last place.
  CHECK(std::fabs(cys[1] - top) <= 1e-9);
  CHECK(std::fabs(cys[2] - bottom) <= 0.0100001);
  CHECK(cys[0] < top);
  CHECK(cys[3] > top);
  CHECK(cys[3] < bottom);

  spec.band_panels = {1};
  CHECK(render_svg(spec).find("class=\"band\"") == std::string::npos);
}

TEST_CASE("svg written to a file") {
  TempDir dir;
  PlotSpec spec = time_plot({chronofit::testing::monthly(chronofit::testing::trend_seasonal(48, 1))}, "series");
  render_svg(spec, dir / "t.svg");
  CHECK(slurp(dir / "t.svg") == render_svg(spec));
  CHECK_THROWS_AS(render_svg(spec, dir / "missing" / "t.svg"), DataError);
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  const auto data = dir.file("x.csv", monthly_csv(chronofit::testing::trend_seasonal(144, 2)));
  const auto tiny = dir.file("tiny.csv", monthly_csv(Vector::LinSpaced(5, 1, 5)));

  const Outcome acf_ok = invoke({"acf", "--data", data.string(), "--lags", "50", "--out", (dir / "acf.svg").string()});
  CHECK(acf_ok.code == 0);
  CHECK(is_svg(dir / "acf.svg"));

  const Outcome unknown = invoke({"acf", "--data", data.string(), "--bogus"});
  CHECK(unknown.code == 1);
  CHECK_FALSE(unknown.err.empty());
  CHECK(unknown.out.empty());

  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({}).code == 1);

  const Outcome short_fit = invoke({"arima", "fit", "--order", "1,1,2", "--data", tiny.string()});
  CHECK(short_fit.code == 2);
  CHECK(short_fit.err.find("observations") != std::string::npos);

  CHECK(invoke({"acf", "--data", (dir / "nope.csv").string()}).code == 2);
  CHECK(invoke({"arima", "fit", "--order", "1,x,2", "--data", data.string()}).code == 2);
}

TEST_CASE("every subcommand runs on sample data") {
  TempDir dir;
  const Vector base = chronofit::testing::trend_seasonal(144, 5);
  const auto data = dir.file("m.csv", monthly_csv(base));
  std::string table = "date,y,a,b\n";
  const Vector a = chronofit::testing::gaussian_noise(60, 1);
  const Vector b = chronofit::testing::gaussian_noise(60, 2);
  const Vector e = chronofit::testing::gaussian_noise(60, 3, 0.3);
  for (Index i = 0; i < 60; ++i) {
    table += fmt::format("{}-{:02},{:.17g},{:.17g},{:.17g}\n", 2000 + i / 12, i % 12 + 1,
                         1.0 + 2.0 * a[i] - b[i] + 0.05 * static_cast<double>(i) + e[i], a[i] + 0.1 * static_cast<double>(i), b[i]);
  }
  const auto multi = dir.file("multi.csv", table);
  const std::string d = data.string();
  auto out = [&](const std::string& name) { return (dir / name).string(); };

  const std::vector<std::vector<std::string>> commands = {
      {"plot", "--data", d, "--out", out("plot.svg")},
      {"plot", "--white-noise", "200", "--seed", "4", "--out", out("wn.svg")},
      {"plot", "--data", multi.string(), "--column", "y", "--x", "a", "--out", out("scatter.svg")},
      {"seasonal", "--data", d, "--out", out("seasonal.svg")},
      {"transform", "--data", d, "--kind", "log", "--csv", out("log.csv"), "--out", out("log.svg")},
      {"transform", "--data", d, "--kind", "diff", "--lag", "12", "--csv", out("d12.csv")},
      {"decompose", "--data", d, "--kind", "multiplicative", "--out", out("dec.svg")},
      {"pacf", "--data", d, "--lags", "30", "--diff", "1", "--seasonal-diff", "1", "--out", out("pacf.svg")},
      {"adf", "--data", d, "--regression", "ct"},
      {"corr", "--data", multi.string(), "--out", out("corr.svg")},
      {"accuracy", "--data", d},
      {"naive", "--data", d, "--method", "nf2", "--horizon", "12", "--out", out("nf2.svg")},
      {"ses", "--data", d, "--alpha", "0.4", "--out", out("ses.svg")},
      {"holt", "--data", d, "--trend", "damped", "--horizon", "6"},
      {"hw", "--data", d, "--seasonal", "multiplicative", "--compare", "--out", out("hw.svg"), "--residuals-out",
       out("hw_res.svg")},
      {"arima", "fit", "--data", d, "--order", "0,1,1", "--seasonal", "0,1,1,12", "--diagnostics-out", out("diag.svg")},
      {"arima", "auto", "--data", d, "--max", "1,1,1", "--suggest"},
      {"arima", "forecast", "--data", d, "--order", "1,1,0", "--steps", "20", "--level", "90", "--out", out("fc.svg"),
       "--csv", out("fc.csv")},
      {"regress", "--data", multi.string(), "--formula", "y ~ a + b", "--forecast", "6", "--out", out("reg.svg"),
       "--regressors-out", out("regs.svg")},
  };
  for (const auto& cmd : commands) {
    const Outcome o = invoke(cmd);
    INFO(cmd[0], " ", o.err);
    CHECK(o.code == 0);
  }
  for (const char* svg : {"plot.svg", "wn.svg", "scatter.svg", "seasonal.svg", "log.svg", "dec.svg", "pacf.svg", "corr.svg",
                          "nf2.svg", "ses.svg", "hw.svg", "hw_res.svg", "diag.svg", "fc.svg", "reg.svg", "regs.svg"}) {
    INFO(svg);
    CHECK(is_svg(dir / svg));
  }
  const TimeSeries logged = load_csv(dir / "log.csv");
  CHECK(logged.size() == 144);
  CHECK(logged[0] == doctest::Approx(std::log(base[0])).epsilon(1e-12));
  CHECK(load_csv(dir / "d12.csv").size() == 132);
}

TEST_CASE("cli reports on stdout") {
  TempDir dir;
  const auto data = dir.file("m.csv", monthly_csv(chronofit::testing::trend_seasonal(96, 7)));
  const Outcome acc = invoke({"accuracy", "--data", data.string()});
  REQUIRE(acc.code == 0);
  for (const char* row : {"ME", "MAE", "MSE", "MPE", "MAPE", "NF1", "NF2"}) CHECK(acc.out.find(row) != std::string::npos);

  const Outcome arima = invoke({"arima", "fit", "--data", data.string(), "--order", "1,1,0"});
  REQUIRE(arima.code == 0);
  CHECK(arima.out.find("AIC") != std::string::npos);
  CHECK(arima.out.find("sigma2") != std::string::npos);

  // The same seed gives the same generated plot.
  const Outcome w1 = invoke({"plot", "--white-noise", "100", "--seed", "9", "--out", (dir / "a.svg").string()});
  const Outcome w2 = invoke({"plot", "--white-noise", "100", "--seed", "9", "--out", (dir / "b.svg").string()});
  REQUIRE(w1.code == 0);
  REQUIRE(w2.code == 0);
  CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
}
