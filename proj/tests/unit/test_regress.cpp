#include "chronofit/error.hpp"
#include "chronofit/regress.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chronofit;
using chronofit::testing::annual;
using chronofit::testing::gaussian_noise;

namespace {

Vector arange(Index n) { return Vector::LinSpaced(n, 0.0, static_cast<double>(n - 1)); }

}  // namespace

TEST_CASE("exact linear fit") {
  const Vector x = arange(10);
  const Vector y = (2.0 + 3.0 * x.array()).matrix();
  const OlsFit fit = ols_fit(y, {"x"}, {x});
  CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.residuals.cwiseAbs().maxCoeff() <= 1e-10);
  const SignificanceReport s = significance_assessment(fit);
  CHECK(s.overall);
  CHECK(s.per_variable == std::vector<bool>{true});
}

TEST_CASE("statistics agree with an independent implementation") {
  // Reference values from statsmodels OLS on the same data.
  const Index n = 30;
  Vector x1(n), x2(n), y(n);
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    x1[i] = std::sin(t);
    x2[i] = t / 10.0 + std::cos(3.0 * t);
    y[i] = 1.0 + 2.0 * x1[i] - x2[i] + 0.3 * std::sin(5.1 * t * t);
  }
  const OlsFit f = ols_fit(y, {"x1", "x2"}, {x1, x2});
  const double b[] = {1.0002166811712765, 1.9050545020310585, -1.0070071111394956};
  const double se[] = {0.06947834431913825, 0.06075889850507963, 0.03728196796176225};
  const double p[] = {3.464963952372029e-14, 8.958549786984471e-23, 4.451621314541281e-21};
  for (Index j = 0; j < 3; ++j) {
    CHECK(f.coefficients[j] == doctest::Approx(b[j]).epsilon(1e-10));
    CHECK(f.stderr_[j] == doctest::Approx(se[j]).epsilon(1e-10));
    CHECK(f.p_values[j] == doctest::Approx(p[j]).epsilon(1e-6));
    CHECK(f.t_stats[j] == f.coefficients[j] / f.stderr_[j]);
  }
  CHECK(f.r_squared == doctest::Approx(0.9854250475879172).epsilon(1e-12));
  CHECK(f.adj_r_squared == doctest::Approx(0.9843454214833184).epsilon(1e-12));
  CHECK(f.f_stat == doctest::Approx(912.7465919825801).epsilon(1e-9));
  CHECK(f.f_p_value == doctest::Approx(1.616949526321445e-25).epsilon(1e-6));
  CHECK(f.degrees_of_freedom() == 27);
}

TEST_CASE("noise regressors are rarely significant") {
  auto noise_p = [](std::uint64_t run) {
    const std::uint64_t seed = 1000 + 3 * run;
    const Vector x = gaussian_noise(200, seed + 1);
    const Vector noise = gaussian_noise(200, seed + 2);
    const Vector y = (1.0 + 2.0 * x.array() + gaussian_noise(200, seed + 3).array()).matrix();
    return ols_fit(y, {"x", "noise"}, {x, noise}).p_values[2];
  };
  int insignificant = 0;
  for (std::uint64_t run = 0; run < 20; ++run) insignificant += noise_p(run) > 0.05 ? 1 : 0;
  CHECK(insignificant >= 18);

  // The rejection rate under the null sits near the nominal 5%.
  int rejected = 0;
  for (std::uint64_t run = 1000; run < 1400; ++run) rejected += noise_p(run) <= 0.05 ? 1 : 0;
  CHECK(rejected >= 8);
  CHECK(rejected <= 32);
}

TEST_CASE("residuals are orthogonal to the design") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Vector a = gaussian_noise(60, seed, 5.0);
    const Vector b = (arange(60).array() * 0.3).matrix() + gaussian_noise(60, seed + 50);
    const Vector y = (4.0 - a.array() + 0.5 * b.array()).matrix() + gaussian_noise(60, seed + 99, 2.0);
    const OlsFit fit = ols_fit(y, {"a", "b"}, {a, b});
    const double scale = y.norm() * std::max(a.norm(), b.norm());
    CHECK(std::fabs(fit.residuals.sum()) <= 1e-8 * y.norm() * std::sqrt(60.0));
    CHECK(std::fabs(fit.residuals.dot(a)) <= 1e-8 * scale);
    CHECK(std::fabs(fit.residuals.dot(b)) <= 1e-8 * scale);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
    CHECK(fit.residuals == y - fit.fitted);
  }
}

TEST_CASE("affine invariance") {
  const Vector a = gaussian_noise(80, 2);
  const Vector b = gaussian_noise(80, 3);
  const Vector y = (1.0 + a.array() - 2.0 * b.array()).matrix() + gaussian_noise(80, 4);
  const OlsFit base = ols_fit(y, {"a", "b"}, {a, b});
  const Vector a2 = (a.array() * 7.5 - 3.0).matrix();
  const Vector y2 = (y.array() * -0.2 + 11.0).matrix();
  const OlsFit moved = ols_fit(y2, {"a", "b"}, {a2, b});
  CHECK(moved.r_squared == doctest::Approx(base.r_squared).epsilon(1e-10));
  CHECK(moved.coefficients[1] == doctest::Approx(base.coefficients[1] * -0.2 / 7.5).epsilon(1e-10));
  CHECK(moved.coefficients[2] == doctest::Approx(base.coefficients[2] * -0.2).epsilon(1e-10));
  CHECK(moved.t_stats[1] == doctest::Approx(-base.t_stats[1]).epsilon(1e-9));
}

TEST_CASE("adding a regressor never lowers r squared") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector y = gaussian_noise(40, 100 + trial);
    std::vector<Vector> cols;
    std::vector<std::string> names;
    double previous = 0.0;
    for (int k = 0; k < 6; ++k) {
      cols.push_back(gaussian_noise(40, 1000 + 10 * trial + k));
      names.push_back("x" + std::to_string(k));
      const double r2 = ols_fit(y, names, cols).r_squared;
      CHECK(r2 >= previous - 1e-12);
      previous = r2;
    }
  }
}

TEST_CASE("significance thresholds") {
  OlsFit weak;
  weak.r_squared = 0.3;
  weak.f_p_value = 1e-9;
  weak.k = 1;
  weak.p_values = Vector::Constant(2, 0.001);
  const SignificanceReport r = significance_assessment(weak);
  CHECK_FALSE(r.overall);
  CHECK(r.basis.find("R") != std::string::npos);
  CHECK(r.per_variable == std::vector<bool>{true});

  OlsFit f_fail = weak;
  f_fail.r_squared = 0.8;
  f_fail.f_p_value = 0.2;
  f_fail.p_values[1] = 0.3;
  const SignificanceReport s = significance_assessment(f_fail);
  CHECK_FALSE(s.overall);
  CHECK(s.per_variable == std::vector<bool>{false});
}

TEST_CASE("regression forecasts") {
  const Vector x = arange(12);
  Vector y = (2.0 + 3.0 * x.array()).matrix();
  y += gaussian_noise(12, 5, 0.01);
  const OlsFit fit = ols_fit(y, {"x"}, {x});

  Matrix rows(3, 1);
  rows << 4.0, 0.0, x[7];
  const ForecastResult f = regression_forecast(fit, rows, ConfidenceLevel::p80);
  CHECK(f.future[0] == doctest::Approx(fit.coefficients[0] + 4.0 * fit.coefficients[1]).epsilon(1e-12));
  CHECK(f.future[0] == doctest::Approx(14.0).epsilon(1e-2));
  CHECK(f.future[1] == doctest::Approx(fit.coefficients[0]).epsilon(1e-12));
  CHECK(f.future[2] == doctest::Approx(fit.fitted[7]).epsilon(1e-12));
  REQUIRE(f.interval.has_value());
  const double half = 1.282 * std::sqrt(fit.sse / 12.0);
  CHECK((f.interval->upper - f.future).cwiseAbs().maxCoeff() == doctest::Approx(half).epsilon(1e-12));
  CHECK(f.defined_fitted() == fit.fitted);
  CHECK_THROWS_AS((void)regression_forecast(fit, Matrix::Zero(2, 2), ConfidenceLevel::p80), DataError);
}

TEST_CASE("collinear and short designs are rejected") {
  const Vector x = arange(10);
  CHECK_THROWS_AS((void)ols_fit(x, {"a", "b"}, {x, Vector(2.0 * x)}), DataError);
  CHECK_THROWS_AS((void)ols_fit(x, {"c"}, {Vector::Ones(10)}), DataError);
  CHECK_THROWS_AS((void)ols_fit(arange(3), {"a", "b"}, {arange(3), gaussian_noise(3, 1)}), DataError);
  try {
    (void)ols_fit(x, {"a", "b"}, {x, Vector(2.0 * x)});
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("dependent columns: a") != std::string::npos);
  }
  CHECK_THROWS_AS((void)ols_fit(annual(arange(10), "y"), {TimeSeries(arange(10), {2001, 1}, Frequency(1), "x")}),
                  DataError);
}

TEST_CASE("formula parsing") {
  const Formula f = parse_formula("DEOM ~ AAA + Tto4 + D3to4");
  CHECK(f.response == "DEOM");
  CHECK(f.predictors == std::vector<std::string>{"AAA", "Tto4", "D3to4"});
  CHECK(parse_formula("y~x").predictors == std::vector<std::string>{"x"});
  CHECK_THROWS_AS((void)parse_formula("y x"), DataError);
  CHECK_THROWS_AS((void)parse_formula("y ~ "), DataError);
  CHECK_THROWS_AS((void)parse_formula("y ~ a + + b"), DataError);
  CHECK_THROWS_AS((void)parse_formula("y ~ a + a"), DataError);
}

TEST_CASE("pipeline on synthetic trending regressors") {
  const Index n = 80;
  const Index h = 6;
  const Vector t = arange(n + h);
  const Vector x1 = (5.0 + 0.4 * t.array()).matrix();
  const Vector x2 = (2.0 - 0.1 * t.array()).matrix();
  const Vector truth = (1.0 + 2.0 * x1.array() - x2.array()).matrix();
  // Independent scatter around each trend keeps the design well conditioned.
  const Vector x1_obs = x1.head(n) + gaussian_noise(n, 43, 0.3);
  const Vector x2_obs = x2.head(n) + gaussian_noise(n, 44, 0.3);
  const Vector y = (1.0 + 2.0 * x1_obs.array() - x2_obs.array()).matrix() + gaussian_noise(n, 42, 0.5);
  const TimeSeries r1 = annual(x1_obs, "x1");
  const TimeSeries r2 = annual(x2_obs, "x2");

  for (const RegressorMethod& method : {RegressorMethod(HoltMethod{}), RegressorMethod(ModelOrder{0, 2, 1})}) {
    const RegressorPipeline p = forecast_with_regressors(annual(y, "y"), {r1, r2}, h, method, ConfidenceLevel::p80);
    CHECK(p.dropped.empty());
    REQUIRE(p.regressor_forecasts.size() == 2);
    CHECK(p.regressor_forecasts[0].future.size() == h);
    const double bound = 3.0 * std::sqrt(p.fit.sse / static_cast<double>(n));
    for (Index i = 0; i < h; ++i) CHECK(std::fabs(p.forecast.future[i] - truth[n + i]) <= bound);
    REQUIRE(p.forecast.interval.has_value());
  }
}

TEST_CASE("pipeline with constant inputs") {
  const TimeSeries y = annual(Vector::Constant(20, 4.0), "y");
  const TimeSeries x = annual(Vector::Constant(20, 1.5), "x");
  const RegressorPipeline p = forecast_with_regressors(y, {x}, 3, HoltMethod{}, ConfidenceLevel::p90);
  CHECK(p.dropped == std::vector<std::string>{"x"});
  CHECK((p.forecast.future.array() - 4.0).abs().maxCoeff() <= 1e-12);
  CHECK(p.fit.sse <= 1e-20);
  CHECK((p.forecast.interval->upper - p.forecast.interval->lower).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pipeline reports the failing regressor") {
  const TimeSeries y = annual(gaussian_noise(30, 1), "y");
  const TimeSeries x = annual(gaussian_noise(30, 2), "temperature");
  try {
    (void)forecast_with_regressors(y, {x}, 3, ModelOrder{0, 0, 0, 0, 0, 1, 1}, ConfidenceLevel::p80);
    FAIL("expected failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("temperature") != std::string::npos);
  }
  const TimeSeries shifted(gaussian_noise(30, 3), {2001, 1}, Frequency(1), "late");
  CHECK_THROWS_AS((void)forecast_with_regressors(y, {shifted}, 3, HoltMethod{}, ConfidenceLevel::p80), DataError);
}
