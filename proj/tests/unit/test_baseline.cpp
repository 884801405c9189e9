#include "chronofit/baseline.hpp"
#include "chronofit/error.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chronofit;
using chronofit::testing::annual;
using chronofit::testing::monthly;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("nf1 shifts the series by one") {
  const ForecastResult c = nf1(annual(vec({5, 5, 5})), 2);
  CHECK(c.fitted_start == 1);
  CHECK(std::isnan(c.fitted[0]));
  CHECK(c.defined_fitted() == vec({5, 5}));
  CHECK(c.future == vec({5, 5}));

  const ForecastResult r = nf1(annual(vec({1, 2, 3})), 1);
  CHECK(r.defined_fitted() == vec({1, 2}));
  CHECK(r.future == vec({3}));
  CHECK(r.defined_residuals() == vec({1, 1}));

  const Vector x = chronofit::testing::gaussian_noise(50, 6);
  const ForecastResult g = nf1(annual(x), 0);
  CHECK(g.future.size() == 0);
  CHECK(g.defined_fitted() == x.head(49));
  CHECK_THROWS_AS((void)nf1(annual(vec({1})), 1), DataError);
}

TEST_CASE("nf2 on constant and periodic series") {
  const ForecastResult c = nf2(monthly(Vector::Constant(24, 7.5)), 5);
  CHECK(c.defined_fitted().cwiseAbs().maxCoeff() == doctest::Approx(7.5));
  CHECK((c.defined_fitted().array() - 7.5).abs().maxCoeff() <= 1e-12);
  CHECK((c.future.array() - 7.5).abs().maxCoeff() <= 1e-12);

  Vector periodic(36);
  for (Index t = 0; t < 36; ++t) periodic[t] = 20.0 + static_cast<double>((t * 7) % 12);
  const ForecastResult p = nf2(monthly(periodic), 12);
  // One-based t = 14 onward.
  for (Index i = 13; i < 36; ++i) CHECK(std::fabs(p.residuals[i]) <= 1e-12);
  for (Index j = 0; j < 12; ++j) CHECK(p.future[j] == doctest::Approx(periodic[24 + j]));

  CHECK_THROWS_AS((void)nf2(annual(Vector::Ones(30)), 1), DataError);
  CHECK_THROWS_AS((void)nf2(monthly(Vector::Ones(12)), 1), DataError);
}

TEST_CASE("nf2 residual identity and cycle weight") {
  const TimeSeries ts = monthly(chronofit::testing::trend_seasonal(60, 3));
  const ForecastResult r = nf2(ts, 3);
  for (Index i = r.fitted_start; i < ts.size(); ++i) CHECK(std::fabs(r.residuals[i] - (ts[i] - r.fitted[i])) <= 1e-12);
  CHECK(nf2_cycle_weight(12) == 0);
  CHECK(nf2_cycle_weight(13) == 1);
  CHECK(nf2_cycle_weight(25) == 2);
}

TEST_CASE("error measures") {
  const ErrorReport e = error_measures(vec({10, 12}), vec({11, 11}));
  CHECK(e.me == doctest::Approx(0.0));
  CHECK(e.mae == doctest::Approx(1.0));
  CHECK(e.mse == doctest::Approx(1.0));
  REQUIRE(e.mpe.has_value());
  CHECK(*e.mpe == doctest::Approx(-0.8333333333333).epsilon(1e-10));
  CHECK(*e.mape == doctest::Approx(9.1666666666667).epsilon(1e-10));

  const ErrorReport zero = error_measures(vec({3, 4, 5}), vec({3, 4, 5}));
  CHECK(zero.me == 0.0);
  CHECK(zero.mae == 0.0);
  CHECK(zero.mse == 0.0);
  CHECK(*zero.mpe == 0.0);
  CHECK(*zero.mape == 0.0);

  const ErrorReport undefined = error_measures(vec({0, 2}), vec({1, 1}));
  CHECK_FALSE(undefined.mpe.has_value());
  CHECK_FALSE(undefined.mape.has_value());
  CHECK(undefined.mae == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)error_measures(vec({1, 2}), vec({1})), DataError);
}

TEST_CASE("error measure inequalities under fuzzing") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_int_distribution<int> len(1, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = len(rng);
    Vector a(n), f(n);
    for (Index i = 0; i < n; ++i) {
      a[i] = u(rng);
      if (std::fabs(a[i]) < 1e-3) a[i] = 1.0;
      f[i] = u(rng);
    }
    const ErrorReport e = error_measures(a, f);
    CHECK(e.mae >= std::fabs(e.me) - 1e-12);
    CHECK(e.mse >= 0.0);
    CHECK(*e.mape >= std::fabs(*e.mpe) - 1e-9);
    CHECK(*e.mape >= 0.0);
  }
}

TEST_CASE("confidence intervals") {
  CHECK(z_value(ConfidenceLevel::p80) == doctest::Approx(1.282));
  CHECK(z_value(ConfidenceLevel::p90) == doctest::Approx(1.645));
  CHECK(z_value(ConfidenceLevel::p95) == doctest::Approx(1.96));
  CHECK(z_value(ZScore{2.5}) == 2.5);
  CHECK(parse_confidence_level("90%") == ConfidenceLevel::p90);
  CHECK(parse_confidence_level("80") == ConfidenceLevel::p80);
  CHECK_THROWS_AS((void)parse_confidence_level("85"), DataError);

  const Vector point = vec({1, 2, 3});
  double previous = 0.0;
  for (auto level : {ConfidenceLevel::p80, ConfidenceLevel::p90, ConfidenceLevel::p95}) {
    const IntervalBounds b = confidence_interval(point, 4.0, level);
    const Vector width = b.upper - b.lower;
    CHECK((width.array() - 2.0 * z_value(level) * 2.0).abs().maxCoeff() <= 1e-12);
    CHECK(width[0] > previous);
    previous = width[0];
    CHECK((b.lower.array() <= point.array()).all());
    CHECK((point.array() <= b.upper.array()).all());
  }
  const IntervalBounds flat = confidence_interval(point, 0.0, ConfidenceLevel::p95);
  CHECK(flat.lower == point);
  CHECK(flat.upper == point);
  CHECK_THROWS_AS((void)confidence_interval(point, -1.0, ConfidenceLevel::p95), DataError);
}
