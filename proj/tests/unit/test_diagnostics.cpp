#include "chronofit/diagnostics.hpp"
#include "chronofit/error.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace chronofit;
using namespace chronofit::testing;

namespace {

int inside_count(const Correlogram& c, int from, int to) {
  int n = 0;
  for (int k = from; k <= to; ++k) n += c.outside_band(k) ? 0 : 1;
  return n;
}

}  // namespace

TEST_CASE("acf basics") {
  const Vector x = gaussian_noise(200, 1);
  const Correlogram r = acf(x, 30);
  CHECK(r.coefficients[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.coefficients.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(r.band == doctest::Approx(1.96 / std::sqrt(200.0)));

  Vector alt(100);
  for (Index t = 0; t < 100; ++t) alt[t] = t % 2 == 0 ? 1.0 : -1.0;
  CHECK(acf(alt, 1).coefficients[1] == doctest::Approx(-0.99).epsilon(1e-12));

  CHECK_THROWS_AS((void)acf(Vector::Constant(10, 3.0), 2), DataError);
  CHECK_THROWS_AS((void)acf(x, 200), DataError);
}

TEST_CASE("acf is invariant under affine maps") {
  const Vector x = simulate_ar1(300, 0.6, 4);
  const Correlogram a = acf(x, 20);
  const Correlogram b = acf((x.array() * -3.7 + 12.0).matrix(), 20);
  CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("white noise stays inside the band") {
  const Correlogram r = acf(gaussian_noise(1000, 2024), 50);
  CHECK(inside_count(r, 1, 50) >= 47);
  CHECK(r.band == doctest::Approx(0.062).epsilon(0.01));
  const Correlogram p = pacf(gaussian_noise(1000, 2024), 50);
  CHECK(inside_count(p, 1, 50) >= 47);
}

TEST_CASE("pacf") {
  const Vector x = simulate_ar1(1000, 0.7, 11);
  const Correlogram r = acf(x, 20);
  const Correlogram p = pacf(x, 20);
  CHECK(p.coefficients[1] == r.coefficients[1]);
  CHECK(std::fabs(p.coefficients[1] - 0.7) <= 0.08);
  CHECK(inside_count(p, 3, 20) >= 17);  // at least 90% of 18 lags
  CHECK_THROWS_AS((void)pacf(gaussian_noise(20, 1), 11), DataError);
}

TEST_CASE("pacf of AR(2) cuts off after lag 2 across seeds") {
  int inside = 0;
  int total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector e = gaussian_noise(700, 500 + seed);
    Vector y = Vector::Zero(700);
    for (Index t = 2; t < 700; ++t) y[t] = 0.5 * y[t - 1] + 0.3 * y[t - 2] + e[t];
    const Correlogram p = pacf(Vector(y.tail(500)), 20);
    inside += inside_count(p, 3, 20);
    total += 18;
    CHECK(p.outside_band(1));
    CHECK(p.outside_band(2));
  }
  CHECK(static_cast<double>(inside) / total >= 0.9);
}

TEST_CASE("white noise verdict") {
  CHECK(is_white_noise(gaussian_noise(1000, 1), 40).white_noise);
  // Both correlograms must clear the band jointly, so genuine noise fails now and then.
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) accepted += is_white_noise(gaussian_noise(1000, seed), 40).white_noise;
  CHECK(accepted >= 50);
  Vector periodic(240);
  const Vector e = gaussian_noise(240, 3, 0.3);
  for (Index t = 0; t < 240; ++t) periodic[t] = std::sin(2.0 * M_PI * static_cast<double>(t) / 12.0) + e[t];
  const auto v = is_white_noise(periodic, 40);
  CHECK_FALSE(v.white_noise);
  CHECK(acf(periodic, 40).outside_band(12));
  CHECK_FALSE(is_white_noise(Vector::LinSpaced(100, 1, 100), 40).white_noise);
}

TEST_CASE("adf discriminates a random walk from its difference") {
  const Vector walk = random_walk(300, 17);
  const AdfResult level = adf_test(walk);
  CHECK(level.statistic > level.critical.five);
  const Vector diff = walk.tail(299) - walk.head(299);
  const AdfResult d = adf_test(diff);
  CHECK(d.statistic < d.critical.one);
  CHECK(d.p_value < 0.05);

  const AdfResult ar = adf_test(simulate_ar1(500, 0.5, 9));
  CHECK(ar.statistic < ar.critical.five);
}

TEST_CASE("adf statistic is scale free") {
  const Vector x = simulate_ar1(250, 0.9, 21);
  for (auto reg : {AdfRegression::constant, AdfRegression::constant_trend}) {
    const AdfResult a = adf_test(x, reg);
    const AdfResult b = adf_test(Vector(x * 1234.5), reg);
    CHECK(std::fabs(a.statistic - b.statistic) <= 1e-9);
    CHECK(a.lags_used == b.lags_used);
  }
}

TEST_CASE("adf reference statistics") {
  // statsmodels adfuller(autolag="AIC") on the same data gives these statistics.
  Vector y(40);
  for (Index t = 0; t < 40; ++t) y[t] = std::sin(0.7 * t) + 0.05 * t + 0.3 * std::cos(2.3 * t * t);
  const AdfResult c = adf_test(y, AdfRegression::constant, 4);
  CHECK(c.statistic == doctest::Approx(-0.7311636257691685).epsilon(1e-9));
  CHECK(c.lags_used == 4);
  CHECK(c.nobs == 35);
  const AdfResult ct = adf_test(y, AdfRegression::constant_trend, 4);
  CHECK(ct.statistic == doctest::Approx(-6.605874612004799).epsilon(1e-9));
  CHECK(ct.lags_used == 4);
}

TEST_CASE("adf critical values and p-values") {
  const AdfCriticalValues inf_c = adf_critical_values(AdfRegression::constant, 100000000);
  CHECK(inf_c.one == doctest::Approx(-3.43).epsilon(0.01));
  CHECK(inf_c.five == doctest::Approx(-2.86).epsilon(0.01));
  CHECK(inf_c.ten == doctest::Approx(-2.57).epsilon(0.01));
  const AdfCriticalValues ct = adf_critical_values(AdfRegression::constant_trend, 100);
  CHECK(ct.five == doctest::Approx(-3.45).epsilon(0.01));
  CHECK(adf_p_value(inf_c.five, AdfRegression::constant, 100000000) == doctest::Approx(0.05).epsilon(1e-6));
  double prev = 0.0;
  for (double s = -6.0; s <= 2.0; s += 0.25) {
    const double p = adf_p_value(s, AdfRegression::constant, 200);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK_THROWS_AS((void)adf_test(gaussian_noise(15, 1)), DataError);
}

TEST_CASE("correlation") {
  Vector x(3), y(3);
  x << 1, 2, 3;
  y << 1, 2, 4;
  CHECK(correlation(x, y) == doctest::Approx(0.9819805060619656).epsilon(1e-12));
  CHECK(correlation(x, x) == doctest::Approx(1.0));
  CHECK(correlation(x, Vector(-x)) == doctest::Approx(-1.0));
  CHECK_THROWS_AS((void)correlation(x, Vector::Ones(3)), DataError);
  CHECK_THROWS_AS((void)correlation(x, Vector::Ones(4)), DataError);
}

TEST_CASE("correlation matrix") {
  const Vector a = gaussian_noise(50, 1);
  const CorrelationMatrix same = correlation_matrix({"a", "b"}, {a, a});
  CHECK((same.values - Matrix::Ones(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

  std::vector<Vector> cols;
  for (std::uint64_t s = 0; s < 5; ++s) cols.push_back(gaussian_noise(80, 40 + s));
  const CorrelationMatrix m = correlation_matrix({"a", "b", "c", "d", "e"}, cols);
  CHECK((m.values - m.values.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.values);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}
