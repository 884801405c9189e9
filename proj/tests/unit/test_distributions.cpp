#include "chronofit/distributions.hpp"
#include "chronofit/least_squares.hpp"
#include "chronofit/error.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace chronofit;
using namespace chronofit::dist;

// Reference values computed with scipy.special / scipy.stats.

TEST_CASE("incomplete beta against reference values") {
  CHECK(incomplete_beta(0.3, 2.5, 3.5) == doctest::Approx(0.29675298929566646).epsilon(1e-12));
  CHECK(incomplete_beta(0.9, 0.5, 0.5) == doctest::Approx(0.7951672353008665).epsilon(1e-12));
  CHECK(incomplete_beta(0.4, 10.0, 20.0) == doctest::Approx(0.7853183897628262).epsilon(1e-12));
  CHECK(incomplete_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(incomplete_beta(1.0, 2.0, 3.0) == 1.0);
}

TEST_CASE("incomplete beta reflection identity") {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double x = 0.05 + 0.1 * i;
      const double a = 0.5 + 3.0 * j;
      const double b = 0.7 + 1.7 * i;
      worst = std::max(worst, std::fabs(incomplete_beta(x, a, b) + incomplete_beta(1.0 - x, b, a) - 1.0));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("t distribution") {
  CHECK(t_cdf(0.0, 3.0) == 0.5);
  CHECK(t_cdf(0.0, 117.0) == 0.5);
  CHECK(t_cdf(1.5, 7.0) == doctest::Approx(0.911350756505015).epsilon(1e-12));
  CHECK(t_two_sided_p(2.0, 30.0) == doctest::Approx(0.0546250449629831).epsilon(1e-12));
  CHECK(t_two_sided_p(-2.0, 30.0) == t_two_sided_p(2.0, 30.0));
  CHECK(std::fabs(t_quantile(0.975, 10.0) - 2.228) <= 5e-3);
  CHECK(t_quantile(0.975, 10.0) == doctest::Approx(2.2281388519649385).epsilon(1e-9));
  CHECK(t_cdf(t_quantile(0.3, 4.0), 4.0) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("F distribution") {
  CHECK(f_upper_p(3.2, 3.0, 50.0) == doctest::Approx(0.031106323291085897).epsilon(1e-12));
  CHECK(f_cdf(1.1, 5.0, 12.0) == doctest::Approx(0.5903368726889555).epsilon(1e-12));
  CHECK(f_upper_p(0.0, 2.0, 9.0) == 1.0);
  // Tiny upper tails stay accurate in complement form.
  CHECK(f_upper_p(80.0, 3.0, 50.0) > 0.0);
  CHECK(f_upper_p(80.0, 3.0, 50.0) < 1e-18);
}

TEST_CASE("normal distribution") {
  CHECK(normal_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-12));
  CHECK(normal_cdf(-1.3) == doctest::Approx(0.09680048458561036).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
}

TEST_CASE("least squares detects dependent columns") {
  Matrix x(6, 3);
  x.col(0).setOnes();
  x.col(1) = Vector::LinSpaced(6, 1, 6);
  x.col(2) = 2.0 * x.col(1);
  CHECK(dependent_columns(x).size() == 1);
  CHECK_THROWS_AS((void)least_squares(x, Vector::Ones(6)), DataError);

  Matrix ok(6, 2);
  ok.col(0).setOnes();
  ok.col(1) = Vector::LinSpaced(6, 1, 6);
  const Vector y = (2.0 + 3.0 * ok.col(1).array()).matrix();
  const LeastSquares ls = least_squares(ok, y);
  CHECK(ls.coefficients[0] == doctest::Approx(2.0));
  CHECK(ls.coefficients[1] == doctest::Approx(3.0));
  CHECK(ls.sse <= 1e-20);
  // (X'X)^{-1} agrees with a direct inverse.
  const Matrix direct = (ok.transpose() * ok).inverse();
  CHECK((direct - ls.unscaled_covariance).cwiseAbs().maxCoeff() <= 1e-12);
}
