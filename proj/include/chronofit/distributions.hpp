#pragma once

namespace chronofit::dist {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
[[nodiscard]] double incomplete_beta(double x, double a, double b);

[[nodiscard]] double normal_cdf(double z);
[[nodiscard]] double normal_quantile(double p);

/// Student t with `df` degrees of freedom.
[[nodiscard]] double t_cdf(double t, double df);
/// P(|T| >= |t|).
[[nodiscard]] double t_two_sided_p(double t, double df);
[[nodiscard]] double t_quantile(double p, double df);

/// Upper tail P(F >= f) for F(d1, d2).
[[nodiscard]] double f_upper_p(double f, double d1, double d2);
[[nodiscard]] double f_cdf(double f, double d1, double d2);

}  // namespace chronofit::dist
