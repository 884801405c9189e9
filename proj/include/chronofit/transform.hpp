#pragma once

#include "chronofit/core.hpp"

namespace chronofit {

/// Lag-`lag` differencing applied `order` times. lag = 1 is ordinary
/// differencing, lag = s seasonal.
struct DifferenceSpec {
  int lag = 1;
  int order = 1;

  DifferenceSpec(int lag_ = 1, int order_ = 1);
  [[nodiscard]] int span() const noexcept { return lag * order; }
};

// Variance-stabilizing transforms. Each throws DataError naming the first
// offending index when the domain precondition fails.
[[nodiscard]] TimeSeries log_transform(const TimeSeries& ts);
[[nodiscard]] TimeSeries exp_transform(const TimeSeries& ts);
[[nodiscard]] TimeSeries sqrt_transform(const TimeSeries& ts);
[[nodiscard]] TimeSeries power_transform(const TimeSeries& ts, double lambda);

/// Rescales each observation to the average month length:
/// Y_t * mean(days) / days_t.
[[nodiscard]] TimeSeries calendar_adjust(const TimeSeries& ts, const Vector& days);

/// Days in each observation's month (monthly series only).
[[nodiscard]] Vector days_in_month(const TimeSeries& ts);

[[nodiscard]] Vector difference(const Vector& values, const DifferenceSpec& spec);
[[nodiscard]] TimeSeries difference(const TimeSeries& ts, const DifferenceSpec& spec);

/// Integrates `diffed` back to levels using the first `spec.span()` original
/// observations. The returned series covers presample + diffed.
[[nodiscard]] Vector invert_difference(const Vector& diffed, const DifferenceSpec& spec,
                                       const Vector& presample);
[[nodiscard]] TimeSeries invert_difference(const TimeSeries& diffed, const DifferenceSpec& spec,
                                           const Vector& presample);

}  // namespace chronofit
