#include "chronofit/transform.hpp"

#include "chronofit/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace chronofit {

DifferenceSpec::DifferenceSpec(int lag_, int order_) : lag(lag_), order(order_) {
  if (lag < 1 || order < 1) {
    throw DataError(fmt::format("difference lag and order must be >= 1 (got lag={}, order={})", lag, order));
  }
}

namespace {

template <typename Pred>
void require_all(const TimeSeries& ts, Pred pred, const char* what) {
  for (Index i = 0; i < ts.size(); ++i) {
    if (!pred(ts[i])) {
      throw DataError(fmt::format("{}: value {} at index {} is outside the domain", what, ts[i], i));
    }
  }
}

}  // namespace

TimeSeries log_transform(const TimeSeries& ts) {
  require_all(ts, [](double v) { return v > 0.0; }, "log transform");
  return ts.with_values(ts.values().array().log().matrix());
}

TimeSeries exp_transform(const TimeSeries& ts) {
  return ts.with_values(ts.values().array().exp().matrix());
}

TimeSeries sqrt_transform(const TimeSeries& ts) {
  require_all(ts, [](double v) { return v >= 0.0; }, "sqrt transform");
  return ts.with_values(ts.values().array().sqrt().matrix());
}

TimeSeries power_transform(const TimeSeries& ts, double lambda) {
  if (!std::isfinite(lambda)) throw DataError("power transform exponent must be finite");
  if (lambda == 0.5) return sqrt_transform(ts);
  const bool integral = std::floor(lambda) == lambda;
  if (!integral) {
    require_all(ts, [](double v) { return v > 0.0; }, "power transform");
  } else if (lambda < 0) {
    require_all(ts, [](double v) { return v != 0.0; }, "power transform");
  }
  return ts.with_values(ts.values().array().pow(lambda).matrix());
}

TimeSeries calendar_adjust(const TimeSeries& ts, const Vector& days) {
  if (days.size() != ts.size()) {
    throw DataError(fmt::format("calendar adjustment needs {} day counts, got {}", ts.size(), days.size()));
  }
  for (Index i = 0; i < days.size(); ++i) {
    if (!(days[i] > 0.0)) throw DataError(fmt::format("day count at index {} is not positive", i));
  }
  const double mean_days = days.mean();
  return ts.with_values((ts.values().array() * (mean_days / days.array())).matrix());
}

Vector days_in_month(const TimeSeries& ts) {
  if (ts.periods_per_year() != 12) throw DataError("day counts are defined for monthly series only");
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  Vector days(ts.size());
  for (Index i = 0; i < ts.size(); ++i) {
    const Period p = ts.period_at(i);
    const bool leap = (p.year % 4 == 0 && p.year % 100 != 0) || p.year % 400 == 0;
    days[i] = kDays[p.period - 1] + ((p.period == 2 && leap) ? 1 : 0);
  }
  return days;
}

Vector difference(const Vector& values, const DifferenceSpec& spec) {
  if (values.size() <= spec.span()) {
    throw DataError(fmt::format("series of length {} too short for differencing lag {} order {}",
                                values.size(), spec.lag, spec.order));
  }
  Vector out = values;
  for (int k = 0; k < spec.order; ++k) {
    const Index m = out.size() - spec.lag;
    Vector next = out.tail(m) - out.head(m);
    out = std::move(next);
  }
  return out;
}

TimeSeries difference(const TimeSeries& ts, const DifferenceSpec& spec) {
  return ts.with_values(difference(ts.values(), spec), spec.span());
}

Vector invert_difference(const Vector& diffed, const DifferenceSpec& spec, const Vector& presample) {
  if (presample.size() != spec.span()) {
    throw DataError(fmt::format("inverse differencing needs {} presample values, got {}", spec.span(),
                                presample.size()));
  }
  // heads[j] = first `lag` values of the j-times differenced original series.
  std::vector<Vector> heads(static_cast<std::size_t>(spec.order));
  Vector level = presample;
  for (int j = 0; j < spec.order; ++j) {
    heads[static_cast<std::size_t>(j)] = level.head(spec.lag);
    const Index m = level.size() - spec.lag;
    Vector next = level.tail(m) - level.head(m);
    level = std::move(next);
  }
  Vector current = diffed;
  for (int j = spec.order - 1; j >= 0; --j) {
    const Vector& head = heads[static_cast<std::size_t>(j)];
    Vector up(current.size() + spec.lag);
    up.head(spec.lag) = head;
    for (Index t = 0; t < current.size(); ++t) up[t + spec.lag] = up[t] + current[t];
    current = std::move(up);
  }
  return current;
}

TimeSeries invert_difference(const TimeSeries& diffed, const DifferenceSpec& spec, const Vector& presample) {
  return diffed.with_values(invert_difference(diffed.values(), spec, presample), -static_cast<long>(spec.span()));
}

}  // namespace chronofit
