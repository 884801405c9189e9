#include "chronofit/decompose.hpp"

#include "chronofit/error.hpp"

#include <fmt/format.h>

namespace chronofit {

std::vector<std::optional<double>> centered_moving_average(const Vector& values, int s) {
  const Index n = values.size();
  const Index half = s / 2;
  std::vector<std::optional<double>> out(static_cast<std::size_t>(n));
  for (Index t = half; t + half < n; ++t) {
    double v = 0.0;
    if (s % 2 == 1) {
      v = values.segment(t - half, s).mean();
    } else {
      // 2 x s MA: half weights on the two outermost points.
      v = (0.5 * values[t - half] + values.segment(t - half + 1, s - 1).sum() + 0.5 * values[t + half]) / s;
    }
    out[static_cast<std::size_t>(t)] = v;
  }
  return out;
}

Decomposition classical_decompose(const TimeSeries& ts, DecompositionKind kind) {
  const int s = ts.periods_per_year();
  const Index n = ts.size();
  if (s < 2) throw DataError("decomposition requires a seasonal frequency (>= 2)");
  if (n < 2 * s) {
    throw DataError(fmt::format("decomposition needs at least {} observations, got {}", 2 * s, n));
  }
  const bool mult = kind == DecompositionKind::multiplicative;
  if (mult) {
    for (Index i = 0; i < n; ++i) {
      if (!(ts[i] > 0.0)) {
        throw DataError(fmt::format("multiplicative decomposition needs positive data (index {})", i));
      }
    }
  }

  Decomposition d;
  d.kind = kind;
  d.source_n = n;
  d.trend = centered_moving_average(ts.values(), s);

  Vector sums = Vector::Zero(s);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(s);
  for (Index t = 0; t < n; ++t) {
    const auto& trend = d.trend[static_cast<std::size_t>(t)];
    if (!trend) continue;
    const Index k = t % s;
    sums[k] += mult ? ts[t] / *trend : ts[t] - *trend;
    counts[k] += 1;
  }
  Vector indices = sums.array() / counts.cast<double>().array();
  if (mult) {
    indices /= indices.mean();
  } else {
    indices.array() -= indices.mean();
  }
  d.seasonal_indices = indices;

  d.seasonal.resize(n);
  d.remainder.assign(static_cast<std::size_t>(n), std::nullopt);
  for (Index t = 0; t < n; ++t) {
    d.seasonal[t] = indices[t % s];
    const auto& trend = d.trend[static_cast<std::size_t>(t)];
    if (!trend) continue;
    d.remainder[static_cast<std::size_t>(t)] =
        mult ? ts[t] / (*trend * d.seasonal[t]) : ts[t] - *trend - d.seasonal[t];
  }
  return d;
}

}  // namespace chronofit
