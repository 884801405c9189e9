#pragma once

#include "chronofit/core.hpp"

#include <optional>
#include <vector>

namespace chronofit {

enum class DecompositionKind { additive, multiplicative };

/// Classical decomposition of Y into trend-cycle T, seasonal S and remainder E.
/// Trend and remainder are absent at the edges where the centered moving
/// average is undefined.
struct Decomposition {
  DecompositionKind kind = DecompositionKind::additive;
  std::vector<std::optional<double>> trend;
  Vector seasonal;
  std::vector<std::optional<double>> remainder;
  /// One index per position in the cycle, aligned with the series' first period.
  Vector seasonal_indices;
  Index source_n = 0;
};

/// Centered moving average of window `s` (2 x s for even s). Entries within
/// floor(s/2) of either edge are absent.
[[nodiscard]] std::vector<std::optional<double>> centered_moving_average(const Vector& values, int s);

[[nodiscard]] Decomposition classical_decompose(const TimeSeries& ts, DecompositionKind kind);

}  // namespace chronofit
