#include "chronofit/optimize.hpp"

#include "chronofit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chronofit {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

OptimizationResult minimize_box(const Objective& f, const Vector& start, const Vector& lower, const Vector& upper,
                                const NelderMeadOptions& options) {
  const Index dim = start.size();
  if (lower.size() != dim || upper.size() != dim) throw NumericalError("optimizer bounds have the wrong dimension");
  if ((lower.array() > upper.array()).any()) throw NumericalError("optimizer lower bound exceeds upper bound");

  auto project = [&](const Vector& x) -> Vector { return x.cwiseMax(lower).cwiseMin(upper); };
  auto eval = [&](const Vector& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  OptimizationResult result;
  if (dim == 0) {
    result.x = start;
    result.value = eval(start);
    result.converged = true;
    return result;
  }

  std::vector<Vector> simplex(static_cast<std::size_t>(dim + 1));
  std::vector<double> values(static_cast<std::size_t>(dim + 1));
  simplex[0] = project(start);
  for (Index i = 0; i < dim; ++i) {
    Vector v = simplex[0];
    const double room_up = upper[i] - v[i];
    const double room_down = v[i] - lower[i];
    const double step = options.initial_step;
    if (room_up >= step) {
      v[i] += step;
    } else if (room_down >= step) {
      v[i] -= step;
    } else if (room_up >= room_down) {
      v[i] += room_up;
    } else {
      v[i] -= room_down;
    }
    simplex[static_cast<std::size_t>(i + 1)] = project(v);
  }
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<Vector> s2;
      std::vector<double> v2;
      for (auto k : order) {
        s2.push_back(simplex[k]);
        v2.push_back(values[k]);
      }
      simplex.swap(s2);
      values.swap(v2);
    }

    const double best = values.front();
    const double worst = values.back();
    double diameter = 0.0;
    for (std::size_t k = 1; k < simplex.size(); ++k) {
      diameter = std::max(diameter, (simplex[k] - simplex[0]).cwiseAbs().maxCoeff());
    }
    const double spread = std::isfinite(worst) ? worst - best : std::numeric_limits<double>::infinity();
    if (spread <= options.f_tolerance * std::max(1.0, std::fabs(best)) && diameter <= options.x_tolerance) {
      result.converged = true;
      break;
    }

    Vector centroid = Vector::Zero(dim);
    for (Index k = 0; k < dim; ++k) centroid += simplex[static_cast<std::size_t>(k)];
    centroid /= static_cast<double>(dim);

    const Vector& worst_x = simplex.back();
    const Vector reflected = project(centroid + kReflect * (centroid - worst_x));
    const double f_reflected = eval(reflected);

    if (f_reflected < values.front()) {
      const Vector expanded = project(centroid + kExpand * (reflected - centroid));
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex.back() = expanded;
        values.back() = f_expanded;
      } else {
        simplex.back() = reflected;
        values.back() = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[values.size() - 2]) {
      simplex.back() = reflected;
      values.back() = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values.back();
    const Vector contracted = outside ? project(centroid + kContract * (reflected - centroid))
                                      : project(centroid + kContract * (worst_x - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, values.back()) || (!outside && f_contracted <= values.back())) {
      simplex.back() = contracted;
      values.back() = f_contracted;
      continue;
    }
    for (std::size_t k = 1; k < simplex.size(); ++k) {
      simplex[k] = project(simplex[0] + kShrink * (simplex[k] - simplex[0]));
      values[k] = eval(simplex[k]);
    }
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < simplex.size(); ++k) {
    if (values[k] < values[best] || (values[k] == values[best] && lex_less(simplex[k], simplex[best]))) best = k;
  }
  result.x = simplex[best];
  result.value = values[best];
  result.iterations = iter;
  return result;
}

OptimizationResult minimize_multistart(const Objective& f, const std::vector<Vector>& starts, const Vector& lower,
                                       const Vector& upper, const NelderMeadOptions& options) {
  if (starts.empty()) throw NumericalError("multistart optimization needs at least one start");
  OptimizationResult best;
  best.value = std::numeric_limits<double>::infinity();
  bool have = false;
  for (const auto& s : starts) {
    OptimizationResult r = minimize_box(f, s, lower, upper, options);
    if (!have || r.value < best.value || (r.value == best.value && lex_less(r.x, best.x))) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

std::vector<Vector> grid_starts(const Vector& lower, const Vector& upper, int points_per_dim) {
  const Index dim = lower.size();
  std::vector<Vector> out;
  if (dim == 0) {
    out.emplace_back(0);
    return out;
  }
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Vector p(dim);
    for (Index i = 0; i < dim; ++i) {
      const double frac = points_per_dim > 1 ? static_cast<double>(idx[static_cast<std::size_t>(i)]) / (points_per_dim - 1) : 0.5;
      p[i] = lower[i] + frac * (upper[i] - lower[i]);
    }
    out.push_back(std::move(p));
    Index i = dim - 1;
    while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == points_per_dim) {
      idx[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace chronofit
