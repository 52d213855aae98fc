// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

namespace nigvar {

struct NelderMeadOptions {
  int max_evaluations = 4000;
  double f_tolerance_abs = 1e-12;
  double f_tolerance_rel = 1e-11;
  double x_tolerance = 1e-8;
};

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes `f` with the Nelder-Mead simplex method.
///
/// `f` may return +inf (or NaN, treated as +inf) to reject infeasible points.
/// The initial simplex is x0 plus `step[i]` along each axis. Convergence
/// requires both the spread of simplex values and the simplex extent to fall
/// under the tolerances.
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(const F& f, const std::array<double, N>& x0,
                                const std::array<double, N>& step,
                                const NelderMeadOptions& options = {}) {
  using Point = std::array<double, N>;
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  NelderMeadResult<N> result;
  auto eval = [&](const Point& p) {
    ++result.evaluations;
    const double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::array<Point, N + 1> simplex;
  std::array<double, N + 1> values;
  simplex[0] = x0;
  values[0] = eval(x0);
  for (std::size_t i = 0; i < N; ++i) {
    simplex[i + 1] = x0;
    simplex[i + 1][i] += step[i];
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::array<std::size_t, N + 1> order;
  auto combine = [](const Point& a, const Point& b, double t) {
    Point out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  while (result.evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[N];
    const std::size_t second_worst = order[N - 1];

    double extent = 0.0;
    for (std::size_t k = 1; k <= N; ++k)
      for (std::size_t i = 0; i < N; ++i)
        extent = std::max(extent, std::abs(simplex[order[k]][i] - simplex[best][i]));
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[best]) && spread <= options.f_tolerance_abs +
                                                     options.f_tolerance_rel * std::abs(values[best]) &&
        extent <= options.x_tolerance) {
      result.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[order[k]][i] / N;

    const Point reflected = combine(centroid, simplex[worst], -kReflect);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const Point expanded = combine(centroid, simplex[worst], -kExpand);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Point contracted =
        outside ? combine(centroid, reflected, kContract) : combine(centroid, simplex[worst], kContract);
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t k = 1; k <= N; ++k) {
      const std::size_t idx = order[k];
      simplex[idx] = combine(simplex[best], simplex[idx], kShrink);
      values[idx] = eval(simplex[idx]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_idx = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best_idx];
  result.value = values[best_idx];
  return result;
}

}  // namespace nigvar
