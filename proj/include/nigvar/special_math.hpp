// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "nigvar/error.hpp"

namespace nigvar {

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind, order one.
//
// x <= 2 uses the ascending series
//   K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
// and x > 2 a Chebyshev expansion of sqrt(x) e^x K1(x) in z = 4/x - 1. The
// coefficients come from tools/gen_k1_chebyshev.py (truncation error 2e-17).
// ---------------------------------------------------------------------------

/// Arguments above this return exactly zero from bessel_k1(); use
/// bessel_k1_scaled() or log_bessel_k1() beyond it.
inline constexpr double kBesselK1Cutoff = 700.0;

namespace detail {

inline constexpr std::array<double, 26> kK1ScaledChebyshev = {
    1.3603130952422213347,     1.0392373657681723844e-1,  -2.8578168596227793868e-3,
    1.9521551847135163111e-4,  -1.93619797416608296e-5,   2.4064849478372171171e-6,
    -3.5019606030878125421e-7, 5.7410841254500492923e-8,  -1.0345762465678097027e-8,
    2.0150497551970346161e-9,  -4.1903547593419255842e-10, 9.2183151876053141258e-11,
    -2.1299678384277910216e-11, 5.1396396734823435404e-12, -1.2891739609498229352e-12,
    3.3484196660522431201e-13, -8.9767051820101460692e-14, 2.4771544242195986813e-14,
    -7.0198370892147688513e-15, 2.0387031662398608799e-15, -6.0570472706430178228e-16,
    1.8380935752430454256e-16, -5.6894628491936483743e-17, 1.7940510478863572914e-17,
    -5.7567444820733024503e-18, 1.8778651901623267401e-18,
};

template <std::size_t N>
constexpr double clenshaw(const std::array<double, N>& c, double z) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = N - 1; k >= 1; --k) {
    const double b0 = c[k] + 2.0 * z * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + z * b1 - b2;
}

// Power series coefficients in q = x^2 / 4:
//   I1(x) = (x/2) sum_k q^k / (k! (k+1)!)
//   K1(x) = ln(x/2) I1(x) + (1/x) (1 - q sum_k [psi(k+1) + psi(k+2)] q^k / (k! (k+1)!))
// Thirteen terms reach 1e-19 at q = 1 (x = 2).
inline constexpr std::size_t kSeriesTerms = 13;

constexpr std::array<double, kSeriesTerms> i1_series_coefficients() {
  std::array<double, kSeriesTerms> c{};
  double term = 1.0;
  for (std::size_t k = 0; k < kSeriesTerms; ++k) {
    c[k] = term;
    term /= static_cast<double>((k + 1) * (k + 2));
  }
  return c;
}

constexpr std::array<double, kSeriesTerms> k1_psi_coefficients() {
  std::array<double, kSeriesTerms> c{};
  double term = 1.0;
  double psi_k1 = -std::numbers::egamma;  // psi(1)
  double psi_k2 = psi_k1 + 1.0;           // psi(2)
  for (std::size_t k = 0; k < kSeriesTerms; ++k) {
    c[k] = (psi_k1 + psi_k2) * term;
    term /= static_cast<double>((k + 1) * (k + 2));
    psi_k1 += 1.0 / static_cast<double>(k + 1);
    psi_k2 += 1.0 / static_cast<double>(k + 2);
  }
  return c;
}

inline constexpr auto kI1Series = i1_series_coefficients();
inline constexpr auto kK1PsiSeries = k1_psi_coefficients();

template <std::size_t N>
constexpr double horner(const std::array<double, N>& c, double q) {
  double acc = c[N - 1];
  for (std::size_t k = N - 1; k-- > 0;) acc = acc * q + c[k];
  return acc;
}

// K1 for 0 < x <= 2.
inline double bessel_k1_series(double x) {
  const double q = 0.25 * x * x;
  const double i1 = 0.5 * x * horner(kI1Series, q);
  return std::log(0.5 * x) * i1 + (1.0 - q * horner(kK1PsiSeries, q)) / x;
}

// sqrt(x) e^x K1(x) for x > 2.
inline double bessel_k1_asymptotic_factor(double x) {
  return clenshaw(kK1ScaledChebyshev, 4.0 / x - 1.0);
}

}  // namespace detail

/// K1(x) for x > 0. Returns 0 for x > kBesselK1Cutoff.
inline double bessel_k1(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k1: argument must be positive");
  if (x <= 2.0) return detail::bessel_k1_series(x);
  if (x > kBesselK1Cutoff) return 0.0;
  return detail::bessel_k1_asymptotic_factor(x) * std::exp(-x) / std::sqrt(x);
}

/// e^x K1(x); finite for every x > 0.
inline double bessel_k1_scaled(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k1_scaled: argument must be positive");
  if (x <= 2.0) return detail::bessel_k1_series(x) * std::exp(x);
  return detail::bessel_k1_asymptotic_factor(x) / std::sqrt(x);
}

/// ln K1(x); finite for every x > 0.
inline double log_bessel_k1(double x) {
  if (!(x > 0.0)) throw DomainError("log_bessel_k1: argument must be positive");
  if (x <= 2.0) return std::log(detail::bessel_k1_series(x));
  return std::log(detail::bessel_k1_asymptotic_factor(x)) - 0.5 * std::log(x) - x;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (10/21) quadrature.
// ---------------------------------------------------------------------------

struct QuadratureSpec {
  double absolute_tolerance = 1e-10;
  double relative_tolerance = 1e-10;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(absolute_tolerance > 0.0) || !(relative_tolerance > 0.0))
      throw DomainError("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  int subdivisions = 0;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.14887433898163121088482600112972,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.03255816230796472747881897245939,
    0.05475589657435199603138130024458,  0.07503967481091995276704314091619,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_21(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 10> lo{};
  std::array<double, 10> hi{};
  const double fc = f(center);
  double kronrod = kKronrodWeights[10] * fc;
  double gauss = 0.0;
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    lo[j] = f(center - dx);
    hi[j] = f(center + dx);
    const double pair = lo[j] + hi[j];
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  // QUADPACK error heuristic: scale |K - G| against the mean absolute deviation.
  const double mean = 0.5 * kronrod;
  double resasc = kKronrodWeights[10] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j)
    resasc += kKronrodWeights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));
  resasc *= std::abs(half);
  kronrod *= half;
  gauss *= half;
  double error = std::abs(kronrod - gauss);
  if (resasc != 0.0 && error != 0.0)
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  if (!std::isfinite(kronrod)) error = std::numeric_limits<double>::infinity();
  return {a, b, kronrod, error};
}

template <class F>
QuadratureResult adaptive_finite(const F& f, double a, double b, const QuadratureSpec& spec) {
  constexpr int kInitialPanels = 4;
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_error = 0.0;
  const double width = (b - a) / kInitialPanels;
  for (int i = 0; i < kInitialPanels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == kInitialPanels) ? b : lo + width;
    Panel p = gauss_kronrod_21(f, lo, hi);
    total += p.value;
    total_error += p.error;
    heap.push(p);
  }
  int subdivisions = kInitialPanels;
  auto tolerance = [&] {
    return std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(total));
  };
  while (total_error > tolerance()) {
    if (subdivisions >= spec.max_subdivisions || !std::isfinite(total_error)) {
      throw IntegrationError("integrate: tolerance not reached after " +
                                 std::to_string(subdivisions) + " subdivisions",
                             total, total_error);
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw IntegrationError("integrate: interval collapsed to machine precision", total,
                             total_error);
    }
    const Panel left = gauss_kronrod_21(f, worst.a, mid);
    const Panel right = gauss_kronrod_21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_error = 0.0;
  for (; !heap.empty(); heap.pop()) {
    total += heap.top().value;
    total_error += heap.top().error;
  }
  return {total, total_error, subdivisions};
}

}  // namespace detail

/// Integrates `f` over (lower, upper); either bound may be infinite.
///
/// Infinite ranges are mapped onto a bounded interval: x = a + t/(1-t) for
/// [a, inf), x = b - t/(1-t) for (-inf, b], and x = t/(1-t^2) for the whole
/// line. Throws IntegrationError, carrying the best estimate and its error
/// bound, when the tolerance is not met within max_subdivisions panels.
template <class F>
QuadratureResult integrate_with_error(const F& f, double lower, double upper,
                                      const QuadratureSpec& spec = {}) {
  spec.validate();
  if (std::isnan(lower) || std::isnan(upper)) throw DomainError("integrate: NaN bound");
  if (lower == upper) return {};
  if (lower > upper) {
    QuadratureResult r = integrate_with_error(f, upper, lower, spec);
    r.value = -r.value;
    return r;
  }
  const bool lower_inf = std::isinf(lower);
  const bool upper_inf = std::isinf(upper);
  if (!lower_inf && !upper_inf) return detail::adaptive_finite(f, lower, upper, spec);
  if (lower_inf && upper_inf) {
    auto g = [&f](double t) {
      const double d = 1.0 - t * t;
      return f(t / d) * (1.0 + t * t) / (d * d);
    };
    return detail::adaptive_finite(g, -1.0, 1.0, spec);
  }
  if (upper_inf) {
    auto g = [&f, lower](double t) {
      const double d = 1.0 - t;
      return f(lower + t / d) / (d * d);
    };
    return detail::adaptive_finite(g, 0.0, 1.0, spec);
  }
  auto g = [&f, upper](double t) {
    const double d = 1.0 - t;
    return f(upper - t / d) / (d * d);
  };
  return detail::adaptive_finite(g, 0.0, 1.0, spec);
}

template <class F>
double integrate(const F& f, double lower, double upper, const QuadratureSpec& spec = {}) {
  return integrate_with_error(f, lower, upper, spec).value;
}

/// Standard normal cdf.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace nigvar
