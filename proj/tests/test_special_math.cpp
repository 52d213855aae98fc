// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "nigvar/distributions.hpp"
#include "nigvar/special_math.hpp"

namespace nigvar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// K1 reference values computed with mpmath.besselk at 30 significant digits.
struct K1Reference {
  double x;
  double value;
};
constexpr K1Reference kK1Reference[] = {
    {1e-6, 999999.99999278427896},     {1e-3, 999.99623815608557428},
    {0.1, 9.8538447808706061348},      {0.5, 1.6564411200033008937},
    {1.0, 0.60190723019723457474},     {1.999, 0.1400498420771096829},
    {2.0, 0.13986588181652242728},     {2.001, 0.13968218830176753496},
    {3.0, 0.040156431128194184377},    {5.0, 0.0040446134454521642084},
    {10.0, 0.000018648773453825584597}, {25.0, 3.5327780731999337702e-12},
    {50.0, 3.4441022267175556126e-23},  {100.0, 4.6798537356369092866e-45},
    {300.0, 3.7298958583323726986e-132}, {699.0, 1.2711925074280124243e-305},
};

// Integrand of the cosh representation, written in log space so that the
// far tail evaluates to zero rather than 0 * inf.
auto k1_integrand(double x) {
  return [x](double t) { return t > 700.0 ? 0.0 : std::exp(-x * std::cosh(t) + std::log(std::cosh(t))); };
}

TEST(BesselK1, MatchesHighPrecisionReference) {
  for (const auto& ref : kK1Reference) {
    EXPECT_NEAR(bessel_k1(ref.x) / ref.value, 1.0, 1e-12) << "x=" << ref.x;
  }
}

TEST(BesselK1, AtOneMatchesIntegralRepresentation) {
  // K1(x) = int_0^inf exp(-x cosh t) cosh t dt.
  const double x = 1.0;
  const double oracle = integrate(k1_integrand(x), 0.0, kInf, {1e-14, 1e-13, 2000});
  EXPECT_NEAR(bessel_k1(1.0), 0.6019072302, 1e-9);
  EXPECT_NEAR(bessel_k1(1.0), oracle, 1e-12);
}

TEST(BesselK1, IntegralRepresentationAcrossRange) {
  for (double x : {0.05, 0.7, 1.5, 2.5, 4.0, 8.0, 20.0}) {
    const double oracle = integrate(k1_integrand(x), 0.0, kInf, {1e-300, 1e-13, 4000});
    EXPECT_NEAR(bessel_k1(x) / oracle, 1.0, 1e-10) << "x=" << x;
  }
}

TEST(BesselK1, SmallArgumentAsymptote) {
  for (double x : {1e-3, 1e-5, 1e-6, 1e-8}) EXPECT_NEAR(bessel_k1(x) * x, 1.0, 10.0 * x) << "x=" << x;
}

TEST(BesselK1, LargeArgumentAsymptote) {
  const double x = 50.0;
  const double asymptote = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * (1.0 + 3.0 / (8.0 * x));
  EXPECT_NEAR(bessel_k1(x) / asymptote, 1.0, 1e-3);
}

TEST(BesselK1, AgreesWithStandardLibraryOnDenseGrid) {
  double worst = 0.0;
  for (double x = 1e-6; x < 700.0; x *= 1.01) {
    const double expected = std::cyl_bessel_k(1.0, x);
    worst = std::max(worst, std::abs(bessel_k1(x) / expected - 1.0));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(BesselK1, StrictlyDecreasing) {
  double previous = bessel_k1(1e-6);
  for (double x = 1e-6 * 1.05; x < 700.0; x *= 1.05) {
    const double current = bessel_k1(x);
    ASSERT_LT(current, previous) << "x=" << x;
    previous = current;
  }
}

TEST(BesselK1, DerivativeRecurrence) {
  // K1'(x) = -K0(x) - K1(x) / x, with K0 taken from the standard library.
  for (double x : {0.3, 1.0, 1.99, 2.01, 3.0, 7.0, 15.0}) {
    const double h = 1e-6 * x;
    const double derivative = (bessel_k1(x + h) - bessel_k1(x - h)) / (2.0 * h);
    const double expected = -std::cyl_bessel_k(0.0, x) - bessel_k1(x) / x;
    EXPECT_NEAR(derivative / expected, 1.0, 1e-9) << "x=" << x;
  }
}

TEST(BesselK1, ScaledAndLogFormsAreConsistent) {
  for (double x : {1e-4, 0.5, 2.0, 10.0, 300.0, 699.0}) {
    EXPECT_NEAR(bessel_k1_scaled(x) / (bessel_k1(x) * std::exp(x)), 1.0, 1e-13) << "x=" << x;
    EXPECT_NEAR(log_bessel_k1(x), std::log(bessel_k1(x)), 1e-12 * std::max(1.0, x)) << "x=" << x;
  }
  // Beyond the cutoff the plain value underflows by design; the scaled and
  // log forms stay finite.
  EXPECT_EQ(bessel_k1(800.0), 0.0);
  EXPECT_GT(bessel_k1_scaled(800.0), 0.0);
  EXPECT_NEAR(log_bessel_k1(800.0), std::log(std::sqrt(std::numbers::pi / 1600.0)) - 800.0, 1e-3);
}

TEST(BesselK1, RejectsNonPositive) {
  EXPECT_THROW(bessel_k1(0.0), DomainError);
  EXPECT_THROW(bessel_k1(-1.0), DomainError);
  EXPECT_THROW(bessel_k1(std::nan("")), DomainError);
}

TEST(Integrate, NormalDensityOverRealLine) {
  auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  EXPECT_NEAR(integrate(phi, -kInf, kInf), 1.0, 1e-8);
}

TEST(Integrate, ExponentialOverHalfLine) {
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, kInf), 1.0, 1e-8);
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, -kInf, 0.0), 1.0, 1e-8);
}

TEST(Integrate, NigDensityAgainstTrapezoidSweep) {
  const NIGParams p(0.0, 1.0, 0.0, 1.0);
  const double adaptive = integrate([&](double x) { return nig_pdf(p, x); }, -kInf, kInf);
  // Independent oracle: composite trapezoid on [-40, 40] with step 1e-3.
  const double h = 1e-3;
  double trapezoid = 0.5 * (nig_pdf(p, -40.0) + nig_pdf(p, 40.0));
  for (int i = 1; i < 80000; ++i) trapezoid += nig_pdf(p, -40.0 + i * h);
  trapezoid *= h;
  EXPECT_NEAR(adaptive, 1.0, 1e-6);
  EXPECT_NEAR(adaptive, trapezoid, 1e-6);
}

TEST(Integrate, IsLinear) {
  auto f = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
  auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  const double a = 2.5;
  const double b = -0.75;
  for (auto [lo, hi] : {std::pair{-1.0, 2.0}, std::pair{0.0, kInf}, std::pair{-kInf, kInf}}) {
    const double combined = integrate([&](double x) { return a * f(x) + b * g(x); }, lo, hi);
    EXPECT_NEAR(combined, a * integrate(f, lo, hi) + b * integrate(g, lo, hi), 1e-9);
  }
}

TEST(Integrate, ReportsErrorBoundWithinTolerance) {
  const QuadratureSpec spec{1e-12, 1e-12, 2000};
  const auto r = integrate_with_error([](double x) { return std::sqrt(x); }, 0.0, 1.0, spec);
  EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-11);
  EXPECT_LE(r.error_bound, std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(r.value)));
  EXPECT_GE(r.subdivisions, 1);
}

TEST(Integrate, ReversedBoundsNegate) {
  auto f = [](double x) { return x * x; };
  EXPECT_NEAR(integrate(f, 2.0, 0.0), -8.0 / 3.0, 1e-12);
  EXPECT_EQ(integrate(f, 1.0, 1.0), 0.0);
}

TEST(Integrate, FailsLoudlyWithBestEstimate) {
  // An oscillation far too fast for a handful of panels.
  auto f = [](double x) { return std::sin(1e6 * x) + 1.0; };
  try {
    integrate(f, 0.0, 1.0, {1e-14, 1e-14, 4});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_GT(e.error_bound(), 0.0);
  }
}

TEST(Integrate, RejectsInvalidSpec) {
  auto f = [](double x) { return x; };
  EXPECT_THROW(integrate(f, 0.0, 1.0, {0.0, 1e-10, 10}), DomainError);
  EXPECT_THROW(integrate(f, 0.0, 1.0, {1e-10, -1.0, 10}), DomainError);
  EXPECT_THROW(integrate(f, 0.0, 1.0, {1e-10, 1e-10, 0}), DomainError);
}

TEST(SpecialMath, SafeUnderConcurrentUse) {
  std::vector<double> results(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < results.size(); ++i)
    threads.emplace_back([&, i] {
      double sum = 0.0;
      for (int k = 1; k < 2000; ++k) sum += bessel_k1(0.01 * k);
      sum += integrate([](double x) { return std::exp(-x); }, 0.0, kInf);
      results[i] = sum;
    });
  for (auto& t : threads) t.join();
  for (double r : results) EXPECT_EQ(r, results[0]);
}

}  // namespace
}  // namespace nigvar
