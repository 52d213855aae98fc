// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <span>
#include <complex>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "nigvar/distributions.hpp"
#include "nigvar/estimation.hpp"

namespace nigvar {
namespace {

ReturnWindow nig_window(const NIGParams& p, std::size_t n, std::uint64_t seed) {
  return ReturnWindow(nig_sample(p, n, seed));
}

ReturnWindow normal_window(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> x(n);
  for (auto& v : x) v = normal(rng);
  return ReturnWindow(std::move(x));
}

ReturnWindow transformed(const ReturnWindow& w, double scale, double shift) {
  std::vector<double> x(w.values().begin(), w.values().end());
  for (auto& v : x) v = scale * v + shift;
  return ReturnWindow(std::move(x));
}

// ---------------------------------------------------------------------------
// Windows and the empirical CF
// ---------------------------------------------------------------------------

TEST(ReturnWindow, RejectsInvalidValues) {
  EXPECT_THROW(ReturnWindow({}), DataError);
  EXPECT_THROW(ReturnWindow({0.1, std::nan("")}), DataError);
  EXPECT_THROW(ReturnWindow({0.1, std::numeric_limits<double>::infinity()}), DataError);
  const ReturnWindow w({1.0, 2.0, 3.0}, 7);
  EXPECT_EQ(w.length(), 3u);
  EXPECT_EQ(w.start_index(), 7u);
}

TEST(SampleStats, MatchesHandComputation) {
  const std::vector<double> x = {1.0, 2.0, 4.0, 7.0};
  const SampleStats s = sample_stats(x);
  EXPECT_DOUBLE_EQ(s.mean, 3.5);
  EXPECT_NEAR(s.sd, std::sqrt((6.25 + 2.25 + 0.25 + 12.25) / 3.0), 1e-15);
}

TEST(EmpiricalCf, Examples) {
  const ReturnWindow w({-1.0, 1.0});
  EXPECT_EQ(empirical_cf(w, 0.0), std::complex<double>(1.0, 0.0));
  EXPECT_NEAR(std::abs(empirical_cf(w, std::numbers::pi / 2.0)), 0.0, 1e-15);
  const NIGParams p(0.0, 2.0, 0.0, 1.0);
  const auto big = nig_window(p, 100'000, 61);
  EXPECT_LT(std::abs(empirical_cf(big, 1.0) - nig_cf(p, 1.0)), 0.01);
}

TEST(EcfSpec, DefaultDesign) {
  const ECFSpec spec = default_ecf_spec(0.02);
  ASSERT_EQ(spec.size(), 64u);
  EXPECT_NEAR(spec.grid().front(), 0.1 / 0.02, 1e-12);
  EXPECT_NEAR(spec.grid().back(), 20.0 / 0.02, 1e-9);
  EXPECT_NEAR(spec.weights().front(), std::exp(-0.01), 1e-15);
  for (std::size_t k = 1; k < spec.size(); ++k) EXPECT_GT(spec.grid()[k], spec.grid()[k - 1]);
}

TEST(EcfSpec, RejectsInvalid) {
  EXPECT_THROW(ECFSpec({}, {}), DomainError);
  EXPECT_THROW(ECFSpec({1.0, 2.0}, {1.0}), DomainError);
  EXPECT_THROW(ECFSpec({2.0, 1.0}, {1.0, 1.0}), DomainError);
  EXPECT_THROW(ECFSpec({0.0, 1.0}, {1.0, 1.0}), DomainError);
  EXPECT_THROW(ECFSpec({1.0, 2.0}, {0.0, 0.0}), DomainError);
  EXPECT_THROW(ECFSpec({1.0, 2.0}, {-1.0, 2.0}), DomainError);
  EXPECT_THROW(default_ecf_spec(0.0), DomainError);
  EXPECT_THROW(default_ecf_spec(1.0, 0), DomainError);
}

// ---------------------------------------------------------------------------
// NIG maximum likelihood
// ---------------------------------------------------------------------------

TEST(NigLogLikelihood, SumsLogDensities) {
  const NIGParams p(0.1, 3.0, -1.0, 0.8);
  const std::vector<double> x = {-2.0, -0.3, 0.0, 0.4, 5.0};
  double expected = 0.0;
  for (double v : x) expected += nig_log_pdf(p, v);
  EXPECT_NEAR(nig_log_likelihood(x, p), expected, 1e-12);
}

// Standard errors from the observed information: the inverse of the negative
// Hessian of the log likelihood, by central differences.
std::array<double, 4> observed_information_errors(std::span<const double> x, const NIGParams& p) {
  const std::array<double, 4> theta = {p.mu(), p.alpha(), p.beta(), p.delta()};
  const std::array<double, 4> h = {1e-3 * p.delta(), 1e-3 * p.alpha(), 1e-3 * p.alpha(), 1e-3 * p.delta()};
  auto ll = [&](std::array<double, 4> t) { return nig_log_likelihood(x, NIGParams(t[0], t[1], t[2], t[3])); };
  std::array<std::array<double, 8>, 4> m{};  // [ -H | I ]
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      auto at = [&](double si, double sj) {
        auto t = theta;
        t[i] += si * h[i];
        t[j] += sj * h[j];
        return ll(t);
      };
      m[i][j] = -(at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
    }
    m[i][4 + i] = 1.0;
  }
  for (std::size_t c = 0; c < 4; ++c) {  // Gauss-Jordan with partial pivoting
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < 4; ++r)
      if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
    std::swap(m[c], m[pivot]);
    const double d = m[c][c];
    for (auto& v : m[c]) v /= d;
    for (std::size_t r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = m[r][c];
      for (std::size_t k = 0; k < 8; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::array<double, 4> se{};
  for (std::size_t i = 0; i < 4; ++i) se[i] = std::sqrt(m[i][4 + i]);
  return se;
}

TEST(FitNigMle, RecoversParameters) {
  const NIGParams truth(0.0, 30.0, -3.0, 0.01);
  const auto w = nig_window(truth, 5000, 71);
  const auto fit = fit_nig_mle(w);
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.params.alpha() / truth.alpha(), 1.0, 0.15);
  EXPECT_NEAR(fit.params.delta() / truth.delta(), 1.0, 0.15);
  const double standard_error = sample_stats(w.values()).sd / std::sqrt(5000.0);
  EXPECT_NEAR(fit.params.mu(), truth.mu(), 2.0 * standard_error);
  // beta is the least precisely determined coordinate: at n = 5000 its
  // sampling spread is close to one unit, so it is judged against its own
  // standard error rather than a fixed absolute band.
  const auto se = observed_information_errors(w.values(), fit.params);
  EXPECT_GT(se[2], 0.3);
  EXPECT_LT(se[2], 3.0);
  EXPECT_NEAR(fit.params.beta(), truth.beta(), 3.0 * se[2]);
}

TEST(FitNigMle, StandardErrorsMatchObservedInformation) {
  const NIGParams truth(0.0, 30.0, -3.0, 0.01);
  const auto w = nig_window(truth, 5000, 71);
  const auto fit = fit_nig_mle(w);
  ASSERT_TRUE(fit.converged);
  ASSERT_TRUE(fit.standard_errors.has_value());
  const auto oracle = observed_information_errors(w.values(), fit.params);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR((*fit.standard_errors)[i] / oracle[i], 1.0, 0.02) << "i=" << i;
  // The location error is close to the naive sd / sqrt(n).
  EXPECT_NEAR((*fit.standard_errors)[0] / (sample_stats(w.values()).sd / std::sqrt(5000.0)), 1.0, 0.3);

  FitOptions off;
  off.standard_errors = false;
  EXPECT_FALSE(fit_nig_mle(w, off).standard_errors.has_value());
}

TEST(NigStandardErrors, EmptyAwayFromAMaximum) {
  // At a point far from the optimum the negated Hessian need not be positive
  // definite; the function reports that rather than returning NaNs.
  const auto x = nig_window(NIGParams(0.0, 30.0, -3.0, 0.01), 2000, 5).values();
  const auto se = nig_standard_errors(x, NIGParams(0.05, 30.0, -3.0, 0.01));
  if (se) {
    for (double v : *se) EXPECT_TRUE(std::isfinite(v) && v > 0.0);
  }
  EXPECT_FALSE(nig_standard_errors(x, NIGParams(0.0, 1.0, 0.9999999, 0.01)).has_value());
}

TEST(FitNigMle, ObjectiveIsMaximizedLogLikelihood) {
  const NIGParams truth(0.0, 30.0, -3.0, 0.01);
  const auto w = nig_window(truth, 5000, 71);
  const auto fit = fit_nig_mle(w);
  EXPECT_NEAR(fit.objective_value, nig_log_likelihood(w.values(), fit.params), 1e-6);
  EXPECT_GE(fit.objective_value, nig_log_likelihood(w.values(), truth));
}

TEST(FitNigMle, NormalDataGivesNearGaussianFit) {
  const auto fit = fit_nig_mle(normal_window(5000, 73));
  EXPECT_LT(nig_moments(fit.params).excess_kurtosis, 0.2);
}

TEST(FitNigMle, DegenerateWindows) {
  EXPECT_THROW(fit_nig_mle(ReturnWindow(std::vector<double>(100, 0.01))), DataError);
  EXPECT_THROW(fit_nig_mle(normal_window(59, 1)), DataError);
  EXPECT_NO_THROW(fit_nig_mle(normal_window(60, 1)));
}

TEST(FitNigMle, LocationInvariance) {
  const auto w = nig_window(NIGParams(0.0, 30.0, -3.0, 0.01), 2000, 79);
  const auto base = fit_nig_mle(w);
  const auto moved = fit_nig_mle(transformed(w, 1.0, 0.01));
  EXPECT_NEAR(moved.params.mu(), base.params.mu() + 0.01, 1e-6);
  EXPECT_NEAR(moved.params.alpha() / base.params.alpha(), 1.0, 1e-6);
  EXPECT_NEAR(moved.params.beta(), base.params.beta(), 1e-6 * base.params.alpha());
  EXPECT_NEAR(moved.params.delta() / base.params.delta(), 1.0, 1e-6);
}

TEST(FitNigMle, ScaleCovariance) {
  const auto w = nig_window(NIGParams(0.0, 30.0, -3.0, 0.01), 2000, 83);
  const auto base = fit_nig_mle(w);
  const auto scaled = fit_nig_mle(transformed(w, 2.0, 0.0));
  EXPECT_NEAR(scaled.params.delta() / (2.0 * base.params.delta()), 1.0, 0.02);
  EXPECT_NEAR(scaled.params.alpha() / (base.params.alpha() / 2.0), 1.0, 0.02);
  EXPECT_NEAR(scaled.params.beta() / (base.params.beta() / 2.0), 1.0, 0.02);
}

TEST(FitNigMle, Deterministic) {
  const auto w = nig_window(NIGParams(0.0, 30.0, -3.0, 0.01), 500, 89);
  const auto a = fit_nig_mle(w);
  const auto b = fit_nig_mle(w);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.objective_value, b.objective_value);
}

TEST(FitNigMle, WarmStartReachesSameOptimum) {
  const auto w = nig_window(NIGParams(0.0, 30.0, -3.0, 0.01), 1000, 97);
  const auto cold = fit_nig_mle(w);
  FitOptions warm_options;
  warm_options.restarts = 0;
  warm_options.polish = false;
  const auto warm = fit_nig_mle(w, warm_options, NIGParams(0.0, 25.0, -2.0, 0.012));
  EXPECT_NEAR(warm.objective_value, cold.objective_value, 1e-4);
}

TEST(FitNigMle, ConcurrentFitsAgree) {
  const auto w = nig_window(NIGParams(0.0, 30.0, -3.0, 0.01), 500, 101);
  const auto serial = fit_nig_mle(w);
  std::vector<FitResult<NIGParams>> results(4, serial);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < results.size(); ++i) threads.emplace_back([&, i] { results[i] = fit_nig_mle(w); });
  for (auto& t : threads) t.join();
  for (const auto& r : results) EXPECT_EQ(r.params, serial.params);
}

// ---------------------------------------------------------------------------
// NCIG empirical CF fit
// ---------------------------------------------------------------------------

class FitNcigEcf : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    window_ = new ReturnWindow(ncig_sample(truth_, 5000, 103));
    spec_ = new ECFSpec(default_ecf_spec(sample_stats(window_->values()).sd));
    fit_ = new FitResult<NCIGParams>(fit_ncig_ecf(*window_, *spec_));
  }
  static void TearDownTestSuite() {
    delete fit_;
    delete spec_;
    delete window_;
  }

  static inline const NCIGParams truth_{0.0, 2.0, 1.0, 0.5};
  static inline ReturnWindow* window_ = nullptr;
  static inline ECFSpec* spec_ = nullptr;
  static inline FitResult<NCIGParams>* fit_ = nullptr;
};

TEST_F(FitNcigEcf, ObjectiveNoWorseThanTruth) {
  EXPECT_TRUE(fit_->converged);
  EXPECT_LE(fit_->objective_value, ncig_ecf_objective(*window_, *spec_, truth_) + 1e-6);
  EXPECT_NEAR(fit_->objective_value, ncig_ecf_objective(*window_, *spec_, fit_->params), 1e-15);
}

// The criterion is nearly flat along the ridge delta * beta = const (a slower
// clock traded against a larger diffusion scale), so the identified scale is
// the product, not delta alone.
TEST_F(FitNcigEcf, RecoversIdentifiedScale) {
  EXPECT_NEAR(fit_->params.delta() * fit_->params.beta() / (truth_.delta() * truth_.beta()), 1.0, 0.2);
}

TEST_F(FitNcigEcf, CriterionIsFlatAlongScaleRidge) {
  // Re-fit with beta pinned at 0.5 and at 2: both optima sit within a few
  // percent of the free optimum and keep delta * beta in place.
  for (double beta : {0.5, 2.0}) {
    FitOptions pinned;
    pinned.ncig_box.beta_min = beta * 0.999;
    pinned.ncig_box.beta_max = beta * 1.001;
    const auto fit = fit_ncig_ecf(*window_, *spec_, pinned);
    EXPECT_LT(fit.objective_value, 1.2 * fit_->objective_value) << "beta=" << beta;
    EXPECT_NEAR(fit.params.delta() * fit.params.beta() / (truth_.delta() * truth_.beta()), 1.0, 0.2);
  }
}

TEST_F(FitNcigEcf, PerturbationIncreasesObjective) {
  const NCIGParams doubled(truth_.mu(), truth_.alpha(), truth_.beta(), 2.0 * truth_.delta());
  EXPECT_LT(ncig_ecf_objective(*window_, *spec_, truth_), ncig_ecf_objective(*window_, *spec_, doubled));
}

TEST_F(FitNcigEcf, FittedLawReproducesSampleVariance) {
  const double sd = sample_stats(window_->values()).sd;
  EXPECT_NEAR(std::sqrt(ncig_variance(fit_->params)) / sd, 1.0, 0.1);
}

TEST_F(FitNcigEcf, Deterministic) {
  const auto again = fit_ncig_ecf(*window_, *spec_);
  EXPECT_EQ(again.params, fit_->params);
  EXPECT_EQ(again.objective_value, fit_->objective_value);
}

TEST_F(FitNcigEcf, RespectsUnitMgfRequirement) { EXPECT_TRUE(ncig_mgf_defined(fit_->params, 1.0)); }

TEST(NcigEcfObjective, NonNegativeAndZeroOnExactMatch) {
  const NCIGParams p(0.1, 2.0, 1.0, 0.5);
  const ECFSpec spec = default_ecf_spec(0.6, 16);
  std::vector<std::complex<double>> model(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) model[k] = ncig_cf(p, spec.grid()[k]);
  EXPECT_EQ(ncig_ecf_objective(model, spec, p), 0.0);
  const NCIGParams other(0.1, 2.0, 1.0, 0.6);
  EXPECT_GT(ncig_ecf_objective(model, spec, other), 0.0);
  // Weighted sum of squared moduli, written out.
  double expected = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k)
    expected += spec.weights()[k] * std::norm(model[k] - ncig_cf(other, spec.grid()[k]));
  EXPECT_NEAR(ncig_ecf_objective(model, spec, other), expected, 1e-15);
}

TEST(FitNcigEcfErrors, RejectsBadInputs) {
  const ReturnWindow w(ncig_sample(NCIGParams(0.0, 2.0, 1.0, 0.5), 200, 107));
  EXPECT_THROW(fit_ncig_ecf(ReturnWindow(std::vector<double>(100, 0.0)), default_ecf_spec(1.0)), DataError);
  FitOptions bad;
  bad.ncig_box.beta_min = 2.0;
  bad.ncig_box.beta_max = 1.0;
  EXPECT_THROW(fit_ncig_ecf(w, default_ecf_spec(0.5), bad), DomainError);
}

}  // namespace
}  // namespace nigvar
