// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nigvar/simulation.hpp"

namespace nigvar {
namespace {

// ---------------------------------------------------------------------------
// Scenario generation
// ---------------------------------------------------------------------------

TEST(BusinessDays, SkipsWeekends) {
  const auto d = business_days(Date{2014, 1, 4}, 10);  // a Saturday
  ASSERT_EQ(d.size(), 10u);
  EXPECT_EQ(d.front(), (Date{2014, 1, 6}));
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_LT(d[i].weekday(), 5);
    if (i > 0) EXPECT_LT(d[i - 1], d[i]);
  }
  EXPECT_EQ(d[5], (Date{2014, 1, 13}));
}

TEST(LawMoments, MatchDistributionModule) {
  const ReturnLaw nig = NIGParams(0.1, 2.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(law_mean(nig), nig_moments(std::get<NIGParams>(nig)).mean);
  EXPECT_DOUBLE_EQ(law_sd(nig) * law_sd(nig), nig_moments(std::get<NIGParams>(nig)).variance);
  const ReturnLaw ncig = NCIGParams(0.1, 2.0, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(law_mean(ncig), ncig_mean(std::get<NCIGParams>(ncig)));
}

TEST(GenerateScenario, ShapeAndConstantVols) {
  SyntheticScenario s;
  s.n_days = 600;
  const auto q = generate_scenario(s);
  ASSERT_EQ(q.size(), 600u);
  EXPECT_EQ(q.spx.front(), s.stock_base);
  EXPECT_EQ(q.yield10.front(), s.yield_base);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_EQ(q.vix[i], s.vix_level);
    EXPECT_EQ(q.tyvix[i], s.tyvix_level);
  }
  // Constant implied vols leave nothing for the normal model to vary.
  for (double v : run_pipeline(Model::normal, q).variation.values) EXPECT_EQ(v, 0.0);
}

TEST(GenerateScenario, Deterministic) {
  SyntheticScenario s;
  s.seed = 17;
  s.vol_series_mode = VolSeriesMode::paper_mimic;
  EXPECT_EQ(generate_scenario(s), generate_scenario(s));
  SyntheticScenario t = s;
  t.seed = 18;
  EXPECT_NE(generate_scenario(s).spx, generate_scenario(t).spx);
}

TEST(GenerateScenario, ReturnsFollowTheLaw) {
  SyntheticScenario s;
  s.stock_law = NIGParams(0.001, 60.0, -5.0, 0.01);
  s.bond_law = NCIGParams(0.0, 3.0, 1.0, 0.02);
  s.n_days = 50'001;
  s.seed = 3;
  const auto q = generate_scenario(s);
  const auto stock = sample_stats(log_returns(q.spx));
  const auto bond = sample_stats(log_returns(q.yield10));
  const double n = 50'000.0;
  EXPECT_NEAR(stock.mean, law_mean(s.stock_law), 4.0 * law_sd(s.stock_law) / std::sqrt(n));
  EXPECT_NEAR(stock.sd / law_sd(s.stock_law), 1.0, 0.03);
  EXPECT_NEAR(stock.skewness, nig_moments(std::get<NIGParams>(s.stock_law)).skewness, 0.15);
  EXPECT_NEAR(bond.mean, law_mean(s.bond_law), 4.0 * law_sd(s.bond_law) / std::sqrt(n));
  EXPECT_NEAR(bond.sd / law_sd(s.bond_law), 1.0, 0.03);
}

TEST(GenerateScenario, StockAndBondStreamsAreIndependentOfEachOther) {
  // Changing the bond law leaves the stock path untouched.
  SyntheticScenario a;
  a.seed = 9;
  SyntheticScenario b = a;
  b.bond_law = NIGParams(0.0, 5.0, 1.0, 0.1);
  EXPECT_EQ(generate_scenario(a).spx, generate_scenario(b).spx);
  EXPECT_NE(generate_scenario(a).yield10, generate_scenario(b).yield10);
}

TEST(GenerateScenario, FromLawVols) {
  SyntheticScenario s;
  s.stock_law = NIGParams(0.0, 100.0, 0.0, 0.01);  // daily sd 0.01
  s.n_days = 2000;
  s.vol_series_mode = VolSeriesMode::from_law;
  const auto q = generate_scenario(s);
  const double annual = 100.0 * std::sqrt(365.0) * 0.01;
  EXPECT_NEAR(q.vix.front(), annual, 1e-9);
  double mean = 0.0;
  for (std::size_t i = 300; i < q.size(); ++i) mean += q.vix[i];
  mean /= static_cast<double>(q.size() - 300);
  EXPECT_NEAR(mean / annual, 1.0, 0.05);
}

TEST(GenerateScenario, PaperMimicVolPaths) {
  const auto s = paper_mimic_scenario();
  EXPECT_EQ(s.n_days, 1258u);
  EXPECT_EQ(s.seed, 2014u);
  const auto q = generate_scenario(s);
  ASSERT_EQ(q.size(), 1258u);
  EXPECT_EQ(q.dates.front(), (Date{2014, 1, 2}));
  // Persistent, positive, market-like levels.
  std::vector<double> log_vix(q.vix.size());
  std::transform(q.vix.begin(), q.vix.end(), log_vix.begin(), [](double v) { return std::log(v); });
  const auto st = sample_stats(log_vix);
  EXPECT_NEAR(std::exp(st.mean), 15.0, 6.0);
  EXPECT_GT(st.sd, 0.08);
  EXPECT_LT(st.sd, 0.6);
  double lag1 = 0.0;
  for (std::size_t i = 1; i < log_vix.size(); ++i) lag1 += (log_vix[i] - st.mean) * (log_vix[i - 1] - st.mean);
  lag1 /= static_cast<double>(log_vix.size() - 1) * st.sd * st.sd;
  EXPECT_GT(lag1, 0.9);
  for (double v : q.tyvix) EXPECT_GT(v, 0.0);
  const auto r = sample_stats(log_returns(q.spx));
  EXPECT_NEAR(r.sd, 0.0084, 0.001);
}

TEST(GenerateScenario, RejectsInvalid) {
  SyntheticScenario s;
  s.n_days = 1;
  EXPECT_THROW(generate_scenario(s), DomainError);
  s = {};
  s.vix_level = 0.0;
  EXPECT_THROW(generate_scenario(s), DomainError);
  s = {};
  s.vol_series_mode = VolSeriesMode::paper_mimic;
  s.vix_path.kappa = 0.0;
  EXPECT_THROW(generate_scenario(s), DomainError);
}

TEST(VolSeriesMode, ParseRoundTrip) {
  for (auto m : {VolSeriesMode::constant, VolSeriesMode::from_law, VolSeriesMode::paper_mimic})
    EXPECT_EQ(parse_vol_series_mode(to_string(m)), m);
  EXPECT_THROW(parse_vol_series_mode("wild"), DomainError);
}

// ---------------------------------------------------------------------------
// Sampling floor
// ---------------------------------------------------------------------------

TEST(SampleQuantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(sample_quantile({4.0, 1.0, 3.0, 2.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(sample_quantile({4.0, 1.0, 3.0, 2.0}, 0.99), 3.97);
  EXPECT_DOUBLE_EQ(sample_quantile({4.0, 1.0, 3.0, 2.0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(sample_quantile({4.0, 1.0, 3.0, 2.0}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(sample_quantile({7.0}, 0.3), 7.0);
  EXPECT_THROW(sample_quantile({}, 0.5), DomainError);
  EXPECT_THROW(sample_quantile({1.0}, 1.5), DomainError);
}

TEST(ModelForLaws, FamiliesMustMatch) {
  EXPECT_EQ(model_for_laws(NIGParams(0, 2, 0, 1), NIGParams(0, 3, 0, 1)), Model::nig);
  EXPECT_EQ(model_for_laws(NCIGParams(0, 2, 1, 1), NCIGParams(0, 3, 1, 1)), Model::ncig);
  EXPECT_THROW(model_for_laws(NIGParams(0, 2, 0, 1), NCIGParams(0, 3, 1, 1)), DomainError);
}

FloorOptions short_floor(std::size_t window_length) {
  FloorOptions o;
  o.window_length = window_length;
  o.n_days = 2 * window_length;
  o.replications = 100;
  o.pipeline.fit_failure_policy = FitFailurePolicy::carry_forward;
  return o;
}

TEST(SamplingFloor, RequiresEnoughReplications) {
  FloorOptions o = short_floor(60);
  o.replications = 99;
  EXPECT_THROW(sampling_floor(NIGParams(0, 2, 0, 1), NIGParams(0, 3, 0, 0.5), o), DomainError);
}

TEST(SamplingFloor, QuantileOfReplicationMaxima) {
  const NIGParams stock(0.0, 50.0, 0.0, 0.01);
  const NIGParams bond(0.0, 30.0, 0.0, 0.02);
  const auto r = sampling_floor(stock, bond, short_floor(100));
  ASSERT_EQ(r.replicate_max.size(), 100u);
  EXPECT_EQ(r.model, Model::nig);
  EXPECT_DOUBLE_EQ(r.floor, sample_quantile(r.replicate_max, 0.99));
  for (double m : r.replicate_max) EXPECT_GE(m, 0.0);

  // Replication 7 is reproducible on its own.
  SyntheticScenario s;
  s.stock_law = stock;
  s.bond_law = bond;
  s.n_days = 200;
  s.seed = 7;
  PipelineOptions p;
  p.window_length = 100;
  p.fit_failure_policy = FitFailurePolicy::carry_forward;
  p.seed = 7;
  EXPECT_EQ(max_variation(run_pipeline(Model::nig, generate_scenario(s), p).variation), r.replicate_max[7]);
}

TEST(SamplingFloor, VanishesAsScaleShrinks) {
  // Shrinking delta while keeping delta * alpha fixed scales every return by
  // the same factor c. With beta = 0 each chi term is of order c^2, so the
  // floor (a variance) falls like c^4. (delta stays well above the fit's
  // absolute lower bound of 1e-6.)
  const double c = 0.05;
  const auto base = sampling_floor(NIGParams(0, 50.0, 0, 0.01), NIGParams(0, 30.0, 0, 0.02), short_floor(100));
  const auto tiny = sampling_floor(NIGParams(0, 50.0 / c, 0, 0.01 * c), NIGParams(0, 30.0 / c, 0, 0.02 * c),
                                   short_floor(100));
  EXPECT_GT(base.floor, 0.0);
  EXPECT_LT(tiny.floor, 1e-3 * base.floor);
}

TEST(SamplingFloor, NcigPipeline) {
  const auto r = sampling_floor(NCIGParams(0.0, 2.0, 1.0, 0.01), NCIGParams(0.0, 3.0, 1.0, 0.02), short_floor(60));
  EXPECT_EQ(r.model, Model::ncig);
  EXPECT_GT(r.floor, 0.0);
  EXPECT_TRUE(std::isfinite(r.floor));
}

TEST(SamplingFloor, ShrinksWithWindowLengthForIdenticalLaws) {
  // Identical laws: chi is pure estimation noise, whose variance falls as
  // windows lengthen.
  const NIGParams law(0.0, 50.0, 0.0, 0.01);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t T : {126, 252, 504}) {
    const auto r = sampling_floor(law, law, short_floor(T));
    EXPECT_GT(r.floor, 0.0) << "T=" << T;
    EXPECT_LT(r.floor, previous) << "T=" << T;
    previous = r.floor;
  }
}

}  // namespace
}  // namespace nigvar
