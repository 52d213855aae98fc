// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "nigvar/data_ingest.hpp"
#include "nigvar/date.hpp"
#include "nigvar/distributions.hpp"
#include "nigvar/error.hpp"
#include "nigvar/variation.hpp"

namespace nigvar {

/// A return law for synthetic data.
using ReturnLaw = std::variant<NIGParams, NCIGParams>;

/// How the implied-vol columns of a synthetic quadruple are produced.
enum class VolSeriesMode {
  /// Fixed levels `vix_level` and `tyvix_level`.
  constant,
  /// Annualized trailing sample volatility of the generated returns.
  from_law,
  /// Independent mean-reverting log-vol paths with market-like levels and
  /// persistence, unrelated to the return laws.
  paper_mimic,
};

inline std::string_view to_string(VolSeriesMode m) {
  switch (m) {
    case VolSeriesMode::constant: return "constant";
    case VolSeriesMode::from_law: return "from_law";
    case VolSeriesMode::paper_mimic: return "paper_mimic";
  }
  return "?";
}

inline VolSeriesMode parse_vol_series_mode(std::string_view s) {
  if (s == "constant") return VolSeriesMode::constant;
  if (s == "from_law") return VolSeriesMode::from_law;
  if (s == "paper_mimic") return VolSeriesMode::paper_mimic;
  throw DomainError("unknown vol series mode '" + std::string(s) + "'");
}

/// Mean-reverting log-level path: x' = x + kappa (ln level - x) + sd sqrt(2 kappa - kappa^2) e,
/// so `stationary_log_sd` is the stationary standard deviation of ln(vol).
struct LogVolPath {
  double level = 15.0;
  double stationary_log_sd = 0.25;
  double kappa = 0.03;
};

struct SyntheticScenario {
  ReturnLaw stock_law = NIGParams(0.0, 2.0, 0.0, 1.0);
  ReturnLaw bond_law = NIGParams(0.0, 3.0, 0.0, 0.5);
  std::size_t n_days = 600;
  std::uint64_t seed = 0;
  VolSeriesMode vol_series_mode = VolSeriesMode::constant;
  double stock_base = 100.0;
  double yield_base = 2.5;
  double vix_level = 20.0;
  double tyvix_level = 5.0;
  /// Trailing window and scaling of the from_law vol columns.
  std::size_t vol_window = 252;
  int annualization_days = 365;
  double percent_scale = 100.0;
  LogVolPath vix_path{15.0, 0.25, 0.03};
  LogVolPath tyvix_path{5.0, 0.15, 0.03};
  Date start{2014, 1, 2};
};

inline double law_mean(const ReturnLaw& law) {
  return std::visit(
      [](const auto& p) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, NIGParams>) return nig_moments(p).mean;
        else return ncig_mean(p);
      },
      law);
}

inline double law_sd(const ReturnLaw& law) {
  return std::visit(
      [](const auto& p) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, NIGParams>) return std::sqrt(nig_moments(p).variance);
        else return std::sqrt(ncig_variance(p));
      },
      law);
}

/// `n` consecutive Monday-to-Friday dates starting at `start` (or the next
/// weekday after it).
inline std::vector<Date> business_days(Date start, std::size_t n) {
  std::vector<Date> out;
  out.reserve(n);
  std::int64_t serial = start.serial();
  while (out.size() < n) {
    const Date d = Date::from_serial(serial++);
    if (d.weekday() < 5) out.push_back(d);
  }
  return out;
}

namespace detail {

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

inline std::vector<double> sample_law(const ReturnLaw& law, std::size_t n, std::mt19937_64& rng) {
  std::vector<double> out(n);
  std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, NIGParams>) {
          for (auto& x : out) x = sample_nig(rng, p);
        } else {
          for (auto& x : out) x = sample_ncig(rng, p);
        }
      },
      law);
  return out;
}

inline std::vector<double> levels_from_returns(double base, std::span<const double> returns) {
  std::vector<double> out(returns.size() + 1);
  out[0] = base;
  double cumulative = 0.0;
  for (std::size_t j = 0; j < returns.size(); ++j) {
    cumulative += returns[j];
    out[j + 1] = base * std::exp(cumulative);
  }
  return out;
}

// Vol on date i from the returns ending on that date (at most `window` of
// them); the law's own volatility until two returns are available.
inline std::vector<double> trailing_vol(std::span<const double> returns, std::size_t window, double law_sd,
                                        double annualize) {
  std::vector<double> out(returns.size() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t available = std::min(i, window);
    if (available < 2) {
      out[i] = annualize * law_sd;
      continue;
    }
    const auto slice = returns.subspan(i - available, available);
    out[i] = annualize * sample_stats(slice).sd;
  }
  return out;
}

inline std::vector<double> log_vol_path(const LogVolPath& path, std::size_t n, std::mt19937_64& rng) {
  if (!(path.level > 0.0) || !(path.kappa > 0.0) || !(path.kappa <= 1.0) || !(path.stationary_log_sd >= 0.0))
    throw DomainError("log_vol_path: need level > 0, 0 < kappa <= 1, stationary_log_sd >= 0");
  std::normal_distribution<double> normal;
  const double target = std::log(path.level);
  const double shock = path.stationary_log_sd * std::sqrt(path.kappa * (2.0 - path.kappa));
  double x = target + path.stationary_log_sd * normal(rng);
  std::vector<double> out(n);
  for (auto& v : out) {
    v = std::exp(x);
    x += path.kappa * (target - x) + shock * normal(rng);
  }
  return out;
}

}  // namespace detail

/// Synthetic quadruple: stock levels from `stock_base` and the yield from
/// `yield_base`, each compounding iid draws from its law; vol columns per
/// the scenario's mode. Deterministic in the seed.
inline MarketQuadruple generate_scenario(const SyntheticScenario& s) {
  if (s.n_days < 2) throw DomainError("generate_scenario: n_days must be at least 2");
  if (!(s.stock_base > 0.0) || !(s.yield_base > 0.0))
    throw DomainError("generate_scenario: base levels must be positive");
  auto stock_rng = detail::stream_rng(s.seed, 1);
  auto bond_rng = detail::stream_rng(s.seed, 2);
  const auto stock_returns = detail::sample_law(s.stock_law, s.n_days - 1, stock_rng);
  const auto bond_returns = detail::sample_law(s.bond_law, s.n_days - 1, bond_rng);

  MarketQuadruple q;
  q.dates = business_days(s.start, s.n_days);
  q.spx = detail::levels_from_returns(s.stock_base, stock_returns);
  q.yield10 = detail::levels_from_returns(s.yield_base, bond_returns);
  switch (s.vol_series_mode) {
    case VolSeriesMode::constant:
      if (!(s.vix_level > 0.0) || !(s.tyvix_level > 0.0))
        throw DomainError("generate_scenario: constant vol levels must be positive");
      q.vix.assign(s.n_days, s.vix_level);
      q.tyvix.assign(s.n_days, s.tyvix_level);
      break;
    case VolSeriesMode::from_law: {
      const double annualize = s.percent_scale * std::sqrt(static_cast<double>(s.annualization_days));
      q.vix = detail::trailing_vol(stock_returns, s.vol_window, law_sd(s.stock_law), annualize);
      q.tyvix = detail::trailing_vol(bond_returns, s.vol_window, law_sd(s.bond_law), annualize);
      break;
    }
    case VolSeriesMode::paper_mimic: {
      auto vol_rng = detail::stream_rng(s.seed, 3);
      q.vix = detail::log_vol_path(s.vix_path, s.n_days, vol_rng);
      q.tyvix = detail::log_vol_path(s.tyvix_path, s.n_days, vol_rng);
      break;
    }
  }
  q.validate();
  return q;
}

/// A five-year daily scenario with market-like magnitudes: equity returns
/// with about 0.84% daily volatility and mild negative skew, 10-year-yield
/// log changes with about 2% daily volatility, and persistent implied-vol
/// paths around 15 (equity) and 5 (Treasury). Return laws are constant, so
/// any variation the NIG/NCIG pipelines report is estimation noise.
inline SyntheticScenario paper_mimic_scenario(std::uint64_t seed = 2014) {
  SyntheticScenario s;
  s.stock_law = NIGParams(0.00086, 100.0, -8.0, 0.007);
  s.bond_law = NIGParams(0.0, 60.0, 0.0, 0.024);
  s.n_days = 1258;
  s.seed = seed;
  s.vol_series_mode = VolSeriesMode::paper_mimic;
  return s;
}

/// Linear-interpolation sample quantile (the usual "type 7" definition).
inline double sample_quantile(std::vector<double> values, double probability) {
  if (values.empty()) throw DomainError("sample_quantile: empty sample");
  if (!(probability >= 0.0 && probability <= 1.0)) throw DomainError("sample_quantile: probability outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = probability * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

/// Model whose pipeline matches a pair of laws of the same family.
inline Model model_for_laws(const ReturnLaw& stock, const ReturnLaw& bond) {
  if (stock.index() != bond.index()) throw DomainError("stock and bond laws must be of the same family");
  return std::holds_alternative<NIGParams>(stock) ? Model::nig : Model::ncig;
}

struct FloorOptions {
  std::size_t window_length = 252;
  std::size_t replications = 200;
  std::uint64_t seed = 0;
  std::size_t n_days = 600;
  double percentile = 0.99;
  /// Fit settings; window_length is overridden by the field above.
  PipelineOptions pipeline{};
  /// Worker threads for replications; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct FloorResult {
  Model model = Model::nig;
  double floor = 0.0;
  /// Maximum of the variation series in each replication, by replication.
  std::vector<double> replicate_max;
};

/// Largest value of a variation series.
inline double max_variation(const VariationSeries& v) {
  if (v.values.empty()) throw DomainError("max_variation: empty series");
  return *std::max_element(v.values.begin(), v.values.end());
}

/// Monte Carlo sampling floor of the rolling variation statistic under
/// constant laws: replication r simulates a constant-vol scenario with seed
/// `seed + r`, runs the matching pipeline and records the maximum of its
/// variation series; the floor is the `percentile` quantile of those maxima.
inline FloorResult sampling_floor(const ReturnLaw& stock, const ReturnLaw& bond, const FloorOptions& options = {}) {
  if (options.replications < 100) throw DomainError("sampling_floor: at least 100 replications are required");
  const Model model = model_for_laws(stock, bond);
  PipelineOptions pipeline = options.pipeline;
  pipeline.window_length = options.window_length;
  pipeline.parallel = false;

  FloorResult out;
  out.model = model;
  out.replicate_max.assign(options.replications, 0.0);
  auto run = [&](std::size_t r) {
    SyntheticScenario scenario;
    scenario.stock_law = stock;
    scenario.bond_law = bond;
    scenario.n_days = options.n_days;
    scenario.seed = options.seed + r;
    PipelineOptions local = pipeline;
    local.seed = pipeline.seed + r;
    out.replicate_max[r] = max_variation(run_pipeline(model, generate_scenario(scenario), local).variation);
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.replications));
  if (threads <= 1) {
    for (std::size_t r = 0; r < options.replications; ++r) run(r);
  } else {
    std::vector<std::future<void>> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t r = t; r < options.replications; r += threads) run(r);
      }));
    for (auto& w : workers) w.get();
  }
  out.floor = sample_quantile(out.replicate_max, options.percentile);
  return out;
}

}  // namespace nigvar
