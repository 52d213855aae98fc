// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nigvar/data_ingest.hpp"
#include "nigvar/date.hpp"
#include "nigvar/distributions.hpp"
#include "nigvar/error.hpp"
#include "nigvar/estimation.hpp"

namespace nigvar {

enum class Model { normal, nig, ncig };

inline std::string_view to_string(Model m) {
  switch (m) {
    case Model::normal: return "normal";
    case Model::nig: return "nig";
    case Model::ncig: return "ncig";
  }
  return "?";
}

inline Model parse_model(std::string_view s) {
  if (s == "normal") return Model::normal;
  if (s == "nig") return Model::nig;
  if (s == "ncig") return Model::ncig;
  throw DomainError("unknown model '" + std::string(s) + "' (expected normal, nig or ncig)");
}

/// Which alpha enters the inner square root of the bond term of the NCIG
/// forecast difference. `verbatim` uses the stock alpha in both terms;
/// `corrected` uses the bond's own alpha, which makes the expression an exact
/// stock-minus-bond difference.
enum class NcigBondAlpha { verbatim, corrected };

inline std::string_view to_string(NcigBondAlpha v) {
  return v == NcigBondAlpha::verbatim ? "verbatim" : "corrected";
}

inline NcigBondAlpha parse_ncig_bond_alpha(std::string_view s) {
  if (s == "verbatim") return NcigBondAlpha::verbatim;
  if (s == "corrected") return NcigBondAlpha::corrected;
  throw DomainError("unknown variant '" + std::string(s) + "' (expected verbatim or corrected)");
}

/// Per-date difference of the stock and bond conditional forecasts.
struct ChiSeries {
  Model model = Model::normal;
  std::vector<double> values;
  /// Either empty or the same length as `values`.
  std::vector<Date> dates;

  std::size_t size() const noexcept { return values.size(); }
};

/// Stride-1 rolling sample variance of a ChiSeries.
struct VariationSeries {
  Model model = Model::normal;
  std::size_t window_length = 0;
  /// Index into the ChiSeries of each window's first element.
  std::vector<std::size_t> start_offsets;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// What the normal model takes as sigma on date u.
enum class SigmaInput {
  /// The implied-vol quote of date u.
  level,
  /// The running sum of quotes over dates 0..u.
  cumulative,
};

inline std::string_view to_string(SigmaInput s) { return s == SigmaInput::level ? "level" : "cumulative"; }

inline SigmaInput parse_sigma_input(std::string_view s) {
  if (s == "level") return SigmaInput::level;
  if (s == "cumulative") return SigmaInput::cumulative;
  throw DomainError("unknown sigma input '" + std::string(s) + "' (expected level or cumulative)");
}

struct GammaOptions {
  int annualization_days = 365;
  /// Implied-vol quotes are divided by this before squaring.
  double percent_scale = 100.0;
  SigmaInput sigma_input = SigmaInput::level;
};

/// gamma_u = -(sigma_S / scale)^2 / (2 days) + (sigma_B / scale)^2 / (2 days):
/// the normal-model forecast difference from implied-vol levels.
inline ChiSeries gamma_series(std::span<const double> sigma_stock, std::span<const double> sigma_bond,
                              const GammaOptions& options = {}, std::vector<Date> dates = {}) {
  if (sigma_stock.size() != sigma_bond.size())
    throw DomainError("gamma_series: stock and bond vol series differ in length");
  if (!dates.empty() && dates.size() != sigma_stock.size())
    throw DomainError("gamma_series: dates and vol series differ in length");
  if (options.annualization_days <= 0) throw DomainError("gamma_series: annualization_days must be positive");
  if (!(options.percent_scale > 0.0)) throw DomainError("gamma_series: percent_scale must be positive");
  ChiSeries out{Model::normal, std::vector<double>(sigma_stock.size()), std::move(dates)};
  const double half_over_days = 1.0 / (2.0 * options.annualization_days);
  const bool cumulative = options.sigma_input == SigmaInput::cumulative;
  double sum_stock = 0.0;
  double sum_bond = 0.0;
  for (std::size_t u = 0; u < sigma_stock.size(); ++u) {
    if (!(sigma_stock[u] > 0.0) || !(sigma_bond[u] > 0.0) || !std::isfinite(sigma_stock[u]) ||
        !std::isfinite(sigma_bond[u]))
      throw DomainError("gamma_series: non-positive vol level at index " + std::to_string(u));
    sum_stock += sigma_stock[u];
    sum_bond += sigma_bond[u];
    const double s = (cumulative ? sum_stock : sigma_stock[u]) / options.percent_scale;
    const double b = (cumulative ? sum_bond : sigma_bond[u]) / options.percent_scale;
    out.values[u] = half_over_days * (b * b - s * s);
  }
  return out;
}

/// One asset's contribution to the NIG forecast difference:
/// delta beta / gamma - delta (gamma - sqrt(alpha^2 - (beta - 1)^2)).
inline double chi_nig_term(const NIGParams& p) {
  return p.delta() * p.beta() / p.gamma() - nig_unit_shift(p);
}

inline double chi_nig(const NIGParams& stock, const NIGParams& bond) {
  return chi_nig_term(stock) - chi_nig_term(bond);
}

inline ChiSeries chi_nig(std::span<const NIGParams> stock, std::span<const NIGParams> bond,
                         std::vector<Date> dates = {}) {
  if (stock.size() != bond.size()) throw DomainError("chi_nig: stock and bond sequences differ in length");
  ChiSeries out{Model::nig, std::vector<double>(stock.size()), std::move(dates)};
  for (std::size_t t = 0; t < stock.size(); ++t) {
    try {
      out.values[t] = chi_nig(stock[t], bond[t]);
    } catch (const DomainError& e) {
      throw DomainError("chi_nig: index " + std::to_string(t) + ": " + e.what());
    }
  }
  return out;
}

/// One asset's contribution to the NCIG forecast difference:
///   mu alpha^2 - (alpha / beta) (1 - sqrt(1 - 2 beta (1 - sqrt(1 - (2 beta^2 / a) (mu + delta^2 / 2)))))
/// where `inner_alpha` is the a in the innermost radicand.
inline double chi_ncig_term(const NCIGParams& p, double inner_alpha) {
  const double a = p.alpha();
  const double b = p.beta();
  const double inner = 1.0 - (2.0 * b * b / inner_alpha) * (p.mu() + 0.5 * p.delta() * p.delta());
  if (!(inner >= 0.0)) throw DomainError("chi_ncig: negative inner radicand");
  const double outer = 1.0 - 2.0 * b * (1.0 - std::sqrt(inner));
  if (!(outer >= 0.0)) throw DomainError("chi_ncig: negative outer radicand");
  return p.mu() * a * a - (a / b) * (1.0 - std::sqrt(outer));
}

inline double chi_ncig(const NCIGParams& stock, const NCIGParams& bond,
                       NcigBondAlpha variant = NcigBondAlpha::verbatim) {
  const double bond_inner = variant == NcigBondAlpha::verbatim ? stock.alpha() : bond.alpha();
  return chi_ncig_term(stock, stock.alpha()) - chi_ncig_term(bond, bond_inner);
}

inline ChiSeries chi_ncig(std::span<const NCIGParams> stock, std::span<const NCIGParams> bond,
                          NcigBondAlpha variant = NcigBondAlpha::verbatim, std::vector<Date> dates = {}) {
  if (stock.size() != bond.size()) throw DomainError("chi_ncig: stock and bond sequences differ in length");
  ChiSeries out{Model::ncig, std::vector<double>(stock.size()), std::move(dates)};
  for (std::size_t t = 0; t < stock.size(); ++t) {
    try {
      out.values[t] = chi_ncig(stock[t], bond[t], variant);
    } catch (const DomainError& e) {
      throw DomainError("chi_ncig: index " + std::to_string(t) + ": " + e.what());
    }
  }
  return out;
}

/// Stride-1 rolling sample variance (divisor T - 1) of the series.
inline VariationSeries rolling_variance(const ChiSeries& chi, std::size_t window_length) {
  if (window_length < 2) throw DomainError("rolling_variance: window_length must be at least 2");
  if (chi.size() < window_length)
    throw DataError("rolling_variance: series has " + std::to_string(chi.size()) +
                    " values, window needs " + std::to_string(window_length));
  const std::size_t count = chi.size() - window_length + 1;
  VariationSeries out{chi.model, window_length, std::vector<std::size_t>(count), std::vector<double>(count)};
  const auto T = static_cast<double>(window_length);
  for (std::size_t s = 0; s < count; ++s) {
    // Two passes over values shifted by the window's first element: exactly
    // zero for constant windows and free of the cancellation a running sum
    // of squares would suffer.
    const double* x = chi.values.data() + s;
    const double origin = x[0];
    double mean = 0.0;
    for (std::size_t t = 0; t < window_length; ++t) mean += x[t] - origin;
    mean /= T;
    double ss = 0.0;
    for (std::size_t t = 0; t < window_length; ++t) ss += (x[t] - origin - mean) * (x[t] - origin - mean);
    out.start_offsets[s] = s;
    out.values[s] = ss / (T - 1.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end pipeline
// ---------------------------------------------------------------------------

enum class FitFailurePolicy { abort, carry_forward };

inline std::string_view to_string(FitFailurePolicy p) {
  return p == FitFailurePolicy::abort ? "abort" : "carry_forward";
}

inline FitFailurePolicy parse_fit_failure_policy(std::string_view s) {
  if (s == "abort") return FitFailurePolicy::abort;
  if (s == "carry_forward") return FitFailurePolicy::carry_forward;
  throw DomainError("unknown fit failure policy '" + std::string(s) + "' (expected abort or carry_forward)");
}

/// How the bond return series is derived from the 10-year yield.
enum class BondReturns { log_change, difference };

inline std::string_view to_string(BondReturns b) { return b == BondReturns::log_change ? "log_change" : "difference"; }

inline BondReturns parse_bond_returns(std::string_view s) {
  if (s == "log_change") return BondReturns::log_change;
  if (s == "difference") return BondReturns::difference;
  throw DomainError("unknown bond return mode '" + std::string(s) + "' (expected log_change or difference)");
}

struct PipelineOptions {
  std::size_t window_length = 252;
  GammaOptions gamma{};
  NcigBondAlpha ncig_bond_alpha = NcigBondAlpha::verbatim;
  FitFailurePolicy fit_failure_policy = FitFailurePolicy::abort;
  BondReturns bond_returns = BondReturns::log_change;
  /// Per-window default ECF design; ignored when `ecf_spec` is set.
  std::size_t ecf_grid_size = 64;
  double ecf_grid_max = 20.0;
  std::optional<ECFSpec> ecf_spec;
  std::uint64_t seed = 0;
  /// Cold fits (first window, or after a failed warm fit) use this many
  /// jittered restarts and the full-precision simplex.
  int restarts = 5;
  NelderMeadOptions cold_optimizer{};
  /// Later windows start from the previous window's optimum with a single
  /// simplex run at these tolerances.
  NelderMeadOptions warm_optimizer{4000, 1e-12, 1e-10, 1e-6};
  /// Fit the stock and bond series on separate threads when more than one
  /// hardware thread is available. Output is identical either way.
  bool parallel = true;
};

struct WindowFitRecord {
  std::size_t window = 0;
  Date end_date;
  /// (mu, alpha, beta, delta) of whichever law was fitted.
  std::array<double, 4> params{};
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  bool carried_forward = false;
};

struct PipelineResult {
  ChiSeries chi;
  VariationSeries variation;
  std::vector<WindowFitRecord> stock_fits;
  std::vector<WindowFitRecord> bond_fits;
};

namespace detail {

template <class Params>
struct RollingFits {
  std::vector<Params> params;
  std::vector<WindowFitRecord> records;
};

template <class Params>
std::array<double, 4> param_array(const Params& p) {
  return {p.mu(), p.alpha(), p.beta(), p.delta()};
}

// Fits every stride-1 window of `returns`. Window k covers returns
// k .. k + T - 1 and ends on end_dates[k]. Under carry-forward a failed
// window repeats the previous window's parameters; failures before the
// first converged window take that window's parameters instead.
template <class Params, class FitFn>
RollingFits<Params> rolling_fits(std::span<const double> returns, std::span<const Date> end_dates,
                                 const PipelineOptions& options, std::string_view asset, const FitFn& fit) {
  const std::size_t T = options.window_length;
  const std::size_t count = returns.size() - T + 1;
  RollingFits<Params> out;
  out.params.reserve(count);
  out.records.reserve(count);
  std::optional<Params> previous;
  std::vector<std::size_t> leading_failures;
  for (std::size_t k = 0; k < count; ++k) {
    const ReturnWindow window(std::vector<double>(returns.begin() + k, returns.begin() + k + T), k);
    std::optional<FitResult<Params>> result;
    std::string failure = "did not converge";
    try {
      if (previous) {
        FitOptions warm;
        warm.restarts = 0;
        warm.polish = false;
        warm.seed = options.seed + k;
        warm.optimizer = options.warm_optimizer;
        warm.standard_errors = false;
        result = fit(window, warm, previous);
      }
      if (!result || !result->converged) {
        FitOptions cold;
        cold.restarts = options.restarts;
        cold.seed = options.seed + k;
        cold.optimizer = options.cold_optimizer;
        cold.standard_errors = false;
        result = fit(window, cold, std::nullopt);
      }
    } catch (const Error& e) {
      result.reset();
      failure = e.what();
    }
    WindowFitRecord record;
    record.window = k;
    record.end_date = end_dates[k];
    if (result && result->converged) {
      previous = result->params;
      record.params = param_array(result->params);
      record.objective = result->objective_value;
      record.converged = true;
      record.iterations = result->iterations;
    } else if (options.fit_failure_policy == FitFailurePolicy::carry_forward) {
      record.objective = result ? result->objective_value : std::nan("");
      record.iterations = result ? result->iterations : 0;
      record.carried_forward = true;
      if (previous) {
        record.params = param_array(*previous);
      } else {
        // Nothing to carry yet: filled from the first converged window.
        leading_failures.push_back(k);
        if (k + 1 == count)
          throw FitError(std::string(asset) + " fit failed in every window; last ending " +
                             end_dates[k].to_string() + ": " + failure,
                         k);
      }
    } else {
      throw FitError(std::string(asset) + " fit failed at window " + std::to_string(k) + " ending " +
                         end_dates[k].to_string() + ": " + failure,
                     k);
    }
    out.records.push_back(record);
    if (previous) {
      for (std::size_t j : leading_failures) {
        out.params.push_back(*previous);
        out.records[j].params = param_array(*previous);
      }
      leading_failures.clear();
      out.params.push_back(*previous);
    }
  }
  return out;
}

// Runs both callables, concurrently when allowed, and returns their results.
template <class A, class B>
auto run_pair(bool parallel, const A& a, const B& b) {
  if (parallel && std::thread::hardware_concurrency() > 1) {
    auto fa = std::async(std::launch::async, a);
    auto rb = b();
    return std::make_pair(fa.get(), std::move(rb));
  }
  auto ra = a();
  return std::make_pair(std::move(ra), b());
}

// Assembles chi from per-window parameters; under carry-forward a window
// whose parameters leave chi undefined repeats the previous value.
template <class ChiFn, class Params>
std::vector<double> assemble_chi(const std::vector<Params>& stock, const std::vector<Params>& bond,
                                 const PipelineOptions& options, std::span<const Date> end_dates,
                                 const ChiFn& chi_fn) {
  std::vector<double> values(stock.size());
  for (std::size_t k = 0; k < stock.size(); ++k) {
    try {
      values[k] = chi_fn(stock[k], bond[k]);
    } catch (const DomainError& e) {
      if (options.fit_failure_policy == FitFailurePolicy::carry_forward && k > 0) {
        values[k] = values[k - 1];
        continue;
      }
      throw DomainError("window " + std::to_string(k) + " ending " + end_dates[k].to_string() + ": " +
                        e.what());
    }
  }
  return values;
}

}  // namespace detail

/// Stock log returns and bond returns (per `mode`) of a quadruple.
inline std::pair<std::vector<double>, std::vector<double>> pipeline_returns(const MarketQuadruple& data,
                                                                           BondReturns mode) {
  auto stock = log_returns(data.spx);
  auto bond = mode == BondReturns::log_change ? log_returns(data.yield10) : differences(data.yield10);
  return {std::move(stock), std::move(bond)};
}

/// Fits every stride-1 window of both return series, assembles chi per
/// window end date and takes its rolling variance. The normal model uses
/// the implied-vol columns directly.
inline PipelineResult run_pipeline(Model model, const MarketQuadruple& data, const PipelineOptions& options = {}) {
  data.validate();
  const std::size_t T = options.window_length;
  if (T < kMinFitLength)
    throw DomainError("run_pipeline: window_length must be at least " + std::to_string(kMinFitLength));
  PipelineResult out;
  if (model == Model::normal) {
    out.chi = gamma_series(data.vix, data.tyvix, options.gamma, data.dates);
    out.variation = rolling_variance(out.chi, T);
    return out;
  }
  if (data.size() < 2 * T)
    throw DataError("run_pipeline: " + std::to_string(data.size()) + " observations, the " +
                    std::string(to_string(model)) + " model needs at least 2 x window_length = " +
                    std::to_string(2 * T));

  const auto [stock_returns, bond_returns] = pipeline_returns(data, options.bond_returns);
  // Return j spans dates j and j + 1; window k ends on date k + T.
  const std::span<const Date> end_dates(data.dates.data() + T, data.size() - T);
  std::vector<Date> chi_dates(end_dates.begin(), end_dates.end());

  if (model == Model::nig) {
    auto fit = [](const ReturnWindow& w, const FitOptions& o, const std::optional<NIGParams>& warm) {
      return fit_nig_mle(w, o, warm);
    };
    auto [stock, bond] = detail::run_pair(
        options.parallel,
        [&] { return detail::rolling_fits<NIGParams>(stock_returns, end_dates, options, "stock", fit); },
        [&] { return detail::rolling_fits<NIGParams>(bond_returns, end_dates, options, "bond", fit); });
    out.chi = ChiSeries{Model::nig,
                        detail::assemble_chi(stock.params, bond.params, options, end_dates,
                                             [](const NIGParams& s, const NIGParams& b) { return chi_nig(s, b); }),
                        std::move(chi_dates)};
    out.stock_fits = std::move(stock.records);
    out.bond_fits = std::move(bond.records);
  } else {
    auto fit = [&options](const ReturnWindow& w, const FitOptions& o, const std::optional<NCIGParams>& warm) {
      const ECFSpec spec = options.ecf_spec ? *options.ecf_spec
                                            : default_ecf_spec(sample_stats(w.values()).sd, options.ecf_grid_size,
                                                               options.ecf_grid_max);
      return fit_ncig_ecf(w, spec, o, warm);
    };
    auto [stock, bond] = detail::run_pair(
        options.parallel,
        [&] { return detail::rolling_fits<NCIGParams>(stock_returns, end_dates, options, "stock", fit); },
        [&] { return detail::rolling_fits<NCIGParams>(bond_returns, end_dates, options, "bond", fit); });
    const NcigBondAlpha variant = options.ncig_bond_alpha;
    out.chi = ChiSeries{Model::ncig,
                        detail::assemble_chi(stock.params, bond.params, options, end_dates,
                                             [variant](const NCIGParams& s, const NCIGParams& b) {
                                               return chi_ncig(s, b, variant);
                                             }),
                        std::move(chi_dates)};
    out.stock_fits = std::move(stock.records);
    out.bond_fits = std::move(bond.records);
  }
  out.variation = rolling_variance(out.chi, T);
  return out;
}

}  // namespace nigvar
