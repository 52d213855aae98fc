// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "nigvar/distributions.hpp"
#include "nigvar/error.hpp"
#include "nigvar/nelder_mead.hpp"
#include "nigvar/special_math.hpp"

namespace nigvar {

/// Smallest window any fit accepts.
inline constexpr std::size_t kMinFitLength = 60;

/// Margin keeping alpha - |beta| and delta away from zero in the NIG fit.
inline constexpr double kFitBoundaryEpsilon = 1e-6;

/// A contiguous sample of daily log returns.
class ReturnWindow {
 public:
  explicit ReturnWindow(std::vector<double> values, std::size_t start_index = 0)
      : values_(std::move(values)), start_index_(start_index) {
    if (values_.empty()) throw DataError("ReturnWindow: empty window");
    for (double v : values_)
      if (!std::isfinite(v)) throw DataError("ReturnWindow: non-finite return");
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t start_index() const noexcept { return start_index_; }
  std::size_t length() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  std::size_t start_index_;
};

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0;  // divisor n - 1
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

inline SampleStats sample_stats(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  SampleStats s;
  if (x.empty()) return s;
  for (double v : x) s.mean += v;
  s.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  if (x.size() > 1) s.sd = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

template <class Params>
struct FitResult {
  Params params;
  /// Log likelihood for the NIG fit; weighted CF distance for the NCIG fit.
  double objective_value = 0.0;
  bool converged = false;
  int iterations = 0;
  std::optional<std::array<double, 4>> standard_errors;
};

/// Search region of the NCIG fit in units of the window's sample standard
/// deviation s. The ECF criterion is nearly flat along beta -> 0 (with
/// mu -> infinity) and beta -> infinity (with alpha -> infinity), so the
/// search is confined to a finite box.
struct NCIGSearchBox {
  double beta_min = 0.1;
  double beta_max = 10.0;
  double alpha_min = 1e-3;
  double alpha_max = 1e5;
  /// Bound on |mu| / s.
  double mu_max = 50.0;
  /// Bounds on delta / s.
  double delta_min = 1e-4;
  double delta_max = 1e4;
};

struct FitOptions {
  /// Jittered restarts after the primary start.
  int restarts = 5;
  std::uint64_t seed = 0;
  /// Standard deviation of the jitter, in the optimizer's log/unit coordinates.
  double jitter = 0.5;
  NelderMeadOptions optimizer{};
  /// Re-run the simplex from the best point found.
  bool polish = true;
  /// NCIG only: restrict to parameters whose MGF exists at s = 1, which the
  /// excess-return expression needs.
  bool require_unit_mgf = true;
  /// NCIG only: search region.
  NCIGSearchBox ncig_box{};
  /// NIG only: attach observed-information standard errors to converged fits.
  bool standard_errors = true;
};

/// CF evaluation grid and weights for the ECF criterion.
class ECFSpec {
 public:
  ECFSpec(std::vector<double> grid, std::vector<double> weights)
      : grid_(std::move(grid)), weights_(std::move(weights)) {
    if (grid_.empty()) throw DomainError("ECFSpec: empty grid");
    if (grid_.size() != weights_.size())
      throw DomainError("ECFSpec: grid and weights differ in length");
    double total = 0.0;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (!(grid_[k] > 0.0) || !std::isfinite(grid_[k]))
        throw DomainError("ECFSpec: grid points must be positive and finite");
      if (k > 0 && !(grid_[k] > grid_[k - 1]))
        throw DomainError("ECFSpec: grid must be strictly increasing");
      if (!(weights_[k] >= 0.0) || !std::isfinite(weights_[k]))
        throw DomainError("ECFSpec: weights must be non-negative and finite");
      total += weights_[k];
    }
    if (!(total > 0.0) || !std::isfinite(total))
      throw DomainError("ECFSpec: weights must sum to a positive finite value");
  }

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return grid_.size(); }

 private:
  std::vector<double> grid_;
  std::vector<double> weights_;
};

/// `grid_size` points equally spaced on [grid_min, grid_max] / sigma, weighted
/// by exp(-v^2 sigma^2).
inline ECFSpec default_ecf_spec(double sigma, std::size_t grid_size = 64, double grid_max = 20.0,
                                double grid_min = 0.1) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("default_ecf_spec: sigma must be positive");
  if (grid_size < 1) throw DomainError("default_ecf_spec: empty grid");
  if (!(grid_max > grid_min) || !(grid_min > 0.0))
    throw DomainError("default_ecf_spec: need 0 < grid_min < grid_max");
  std::vector<double> grid(grid_size);
  std::vector<double> weights(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double u = grid_size == 1 ? grid_min
                                    : grid_min + (grid_max - grid_min) * static_cast<double>(k) /
                                                     static_cast<double>(grid_size - 1);
    grid[k] = u / sigma;
    // Underflow to zero is fine; at least the first weight stays positive.
    weights[k] = std::exp(-u * u);
  }
  return ECFSpec(std::move(grid), std::move(weights));
}

/// (1/n) sum_j exp(i v x_j).
inline std::complex<double> empirical_cf(std::span<const double> x, double v) {
  double re = 0.0;
  double im = 0.0;
  for (double xj : x) {
    re += std::cos(v * xj);
    im += std::sin(v * xj);
  }
  const auto n = static_cast<double>(x.size());
  return {re / n, im / n};
}

inline std::complex<double> empirical_cf(const ReturnWindow& window, double v) {
  return empirical_cf(window.values(), v);
}

namespace detail {

inline void check_fit_window(const ReturnWindow& window, const SampleStats& stats) {
  if (window.length() < kMinFitLength)
    throw DataError("fit: window has " + std::to_string(window.length()) +
                    " observations, at least " + std::to_string(kMinFitLength) + " are required");
  if (!(stats.sd >= 1e-12)) throw DataError("fit: degenerate data (sample standard deviation below 1e-12)");
}

// Sum of NIG log densities with the alpha-beta-delta-mu constants hoisted.
inline double nig_log_likelihood_raw(std::span<const double> x, double mu, double alpha, double beta,
                                     double delta) {
  const double gamma = std::sqrt((alpha - beta) * (alpha + beta));
  const double shift = delta * beta * beta / (gamma + alpha);
  double total = 0.0;
  for (double xi : x) {
    const double dx = xi - mu;
    const double r = std::sqrt(delta * delta + dx * dx);
    const double z = alpha * r;
    // ln(e^z K1(z) / r), one logarithm per point.
    const double log_ratio = (z <= 2.0) ? std::log(bessel_k1_series(z) / r) + z
                                        : std::log(bessel_k1_asymptotic_factor(z) / (r * std::sqrt(z)));
    total += log_ratio - alpha * dx * dx / (r + delta) + beta * dx;
  }
  const auto n = static_cast<double>(x.size());
  return total + n * (std::log(alpha * delta / std::numbers::pi) - shift);
}

// Method-of-moments NIG for a standardized sample (mean 0, variance 1).
inline std::array<double, 4> nig_moment_start(double skewness, double excess_kurtosis) {
  // Returns (mu, gamma, beta, delta).
  if (!(excess_kurtosis > 0.0)) return {0.0, 10.0, 0.0, 10.0};
  const double k = excess_kurtosis;
  double s2 = skewness * skewness;
  // rho^2 = s^2 / (3k - 4 s^2) must stay below one; cap it at 0.8.
  s2 = std::min(s2, 0.8 * 3.0 * k / (1.0 + 4.0 * 0.8));
  const double rho2 = s2 / (3.0 * k - 4.0 * s2);
  const double rho = std::copysign(std::sqrt(rho2), skewness);
  const double zeta = 3.0 * (1.0 + 4.0 * rho2) / k;  // delta * gamma
  const double gamma = std::sqrt(zeta / (1.0 - rho2));
  const double alpha = gamma / std::sqrt(1.0 - rho2);
  const double beta = rho * alpha;
  const double delta = zeta / gamma;
  const double mu = -delta * beta / gamma;
  return {mu, gamma, beta, delta};
}

template <std::size_t N, class Objective>
NelderMeadResult<N> multistart_minimize(const Objective& objective, const std::array<double, N>& start,
                                        const std::array<double, N>& step, const FitOptions& options,
                                        int base_evaluations = 0) {
  NelderMeadResult<N> best = nelder_mead(objective, start, step, options.optimizer);
  int evaluations = base_evaluations + best.evaluations;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, options.jitter);
  for (int r = 0; r < options.restarts; ++r) {
    std::array<double, N> jittered = start;
    for (auto& v : jittered) v += normal(rng);
    const auto candidate = nelder_mead(objective, jittered, step, options.optimizer);
    evaluations += candidate.evaluations;
    if (candidate.value < best.value) best = candidate;
  }
  if (!options.polish) {
    best.evaluations = evaluations;
    return best;
  }
  // Restarting from the best vertex guards against a collapsed simplex.
  std::array<double, N> polish_step;
  for (std::size_t i = 0; i < N; ++i) polish_step[i] = 0.25 * step[i];
  const auto polished = nelder_mead(objective, best.x, polish_step, options.optimizer);
  evaluations += polished.evaluations;
  if (polished.value <= best.value) {
    best = polished;
  } else {
    best.converged = polished.converged && best.converged;
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace detail

/// Sum of NIG log densities over the window.
inline double nig_log_likelihood(std::span<const double> x, const NIGParams& p) {
  return detail::nig_log_likelihood_raw(x, p.mu(), p.alpha(), p.beta(), p.delta());
}

/// Maximum likelihood NIG fit.
///
/// The sample is standardized to mean 0 and unit variance, fitted in the
/// coordinates (mu, ln gamma, beta, ln delta) with gamma = sqrt(alpha^2 -
/// beta^2), and mapped back through the affine closure of the NIG family.
/// `warm_start`, when given, replaces the moment-matched start.
/// Standard errors of (mu, alpha, beta, delta) from the inverse of the observed
/// information, i.e. the negated central-difference Hessian of the log
/// likelihood at `p`. Empty when that matrix is not positive definite (for
/// example at a boundary point) or a step leaves the parameter domain.
inline std::optional<std::array<double, 4>> nig_standard_errors(std::span<const double> x, const NIGParams& p) {
  const std::array<double, 4> theta = {p.mu(), p.alpha(), p.beta(), p.delta()};
  // Steps on each parameter's natural scale: delta for location, alpha for shape.
  const std::array<double, 4> h = {1e-4 * p.delta(), 1e-4 * p.alpha(), 1e-4 * p.alpha(), 1e-4 * p.delta()};
  auto ll = [&](const std::array<double, 4>& t) {
    if (!(t[1] > std::abs(t[2])) || !(t[3] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return detail::nig_log_likelihood_raw(x, t[0], t[1], t[2], t[3]);
  };
  const double centre = ll(theta);
  std::array<std::array<double, 4>, 4> info{};
  for (std::size_t i = 0; i < 4; ++i) {
    auto shifted = [&](double di, std::size_t j, double dj) {
      auto t = theta;
      t[i] += di * h[i];
      t[j] += dj * h[j];
      return ll(t);
    };
    info[i][i] = -(shifted(1, i, 0) - 2.0 * centre + shifted(-1, i, 0)) / (h[i] * h[i]);
    for (std::size_t j = 0; j < i; ++j) {
      info[i][j] = info[j][i] =
          -(shifted(1, j, 1) - shifted(1, j, -1) - shifted(-1, j, 1) + shifted(-1, j, -1)) / (4.0 * h[i] * h[j]);
    }
  }
  // Cholesky factorization doubles as the positive-definiteness check.
  std::array<std::array<double, 4>, 4> l{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = info[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(sum > 0.0) || !std::isfinite(sum)) return std::nullopt;
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  // Diagonal of info^{-1} = sum over rows of (L^{-1})^2 by column.
  std::array<std::array<double, 4>, 4> inv{};  // L^{-1}, lower triangular
  for (std::size_t c = 0; c < 4; ++c) {
    inv[c][c] = 1.0 / l[c][c];
    for (std::size_t r = c + 1; r < 4; ++r) {
      double sum = 0.0;
      for (std::size_t k = c; k < r; ++k) sum -= l[r][k] * inv[k][c];
      inv[r][c] = sum / l[r][r];
    }
  }
  std::array<double, 4> se{};
  for (std::size_t i = 0; i < 4; ++i) {
    double var = 0.0;
    for (std::size_t r = i; r < 4; ++r) var += inv[r][i] * inv[r][i];
    se[i] = std::sqrt(var);
  }
  return se;
}

inline FitResult<NIGParams> fit_nig_mle(const ReturnWindow& window, const FitOptions& options = {},
                                        const std::optional<NIGParams>& warm_start = std::nullopt) {
  const SampleStats stats = sample_stats(window.values());
  detail::check_fit_window(window, stats);
  const double m = stats.mean;
  const double s = stats.sd;
  std::vector<double> z(window.values().begin(), window.values().end());
  for (double& v : z) v = (v - m) / s;

  const double eps_alpha = kFitBoundaryEpsilon * s;
  const double eps_delta = kFitBoundaryEpsilon / s;
  constexpr double kLogBound = 30.0;

  auto decode = [](const std::array<double, 4>& t) {
    const double gamma = std::exp(t[1]);
    const double beta = t[2];
    return std::array<double, 4>{t[0], std::hypot(gamma, beta), beta, std::exp(t[3])};
  };
  auto objective = [&](const std::array<double, 4>& t) {
    if (std::abs(t[1]) > kLogBound || std::abs(t[3]) > kLogBound || !std::isfinite(t[0]) ||
        !std::isfinite(t[2]))
      return std::numeric_limits<double>::infinity();
    const auto [mu, alpha, beta, delta] = decode(t);
    if (!(alpha - std::abs(beta) > eps_alpha) || !(delta > eps_delta))
      return std::numeric_limits<double>::infinity();
    return -detail::nig_log_likelihood_raw(z, mu, alpha, beta, delta);
  };

  std::array<double, 4> start;
  std::array<double, 4> step;
  if (warm_start) {
    const NIGParams& w = *warm_start;
    const double alpha = w.alpha() * s;
    const double beta = w.beta() * s;
    start = {(w.mu() - m) / s, std::log(std::sqrt((alpha - beta) * (alpha + beta))), beta,
             std::log(w.delta() / s)};
    step = {0.05, 0.1, 0.05, 0.1};
  } else {
    const auto [mu, gamma, beta, delta] = detail::nig_moment_start(stats.skewness, stats.excess_kurtosis);
    start = {mu, std::log(gamma), beta, std::log(delta)};
    step = {0.2, 0.5, 0.2, 0.5};
  }
  if (!std::isfinite(objective(start))) {
    start = {0.0, std::log(10.0), 0.0, std::log(10.0)};
  }

  const auto best = detail::multistart_minimize(objective, start, step, options);
  if (!std::isfinite(best.value)) throw FitError("fit_nig_mle: no feasible point found");

  const auto [mu, alpha, beta, delta] = decode(best.x);
  const bool at_boundary = !(alpha - std::abs(beta) > 10.0 * eps_alpha) || !(delta > 10.0 * eps_delta);
  FitResult<NIGParams> out{NIGParams(m + s * mu, alpha / s, beta / s, delta * s), 0.0, false,
                           best.evaluations, std::nullopt};
  out.objective_value = -best.value - static_cast<double>(window.length()) * std::log(s);
  out.converged = best.converged && !at_boundary;
  if (out.converged && options.standard_errors) out.standard_errors = nig_standard_errors(window.values(), out.params);
  return out;
}

/// sum_k w_k |phi_n(v_k) - phi(v_k)|^2 given precomputed empirical CF values.
inline double ncig_ecf_objective(std::span<const std::complex<double>> empirical, const ECFSpec& spec,
                                 const NCIGParams& p) {
  double total = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (spec.weights()[k] == 0.0) continue;
    total += spec.weights()[k] * std::norm(empirical[k] - ncig_cf(p, spec.grid()[k]));
  }
  return total;
}

inline std::vector<std::complex<double>> empirical_cf_on_grid(const ReturnWindow& window,
                                                              const ECFSpec& spec) {
  std::vector<std::complex<double>> out(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) out[k] = empirical_cf(window, spec.grid()[k]);
  return out;
}

inline double ncig_ecf_objective(const ReturnWindow& window, const ECFSpec& spec, const NCIGParams& p) {
  const auto empirical = empirical_cf_on_grid(window, spec);
  return ncig_ecf_objective(empirical, spec, p);
}

/// Empirical characteristic function fit of the NCIG law.
///
/// Optimizes over (mu / s, ln alpha, ln beta, ln(delta / s)) with s the sample
/// standard deviation. The primary start fixes beta = 1 (unit clock mean),
/// matches the zero-drift kurtosis 3 (1 + beta) / alpha and the variance.
inline FitResult<NCIGParams> fit_ncig_ecf(const ReturnWindow& window, const ECFSpec& spec,
                                          const FitOptions& options = {},
                                          const std::optional<NCIGParams>& warm_start = std::nullopt) {
  const SampleStats stats = sample_stats(window.values());
  detail::check_fit_window(window, stats);
  const double s = stats.sd;
  const auto empirical = empirical_cf_on_grid(window, spec);

  auto decode = [s](const std::array<double, 4>& t) {
    return NCIGParams(t[0] * s, std::exp(t[1]), std::exp(t[2]), std::exp(t[3]) * s);
  };
  const NCIGSearchBox& box = options.ncig_box;
  if (!(box.beta_min > 0.0 && box.beta_min < box.beta_max && box.alpha_min > 0.0 &&
        box.alpha_min < box.alpha_max && box.mu_max > 0.0 && box.delta_min > 0.0 && box.delta_min < box.delta_max))
    throw DomainError("fit_ncig_ecf: invalid search box");
  const std::array<double, 4> lower = {-box.mu_max, std::log(box.alpha_min), std::log(box.beta_min),
                                       std::log(box.delta_min)};
  const std::array<double, 4> upper = {box.mu_max, std::log(box.alpha_max), std::log(box.beta_max),
                                       std::log(box.delta_max)};
  auto objective = [&](const std::array<double, 4>& t) {
    for (std::size_t i = 0; i < 4; ++i)
      if (!(t[i] >= lower[i] && t[i] <= upper[i])) return std::numeric_limits<double>::infinity();
    const NCIGParams p = decode(t);
    if (options.require_unit_mgf && !ncig_mgf_defined(p, 1.0))
      return std::numeric_limits<double>::infinity();
    return ncig_ecf_objective(empirical, spec, p);
  };

  std::array<double, 4> start;
  std::array<double, 4> step;
  if (warm_start) {
    start = {warm_start->mu() / s, std::log(warm_start->alpha()), std::log(warm_start->beta()),
             std::log(warm_start->delta() / s)};
    step = {0.05, 0.1, 0.1, 0.05};
  } else {
    const double alpha = std::clamp(6.0 / std::max(stats.excess_kurtosis, 0.05), 0.1, 1000.0);
    const double mu = stats.mean / s;                                 // clock mean is one
    const double clock_var = 2.0 / alpha;                             // beta^4 (1 + beta) / alpha
    const double delta = std::sqrt(std::max(1.0 - mu * mu * clock_var, 0.01));
    start = {mu, std::log(alpha), 0.0, std::log(delta)};
    step = {0.2, 0.5, 0.3, 0.3};
  }
  for (std::size_t i = 0; i < 4; ++i) start[i] = std::clamp(start[i], lower[i], upper[i]);
  if (!std::isfinite(objective(start))) {
    start = {0.0, std::log(6.0), 0.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) start[i] = std::clamp(start[i], lower[i], upper[i]);
  }

  const auto best = detail::multistart_minimize(objective, start, step, options);
  if (!std::isfinite(best.value)) throw FitError("fit_ncig_ecf: no feasible point found");
  return {decode(best.x), best.value, best.converged, best.evaluations, std::nullopt};
}

}  // namespace nigvar
