// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nigvar/error.hpp"
#include "nigvar/special_math.hpp"

namespace nigvar {

/// Normal inverse Gaussian law NIG(mu, alpha, beta, delta).
///
/// alpha is the tail index, beta the asymmetry, delta the scale and mu the
/// location. Requires alpha > 0, delta > 0 and alpha^2 > beta^2.
class NIGParams {
 public:
  NIGParams(double mu, double alpha, double beta, double delta)
      : mu_(mu), alpha_(alpha), beta_(beta), delta_(delta) {
    if (!std::isfinite(mu) || !std::isfinite(alpha) || !std::isfinite(beta) ||
        !std::isfinite(delta))
      throw DomainError("NIGParams: parameters must be finite");
    if (!(alpha > 0.0)) throw DomainError("NIGParams: alpha must be positive");
    if (!(delta > 0.0)) throw DomainError("NIGParams: delta must be positive");
    if (!(alpha * alpha > beta * beta) || !(alpha > std::abs(beta)))
      throw DomainError("NIGParams: alpha^2 > beta^2 is required");
  }

  double mu() const noexcept { return mu_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double delta() const noexcept { return delta_; }

  /// sqrt(alpha^2 - beta^2), computed without cancellation.
  double gamma() const noexcept { return std::sqrt((alpha_ - beta_) * (alpha_ + beta_)); }

  /// True when the moment generating function exists at t = 1, which the
  /// return-law shift needs: alpha^2 > (beta + 1)^2.
  bool has_unit_mgf() const noexcept { return alpha_ > std::abs(beta_ + 1.0); }

  friend bool operator==(const NIGParams&, const NIGParams&) = default;

 private:
  double mu_;
  double alpha_;
  double beta_;
  double delta_;
};

/// Inverse Gaussian law of a subordinator at unit time.
///
/// Parameterized as in the compound density exponent
/// -shape_alpha (x - mean_beta u)^2 / (2 mean_beta^2 x): shape_alpha is the
/// IG shape (often written lambda) and mean_beta is the IG mean. The variance
/// is mean_beta^3 / shape_alpha.
class IGParams {
 public:
  IGParams(double shape_alpha, double mean_beta) : shape_(shape_alpha), mean_(mean_beta) {
    if (!(shape_alpha > 0.0) || !std::isfinite(shape_alpha))
      throw DomainError("IGParams: shape_alpha must be positive");
    if (!(mean_beta > 0.0) || !std::isfinite(mean_beta))
      throw DomainError("IGParams: mean_beta must be positive");
  }

  double shape_alpha() const noexcept { return shape_; }
  double mean_beta() const noexcept { return mean_; }

  friend bool operator==(const IGParams&, const IGParams&) = default;

 private:
  double shape_;
  double mean_;
};

/// Normal compound inverse Gaussian law NCIG(mu, alpha, beta, delta): a
/// Brownian motion with drift mu and scale delta run on the clock
/// V = T(U), where T and U are independent IG(alpha, beta) subordinators.
class NCIGParams {
 public:
  NCIGParams(double mu, double alpha, double beta, double delta)
      : mu_(mu), alpha_(alpha), beta_(beta), delta_(delta) {
    if (!std::isfinite(mu) || !std::isfinite(alpha) || !std::isfinite(beta) ||
        !std::isfinite(delta))
      throw DomainError("NCIGParams: parameters must be finite");
    if (!(alpha > 0.0)) throw DomainError("NCIGParams: alpha must be positive");
    if (!(beta > 0.0)) throw DomainError("NCIGParams: beta must be positive");
    if (!(delta > 0.0)) throw DomainError("NCIGParams: delta must be positive");
  }

  double mu() const noexcept { return mu_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double delta() const noexcept { return delta_; }

  IGParams subordinator() const { return IGParams(alpha_, beta_); }

  friend bool operator==(const NCIGParams&, const NCIGParams&) = default;

 private:
  double mu_;
  double alpha_;
  double beta_;
  double delta_;
};

// ---------------------------------------------------------------------------
// NIG
// ---------------------------------------------------------------------------

/// ln f(x) for the NIG density, evaluated without overflow.
inline double nig_log_pdf(const NIGParams& p, double x) {
  const double dx = x - p.mu();
  const double delta = p.delta();
  const double alpha = p.alpha();
  const double r = std::hypot(delta, dx);
  const double gamma = p.gamma();
  // delta*gamma - alpha*r, rearranged to avoid cancellation.
  const double exponent =
      -alpha * dx * dx / (r + delta) - delta * p.beta() * p.beta() / (gamma + alpha);
  const double z = alpha * r;
  const double log_k1_scaled = (z <= 2.0) ? std::log(bessel_k1_scaled(z))
                                          : std::log(detail::bessel_k1_asymptotic_factor(z)) -
                                                0.5 * std::log(z);
  return std::log(alpha * delta / std::numbers::pi) - std::log(r) + log_k1_scaled + exponent +
         p.beta() * dx;
}

inline double nig_pdf(const NIGParams& p, double x) { return std::exp(nig_log_pdf(p, x)); }

/// Moment generating function E[e^{tX}]. Requires (beta + t)^2 < alpha^2.
inline double nig_mgf(const NIGParams& p, double t) {
  const double shifted = p.beta() + t;
  if (!(std::abs(shifted) < p.alpha()))
    throw DomainError("nig_mgf: (beta + t)^2 must be below alpha^2");
  const double gamma = p.gamma();
  const double gamma_t = std::sqrt((p.alpha() - shifted) * (p.alpha() + shifted));
  // gamma - gamma_t = t (2 beta + t) / (gamma + gamma_t)
  return std::exp(p.mu() * t + p.delta() * t * (2.0 * p.beta() + t) / (gamma + gamma_t));
}

/// Characteristic function E[e^{ivX}].
inline std::complex<double> nig_cf(const NIGParams& p, double v) {
  using C = std::complex<double>;
  const C shifted(p.beta(), v);
  const double a2 = p.alpha() * p.alpha();
  const C root = std::sqrt(C(a2, 0.0) - shifted * shifted);
  return std::exp(C(0.0, p.mu() * v) + p.delta() * (p.gamma() - root));
}

struct NIGMoments {
  double mean;
  double variance;
  double skewness;
  double excess_kurtosis;
};

inline NIGMoments nig_moments(const NIGParams& p) {
  const double a = p.alpha();
  const double b = p.beta();
  const double d = p.delta();
  const double g = p.gamma();
  return {
      p.mu() + d * b / g,
      d * a * a / (g * g * g),
      3.0 * b / (a * std::sqrt(std::sqrt(d * d * g * g))),
      3.0 * (1.0 + 4.0 * b * b / (a * a)) / (d * g),
  };
}

/// One inverse Gaussian draw with the given mean and shape
/// (Michael, Schucany and Haas transformation).
template <class URBG>
double sample_inverse_gaussian(URBG& rng, double mean, double shape) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  const double g = normal(rng);
  const double y = g * g;
  const double my = mean * y;
  // Smaller root of the quadratic; the two roots multiply to mean^2.
  const double a = mean + mean * my / (2.0 * shape);
  const double b = mean / (2.0 * shape) * std::sqrt(my * (4.0 * shape + my));
  const double x = mean * mean / (a + b);
  if (uniform(rng) * (mean + x) <= mean) return x;
  return mean * mean / x;
}

/// X = mu + beta W + sqrt(W) G with W ~ IG(mean delta/gamma, shape delta^2).
template <class URBG>
double sample_nig(URBG& rng, const NIGParams& p) {
  std::normal_distribution<double> normal;
  const double w = sample_inverse_gaussian(rng, p.delta() / p.gamma(), p.delta() * p.delta());
  return p.mu() + p.beta() * w + std::sqrt(w) * normal(rng);
}

inline std::vector<double> nig_sample(const NIGParams& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = sample_nig(rng, p);
  return out;
}

// ---------------------------------------------------------------------------
// Doubly subordinated IG clock V = T(U)
// ---------------------------------------------------------------------------

/// Density of V(1) = T(U(1)) at x > 0.
///
/// Conditional on U = u the subordinator gives T(u) ~ IG(mean beta_T u,
/// shape alpha_T u^2), so
///   f(x) = sqrt(alpha_T alpha_U) / (2 pi) x^{-3/2}
///          * int_0^inf u^{-1/2} exp(-alpha_T (x - beta_T u)^2 / (2 beta_T^2 x)
///                                   - alpha_U (u - beta_U)^2 / (2 beta_U^2 u)) du.
inline double compound_ig_pdf(const IGParams& t, const IGParams& u, double x,
                              const QuadratureSpec& spec = {1e-14, 1e-10, 2000}) {
  if (!(x > 0.0)) throw DomainError("compound_ig_pdf: x must be positive");
  const double at = t.shape_alpha();
  const double bt = t.mean_beta();
  const double au = u.shape_alpha();
  const double bu = u.mean_beta();
  auto integrand = [&](double s) {
    if (!(s > 0.0) || !std::isfinite(s)) return 0.0;
    const double dt = x - bt * s;
    const double du = s - bu;
    const double e = -at * dt * dt / (2.0 * bt * bt * x) - au * du * du / (2.0 * bu * bu * s);
    return std::exp(e - 0.5 * std::log(s));
  };
  // Split where each exponential factor peaks so the adaptive scheme sees both bumps.
  const double s1 = std::min(bu, x / bt);
  const double s2 = std::max(bu, x / bt);
  const double inner = integrate(integrand, 0.0, s1, spec) + integrate(integrand, s1, s2, spec) +
                       integrate(integrand, s2, std::numeric_limits<double>::infinity(), spec);
  return std::sqrt(at * au) / (2.0 * std::numbers::pi) * std::pow(x, -1.5) * inner;
}

/// Upper end of the real domain of the V(1) moment generating function.
///
/// The inner square root needs v <= alpha_T / (2 beta_T^2). The outer one
/// needs 1 - sqrt(1 - 2 beta_T^2 v / alpha_T) <= c with
/// c = alpha_U beta_T / (2 beta_U^2 alpha_T); when c < 1 this tightens the
/// bound to (alpha_T / (2 beta_T^2)) (1 - (1 - c)^2).
inline double compound_ig_mgf_upper_bound(const IGParams& t, const IGParams& u) {
  const double at = t.shape_alpha();
  const double bt = t.mean_beta();
  const double au = u.shape_alpha();
  const double bu = u.mean_beta();
  const double inner_limit = at / (2.0 * bt * bt);
  const double c = au * bt / (2.0 * bu * bu * at);
  if (c >= 1.0) return inner_limit;
  return inner_limit * (1.0 - (1.0 - c) * (1.0 - c));
}

namespace detail {

// Laplace exponent of V(1) at argument w (real), i.e. ln E[e^{w V}].
inline double compound_ig_log_mgf(double at, double bt, double au, double bu, double w) {
  const double inner = 1.0 - 2.0 * bt * bt * w / at;
  const double outer = 1.0 - 2.0 * (bu * bu * at) / (au * bt) * (1.0 - std::sqrt(inner));
  return au / bu * (1.0 - std::sqrt(outer));
}

}  // namespace detail

/// E[e^{v V(1)}]. Defined for v up to compound_ig_mgf_upper_bound(); the
/// negative half-line is included since V(1) is positive.
inline double compound_ig_mgf(const IGParams& t, const IGParams& u, double v) {
  if (!std::isfinite(v) || v > compound_ig_mgf_upper_bound(t, u))
    throw DomainError("compound_ig_mgf: argument outside the moment generating domain");
  return std::exp(detail::compound_ig_log_mgf(t.shape_alpha(), t.mean_beta(), u.shape_alpha(),
                                              u.mean_beta(), v));
}

/// One draw of V(1) = T(U(1)).
template <class URBG>
double sample_compound_ig(URBG& rng, const IGParams& t, const IGParams& u) {
  const double clock = sample_inverse_gaussian(rng, u.mean_beta(), u.shape_alpha());
  return sample_inverse_gaussian(rng, t.mean_beta() * clock, t.shape_alpha() * clock * clock);
}

// ---------------------------------------------------------------------------
// NCIG
// ---------------------------------------------------------------------------

/// Largest w = s mu + delta^2 s^2 / 2 for which the NCIG moment generating
/// function is real: alpha / (2 beta^2) when 2 beta <= 1, otherwise
/// (alpha / (2 beta^3)) (1 - 1 / (4 beta)).
inline double ncig_exponent_upper_bound(const NCIGParams& p) {
  const double a = p.alpha();
  const double b = p.beta();
  if (2.0 * b <= 1.0) return a / (2.0 * b * b);
  return a / (2.0 * b * b * b) * (1.0 - 1.0 / (4.0 * b));
}

/// True when the NCIG moment generating function is defined at s.
inline bool ncig_mgf_defined(const NCIGParams& p, double s) {
  const double w = s * p.mu() + 0.5 * p.delta() * p.delta() * s * s;
  return std::isfinite(w) && w <= ncig_exponent_upper_bound(p);
}

/// E[e^{s Z(1)}] = exp((alpha/beta) (1 - sqrt(1 - 2 beta (1 - sqrt(1 - (2 beta^2 / alpha) w)))))
/// with w = s mu + delta^2 s^2 / 2.
inline double ncig_mgf(const NCIGParams& p, double s) {
  if (!ncig_mgf_defined(p, s))
    throw DomainError("ncig_mgf: argument outside the moment generating domain");
  const double w = s * p.mu() + 0.5 * p.delta() * p.delta() * s * s;
  return std::exp(
      detail::compound_ig_log_mgf(p.alpha(), p.beta(), p.alpha(), p.beta(), w));
}

/// Characteristic function: the moment generating function at s = iv with
/// principal square roots. Both radicands keep a real part >= 1 for real v,
/// so the principal branch is the analytic continuation.
inline std::complex<double> ncig_cf(const NCIGParams& p, double v) {
  using C = std::complex<double>;
  const double a = p.alpha();
  const double b = p.beta();
  const C w(-0.5 * p.delta() * p.delta() * v * v, p.mu() * v);
  const C inner = 1.0 - (2.0 * b * b / a) * w;
  const C outer = 1.0 - 2.0 * b * (1.0 - std::sqrt(inner));
  return std::exp((a / b) * (1.0 - std::sqrt(outer)));
}

namespace detail {

// int_0^inf f_V(v) k(v) dv for the NCIG clock density f_V, split at the clock
// mean so the adaptive scheme resolves the bulk.
template <class Kernel>
double integrate_over_clock(const NCIGParams& p, const Kernel& kernel, const QuadratureSpec& spec) {
  const IGParams ig = p.subordinator();
  const QuadratureSpec inner{spec.absolute_tolerance * 1e-2, spec.relative_tolerance * 1e-2, spec.max_subdivisions};
  auto integrand = [&](double v) {
    if (!(v > 0.0) || !std::isfinite(v)) return 0.0;
    const double k = kernel(v);
    return k == 0.0 ? 0.0 : compound_ig_pdf(ig, ig, v, inner) * k;
  };
  const double mean = p.beta() * p.beta();
  return integrate(integrand, 0.0, mean, spec) +
         integrate(integrand, mean, std::numeric_limits<double>::infinity(), spec);
}

}  // namespace detail

/// Density of Z(1): the normal mixture int_0^inf f_V(v) phi(z; mu v, delta^2 v) dv
/// over the compound clock density f_V.
inline double ncig_pdf(const NCIGParams& p, double z, const QuadratureSpec& spec = {1e-13, 1e-9, 2000}) {
  if (!std::isfinite(z)) throw DomainError("ncig_pdf: z must be finite");
  const double d2 = p.delta() * p.delta();
  auto kernel = [&](double v) {
    const double r = z - p.mu() * v;
    return std::exp(-r * r / (2.0 * d2 * v)) / std::sqrt(2.0 * std::numbers::pi * d2 * v);
  };
  return detail::integrate_over_clock(p, kernel, spec);
}

/// Distribution function of Z(1), by the same mixture with the normal cdf.
inline double ncig_cdf(const NCIGParams& p, double z, const QuadratureSpec& spec = {1e-13, 1e-9, 2000}) {
  if (!std::isfinite(z)) throw DomainError("ncig_cdf: z must be finite");
  auto kernel = [&](double v) { return normal_cdf((z - p.mu() * v) / (p.delta() * std::sqrt(v))); };
  return detail::integrate_over_clock(p, kernel, spec);
}

/// E[V(1)] = beta^2 for the NCIG clock.
inline double ncig_clock_mean(const NCIGParams& p) { return p.beta() * p.beta(); }

/// Var[V(1)] = beta^4 (1 + beta) / alpha for the NCIG clock.
inline double ncig_clock_variance(const NCIGParams& p) {
  const double b2 = p.beta() * p.beta();
  return b2 * b2 * (1.0 + p.beta()) / p.alpha();
}

/// E[Z(1)] = mu E[V(1)], the derivative of the moment generating function at 0.
inline double ncig_mean(const NCIGParams& p) { return p.mu() * ncig_clock_mean(p); }

/// Var[Z(1)] = delta^2 E[V] + mu^2 Var[V].
inline double ncig_variance(const NCIGParams& p) {
  return p.delta() * p.delta() * ncig_clock_mean(p) + p.mu() * p.mu() * ncig_clock_variance(p);
}

template <class URBG>
double sample_ncig(URBG& rng, const NCIGParams& p) {
  std::normal_distribution<double> normal;
  const IGParams ig = p.subordinator();
  const double v = sample_compound_ig(rng, ig, ig);
  return p.mu() * v + p.delta() * std::sqrt(v) * normal(rng);
}

inline std::vector<double> ncig_sample(const NCIGParams& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = sample_ncig(rng, p);
  return out;
}

// ---------------------------------------------------------------------------
// Log gross return law under a log-NIG composite variable
// ---------------------------------------------------------------------------

/// The NIG law of a log gross return, NIG(m, alpha, beta, delta) with
/// m = r - delta (sqrt(alpha^2 - beta^2) - sqrt(alpha^2 - (beta - 1)^2)).
struct ShiftedNIGLaw {
  NIGParams base;
  double risk_free;
  double shifted_location;

  NIGParams law() const { return NIGParams(shifted_location, base.alpha(), base.beta(), base.delta()); }
};

/// delta (sqrt(alpha^2 - beta^2) - sqrt(alpha^2 - (beta - 1)^2)), the offset
/// between the composite-variable location and the return-law location.
/// Requires alpha^2 > (beta - 1)^2. (The log MGF at one has beta + 1 in place
/// of beta - 1; see nig_mgf.)
inline double nig_unit_shift(const NIGParams& p) {
  const double a = p.alpha();
  const double bm1 = p.beta() - 1.0;
  if (!(a > std::abs(bm1)))
    throw DomainError("nig_unit_shift: alpha^2 > (beta - 1)^2 is required");
  const double g = p.gamma();
  const double g1 = std::sqrt((a - bm1) * (a + bm1));
  return p.delta() * (1.0 - 2.0 * p.beta()) / (g + g1);
}

inline ShiftedNIGLaw shifted_return_law(const NIGParams& p, double risk_free) {
  if (!std::isfinite(risk_free)) throw DomainError("shifted_return_law: risk_free must be finite");
  return {p, risk_free, risk_free - nig_unit_shift(p)};
}

}  // namespace nigvar
