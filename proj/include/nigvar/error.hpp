// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nigvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument or parameter lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed, inconsistent, or too short for the request.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// A distribution fit failed; `window()` names the offending window when known.
class FitError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit FitError(const std::string& what, std::size_t window = npos)
      : Error(what), window_(window) {}

  std::size_t window() const noexcept { return window_; }

 private:
  std::size_t window_;
};

}  // namespace nigvar
