// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace odcsgd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A node's incident edge weight exceeds one, so its self-loop would be negative.
class NegativeSelfLoop : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  NonFiniteState(std::string what, std::uint64_t seed, int step)
      : Error(std::move(what)), seed_(seed), step_(step) {}

  std::uint64_t seed() const noexcept { return seed_; }
  int step() const noexcept { return step_; }

 private:
  std::uint64_t seed_;
  int step_;
};

class CoordinateUnobserved : public Error {
 public:
  using Error::Error;
};

class MinimizerUnavailable : public Error {
 public:
  using Error::Error;
};

class NonPositiveSeries : public Error {
 public:
  using Error::Error;
};

/// The gradient at the probe point exceeds half the clip level.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based line, or -1 when unknown.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownAxis : public Error {
 public:
  using Error::Error;
};

}  // namespace odcsgd
