#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prarefact {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input that makes a normalizer vanish (e.g. a == b in a ratio over |a-b|).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A target value outside the range reachable on the given bracket.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class CflViolation : public Error {
 public:
  using Error::Error;
};

/// A parameter violates the standing hypothesis of an experiment.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// The computational domain cannot host the requested experiment.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class NonpositiveValue : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced during time integration.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(std::size_t step, double t, const std::string& what)
      : Error("non-finite value at step " + std::to_string(step) + " (t=" + std::to_string(t) +
              "): " + what),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace prarefact
