#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clmkit {

/// Base class for every error raised by the library.
class ClmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (bad cell, missing header, unreadable stream).
class ParseError : public ClmError {
 public:
  ParseError(std::string msg, std::size_t row, std::size_t column)
      : ClmError(std::move(msg)), row_(row), column_(column) {}
  explicit ParseError(std::string msg) : ClmError(std::move(msg)) {}
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_ = 0;
  std::size_t column_ = 0;
};

/// Dataset violates a structural invariant (too few rows, one class, ...).
class InvalidDataset : public ClmError {
 public:
  using ClmError::ClmError;
};

class InvalidPartition : public ClmError {
 public:
  using ClmError::ClmError;
};

class InvalidArgument : public ClmError {
 public:
  using ClmError::ClmError;
};

/// Structurally valid input that a measure cannot score (e.g. |X| = |C|).
class DegenerateInput : public ClmError {
 public:
  using ClmError::ClmError;
};

/// Geometry collapses a denominator (zero scatter, coincident centroids).
class DegenerateGeometry : public ClmError {
 public:
  using ClmError::ClmError;
};

/// Min-max normalization has no headroom (null mean indistinguishable from 1).
class DegenerateNormalization : public ClmError {
 public:
  using ClmError::ClmError;
};

/// A Monte Carlo trial kept failing past the retry cap.
class MonteCarloFailure : public ClmError {
 public:
  using ClmError::ClmError;
};

/// One class pair of a between-dataset score failed; carries the pair.
class PairFailure : public ClmError {
 public:
  PairFailure(std::string msg, std::size_t class_a, std::size_t class_b)
      : ClmError(std::move(msg)), class_a_(class_a), class_b_(class_b) {}
  std::size_t class_a() const { return class_a_; }
  std::size_t class_b() const { return class_b_; }

 private:
  std::size_t class_a_;
  std::size_t class_b_;
};

}  // namespace clmkit
