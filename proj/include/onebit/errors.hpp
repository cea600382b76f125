#pragma once

#include <stdexcept>
#include <string>

namespace onebit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Cholesky factorization hit a non-positive pivot.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

/// Operand shapes are inconsistent.
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// Symbol-vector index outside [0, 4^M).
class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

/// Channel matrix is (numerically) row-rank deficient.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& what) : Error(what) {}
};

/// Regularized precoder system could not be factorized.
class SingularSystem : public Error {
 public:
  explicit SingularSystem(const std::string& what) : Error(what) {}
};

/// Problem size exceeds a configured enumeration bound.
class SizeBound : public Error {
 public:
  explicit SizeBound(const std::string& what) : Error(what) {}
};

/// A measured curve never crosses the requested level.
class InterpolationRange : public Error {
 public:
  explicit InterpolationRange(const std::string& what) : Error(what) {}
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace onebit
