#pragma once

#include <stdexcept>
#include <string>

namespace hsu {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed external input (coefficient files, CLI parameters).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested quantity is not defined for the given function.
class UndefinedQuantityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroNormError : public UndefinedQuantityError {
 public:
  ZeroNormError() : UndefinedQuantityError("function has zero norm") {}
};

class ZeroGravityCenterError : public UndefinedQuantityError {
 public:
  ZeroGravityCenterError()
      : UndefinedQuantityError("gravity center is zero; space variance undefined") {}
};

/// A series or iteration did not converge within its cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource cap (e.g. quadrature node count) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsu
