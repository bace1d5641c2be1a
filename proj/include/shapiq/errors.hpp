#ifndef SHAPIQ_ERRORS_HPP_
#define SHAPIQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace shapiq {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coalition mask has bits set at or beyond the player count.
class InvalidCoalition : public Error {
 public:
  using Error::Error;
};

// An operation would need to materialize more than it is allowed to.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Weights requested for an order the index does not define in closed form.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a weight or kernel function.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A function was called with arguments that break its preconditions.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InsufficientBudget : public Error {
 public:
  using Error::Error;
};

// Raised by BudgetedGame when an evaluation would exceed its cap.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace shapiq

#endif  // SHAPIQ_ERRORS_HPP_
