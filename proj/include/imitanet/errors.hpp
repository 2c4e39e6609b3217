#pragma once

#include <stdexcept>

namespace imitanet {

// Bad argument: invalid agent id, negative reward, malformed input.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation's documented precondition does not hold (e.g. x0 is not an
// equilibrium, x0 is all-B, an agent is not opponent-coordinating).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested operation is meaningless in the current state.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relaxation exceeded its switch cap.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proven property was violated; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Search aborted by its node or wall-clock budget.
class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace imitanet
