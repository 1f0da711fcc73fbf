#pragma once

#include <stdexcept>
#include <string>

namespace ks {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A field contained NaN or Inf.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live on different grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for fatal events raised while time stepping. Carries the simulation
/// time at which the event was detected.
class SolverEvent : public std::runtime_error {
 public:
  SolverEvent(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }
  virtual const char* kind() const noexcept = 0;

 private:
  double time_;
};

class BlowupDetected : public SolverEvent {
 public:
  using SolverEvent::SolverEvent;
  const char* kind() const noexcept override { return "blowup"; }
};

class NegativityViolation : public SolverEvent {
 public:
  using SolverEvent::SolverEvent;
  const char* kind() const noexcept override { return "negativity"; }
};

class NonFiniteState : public SolverEvent {
 public:
  using SolverEvent::SolverEvent;
  const char* kind() const noexcept override { return "non_finite"; }
};

}  // namespace ks
