#pragma once

#include <stdexcept>
#include <string>

namespace treelip {

// Base of every error raised by the library. The CLI maps the three
// families below onto distinct exit statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

// Malformed tree/map/function/run specifications.
class SpecError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "SpecError"; }
};

// A scan would exceed a configured size cap.
class ResourceBudgetExceeded : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ResourceBudgetExceeded"; }
};

// An operation's precondition does not hold for its inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "PreconditionUnmet"; }
};

#define TREELIP_DEFINE_PRECONDITION(Name)                               \
  class Name : public PreconditionError {                               \
   public:                                                              \
    using PreconditionError::PreconditionError;                         \
    const char* kind() const noexcept override { return #Name; }        \
  }

TREELIP_DEFINE_PRECONDITION(InvalidVertex);
TREELIP_DEFINE_PRECONDITION(DomainError);
TREELIP_DEFINE_PRECONDITION(DecayNotObserved);
TREELIP_DEFINE_PRECONDITION(RampTooSteep);
TREELIP_DEFINE_PRECONDITION(NotOutsideImage);
TREELIP_DEFINE_PRECONDITION(OrbitCollision);
TREELIP_DEFINE_PRECONDITION(HorizonExhausted);
TREELIP_DEFINE_PRECONDITION(InjectivityUnknown);

#undef TREELIP_DEFINE_PRECONDITION

// Raised when a computation contradicts a proven bound, e.g. an eigenvalue
// verified outside the disk of radius lambda_phi. Always a bug.
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace treelip
