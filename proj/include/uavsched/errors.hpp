#ifndef UAVSCHED_ERRORS_HPP
#define UAVSCHED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uavsched {

// Root of every error raised by the library. Callers that only need to
// report failures can catch this; the subclasses exist so tests and the CLI
// can distinguish the failure kinds.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define UAVSCHED_DEFINE_ERROR(Name)      \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

UAVSCHED_DEFINE_ERROR(ParseError);
UAVSCHED_DEFINE_ERROR(TopologyError);
UAVSCHED_DEFINE_ERROR(UnknownPosition);
UAVSCHED_DEFINE_ERROR(UnknownTask);
UAVSCHED_DEFINE_ERROR(UnknownUav);
UAVSCHED_DEFINE_ERROR(DanglingPredecessor);
UAVSCHED_DEFINE_ERROR(CyclicPrecedence);
UAVSCHED_DEFINE_ERROR(RedundantPrecedence);
UAVSCHED_DEFINE_ERROR(InvalidWindow);
UAVSCHED_DEFINE_ERROR(NoTimeWindow);
UAVSCHED_DEFINE_ERROR(GenerationFailure);
UAVSCHED_DEFINE_ERROR(OverlapViolation);
UAVSCHED_DEFINE_ERROR(InvalidSequence);
UAVSCHED_DEFINE_ERROR(InfeasibleEnergy);
UAVSCHED_DEFINE_ERROR(ConfigError);
UAVSCHED_DEFINE_ERROR(NoFeasibleFound);
UAVSCHED_DEFINE_ERROR(MalformedSchedule);
UAVSCHED_DEFINE_ERROR(LimitExceeded);

#undef UAVSCHED_DEFINE_ERROR

}  // namespace uavsched

#endif  // UAVSCHED_ERRORS_HPP
