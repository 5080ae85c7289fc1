#pragma once

#include <stdexcept>
#include <string>

namespace linnet {

// Common base so callers can catch everything from this library at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define LINNET_ERROR(Name)                      \
  struct Name : Error {                         \
    using Error::Error;                         \
  }

LINNET_ERROR(DimensionMismatch);
LINNET_ERROR(DivisionByZero);
LINNET_ERROR(SingularMatrix);
LINNET_ERROR(RankDeficient);
LINNET_ERROR(PoleAtPoint);
LINNET_ERROR(DegreeOverflow);
LINNET_ERROR(InvalidTransformation);
LINNET_ERROR(SelfLoopSingular);
LINNET_ERROR(NoFeasibleSelection);
LINNET_ERROR(InvalidPartition);
LINNET_ERROR(ParseError);

#undef LINNET_ERROR

}  // namespace linnet
