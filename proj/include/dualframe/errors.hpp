#pragma once

#include <stdexcept>
#include <string>

namespace dualframe {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DUALFRAME_DEFINE_ERROR(Name)      \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

DUALFRAME_DEFINE_ERROR(InvalidArgument)
DUALFRAME_DEFINE_ERROR(SingularMatrix)
DUALFRAME_DEFINE_ERROR(NotExpansive)
DUALFRAME_DEFINE_ERROR(NoCertificate)
DUALFRAME_DEFINE_ERROR(ZeroVector)
DUALFRAME_DEFINE_ERROR(AngleOutOfRange)
DUALFRAME_DEFINE_ERROR(NotInteger)
DUALFRAME_DEFINE_ERROR(BadCoefficients)
DUALFRAME_DEFINE_ERROR(SeparationFailure)
DUALFRAME_DEFINE_ERROR(TranslationTooCoarse)
DUALFRAME_DEFINE_ERROR(LatticeMismatch)
DUALFRAME_DEFINE_ERROR(DegenerateShell)
DUALFRAME_DEFINE_ERROR(DegenerateLowerBound)
DUALFRAME_DEFINE_ERROR(UnsupportedDimension)
DUALFRAME_DEFINE_ERROR(ZeroSignal)
DUALFRAME_DEFINE_ERROR(InvalidConfig)

#undef DUALFRAME_DEFINE_ERROR

}  // namespace dualframe
