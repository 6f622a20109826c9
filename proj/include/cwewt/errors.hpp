#pragma once

#include <stdexcept>
#include <string>

namespace cwewt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CWEWT_DEFINE_ERROR(Name)                \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  };

CWEWT_DEFINE_ERROR(ZeroDetuning)
CWEWT_DEFINE_ERROR(OutOfRange)
CWEWT_DEFINE_ERROR(ModeCutoff)
CWEWT_DEFINE_ERROR(FringeModelDisabled)
CWEWT_DEFINE_ERROR(NoEvanescentWave)
CWEWT_DEFINE_ERROR(NonPhysicalPoint)
CWEWT_DEFINE_ERROR(InvalidArgument)
CWEWT_DEFINE_ERROR(NoTrap)
CWEWT_DEFINE_ERROR(NotAMinimum)
CWEWT_DEFINE_ERROR(FitFailed)
CWEWT_DEFINE_ERROR(ConfigError)

#undef CWEWT_DEFINE_ERROR

}  // namespace cwewt
