#pragma once

#include <stdexcept>
#include <string>

namespace sigmalab {

// Base of every error raised by the library. The CLI maps ResourceError to
// exit code 3 and everything else to 2 (usage) or 1 (mismatch).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SIGMALAB_ERROR(Name)                                      \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

SIGMALAB_ERROR(DomainError);
SIGMALAB_ERROR(PrecisionError);
SIGMALAB_ERROR(ResourceError);
SIGMALAB_ERROR(ShapeError);
SIGMALAB_ERROR(IntegralityError);
SIGMALAB_ERROR(ConvergenceError);
SIGMALAB_ERROR(StabilizationError);
SIGMALAB_ERROR(UnitError);
SIGMALAB_ERROR(WindowError);
SIGMALAB_ERROR(FlagError);
SIGMALAB_ERROR(RecognitionError);
SIGMALAB_ERROR(SlopeError);
SIGMALAB_ERROR(UnsupportedScheme);
SIGMALAB_ERROR(ParseError);
SIGMALAB_ERROR(AssertionFailure);

#undef SIGMALAB_ERROR

}  // namespace sigmalab
