#pragma once

#include <stdexcept>
#include <string>

namespace hodgelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HODGELAB_ERROR(Name)                       \
    class Name : public Error {                    \
    public:                                        \
        explicit Name(const std::string& what)     \
            : Error(std::string(#Name ": ") + what) {} \
    };

// d_out * d_in != 0 when forming cohomology of a pair.
HODGELAB_ERROR(CompositionNonzero)
HODGELAB_ERROR(RingMismatch)
HODGELAB_ERROR(WeightOverflow)
HODGELAB_ERROR(TruncationOverflow)
HODGELAB_ERROR(WrongCharacteristic)
HODGELAB_ERROR(NotACocycle)
// Bockstein lift whose integral coboundary is not divisible by p.
HODGELAB_ERROR(LiftNotExact)
HODGELAB_ERROR(UnsupportedBase)
HODGELAB_ERROR(UnsupportedStack)
HODGELAB_ERROR(FiltrationNotPreserved)
HODGELAB_ERROR(NotALift)
HODGELAB_ERROR(TruncationTooSmall)
HODGELAB_ERROR(ConfigError)
HODGELAB_ERROR(DimensionMismatch)

#undef HODGELAB_ERROR

}  // namespace hodgelab
