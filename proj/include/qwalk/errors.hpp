#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QWALK_ERROR(Name)                 \
    struct Name : Error {                 \
        using Error::Error;               \
    }

QWALK_ERROR(InvalidArgument);
QWALK_ERROR(BranchTrackingFailure);
QWALK_ERROR(DegenerateSpectrum);
QWALK_ERROR(GridTooCoarse);
QWALK_ERROR(SpectralMismatch);
QWALK_ERROR(ContinuousPairWithoutGrid);
QWALK_ERROR(PreconditionViolation);
QWALK_ERROR(WindowViolation);
QWALK_ERROR(OutOfSupportedRange);
QWALK_ERROR(NonPositiveValue);

#undef QWALK_ERROR

} // namespace qwalk
