#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rwaqoc {

using cx = std::complex<double>;

// Domain errors. Validation-style operations return reports instead of
// throwing; these are reserved for contract violations.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CyclicGraphError : Error {
    using Error::Error;
};
struct DisconnectedGraphError : Error {
    using Error::Error;
};
struct NoResonantTransitionError : Error {
    using Error::Error;
};
struct AmbiguousResonanceError : Error {
    using Error::Error;
};
struct DuplicateDriveError : Error {
    using Error::Error;
};
struct UnassignedEdgeError : Error {
    using Error::Error;
};
struct NonvanishingResidualsError : Error {
    using Error::Error;
};
struct NonHermitianGeneratorError : Error {
    using Error::Error;
};
struct FrameMismatchError : Error {
    using Error::Error;
};
struct StepSizeUnderflowError : Error {
    using Error::Error;
};
struct ObjectiveNonFiniteError : Error {
    using Error::Error;
};
struct ResampleExhaustedError : Error {
    using Error::Error;
};

}  // namespace rwaqoc
