#pragma once

#include <stdexcept>
#include <string>

namespace pointint {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFinite : Error { using Error::Error; };
struct ConstraintViolation : Error { using Error::Error; };
struct NonPositiveSeparation : Error { using Error::Error; };
struct LawConstraintViolation : Error { using Error::Error; };
struct SingularDenominator : Error { using Error::Error; };
struct NonPositiveWidth : Error { using Error::Error; };
struct OverlappingSupports : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct NegativeDistance : Error { using Error::Error; };
struct UnsupportedInteraction : Error { using Error::Error; };
struct NotAnEigenvalue : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct WindowOutOfRange : Error { using Error::Error; };
struct IllConditionedFit : Error { using Error::Error; };
struct DegenerateInputs : Error { using Error::Error; };

/// Generic precondition violation (bad window, bad count, ...).
struct InvalidArgument : Error { using Error::Error; };

}  // namespace pointint
