#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transition matrix is reducible or periodic: the shift is not topologically
// mixing and the variational machinery does not apply.
struct NonPrimitiveError : Error {
    using Error::Error;
};

// Transition matrix has a symbol with no successor or no predecessor.
struct EmptyRowOrColumnError : Error {
    using Error::Error;
};

// Word shorter than the potential depth for a non-cyclic sum.
struct WordTooShortError : Error {
    using Error::Error;
};

// Word (or its cyclic closure) violates an allowed transition.
struct InadmissibleWordError : Error {
    using Error::Error;
};

// Requested enumeration exceeds the configured word cap.
struct ResourceLimitError : Error {
    using Error::Error;
};

// Iterative solver hit its cap with the residual above tolerance.
struct ConvergenceFailureError : Error {
    using Error::Error;
};

// Level parameter lies outside the spectrum domain: the level set is empty.
struct AlphaOutOfDomainError : Error {
    using Error::Error;
};

// Root bracket could not be established.
struct BracketFailureError : Error {
    using Error::Error;
};

// Interval map violates the partition or expansion requirements.
struct InvalidModelError : Error {
    using Error::Error;
};

// Dimension root not bracketed in [0, 1]; indicates an invalid model.
struct NoSignChangeError : Error {
    using Error::Error;
};

// Brute-force oracle invoked beyond its intended desk scale.
struct OracleScaleExceededError : Error {
    using Error::Error;
};

// Caller violated a documented precondition.
struct PreconditionError : Error {
    using Error::Error;
};

// Config text is syntactically malformed.
struct ConfigParseError : Error {
    int line = 0;
    int column = 0;
    ConfigParseError(int line_, int column_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ", col " + std::to_string(column_) + ": " + what_),
          line(line_),
          column(column_) {}
};

// Config parsed but violates a module invariant.
struct ConfigValidationError : Error {
    using Error::Error;
};

}  // namespace birkhoff
