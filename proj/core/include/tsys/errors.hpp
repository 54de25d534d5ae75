#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsys {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed; `offset` is the byte position of the failure.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t offset_)
        : Error(what), offset(offset_) {}
    std::size_t offset;
};

/// Evaluation left the real domain: log of a nonpositive value, division by
/// zero, or a non-finite result.
struct EvalError : Error {
    using Error::Error;
};

/// Problem description file is malformed or internally inconsistent.
struct SpecError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

/// No nonnegative measure on the grid matches the moment vector.
struct InfeasibleError : Error {
    using Error::Error;
};

/// The grid LP is unbounded; the strict-positivity condition on the
/// constrained functions does not hold.
struct UnboundedError : Error {
    using Error::Error;
};

/// The T+ sampling hypothesis was refuted and no override was given.
struct HypothesisError : Error {
    using Error::Error;
};

/// Sign normalization found an initial segment that fails the T-system sampling check.
struct NotMSystemError : Error {
    NotMSystemError(const std::string& what, int level_)
        : Error(what), level(level_) {}
    int level;
};

}  // namespace tsys
