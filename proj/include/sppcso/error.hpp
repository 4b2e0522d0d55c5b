#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sppcso {

enum class ErrorKind {
    ConstantColumn,
    TooFewRows,
    NotSymmetric,
    InvalidGamma,
    InvalidTheta,
    InvalidPenalty,
    EmptyData,
    DimensionMismatch,
    Diverged,
    EmptySupport,
    SingularGram,
    BadFoldCount,
    AllGridPointsFailed,
    BadDimensions,
    TooManyFailures,
    MissingTarget,
    MalformedFile,
    NonNumericValue,
    EmptyAfterFilter,
    NonpositiveValue,
    KTooLarge,
    BadSplit,
    Io,
    Usage,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` identifies
// the failure class, `what()` carries the human-readable detail.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& detail);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace sppcso
