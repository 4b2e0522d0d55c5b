#include <sppcso/error.hpp>

namespace sppcso {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::ConstantColumn: return "ConstantColumn";
        case ErrorKind::TooFewRows: return "TooFewRows";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::InvalidGamma: return "InvalidGamma";
        case ErrorKind::InvalidTheta: return "InvalidTheta";
        case ErrorKind::InvalidPenalty: return "InvalidPenalty";
        case ErrorKind::EmptyData: return "EmptyData";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::Diverged: return "Diverged";
        case ErrorKind::EmptySupport: return "EmptySupport";
        case ErrorKind::SingularGram: return "SingularGram";
        case ErrorKind::BadFoldCount: return "BadFoldCount";
        case ErrorKind::AllGridPointsFailed: return "AllGridPointsFailed";
        case ErrorKind::BadDimensions: return "BadDimensions";
        case ErrorKind::TooManyFailures: return "TooManyFailures";
        case ErrorKind::MissingTarget: return "MissingTarget";
        case ErrorKind::MalformedFile: return "MalformedFile";
        case ErrorKind::NonNumericValue: return "NonNumericValue";
        case ErrorKind::EmptyAfterFilter: return "EmptyAfterFilter";
        case ErrorKind::NonpositiveValue: return "NonpositiveValue";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::BadSplit: return "BadSplit";
        case ErrorKind::Io: return "Io";
        case ErrorKind::Usage: return "Usage";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind)
{}

} // namespace sppcso
