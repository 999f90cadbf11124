#include "orbitals/error.hpp"

namespace orbitals {

std::string_view error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::ParameterTooLarge: return "ParameterTooLarge";
    case ErrorCode::ZeroTensor: return "ZeroTensor";
    case ErrorCode::ZeroLambda: return "ZeroLambda";
    case ErrorCode::EmptyUnion: return "EmptyUnion";
    case ErrorCode::BadDecomposition: return "BadDecomposition";
    case ErrorCode::CertificationFailed: return "CertificationFailed";
    case ErrorCode::DegenerateConfig: return "DegenerateConfig";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::LemmaViolation: return "LemmaViolation";
    case ErrorCode::DegenerateQuad: return "DegenerateQuad";
    case ErrorCode::TableViolation: return "TableViolation";
    case ErrorCode::DegenerateLambda: return "DegenerateLambda";
    case ErrorCode::ScanViolation: return "ScanViolation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code)
{
}

}  // namespace orbitals
