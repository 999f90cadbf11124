#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbitals {

enum class ErrorCode {
    NotPrime,
    ZeroInverse,
    DimensionMismatch,
    Singular,
    ParameterTooLarge,
    ZeroTensor,
    ZeroLambda,
    EmptyUnion,
    BadDecomposition,
    CertificationFailed,
    DegenerateConfig,
    IndexOutOfRange,
    LemmaViolation,
    DegenerateQuad,
    TableViolation,
    DegenerateLambda,
    ScanViolation,
    InvalidConfig,
    IoError,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it onto a certificate status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace orbitals
