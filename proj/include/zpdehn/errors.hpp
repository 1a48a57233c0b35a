#pragma once

#include <stdexcept>
#include <string>

namespace zpdehn {

enum class ErrorKind {
    BudgetExceeded,
    RankPreconditionViolated,
    ConstraintViolated,
    HypothesisViolated,
    NotInSpan,
    NotABasis,
    CascadeExhausted,
    NewtonDiverged,
    NotAnomalous,
    PrecisionExhausted,
    FieldMismatch,
    DegenerateForms,
    PrecisionTooLow,
    OutOfTrustRadius,
    InvalidArgument,
    ParseError,
    InvariantViolation,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace zpdehn
