#include "zpdehn/errors.hpp"

namespace zpdehn {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::RankPreconditionViolated: return "RankPreconditionViolated";
        case ErrorKind::ConstraintViolated: return "ConstraintViolated";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::NotInSpan: return "NotInSpan";
        case ErrorKind::NotABasis: return "NotABasis";
        case ErrorKind::CascadeExhausted: return "CascadeExhausted";
        case ErrorKind::NewtonDiverged: return "NewtonDiverged";
        case ErrorKind::NotAnomalous: return "NotAnomalous";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::DegenerateForms: return "DegenerateForms";
        case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
        case ErrorKind::OutOfTrustRadius: return "OutOfTrustRadius";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

}  // namespace zpdehn
