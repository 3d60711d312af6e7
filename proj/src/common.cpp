#include "orthantloop/common.hpp"

namespace oloop {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonPositiveMass: return "NonPositiveMass";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::TailDominates: return "TailDominates";
        case ErrorKind::NonPositiveDiagonal: return "NonPositiveDiagonal";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::DegenerateConditioning: return "DegenerateConditioning";
        case ErrorKind::DivergentIntegral: return "DivergentIntegral";
        case ErrorKind::AssemblyLimit: return "AssemblyLimit";
        case ErrorKind::InconsistentMomenta: return "InconsistentMomenta";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

const char* method_name(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::contour: return "contour";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

}  // namespace oloop
