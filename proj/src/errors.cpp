#include "levyerg/errors.hpp"

namespace levyerg {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ModelInvalid: return "model-invalid";
        case ErrorKind::Divergence: return "divergence";
        case ErrorKind::TailIndexMismatch: return "tail-index-mismatch";
        case ErrorKind::QuadratureFailure: return "quadrature-failure";
        case ErrorKind::SeriesDivergence: return "series-divergence";
        case ErrorKind::InvalidRateFunction: return "invalid-rate-function";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::OutOfRange: return "out-of-range";
        case ErrorKind::Explosion: return "explosion";
        case ErrorKind::Cutoff: return "cutoff";
        case ErrorKind::BalanceViolation: return "balance-violation";
        case ErrorKind::NotApplicable: return "not-applicable";
        case ErrorKind::NoInwardDrift: return "no-inward-drift";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

}  // namespace levyerg
