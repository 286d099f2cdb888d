#include "swing/error.hpp"

namespace swing {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::HorizonExceeded: return "horizon-exceeded";
    case ErrorCode::OutOfBoundsPrice: return "out-of-bounds-price";
    case ErrorCode::MalformedRow: return "malformed-row";
    case ErrorCode::MappedStrikeNonpositive: return "mapped-strike-nonpositive";
    case ErrorCode::BelowSupport: return "below-support";
    case ErrorCode::MappedStrikeOutOfGrid: return "mapped-strike-out-of-grid";
    case ErrorCode::TridiagonalSolveFailure: return "tridiagonal-solve-failure";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::InfeasibleState: return "infeasible-state";
    case ErrorCode::StepAfterDone: return "step-after-done";
    case ErrorCode::NonfiniteGradient: return "nonfinite-gradient";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

} // namespace swing
