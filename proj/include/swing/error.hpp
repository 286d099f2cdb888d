#pragma once

#include <stdexcept>
#include <string>

namespace swing {

enum class ErrorCode {
    InvalidArgument,
    HorizonExceeded,
    OutOfBoundsPrice,
    MalformedRow,
    MappedStrikeNonpositive,
    BelowSupport,
    MappedStrikeOutOfGrid,
    TridiagonalSolveFailure,
    NoConvergence,
    InfeasibleState,
    StepAfterDone,
    NonfiniteGradient,
    Config,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the engine. The code lets the
/// command line map failures onto exit statuses without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, const char* what) {
    if (!condition) throw Error(ErrorCode::InvalidArgument, what);
}

} // namespace swing
