#include "swing/numerics/tridiagonal.hpp"

#include "swing/error.hpp"

#include <cmath>

namespace swing::numerics {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> scratch) {
    const std::size_t n = diag.size();
    double pivot = diag[0];
    if (!(std::abs(pivot) > 0.0)) throw Error(ErrorCode::TridiagonalSolveFailure, "zero pivot at row 0");
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i] * scratch[i];
        if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot))
            throw Error(ErrorCode::TridiagonalSolveFailure, "zero pivot during elimination");
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

} // namespace swing::numerics
