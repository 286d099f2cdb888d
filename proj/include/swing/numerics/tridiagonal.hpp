#pragma once

#include <span>

namespace swing::numerics {

/// Solves a tridiagonal system in place with the Thomas recurrence.
/// `lower[0]` and `upper[n-1]` are ignored. `rhs` is overwritten with the
/// solution; `scratch` must hold n values. Throws TridiagonalSolveFailure on a
/// vanishing pivot.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> scratch);

} // namespace swing::numerics
