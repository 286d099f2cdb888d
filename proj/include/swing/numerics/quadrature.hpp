#pragma once

#include <array>

namespace swing::numerics {

/// Eight-point Gauss-Legendre rule on [a, b]. Exact for polynomials of degree
/// fifteen; used on daily cells where the integrands are smooth.
template <class F>
double gauss_legendre8(F&& f, double a, double b) {
    static constexpr std::array<double, 4> nodes{0.1834346424956498, 0.5255324099163290,
                                                 0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> weights{0.3626837833783620, 0.3137066458778873,
                                                   0.2223810344533745, 0.1012285362903763};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double dx = half * nodes[i];
        sum += weights[i] * (f(mid - dx) + f(mid + dx));
    }
    return sum * half;
}

} // namespace swing::numerics
