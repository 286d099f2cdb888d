#pragma once

#include <span>
#include <vector>

namespace swing::numerics {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes). Monotone data stays monotone between knots; outside the knot
/// range the end values are held flat.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

    const std::vector<double>& knots() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

/// Monotone cubic evaluation on a uniform grid `x_j = j * h`, j = 0..n-1,
/// using only the four nodes around `x`. No allocation; `x` must lie in
/// [0, (n-1) h].
double monotone_cubic_uniform(std::span<const double> y, double h, double x);

} // namespace swing::numerics
