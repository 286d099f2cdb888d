#include "swing/numerics/interpolation.hpp"

#include "swing/error.hpp"

#include <algorithm>
#include <cmath>

namespace swing::numerics {

namespace {

// Fritsch-Butland harmonic-mean slope; zero at local extrema.
double interior_slope(double d_left, double d_right) {
    if (d_left * d_right <= 0.0) return 0.0;
    return 2.0 * d_left * d_right / (d_left + d_right);
}

double end_slope(double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
    return s;
}

double hermite(double y0, double y1, double m0, double m1, double h, double u) {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * h * m0
           + (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * h * m1;
}

} // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    require(!x_.empty() && x_.size() == y_.size(), "MonotoneCubic: knot/value size mismatch");
    for (std::size_t i = 1; i < x_.size(); ++i)
        require(x_[i] > x_[i - 1], "MonotoneCubic: knots must be strictly increasing");

    const std::size_t n = x_.size();
    slope_.assign(n, 0.0);
    if (n == 1) return;
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
        slope_[0] = slope_[1] = d[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) slope_[i] = interior_slope(d[i - 1], d[i]);
    slope_[0] = end_slope(h[0], h[1], d[0], d[1]);
    slope_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    return hermite(y_[i], y_[i + 1], slope_[i], slope_[i + 1], h, (x - x_[i]) / h);
}

double monotone_cubic_uniform(std::span<const double> y, double h, double x) {
    const std::size_t n = y.size();
    if (x <= 0.0) return y[0];
    const double pos = x / h;
    std::size_t i = static_cast<std::size_t>(pos);
    if (i >= n - 1) return y[n - 1];
    const double u = pos - static_cast<double>(i);

    auto secant = [&](std::size_t j) { return (y[j + 1] - y[j]) / h; };
    const double d = secant(i);
    double m0, m1;
    if (i == 0) {
        m0 = n > 2 ? end_slope(h, h, d, secant(1)) : d;
    } else {
        m0 = interior_slope(secant(i - 1), d);
    }
    if (i + 2 >= n) {
        m1 = n > 2 ? end_slope(h, h, d, secant(i - 1)) : d;
    } else {
        m1 = interior_slope(d, secant(i + 1));
    }
    return hermite(y[i], y[i + 1], m0, m1, h, u);
}

} // namespace swing::numerics
