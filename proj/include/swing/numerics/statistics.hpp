#pragma once

#include <cmath>
#include <cstddef>

namespace swing::numerics {

/// Sample mean / standard error accumulator. Kahan-compensated sums keep the
/// result independent of block sizes as long as samples arrive in path order.
class SampleStats {
public:
    void add(double x) {
        kahan_add(sum_, sum_c_, x);
        kahan_add(sum_sq_, sum_sq_c_, x * x);
        ++n_;
    }

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return n_ ? sum_ / static_cast<double>(n_) : 0.0; }

    double variance() const noexcept {
        if (n_ < 2) return 0.0;
        const double n = static_cast<double>(n_);
        const double m = sum_ / n;
        const double v = (sum_sq_ - n * m * m) / (n - 1.0);
        return v > 0.0 ? v : 0.0;
    }

    double std_error() const noexcept {
        return n_ ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

private:
    static void kahan_add(double& sum, double& comp, double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double sum_ = 0.0, sum_c_ = 0.0;
    double sum_sq_ = 0.0, sum_sq_c_ = 0.0;
    std::size_t n_ = 0;
};

} // namespace swing::numerics
