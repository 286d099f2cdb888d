#pragma once

#include "swing/numerics/interpolation.hpp"

#include <string>
#include <vector>

namespace swing::lv {

inline constexpr double kVolFloor = 1e-4;
inline constexpr double kVolCap = 5.0;

/// eta(t, k) on a knot grid. Row i holds the vols used for t in
/// (t_{i-1}, t_i]; times past the last knot reuse the last row. Within a row
/// the k-profile is a monotone cubic, flat outside the knot range. Every
/// value is clamped into [kVolFloor, kVolCap].
class LocalVolSurface {
public:
    LocalVolSurface() : LocalVolSurface(flat(0.2)) {}
    LocalVolSurface(std::vector<double> time_knots, std::vector<double> k_knots, std::vector<double> values);

    static LocalVolSurface flat(double vol);

    double operator()(double t, double k) const;
    /// Index of the row that governs time t.
    std::size_t slice_index(double t) const;
    double slice_value(std::size_t row, double k) const { return rows_[row](k); }

    const std::vector<double>& time_knots() const noexcept { return t_; }
    const std::vector<double>& k_knots() const noexcept { return k_; }
    /// Row-major (time, k) values after clamping.
    const std::vector<double>& values() const noexcept { return v_; }

    LocalVolSurface with_values(std::vector<double> values) const;

    void save_csv(const std::string& path) const;
    static LocalVolSurface load_csv(const std::string& path);

private:
    std::vector<double> t_;
    std::vector<double> k_;
    std::vector<double> v_;
    std::vector<numerics::MonotoneCubic> rows_;
};

/// Constant mean reversion a and the spot local vol eta.
struct ModelParams {
    double a = 0.0;
    LocalVolSurface localvol;

    void validate() const;
};

} // namespace swing::lv
