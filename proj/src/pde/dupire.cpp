#include "swing/pde/dupire.hpp"

#include "swing/error.hpp"
#include "swing/market/black76.hpp"
#include "swing/numerics/interpolation.hpp"
#include "swing/numerics/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace swing::pde {

void PdeGrid::validate() const {
    require(k_max > 1.0, "PdeGrid: k_max must exceed 1");
    require(nodes >= 5, "PdeGrid: too few nodes");
    require(dt > 0.0, "PdeGrid: dt must be positive");
    const double at_one = (nodes - 1) / k_max;
    require(std::abs(at_one - std::round(at_one)) < 1e-9, "PdeGrid: k = 1 must fall on a node");
}

NormalizedCallSurface::NormalizedCallSurface(PdeGrid grid, std::vector<double> times, std::vector<double> values,
                                             SolveDiagnostics diag)
    : grid_(grid), times_(std::move(times)), values_(std::move(values)), diag_(diag) {
    require(values_.size() == times_.size() * static_cast<std::size_t>(grid_.nodes), "surface size mismatch");
}

std::span<const double> NormalizedCallSurface::slice(std::size_t n) const {
    return {values_.data() + n * static_cast<std::size_t>(grid_.nodes), static_cast<std::size_t>(grid_.nodes)};
}

double NormalizedCallSurface::slice_value(std::size_t n, double k) const {
    return numerics::monotone_cubic_uniform(slice(n), grid_.dk(), k);
}

double NormalizedCallSurface::operator()(double t, double k) const {
    if (k <= 0.0) return 1.0 - k;
    if (k >= grid_.k_max) return 0.0;
    require(t >= 0.0 && t <= times_.back() + 1e-9, "NormalizedCallSurface: time outside the solved horizon");
    const double pos = t / grid_.dt;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-7) return slice_value(std::min(static_cast<std::size_t>(nearest), times_.size() - 1), k);
    const std::size_t n = std::min(static_cast<std::size_t>(pos), times_.size() - 2);
    const double w = (t - times_[n]) / (times_[n + 1] - times_[n]);
    return (1.0 - w) * slice_value(n, k) + w * slice_value(n + 1, k);
}

void NormalizedCallSurface::save_csv(const std::string& path, int t_stride, int k_stride) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "t,k,c\n";
    char buf[96];
    const double dk = grid_.dk();
    for (std::size_t n = 0; n < times_.size(); n += static_cast<std::size_t>(std::max(1, t_stride))) {
        const auto s = slice(n);
        for (int j = 0; j < grid_.nodes; j += std::max(1, k_stride)) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.15g\n", times_[n], j * dk, s[static_cast<std::size_t>(j)]);
            out << buf;
        }
    }
}

namespace {

struct Operator {
    std::vector<double> lower, diag, upper;
};

// Implicit operator I - dt L on the interior nodes with Dirichlet rows at both ends.
void assemble(Operator& op, const std::vector<double>& k, const std::vector<double>& vol, double a, double dt, double h,
              int& upwind) {
    const std::size_t n = k.size();
    op.lower.assign(n, 0.0);
    op.diag.assign(n, 1.0);
    op.upper.assign(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double d = 0.5 * k[j] * k[j] * vol[j] * vol[j];
        const double b = -a * (1.0 - k[j]);
        double lo = d / (h * h), up = d / (h * h), mid = -2.0 * d / (h * h) - a;
        if (std::abs(b) * h > 2.0 * d) {
            ++upwind;
            if (b > 0.0) {
                up += b / h;
                mid -= b / h;
            } else {
                lo -= b / h;
                mid += b / h;
            }
        } else {
            lo -= b / (2.0 * h);
            up += b / (2.0 * h);
        }
        op.lower[j] = -dt * lo;
        op.diag[j] = 1.0 - dt * mid;
        op.upper[j] = -dt * up;
    }
}

template <class VolAt, class MeanReversionAt>
NormalizedCallSurface solve(VolAt&& vol_at, MeanReversionAt&& a_at, double horizon, const PdeGrid& grid,
                            bool constant_in_slice) {
    grid.validate();
    require(horizon > 0.0, "solve_dupire: horizon must be positive");
    const std::size_t nk = static_cast<std::size_t>(grid.nodes);
    const double h = grid.dk();
    const int steps = static_cast<int>(std::ceil(horizon / grid.dt - 1e-9));

    std::vector<double> k(nk);
    for (std::size_t j = 0; j < nk; ++j) k[j] = static_cast<double>(j) * h;

    std::vector<double> times(static_cast<std::size_t>(steps) + 1);
    std::vector<double> values((static_cast<std::size_t>(steps) + 1) * nk);
    for (std::size_t j = 0; j < nk; ++j) values[j] = std::max(1.0 - k[j], 0.0);
    values[0] = 1.0;
    values[nk - 1] = 0.0;

    SolveDiagnostics diag;
    Operator op;
    std::vector<double> vol(nk, 0.0), rhs(nk), scratch(nk);
    long cached_key = -1;
    for (int step = 0; step < steps; ++step) {
        const double t_mid = (step + 0.5) * grid.dt;
        const long key = constant_in_slice ? vol_at.slice_key(t_mid) : step;
        if (key != cached_key) {
            for (std::size_t j = 1; j + 1 < nk; ++j) vol[j] = vol_at(t_mid, k[j]);
            assemble(op, k, vol, a_at(t_mid), grid.dt, h, diag.upwind_nodes);
            cached_key = key;
        }
        const double* prev = values.data() + static_cast<std::size_t>(step) * nk;
        double* next = values.data() + static_cast<std::size_t>(step + 1) * nk;
        std::copy(prev, prev + nk, rhs.begin());
        rhs[0] = 1.0;
        rhs[nk - 1] = 0.0;
        numerics::solve_tridiagonal(op.lower, op.diag, op.upper, rhs, scratch);
        std::copy(rhs.begin(), rhs.end(), next);
        times[static_cast<std::size_t>(step) + 1] = (step + 1) * grid.dt;

        for (std::size_t j = 0; j < nk; ++j) {
            const double lower_bound = std::max(1.0 - k[j], 0.0);
            diag.max_bound_violation = std::max({diag.max_bound_violation, lower_bound - next[j], next[j] - 1.0});
            if (j > 0 && j + 1 < nk)
                diag.max_convexity_violation =
                    std::max(diag.max_convexity_violation, -(next[j + 1] - 2.0 * next[j] + next[j - 1]));
        }
        if (!std::isfinite(next[nk / 2])) throw Error(ErrorCode::TridiagonalSolveFailure, "nonfinite PDE solution");
    }
    return NormalizedCallSurface(grid, std::move(times), std::move(values), diag);
}

struct SurfaceVol {
    const lv::LocalVolSurface& s;
    double operator()(double t, double k) const { return s(t, k); }
    long slice_key(double t) const { return static_cast<long>(s.slice_index(t)); }
};

struct CallbackVol {
    const DupireCoefficients& c;
    double operator()(double t, double k) const { return c.vol(t, k); }
    long slice_key(double) const { return 0; }
};

} // namespace

NormalizedCallSurface solve_dupire(const lv::ModelParams& params, double horizon, const PdeGrid& grid) {
    params.validate();
    return solve(SurfaceVol{params.localvol}, [&](double) { return params.a; }, horizon, grid, true);
}

NormalizedCallSurface solve_dupire(const DupireCoefficients& coeffs, double horizon, const PdeGrid& grid) {
    require(coeffs.vol && coeffs.mean_reversion, "solve_dupire: coefficient callbacks missing");
    return solve(CallbackVol{coeffs}, coeffs.mean_reversion, horizon, grid, false);
}

double option_on_futures(const NormalizedCallSurface& surface, const lv::ModelParams& params, double t_expiry,
                         double T_futures, double K, double F0T, double df, double period_weight) {
    require(t_expiry <= T_futures + 1e-12, "option_on_futures: expiry after futures maturity");
    require(F0T > 0.0 && K >= 0.0 && period_weight > 0.0, "option_on_futures: bad inputs");
    const double decay = std::exp(-params.a * (T_futures - t_expiry));
    const double k = 1.0 - (1.0 - K / F0T) / (decay * period_weight);
    if (k >= surface.grid().k_max) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "strike %g maps to k = %g beyond k_max = %g", K, k, surface.grid().k_max);
        throw Error(ErrorCode::MappedStrikeOutOfGrid, buf);
    }
    return df * F0T * period_weight * decay * surface(t_expiry, k);
}

double model_iv(const NormalizedCallSurface& surface, const lv::ModelParams& params, const market::VanillaQuote& quote,
                const market::InitialCurve& curve, const market::DiscountCurve& dcurve) {
    const double F0 = market::period_futures(curve, quote.futures_maturity, quote.delivery);
    const double G = lv::DeliveryRemap(curve, params.a, quote.delivery).G(quote.futures_maturity);
    const double df = dcurve.discount(quote.option_expiry);
    const double price =
        option_on_futures(surface, params, quote.option_expiry, quote.futures_maturity, quote.strike, F0, df, G);
    return market::implied_vol(price, F0, quote.strike, quote.option_expiry, df);
}

double atm_iv(const NormalizedCallSurface& surface, const lv::ModelParams& params, double expiry, double T,
              const market::DeliveryPeriod& dp, const market::InitialCurve& curve, const market::DiscountCurve& dcurve) {
    market::VanillaQuote q;
    q.kind = expiry < T - 1e-9 ? market::OptionKind::MCO : market::OptionKind::PVO;
    q.option_expiry = expiry;
    q.futures_maturity = T;
    q.delivery = dp;
    q.strike = market::period_futures(curve, T, dp);
    q.implied_vol = 1.0;
    return model_iv(surface, params, q, curve, dcurve);
}

double vol_drop(const NormalizedCallSurface& surface, const lv::ModelParams& params, double front_ltd,
                double back_maturity, const market::DeliveryPeriod& dp, const market::InitialCurve& curve,
                const market::DiscountCurve& dcurve) {
    require(front_ltd <= back_maturity, "vol_drop: front date after back maturity");
    const double pvo = atm_iv(surface, params, back_maturity, back_maturity, dp, curve, dcurve);
    const double mco = atm_iv(surface, params, front_ltd, back_maturity, dp, curve, dcurve);
    return pvo - mco;
}

} // namespace swing::pde
