#include "swing/lsmc/contract.hpp"

#include "swing/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace swing::lsmc {

namespace {
constexpr double kLevelTol = 1e-9;
}

void SwingContract::validate() const {
    schedule.validate();
    const double nf = n_f();
    require(N_m >= 0.0 && N_m < N_M, "contract: need 0 <= N_m < N_M");
    require(C_m >= 0.0 && C_m <= C_M, "contract: need 0 <= C_m <= C_M");
    require(nf * N_m <= C_M + kLevelTol && C_m <= nf * N_M + kLevelTol, "contract: infeasible global constraints");
    require(mode == SwingMode::BangBang || delta > 0.0, "contract: delta must be positive");
    require(pay_lag >= 0.0, "contract: negative pay lag");
    if (floating_strike) require(!schedule.strike_times.empty(), "contract: floating strike needs a strike window");
    else require(strike >= 0.0, "contract: negative strike");
    if (!schedule.strike_times.empty())
        require(schedule.strike_times.back() < schedule.fixing_times.front(), "contract: strike window must precede delivery");
}

std::pair<double, double> global_bounds(const SwingContract& c, int i) {
    const int nf = c.n_f();
    require(i >= 0 && i <= nf, "global_bounds: date index out of range");
    if (i == 0) return {0.0, 0.0};
    const double U = std::min(c.C_M - c.N_m * (nf - i), i * c.N_M);
    const double D = std::max(c.C_m - c.N_M * (nf - i), i * c.N_m);
    return {D, U};
}

namespace {

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > kLevelTol) out.push_back(x);
    v.swap(out);
}

} // namespace

ConsumptionGrid build_grid(const SwingContract& contract) {
    contract.validate();
    const int nf = contract.n_f();
    ConsumptionGrid grid;
    grid.levels.push_back({0.0});
    grid.bang_bang.push_back({true});
    for (int i = 1; i <= nf; ++i) {
        const auto [D, U] = global_bounds(contract, i);
        std::vector<double> bb;
        for (double x : grid.levels[static_cast<std::size_t>(i - 1)]) {
            bb.push_back(std::min(U, x + contract.N_M));
            bb.push_back(std::max(D, x + contract.N_m));
        }
        sort_unique(bb);
        std::vector<double> levels = bb;
        if (contract.mode == SwingMode::Continuous) {
            for (std::size_t j = 0; j + 1 < bb.size(); ++j) {
                const double gap = bb[j + 1] - bb[j];
                const int pieces = static_cast<int>(std::ceil(gap / contract.delta - 1e-9));
                for (int m = 1; m < pieces; ++m) levels.push_back(bb[j] + gap * m / pieces);
            }
            sort_unique(levels);
        }
        std::vector<bool> marks(levels.size(), false);
        std::size_t b = 0;
        for (std::size_t j = 0; j < levels.size() && b < bb.size(); ++j)
            if (std::abs(levels[j] - bb[b]) <= kLevelTol) {
                marks[j] = true;
                ++b;
            }
        grid.levels.push_back(std::move(levels));
        grid.bang_bang.push_back(std::move(marks));
    }
    return grid;
}

std::pair<double, double> admissible_range(const SwingContract& c, int i, double C_prev) {
    const auto [D, U] = global_bounds(c, i);
    return {std::max(c.N_m, D - C_prev), std::min(c.N_M, U - C_prev)};
}

std::vector<double> admissible_actions(const SwingContract& contract, const ConsumptionGrid& grid, int i, double C_prev) {
    require(i >= 1 && static_cast<std::size_t>(i) < grid.levels.size(), "admissible_actions: date out of range");
    const auto [lo, hi] = admissible_range(contract, i, C_prev);
    std::vector<double> out;
    if (hi < lo - kLevelTol) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "no admissible volume at date %d from level %g", i, C_prev);
        throw Error(ErrorCode::InfeasibleState, buf);
    }
    if (contract.mode == SwingMode::BangBang) {
        out.push_back(lo);
        if (hi - lo > kLevelTol) out.push_back(hi);
        return out;
    }
    for (double level : grid.levels[static_cast<std::size_t>(i)]) {
        const double n = level - C_prev;
        if (n >= lo - kLevelTol && n <= hi + kLevelTol) out.push_back(n);
    }
    if (out.empty()) throw Error(ErrorCode::InfeasibleState, "grid has no level in the admissible range");
    return out;
}

} // namespace swing::lsmc
