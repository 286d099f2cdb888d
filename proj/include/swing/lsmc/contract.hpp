#pragma once

#include "swing/mc/simulation.hpp"

#include <utility>
#include <vector>

namespace swing::lsmc {

enum class SwingMode { Continuous, BangBang };

/// Daily volumes in [N_m, N_M], total volume in [C_m, C_M], bought at a
/// fixed strike or at the average of a month futures over a strike window.
struct SwingContract {
    mc::SimulationSchedule schedule;
    double N_m = 0.0;
    double N_M = 1.0;
    double C_m = 0.0;
    double C_M = 1.0;
    bool floating_strike = false;
    double strike = 0.0;    // fixed strike, EUR/MWh
    mc::MonthContract month{}; // floating strike reference
    double pay_lag = market::kOneDay;
    SwingMode mode = SwingMode::Continuous;
    double delta = 1.0 / 6.0; // grid spacing bound in Continuous mode

    int n_f() const noexcept { return static_cast<int>(schedule.fixing_times.size()); }
    void validate() const;
};

/// (D_i, U_i): the cumulative consumption after date i that still allows
/// the global constraints. i = 0 gives (0, 0).
std::pair<double, double> global_bounds(const SwingContract& contract, int i);

/// Sorted cumulative levels per date, levels[0] = {0}.
struct ConsumptionGrid {
    std::vector<std::vector<double>> levels;
    std::vector<std::vector<bool>> bang_bang;

    std::size_t dates() const noexcept { return levels.size() - 1; }
};

ConsumptionGrid build_grid(const SwingContract& contract);

/// Consumption levels at date i reachable from C_prev: grid levels C with
/// C - C_prev in [N_m, N_M]. In BangBang mode only the two extremes. Throws
/// InfeasibleState if nothing is admissible.
std::vector<double> admissible_actions(const SwingContract& contract, const ConsumptionGrid& grid, int i, double C_prev);

/// Range [lo, hi] of admissible daily volumes at date i from C_prev.
std::pair<double, double> admissible_range(const SwingContract& contract, int i, double C_prev);

} // namespace swing::lsmc
