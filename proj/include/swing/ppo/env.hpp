#pragma once

#include "swing/lsmc/contract.hpp"

#include <vector>

namespace swing::ppo {

/// Observation at a decision date. Consumption before the date is remapped
/// linearly from [D_{i-1}, U_{i-1}] to [-0.5, 0.5]; so is the date index.
struct EnvState {
    double time = 0.0;
    double consumption_norm = 0.0;
    double log_moneyness = 0.0;
    double strike_norm = 0.0; // floating strike only
};

struct StepResult {
    double volume;
    double reward; // volume (F - K) times the payment discount factor
    bool done;
};

/// One swing contract path at a time: reset with the path's fixings, then
/// one step per fixing date.
class SwingEnv {
public:
    /// F_ref is the day-ahead forward at the first fixing date.
    SwingEnv(lsmc::SwingContract contract, double F_ref, std::vector<double> pay_df);

    int n_inputs() const noexcept { return contract_.floating_strike ? 4 : 3; }
    int n_dates() const noexcept { return contract_.n_f(); }
    const lsmc::SwingContract& contract() const noexcept { return contract_; }
    double reference_price() const noexcept { return F_ref_; }

    void reset(const double* fixings, double strike);
    bool done() const noexcept { return i_ >= contract_.n_f(); }
    /// 0-based index of the next decision date.
    int date() const noexcept { return i_; }
    double consumption() const noexcept { return C_; }

    EnvState state() const;
    void features(double* out) const;
    /// Admissible daily volumes [lo, hi] at the current date.
    std::pair<double, double> admissible() const;

    /// Clips raw to [0, 1] and maps it linearly onto [lo, hi].
    StepResult step(double raw);
    /// Class 0 takes lo, class 1 takes hi.
    StepResult step_class(int cls);

private:
    StepResult apply(double volume);

    lsmc::SwingContract contract_;
    double F_ref_;
    std::vector<double> pay_df_;
    std::vector<double> fixings_;
    double strike_ = 0.0;
    int i_ = 0;
    double C_ = 0.0;
};

} // namespace swing::ppo
