#include "swing/ppo/env.hpp"

#include "swing/error.hpp"

#include <algorithm>
#include <cmath>

namespace swing::ppo {

SwingEnv::SwingEnv(lsmc::SwingContract contract, double F_ref, std::vector<double> pay_df)
    : contract_(std::move(contract)), F_ref_(F_ref), pay_df_(std::move(pay_df)) {
    contract_.validate();
    require(F_ref_ > 0.0, "SwingEnv: reference price must be positive");
    require(pay_df_.size() == static_cast<std::size_t>(contract_.n_f()), "SwingEnv: discount count mismatch");
    fixings_.assign(static_cast<std::size_t>(contract_.n_f()), F_ref_);
    strike_ = contract_.strike;
}

void SwingEnv::reset(const double* fixings, double strike) {
    std::copy(fixings, fixings + contract_.n_f(), fixings_.begin());
    strike_ = strike;
    i_ = 0;
    C_ = 0.0;
}

EnvState SwingEnv::state() const {
    if (done()) throw Error(ErrorCode::StepAfterDone, "episode finished");
    EnvState s;
    const int nf = contract_.n_f();
    s.time = nf > 1 ? static_cast<double>(i_) / (nf - 1) - 0.5 : 0.0;
    const auto [D, U] = lsmc::global_bounds(contract_, i_);
    s.consumption_norm = U - D > 1e-12 ? std::clamp((C_ - D) / (U - D), 0.0, 1.0) - 0.5 : 0.0;
    s.log_moneyness = std::log(fixings_[static_cast<std::size_t>(i_)] / F_ref_);
    s.strike_norm = contract_.floating_strike ? std::log(strike_ / F_ref_) : 0.0;
    return s;
}

void SwingEnv::features(double* out) const {
    const auto s = state();
    out[0] = s.time;
    out[1] = s.consumption_norm;
    out[2] = s.log_moneyness;
    if (contract_.floating_strike) out[3] = s.strike_norm;
}

std::pair<double, double> SwingEnv::admissible() const {
    if (done()) throw Error(ErrorCode::StepAfterDone, "episode finished");
    return lsmc::admissible_range(contract_, i_ + 1, C_);
}

StepResult SwingEnv::step(double raw) {
    const auto [lo, hi] = admissible();
    const double u = std::isfinite(raw) ? std::clamp(raw, 0.0, 1.0) : 0.0;
    return apply(hi > lo ? lo + u * (hi - lo) : lo);
}

StepResult SwingEnv::step_class(int cls) {
    const auto [lo, hi] = admissible();
    return apply(cls == 1 ? std::max(lo, hi) : lo);
}

StepResult SwingEnv::apply(double volume) {
    const auto i = static_cast<std::size_t>(i_);
    const double reward = volume * (fixings_[i] - strike_) * pay_df_[i];
    C_ += volume;
    ++i_;
    const auto [D, U] = lsmc::global_bounds(contract_, i_);
    if (C_ < D - 1e-7 || C_ > U + 1e-7) throw Error(ErrorCode::InfeasibleState, "episode breaks a volume constraint");
    return {volume, reward, done()};
}

} // namespace swing::ppo
