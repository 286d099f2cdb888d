#include "swing/lsmc/pricer.hpp"

#include "swing/error.hpp"
#include "swing/mc/parallel.hpp"
#include "swing/numerics/statistics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace swing::lsmc {

namespace {

constexpr double kTol = 1e-9;
constexpr std::size_t kBlock = 4096;

struct Transition {
    double volume;
    std::size_t next;
};

// trans[i][l]: moves at date i from node l of C^{i-1}.
std::vector<std::vector<std::vector<Transition>>> transitions(const SwingContract& contract,
                                                             const ConsumptionGrid& grid) {
    const int nf = contract.n_f();
    std::vector<std::vector<std::vector<Transition>>> out(static_cast<std::size_t>(nf) + 1);
    for (int i = 1; i <= nf; ++i) {
        const auto& prev = grid.levels[static_cast<std::size_t>(i - 1)];
        const auto& next = grid.levels[static_cast<std::size_t>(i)];
        auto& date = out[static_cast<std::size_t>(i)];
        date.resize(prev.size());
        for (std::size_t l = 0; l < prev.size(); ++l) {
            for (double n : admissible_actions(contract, grid, i, prev[l])) {
                const double level = prev[l] + n;
                auto it = std::lower_bound(next.begin(), next.end(), level - kTol);
                if (it == next.end() || std::abs(*it - level) > kTol)
                    throw Error(ErrorCode::InfeasibleState, "admissible level missing from the grid");
                date[l].push_back({n, static_cast<std::size_t>(it - next.begin())});
            }
        }
    }
    return out;
}

double strike_of(const mc::FixingSet& fx, const SwingContract& c, std::size_t p) {
    return c.floating_strike ? fx.strikes[p] : c.strike;
}

// Terminal rule: the forced maximum when in the money, otherwise the forced minimum.
const Transition& terminal_choice(const std::vector<Transition>& moves, double F, double K) {
    return F > K ? moves.back() : moves.front();
}

RegressionBasis make_basis(const mc::FixingSet& fx, const SwingContract& c, std::size_t i) {
    RegressionBasis b;
    b.floating = c.floating_strike;
    const std::size_t n = fx.n_paths;
    double m = 0.0, mk = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        m += fx.F(p, i);
        if (b.floating) mk += fx.strikes[p];
    }
    m /= static_cast<double>(n);
    mk /= static_cast<double>(n);
    double v = 0.0, vk = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        v += (fx.F(p, i) - m) * (fx.F(p, i) - m);
        if (b.floating) vk += (fx.strikes[p] - mk) * (fx.strikes[p] - mk);
    }
    b.f_mean = m;
    b.f_scale = std::sqrt(v / static_cast<double>(n));
    b.k_mean = mk;
    b.k_scale = std::sqrt(vk / static_cast<double>(n));
    // a zero scale makes the normal matrix singular and triggers the fallback
    if (!(b.f_scale > 0.0)) b.f_scale = 0.0;
    if (!(b.k_scale > 0.0)) b.k_scale = 0.0;
    return b;
}

} // namespace

void RegressionBasis::eval(double F, double K, double* out) const {
    const double x = f_scale > 0.0 ? (F - f_mean) / f_scale : 0.0;
    out[0] = 1.0;
    out[1] = x;
    out[2] = x * x;
    if (floating) {
        const double y = k_scale > 0.0 ? (K - k_mean) / k_scale : 0.0;
        out[3] = y;
        out[4] = y * y;
        out[5] = x * y;
    }
}

double RegressionCoeffs::continuation(int i, std::size_t j, double F, double K) const {
    const auto& b = basis[static_cast<std::size_t>(i)];
    double phi[6];
    b.eval(F, K, phi);
    const auto& c = beta[static_cast<std::size_t>(i)][j];
    double v = 0.0;
    for (int q = 0; q < b.size(); ++q) v += c[static_cast<std::size_t>(q)] * phi[q];
    return v;
}

std::vector<double> payment_discounts(const SwingContract& contract, const market::DiscountCurve& dcurve) {
    std::vector<double> df;
    for (double t : contract.schedule.fixing_times) df.push_back(dcurve.discount(t + contract.pay_lag));
    return df;
}

RegressionCoeffs backward_regression(const mc::FixingSet& fx, const ConsumptionGrid& grid,
                                     const SwingContract& contract, const std::vector<double>& pay_df, int threads) {
    const int nf = contract.n_f();
    require(fx.n_fixings == static_cast<std::size_t>(nf), "backward_regression: fixing count mismatch");
    require(fx.n_paths > 0, "backward_regression: no paths");
    require(pay_df.size() == static_cast<std::size_t>(nf), "backward_regression: discount count mismatch");
    require(!contract.floating_strike || fx.strikes.size() == fx.n_paths, "backward_regression: missing strikes");
    require(grid.dates() == static_cast<std::size_t>(nf), "backward_regression: grid does not match contract");

    const auto trans = transitions(contract, grid);
    const std::size_t n = fx.n_paths;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;

    RegressionCoeffs rc;
    rc.basis.resize(static_cast<std::size_t>(nf));
    rc.beta.resize(static_cast<std::size_t>(nf));
    rc.fallback.assign(static_cast<std::size_t>(nf), false);
    for (int i = 1; i < nf; ++i) rc.basis[static_cast<std::size_t>(i)] = make_basis(fx, contract, static_cast<std::size_t>(i - 1));

    for (int i = nf; i >= 1; --i) {
        const auto& moves = trans[static_cast<std::size_t>(i)];
        const std::size_t n_prev = moves.size();
        const std::size_t n_next = grid.levels[static_cast<std::size_t>(i)].size();
        const bool regress = i > 1;
        const int nb = regress ? rc.basis[static_cast<std::size_t>(i - 1)].size() : 1;
        const std::size_t width = static_cast<std::size_t>(nb) * (n_prev + static_cast<std::size_t>(nb));
        std::vector<double> partial(n_blocks * width, 0.0);

        mc::parallel_for(n_blocks, threads, [&](std::size_t b0, std::size_t b1) {
            std::vector<double> cont(n_next, 0.0), value(n_prev);
            double phi[6], phi_prev[6];
            for (std::size_t blk = b0; blk < b1; ++blk) {
                double* acc = partial.data() + blk * width;
                const std::size_t p1 = std::min(n, (blk + 1) * kBlock);
                for (std::size_t p = blk * kBlock; p < p1; ++p) {
                    const double F = fx.F(p, static_cast<std::size_t>(i - 1));
                    const double K = strike_of(fx, contract, p);
                    const double gain = (F - K) * pay_df[static_cast<std::size_t>(i - 1)];
                    if (i < nf) {
                        const auto& bs = rc.basis[static_cast<std::size_t>(i)];
                        bs.eval(F, K, phi);
                        const auto& beta = rc.beta[static_cast<std::size_t>(i)];
                        for (std::size_t j = 0; j < n_next; ++j) {
                            double v = 0.0;
                            for (int q = 0; q < bs.size(); ++q) v += beta[j][static_cast<std::size_t>(q)] * phi[q];
                            cont[j] = v;
                        }
                        for (std::size_t l = 0; l < n_prev; ++l) {
                            double best = -std::numeric_limits<double>::infinity();
                            for (const auto& mv : moves[l]) {
                                const double v = mv.volume * gain + cont[mv.next];
                                if (v >= best) best = v;
                            }
                            value[l] = best;
                        }
                    } else {
                        for (std::size_t l = 0; l < n_prev; ++l)
                            value[l] = terminal_choice(moves[l], F, K).volume * gain;
                    }
                    if (regress) {
                        const auto& bp = rc.basis[static_cast<std::size_t>(i - 1)];
                        bp.eval(fx.F(p, static_cast<std::size_t>(i - 2)), K, phi_prev);
                        for (int q = 0; q < nb; ++q)
                            for (int r = 0; r < nb; ++r) acc[q * nb + r] += phi_prev[q] * phi_prev[r];
                        double* xty = acc + nb * nb;
                        for (std::size_t l = 0; l < n_prev; ++l)
                            for (int q = 0; q < nb; ++q) xty[l * static_cast<std::size_t>(nb) + static_cast<std::size_t>(q)] += phi_prev[q] * value[l];
                    } else {
                        acc[0] += value[0];
                    }
                }
            }
        });

        std::vector<double> total(width, 0.0);
        for (std::size_t blk = 0; blk < n_blocks; ++blk)
            for (std::size_t w = 0; w < width; ++w) total[w] += partial[blk * width + w];

        if (!regress) {
            rc.in_sample_value = total[0] / static_cast<double>(n);
            break;
        }

        Eigen::MatrixXd xtx(nb, nb);
        for (int q = 0; q < nb; ++q)
            for (int r = 0; r < nb; ++r) xtx(q, r) = total[static_cast<std::size_t>(q * nb + r)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xtx, Eigen::EigenvaluesOnly);
        const double lmin = eig.eigenvalues().minCoeff(), lmax = eig.eigenvalues().maxCoeff();
        const bool degenerate = !(lmin > 0.0) || lmax / lmin > kConditionLimit;
        rc.fallback[static_cast<std::size_t>(i - 1)] = degenerate;

        auto& beta = rc.beta[static_cast<std::size_t>(i - 1)];
        beta.assign(n_prev, {});
        const double* xty = total.data() + nb * nb;
        Eigen::LDLT<Eigen::MatrixXd> ldlt;
        if (!degenerate) ldlt.compute(xtx);
        for (std::size_t l = 0; l < n_prev; ++l) {
            if (degenerate) {
                beta[l][0] = xty[l * static_cast<std::size_t>(nb)] / static_cast<double>(n);
                continue;
            }
            Eigen::VectorXd rhs(nb);
            for (int q = 0; q < nb; ++q) rhs(q) = xty[l * static_cast<std::size_t>(nb) + static_cast<std::size_t>(q)];
            const Eigen::VectorXd sol = ldlt.solve(rhs);
            for (int q = 0; q < nb; ++q) beta[l][static_cast<std::size_t>(q)] = sol(q);
        }
    }
    return rc;
}

namespace {

struct ForwardTotals {
    numerics::SampleStats stats;
    std::vector<double> volume; // summed per date
    double extreme_decisions = 0.0;
};

using TransitionTable = std::vector<std::vector<std::vector<Transition>>>;

void forward_accumulate(const RegressionCoeffs& coeffs, const mc::FixingSet& fx, const TransitionTable& trans,
                        const SwingContract& contract, const std::vector<double>& pay_df, int threads,
                        ForwardTotals& totals) {
    const int nf = contract.n_f();
    require(fx.n_fixings == static_cast<std::size_t>(nf), "forward_price: fixing count mismatch");
    require(pay_df.size() == static_cast<std::size_t>(nf), "forward_price: discount count mismatch");
    require(coeffs.beta.size() == static_cast<std::size_t>(nf), "forward_price: coefficients do not match contract");
    require(!contract.floating_strike || fx.strikes.size() == fx.n_paths, "forward_price: missing strikes");
    const std::size_t n = fx.n_paths;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;

    std::vector<double> rewards(n);
    const std::size_t width = static_cast<std::size_t>(nf) + 1;
    std::vector<double> partial(n_blocks * width, 0.0);

    mc::parallel_for(n_blocks, threads, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t blk = b0; blk < b1; ++blk) {
            double* acc = partial.data() + blk * width;
            const std::size_t p1 = std::min(n, (blk + 1) * kBlock);
            for (std::size_t p = blk * kBlock; p < p1; ++p) {
                const double K = strike_of(fx, contract, p);
                std::size_t node = 0;
                double C = 0.0, reward = 0.0;
                for (int i = 1; i <= nf; ++i) {
                    const double F = fx.F(p, static_cast<std::size_t>(i - 1));
                    const double gain = (F - K) * pay_df[static_cast<std::size_t>(i - 1)];
                    const auto& moves = trans[static_cast<std::size_t>(i)][node];
                    const Transition* pick = nullptr;
                    if (i == nf) {
                        pick = &terminal_choice(moves, F, K);
                    } else {
                        double best = -std::numeric_limits<double>::infinity();
                        for (const auto& mv : moves) {
                            const double v = mv.volume * gain + coeffs.continuation(i, mv.next, F, K);
                            if (v >= best) {
                                best = v;
                                pick = &mv;
                            }
                        }
                    }
                    const double vol = pick->volume;
                    const auto [D, U] = global_bounds(contract, i);
                    C += vol;
                    if (vol < contract.N_m - kTol || vol > contract.N_M + kTol || C < D - 1e-7 || C > U + 1e-7)
                        throw Error(ErrorCode::InfeasibleState, "forward plan breaks a volume constraint");
                    reward += vol * gain;
                    acc[i - 1] += vol;
                    if (std::abs(vol - moves.front().volume) <= kTol || std::abs(vol - moves.back().volume) <= kTol)
                        acc[nf] += 1.0;
                    node = pick->next;
                }
                rewards[p] = reward;
            }
        }
    });

    for (double r : rewards) totals.stats.add(r);
    totals.volume.resize(static_cast<std::size_t>(nf), 0.0);
    for (std::size_t blk = 0; blk < n_blocks; ++blk) {
        for (int i = 0; i < nf; ++i) totals.volume[static_cast<std::size_t>(i)] += partial[blk * width + static_cast<std::size_t>(i)];
        totals.extreme_decisions += partial[blk * width + static_cast<std::size_t>(nf)];
    }
}

PricingResult finish(const ForwardTotals& totals, int nf) {
    PricingResult out;
    out.price = totals.stats.mean();
    out.std_error = totals.stats.std_error();
    out.n_paths = totals.stats.count();
    const double n = static_cast<double>(out.n_paths);
    for (double v : totals.volume) out.consumption_profile.push_back(v / n);
    out.bang_bang_fraction = totals.extreme_decisions / (n * nf);
    return out;
}

} // namespace

PricingResult forward_price(const RegressionCoeffs& coeffs, const mc::FixingSet& fx, const ConsumptionGrid& grid,
                            const SwingContract& contract, const std::vector<double>& pay_df, int threads) {
    require(fx.n_paths > 0, "forward_price: no paths");
    ForwardTotals totals;
    forward_accumulate(coeffs, fx, transitions(contract, grid), contract, pay_df, threads, totals);
    return finish(totals, contract.n_f());
}

namespace {

mc::FixingSet simulate_fixings(const SwingContract& contract, const lv::ModelParams& params,
                               const market::InitialCurve& curve, std::size_t n_paths, std::uint64_t seed,
                               numerics::Domain domain, std::size_t first_path, int threads,
                               const std::optional<spike::SpikeParams>& spikes) {
    const auto paths = mc::simulate_spot(params, contract.schedule, n_paths, seed, domain, first_path, threads, spikes);
    auto fx = mc::day_ahead_fixings(paths, params, curve, contract.schedule);
    if (contract.floating_strike)
        fx.strikes = mc::floating_strikes(paths, params, curve, contract.schedule, contract.month);
    return fx;
}

} // namespace

PricingResult price_swing(const SwingContract& contract, const lv::ModelParams& params,
                          const market::InitialCurve& curve, const market::DiscountCurve& dcurve,
                          const LsmcConfig& config, std::uint64_t seed,
                          const std::optional<spike::SpikeParams>& spikes) {
    contract.validate();
    params.validate();
    require(config.regression_paths > 0 && config.pricing_paths > 0 && config.chunk_paths > 0,
            "price_swing: path counts must be positive");
    const auto grid = build_grid(contract);
    const auto df = payment_discounts(contract, dcurve);
    const auto reg = simulate_fixings(contract, params, curve, config.regression_paths, seed,
                                      numerics::Domain::Regression, 0, config.threads, spikes);
    const auto coeffs = backward_regression(reg, grid, contract, df, config.threads);

    const auto trans = transitions(contract, grid);
    ForwardTotals totals;
    for (std::size_t first = 0; first < config.pricing_paths; first += config.chunk_paths) {
        const std::size_t m = std::min(config.chunk_paths, config.pricing_paths - first);
        const auto fx = simulate_fixings(contract, params, curve, m, seed, numerics::Domain::Pricing, first,
                                         config.threads, spikes);
        forward_accumulate(coeffs, fx, trans, contract, df, config.threads, totals);
    }
    auto out = finish(totals, contract.n_f());
    out.pricing_seed = seed;
    out.regression_seed = seed;
    return out;
}

} // namespace swing::lsmc
