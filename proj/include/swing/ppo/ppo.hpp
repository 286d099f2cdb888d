#pragma once

#include "swing/lsmc/pricer.hpp"
#include "swing/ppo/env.hpp"
#include "swing/ppo/network.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swing::ppo {

/// Actor and critic networks plus the Gaussian log-stds (Continuous mode).
/// The actor outputs the Gaussian mean, or two logits in BangBang mode.
struct PolicyParams {
    lsmc::SwingMode mode = lsmc::SwingMode::Continuous;
    Mlp actor, critic;
    std::vector<double> theta; // actor | critic | log-stds
    bool shared_log_std = false;
    int n_dates = 0;

    PolicyParams() = default;
    PolicyParams(lsmc::SwingMode mode, int inputs, int n_dates, std::vector<int> hidden = {4, 4, 4, 4, 4},
                 bool shared_log_std = false);

    double* actor_params() { return theta.data(); }
    const double* actor_params() const { return theta.data(); }
    double* critic_params() { return theta.data() + actor.n_params(); }
    const double* critic_params() const { return theta.data() + actor.n_params(); }
    std::size_t log_std_offset() const { return static_cast<std::size_t>(actor.n_params() + critic.n_params()); }
    std::size_t log_std_index(int date) const { return log_std_offset() + (shared_log_std ? 0 : static_cast<std::size_t>(date)); }
    double log_std(int date) const { return theta[log_std_index(date)]; }

    /// Scaled fan-in init; log-stds start at log(0.5) and the Gaussian mean
    /// at the middle of the action box.
    void initialize(numerics::CounterRng& rng);
};

struct TrainConfig {
    double gae_lambda = 0.95;
    double clip_eps = 0.2;
    double learn_rate = 3e-4;
    double value_coef = 0.01;
    int batch_episodes = 2048;
    int epochs = 10;
    int minibatch = 64;
    int restarts = 4;
    std::size_t total_episodes = 200000; // per restart
    double selection_window = 0.1;        // trailing share of episodes used to pick a restart
    bool normalize_advantages = true;
    bool anneal_learn_rate = true; // linear decay to zero over each restart
    bool shared_log_std = false;
    std::vector<int> hidden = {4, 4, 4, 4, 4};

    void validate() const;
};

/// One decision: inputs, sampled action (raw Gaussian draw or class), and
/// the frozen quantities of the collecting policy.
struct Sample {
    double x[4] = {0, 0, 0, 0};
    int date = 0;
    double action = 0.0;
    double logp_old = 0.0;
    double value_old = 0.0;
    double advantage = 0.0;
    double target = 0.0;
};

/// Log-density of a Gaussian draw, or log-probability of a class.
double log_prob(const PolicyParams& theta, const double* x, int date, double action);
double value(const PolicyParams& theta, const double* x);
/// Gaussian mean (Continuous) or probability of class 1 (BangBang).
double policy_output(const PolicyParams& theta, const double* x);

/// A_i = sum_l D(T_i, T_{i+l}) lambda^l [r_{i+l} + D_{i+l} V_{i+l+1} - V_{i+l}],
/// V after the last date is 0; discounts[i] = D(T_i, T_{i+1}). Returns the
/// advantages and writes value targets A_i + V_i.
std::vector<double> compute_gae(const std::vector<double>& rewards, const std::vector<double>& values, double lambda,
                                const std::vector<double>& discounts, std::vector<double>* targets = nullptr);

struct Surrogate {
    double objective = 0.0; // mean of L^A - beta L^V
    double policy_term = 0.0;
    double value_loss = 0.0;
    double mean_ratio = 0.0;
    double clipped_fraction = 0.0;
};

/// Objective over samples[first, first + count) and, if grad is given, its
/// gradient with respect to theta (overwritten).
Surrogate surrogate(const PolicyParams& theta, const std::vector<Sample>& samples, std::size_t first,
                    std::size_t count, const TrainConfig& config, std::vector<double>* grad = nullptr,
                    const std::vector<std::size_t>* order = nullptr);

/// Adam ascent state.
struct Adam {
    std::vector<double> m, v;
    long step = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    void update(std::vector<double>& theta, const std::vector<double>& grad, double lr);
};

/// Epochs of shuffled minibatch ascent on the clipped surrogate. Returns
/// false and leaves theta untouched if a gradient is not finite.
bool ppo_update(PolicyParams& theta, std::vector<Sample>& samples, const TrainConfig& config, Adam& adam,
                numerics::CounterRng& rng, double learn_rate);

struct CurvePoint {
    std::size_t episode;
    double avg_reward, ci_low, ci_high;
};

struct TrainResult {
    PolicyParams best;
    int best_restart = 0;
    std::vector<double> restart_scores; // trailing mean episode reward
    std::vector<std::vector<CurvePoint>> curves;
    std::size_t discarded_batches = 0;
};

/// Independent restarts on Training-domain paths; the restart with the best
/// trailing mean reward wins.
TrainResult train(const lsmc::SwingContract& contract, const lv::ModelParams& params, const market::InitialCurve& curve,
                  const market::DiscountCurve& dcurve, const TrainConfig& config, std::uint64_t seed, int threads = 1,
                  const std::optional<spike::SpikeParams>& spikes = std::nullopt);

/// Deterministic policy (Gaussian mean, or the more likely class) on fresh
/// Pricing-domain paths.
lsmc::PricingResult price_with_policy(const PolicyParams& theta, const lsmc::SwingContract& contract,
                                      const lv::ModelParams& params, const market::InitialCurve& curve,
                                      const market::DiscountCurve& dcurve, std::size_t n_paths, std::uint64_t seed,
                                      int threads = 1, std::size_t chunk_paths = 100000,
                                      const std::optional<spike::SpikeParams>& spikes = std::nullopt);

/// Environment for a contract: reference price and payment discounts.
SwingEnv make_env(const lsmc::SwingContract& contract, const market::InitialCurve& curve,
                  const market::DiscountCurve& dcurve);

/// Text header line then raw little-endian doubles.
void save_params(const std::string& path, const PolicyParams& theta);
PolicyParams load_params(const std::string& path);

void write_learning_curve(const std::string& path, const std::vector<CurvePoint>& curve, const std::string& header);

} // namespace swing::ppo
