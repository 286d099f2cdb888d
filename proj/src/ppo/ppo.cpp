#include "swing/ppo/ppo.hpp"

#include "swing/error.hpp"
#include "swing/mc/parallel.hpp"
#include "swing/numerics/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace swing::ppo {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

int actor_outputs(lsmc::SwingMode mode) { return mode == lsmc::SwingMode::BangBang ? 2 : 1; }

struct Nets {
    Mlp::Workspace actor, critic;
    explicit Nets(const PolicyParams& p) : actor(p.actor.workspace()), critic(p.critic.workspace()) {}
};

double class_log_prob(double z0, double z1, int cls) {
    const double m = std::max(z0, z1);
    const double lse = m + std::log(std::exp(z0 - m) + std::exp(z1 - m));
    return (cls == 1 ? z1 : z0) - lse;
}

} // namespace

PolicyParams::PolicyParams(lsmc::SwingMode mode_, int inputs, int n_dates_, std::vector<int> hidden, bool shared)
    : mode(mode_), actor(inputs, hidden, actor_outputs(mode_)), critic(inputs, hidden, 1),
      shared_log_std(shared), n_dates(n_dates_) {
    require(n_dates_ > 0, "PolicyParams: no dates");
    const std::size_t n_xi = mode_ == lsmc::SwingMode::Continuous ? (shared ? 1u : static_cast<std::size_t>(n_dates_)) : 0u;
    theta.assign(static_cast<std::size_t>(actor.n_params() + critic.n_params()) + n_xi, 0.0);
}

void PolicyParams::initialize(numerics::CounterRng& rng) {
    const bool gauss = mode == lsmc::SwingMode::Continuous;
    actor.init(actor_params(), rng, 0.1, gauss ? 0.5 : 0.0);
    critic.init(critic_params(), rng);
    for (std::size_t q = log_std_offset(); q < theta.size(); ++q) theta[q] = std::log(0.5);
}

void TrainConfig::validate() const {
    require(gae_lambda >= 0.0 && gae_lambda <= 1.0, "ppo: gae_lambda must be in [0, 1]");
    require(clip_eps > 0.0 && clip_eps < 1.0, "ppo: clip_eps must be in (0, 1)");
    require(learn_rate > 0.0 && value_coef >= 0.0, "ppo: learn_rate and value_coef must be positive");
    require(batch_episodes > 0 && epochs > 0 && minibatch > 0 && restarts > 0, "ppo: sizes must be positive");
    require(total_episodes > 0, "ppo: empty training budget");
    require(selection_window > 0.0 && selection_window <= 1.0, "ppo: selection_window must be in (0, 1]");
}

double log_prob(const PolicyParams& theta, const double* x, int date, double action) {
    auto ws = theta.actor.workspace();
    theta.actor.forward(theta.actor_params(), x, ws);
    if (theta.mode == lsmc::SwingMode::BangBang) return class_log_prob(ws.out()[0], ws.out()[1], action > 0.5 ? 1 : 0);
    const double xi = theta.log_std(date);
    const double z = (action - ws.out()[0]) * std::exp(-xi);
    return -0.5 * z * z - xi - kHalfLog2Pi;
}

double value(const PolicyParams& theta, const double* x) {
    auto ws = theta.critic.workspace();
    theta.critic.forward(theta.critic_params(), x, ws);
    return ws.out()[0];
}

double policy_output(const PolicyParams& theta, const double* x) {
    auto ws = theta.actor.workspace();
    theta.actor.forward(theta.actor_params(), x, ws);
    if (theta.mode == lsmc::SwingMode::BangBang) return std::exp(class_log_prob(ws.out()[0], ws.out()[1], 1));
    return ws.out()[0];
}

std::vector<double> compute_gae(const std::vector<double>& rewards, const std::vector<double>& values, double lambda,
                                const std::vector<double>& discounts, std::vector<double>* targets) {
    const std::size_t n = rewards.size();
    require(values.size() == n && discounts.size() == n, "compute_gae: length mismatch");
    std::vector<double> adv(n);
    double next_adv = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const double v_next = i + 1 < n ? values[i + 1] : 0.0;
        const double delta = rewards[i] + discounts[i] * v_next - values[i];
        adv[i] = delta + lambda * discounts[i] * next_adv;
        next_adv = adv[i];
    }
    if (targets) {
        targets->resize(n);
        for (std::size_t i = 0; i < n; ++i) (*targets)[i] = adv[i] + values[i];
    }
    return adv;
}

Surrogate surrogate(const PolicyParams& theta, const std::vector<Sample>& samples, std::size_t first,
                    std::size_t count, const TrainConfig& config, std::vector<double>* grad,
                    const std::vector<std::size_t>* order) {
    require(count > 0 && first + count <= samples.size(), "surrogate: sample range out of bounds");
    Nets ws(theta);
    if (grad) grad->assign(theta.theta.size(), 0.0);
    const bool gauss = theta.mode == lsmc::SwingMode::Continuous;
    const double eps = config.clip_eps, beta = config.value_coef;
    Surrogate out;
    for (std::size_t s = first; s < first + count; ++s) {
        const Sample& smp = samples[order ? (*order)[s] : s];
        theta.actor.forward(theta.actor_params(), smp.x, ws.actor);
        double lp, dlp[2] = {0.0, 0.0}, dxi = 0.0;
        if (gauss) {
            const double xi = theta.log_std(smp.date);
            const double inv = std::exp(-xi);
            const double z = (smp.action - ws.actor.out()[0]) * inv;
            lp = -0.5 * z * z - xi - kHalfLog2Pi;
            dlp[0] = z * inv;
            dxi = z * z - 1.0;
        } else {
            const double z0 = ws.actor.out()[0], z1 = ws.actor.out()[1];
            const int cls = smp.action > 0.5 ? 1 : 0;
            lp = class_log_prob(z0, z1, cls);
            const double p1 = std::exp(class_log_prob(z0, z1, 1));
            dlp[0] = (cls == 0 ? 1.0 : 0.0) - (1.0 - p1);
            dlp[1] = (cls == 1 ? 1.0 : 0.0) - p1;
        }
        const double ratio = std::exp(lp - smp.logp_old);
        const double A = smp.advantage;
        const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
        const double unclipped_term = ratio * A, clipped_term = clipped * A;
        const double la = std::min(unclipped_term, clipped_term);
        const bool active = unclipped_term <= clipped_term;

        theta.critic.forward(theta.critic_params(), smp.x, ws.critic);
        const double err = ws.critic.out()[0] - smp.target;
        out.policy_term += la;
        out.value_loss += err * err;
        out.mean_ratio += ratio;
        if (std::abs(ratio - 1.0) > eps) out.clipped_fraction += 1.0;

        if (grad) {
            double* g = grad->data();
            const double w = active ? ratio * A : 0.0; // d L^A / d log pi
            if (w != 0.0) {
                const double dout[2] = {w * dlp[0], w * dlp[1]};
                theta.actor.backward(theta.actor_params(), ws.actor, dout, g);
                if (gauss) g[theta.log_std_index(smp.date)] += w * dxi;
            }
            const double dv = -2.0 * beta * err;
            theta.critic.backward(theta.critic_params(), ws.critic, &dv, g + theta.actor.n_params());
        }
    }
    const double n = static_cast<double>(count);
    out.policy_term /= n;
    out.value_loss /= n;
    out.mean_ratio /= n;
    out.clipped_fraction /= n;
    out.objective = out.policy_term - beta * out.value_loss;
    if (grad)
        for (double& v : *grad) v /= n;
    return out;
}

void Adam::update(std::vector<double>& theta, const std::vector<double>& grad, double lr) {
    if (m.size() != theta.size()) {
        m.assign(theta.size(), 0.0);
        v.assign(theta.size(), 0.0);
    }
    ++step;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t q = 0; q < theta.size(); ++q) {
        m[q] = beta1 * m[q] + (1.0 - beta1) * grad[q];
        v[q] = beta2 * v[q] + (1.0 - beta2) * grad[q] * grad[q];
        theta[q] += lr * (m[q] / c1) / (std::sqrt(v[q] / c2) + eps);
    }
}

bool ppo_update(PolicyParams& theta, std::vector<Sample>& samples, const TrainConfig& config, Adam& adam,
                numerics::CounterRng& rng, double learn_rate) {
    const std::size_t n = samples.size();
    if (n == 0) return true;
    const auto saved = theta.theta;
    const Adam saved_adam = adam;
    std::vector<std::size_t> order(n);
    std::vector<double> grad;
    for (std::size_t q = 0; q < n; ++q) order[q] = q;
    const auto mb = static_cast<std::size_t>(config.minibatch);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t q = n - 1; q > 0; --q) {
            const auto r = static_cast<std::size_t>(rng.uniform() * static_cast<double>(q + 1));
            std::swap(order[q], order[std::min(r, q)]);
        }
        for (std::size_t first = 0; first < n; first += mb) {
            const std::size_t count = std::min(mb, n - first);
            surrogate(theta, samples, first, count, config, &grad, &order);
            for (double g : grad)
                if (!std::isfinite(g)) {
                    theta.theta = saved;
                    adam = saved_adam;
                    return false;
                }
            adam.update(theta.theta, grad, learn_rate);
        }
    }
    return true;
}

SwingEnv make_env(const lsmc::SwingContract& contract, const market::InitialCurve& curve,
                  const market::DiscountCurve& dcurve) {
    const double F_ref = market::period_futures(curve, contract.schedule.fixing_times.front() + market::kOneDay, {});
    return SwingEnv(contract, F_ref, lsmc::payment_discounts(contract, dcurve));
}

namespace {

mc::FixingSet episode_fixings(const lsmc::SwingContract& contract, const lv::ModelParams& params,
                              const market::InitialCurve& curve, std::size_t n, std::uint64_t seed,
                              numerics::Domain domain, std::size_t first, int threads,
                              const std::optional<spike::SpikeParams>& spikes) {
    const auto paths = mc::simulate_spot(params, contract.schedule, n, seed, domain, first, threads, spikes);
    auto fx = mc::day_ahead_fixings(paths, params, curve, contract.schedule);
    if (contract.floating_strike)
        fx.strikes = mc::floating_strikes(paths, params, curve, contract.schedule, contract.month);
    return fx;
}

double path_strike(const mc::FixingSet& fx, const lsmc::SwingContract& c, std::size_t p) {
    return c.floating_strike ? fx.strikes[p] : c.strike;
}

} // namespace

TrainResult train(const lsmc::SwingContract& contract, const lv::ModelParams& params, const market::InitialCurve& curve,
                  const market::DiscountCurve& dcurve, const TrainConfig& config, std::uint64_t seed, int threads,
                  const std::optional<spike::SpikeParams>& spikes) {
    config.validate();
    contract.validate();
    const SwingEnv proto = make_env(contract, curve, dcurve);
    const int nf = contract.n_f();
    const bool gauss = contract.mode == lsmc::SwingMode::Continuous;
    // rewards enter the update in units of a tenth of the reference price per unit volume
    const double reward_scale = 1.0 / (0.1 * proto.reference_price() * contract.N_M);
    const std::size_t total = config.total_episodes;
    require(static_cast<double>(total) * config.restarts < 4.0e9, "ppo: training budget exceeds the stream index range");
    const auto window_start = static_cast<std::size_t>(std::floor(static_cast<double>(total) * (1.0 - config.selection_window)));

    TrainResult result;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
        PolicyParams theta(contract.mode, proto.n_inputs(), nf, config.hidden, config.shared_log_std);
        numerics::CounterRng init_rng(seed, numerics::Domain::Training, numerics::Stream::Misc, static_cast<std::uint32_t>(r));
        theta.initialize(init_rng);
        numerics::CounterRng shuffle_rng(seed, numerics::Domain::Training, numerics::Stream::Misc,
                                         static_cast<std::uint32_t>(1u << 20) + static_cast<std::uint32_t>(r));
        Adam adam;
        numerics::SampleStats trailing;
        std::vector<CurvePoint> curve_points;
        const std::size_t offset = static_cast<std::size_t>(r) * total;

        for (std::size_t done = 0; done < total;) {
            const std::size_t nb = std::min<std::size_t>(static_cast<std::size_t>(config.batch_episodes), total - done);
            // restarts share the training paths and differ in initial weights and action draws
            const auto fx = episode_fixings(contract, params, curve, nb, seed, numerics::Domain::Training, done,
                                            threads, spikes);
            std::vector<Sample> samples(nb * static_cast<std::size_t>(nf));
            std::vector<double> episode_reward(nb);
            mc::parallel_for(nb, threads, [&](std::size_t e0, std::size_t e1) {
                SwingEnv env = proto;
                Nets ws(theta);
                std::vector<double> rewards(static_cast<std::size_t>(nf)), values(static_cast<std::size_t>(nf)),
                    disc(static_cast<std::size_t>(nf), 1.0), targets;
                for (std::size_t e = e0; e < e1; ++e) {
                    numerics::CounterRng rng(seed, numerics::Domain::Training, numerics::Stream::Policy,
                                             static_cast<std::uint32_t>(offset + done + e));
                    env.reset(&fx.fixings[e * static_cast<std::size_t>(nf)], path_strike(fx, contract, e));
                    double total_reward = 0.0;
                    for (int i = 0; i < nf; ++i) {
                        Sample& s = samples[e * static_cast<std::size_t>(nf) + static_cast<std::size_t>(i)];
                        env.features(s.x);
                        s.date = i;
                        theta.actor.forward(theta.actor_params(), s.x, ws.actor);
                        StepResult step;
                        if (gauss) {
                            const double xi = theta.log_std(i);
                            const double z = rng.normal();
                            s.action = ws.actor.out()[0] + std::exp(xi) * z;
                            s.logp_old = -0.5 * z * z - xi - kHalfLog2Pi;
                            step = env.step(s.action);
                        } else {
                            const double lp1 = class_log_prob(ws.actor.out()[0], ws.actor.out()[1], 1);
                            const int cls = rng.uniform() < std::exp(lp1) ? 1 : 0;
                            s.action = cls;
                            s.logp_old = cls == 1 ? lp1 : class_log_prob(ws.actor.out()[0], ws.actor.out()[1], 0);
                            step = env.step_class(cls);
                        }
                        theta.critic.forward(theta.critic_params(), s.x, ws.critic);
                        s.value_old = ws.critic.out()[0];
                        values[static_cast<std::size_t>(i)] = s.value_old;
                        rewards[static_cast<std::size_t>(i)] = step.reward * reward_scale;
                        total_reward += step.reward;
                    }
                    const auto adv = compute_gae(rewards, values, config.gae_lambda, disc, &targets);
                    for (int i = 0; i < nf; ++i) {
                        Sample& s = samples[e * static_cast<std::size_t>(nf) + static_cast<std::size_t>(i)];
                        s.advantage = adv[static_cast<std::size_t>(i)];
                        s.target = targets[static_cast<std::size_t>(i)];
                    }
                    episode_reward[e] = total_reward;
                }
            });

            numerics::SampleStats batch;
            for (std::size_t e = 0; e < nb; ++e) {
                batch.add(episode_reward[e]);
                if (done + e >= window_start) trailing.add(episode_reward[e]);
            }
            if (config.normalize_advantages) {
                numerics::SampleStats a;
                for (const auto& s : samples) a.add(s.advantage);
                const double sd = std::sqrt(a.variance());
                for (auto& s : samples) s.advantage = sd > 0.0 ? (s.advantage - a.mean()) / sd : 0.0;
            }
            const double lr = config.anneal_learn_rate
                                  ? config.learn_rate * (1.0 - static_cast<double>(done) / static_cast<double>(total))
                                  : config.learn_rate;
            if (!ppo_update(theta, samples, config, adam, shuffle_rng, lr)) ++result.discarded_batches;
            done += nb;
            const double half = 1.96 * batch.std_error();
            curve_points.push_back({done, batch.mean(), batch.mean() - half, batch.mean() + half});
        }
        result.curves.push_back(std::move(curve_points));
        result.restart_scores.push_back(trailing.mean());
        if (trailing.mean() > best_score) {
            best_score = trailing.mean();
            result.best = theta;
            result.best_restart = r;
        }
    }
    return result;
}

lsmc::PricingResult price_with_policy(const PolicyParams& theta, const lsmc::SwingContract& contract,
                                      const lv::ModelParams& params, const market::InitialCurve& curve,
                                      const market::DiscountCurve& dcurve, std::size_t n_paths, std::uint64_t seed,
                                      int threads, std::size_t chunk_paths,
                                      const std::optional<spike::SpikeParams>& spikes) {
    contract.validate();
    require(n_paths > 0 && chunk_paths > 0, "price_with_policy: path counts must be positive");
    require(theta.mode == contract.mode, "price_with_policy: policy and contract modes differ");
    const SwingEnv proto = make_env(contract, curve, dcurve);
    require(theta.actor.inputs() == proto.n_inputs(), "price_with_policy: policy inputs do not match the contract");
    require(theta.n_dates == contract.n_f(), "price_with_policy: policy dates do not match the contract");
    const int nf = contract.n_f();
    const bool gauss = contract.mode == lsmc::SwingMode::Continuous;

    numerics::SampleStats stats;
    std::vector<double> volume(static_cast<std::size_t>(nf), 0.0);
    double extremes = 0.0;
    for (std::size_t first = 0; first < n_paths; first += chunk_paths) {
        const std::size_t m = std::min(chunk_paths, n_paths - first);
        const auto fx = episode_fixings(contract, params, curve, m, seed, numerics::Domain::Pricing, first, threads, spikes);
        std::vector<double> rewards(m), vols(m * static_cast<std::size_t>(nf));
        std::vector<unsigned char> extreme(m * static_cast<std::size_t>(nf));
        mc::parallel_for(m, threads, [&](std::size_t e0, std::size_t e1) {
            SwingEnv env = proto;
            auto ws = theta.actor.workspace();
            double x[4];
            for (std::size_t e = e0; e < e1; ++e) {
                env.reset(&fx.fixings[e * static_cast<std::size_t>(nf)], path_strike(fx, contract, e));
                double total = 0.0;
                for (int i = 0; i < nf; ++i) {
                    env.features(x);
                    const auto [lo, hi] = env.admissible();
                    theta.actor.forward(theta.actor_params(), x, ws);
                    const auto step = gauss ? env.step(ws.out()[0]) : env.step_class(ws.out()[1] >= ws.out()[0] ? 1 : 0);
                    total += step.reward;
                    const std::size_t q = e * static_cast<std::size_t>(nf) + static_cast<std::size_t>(i);
                    vols[q] = step.volume;
                    extreme[q] = std::abs(step.volume - lo) <= 1e-2 || std::abs(step.volume - hi) <= 1e-2;
                }
                rewards[e] = total;
            }
        });
        for (std::size_t e = 0; e < m; ++e) {
            stats.add(rewards[e]);
            for (int i = 0; i < nf; ++i) {
                const std::size_t q = e * static_cast<std::size_t>(nf) + static_cast<std::size_t>(i);
                volume[static_cast<std::size_t>(i)] += vols[q];
                extremes += extreme[q];
            }
        }
    }
    lsmc::PricingResult out;
    out.price = stats.mean();
    out.std_error = stats.std_error();
    out.n_paths = n_paths;
    for (double v : volume) out.consumption_profile.push_back(v / static_cast<double>(n_paths));
    out.bang_bang_fraction = extremes / (static_cast<double>(n_paths) * nf);
    out.pricing_seed = seed;
    return out;
}

void save_params(const std::string& path, const PolicyParams& theta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "swing-ppo-params 1 mode=" << (theta.mode == lsmc::SwingMode::BangBang ? "bangbang" : "continuous")
        << " inputs=" << theta.actor.inputs() << " hidden=";
    const auto& sizes = theta.actor.sizes();
    for (std::size_t l = 1; l + 1 < sizes.size(); ++l) out << (l > 1 ? "," : "") << sizes[l];
    out << " dates=" << theta.n_dates << " shared=" << (theta.shared_log_std ? 1 : 0) << " count=" << theta.theta.size()
        << "\n";
    out.write(reinterpret_cast<const char*>(theta.theta.data()),
              static_cast<std::streamsize>(theta.theta.size() * sizeof(double)));
    if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

PolicyParams load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic, field;
    int version = 0;
    hs >> magic >> version;
    if (magic != "swing-ppo-params" || version != 1) throw Error(ErrorCode::Io, path + ": not a version 1 parameter file");
    std::string mode;
    int inputs = 0, dates = 0, shared = 0;
    std::size_t count = 0;
    std::vector<int> hidden;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Io, path + ": malformed header");
        const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "mode") mode = val;
        else if (key == "inputs") inputs = std::stoi(val);
        else if (key == "dates") dates = std::stoi(val);
        else if (key == "shared") shared = std::stoi(val);
        else if (key == "count") count = std::stoul(val);
        else if (key == "hidden") {
            std::istringstream vs(val);
            std::string h;
            while (std::getline(vs, h, ',')) hidden.push_back(std::stoi(h));
        } else throw Error(ErrorCode::Io, path + ": unknown header field " + key);
    }
    if (mode != "continuous" && mode != "bangbang") throw Error(ErrorCode::Io, path + ": unknown mode");
    PolicyParams theta(mode == "bangbang" ? lsmc::SwingMode::BangBang : lsmc::SwingMode::Continuous, inputs, dates,
                       hidden, shared != 0);
    if (theta.theta.size() != count) throw Error(ErrorCode::Io, path + ": parameter count does not match the header");
    in.read(reinterpret_cast<char*>(theta.theta.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw Error(ErrorCode::Io, path + ": truncated parameter file");
    return theta;
}

void write_learning_curve(const std::string& path, const std::vector<CurvePoint>& curve, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << header;
    out << "episode,avg_reward,ci_low,ci_high\n";
    out.precision(17);
    for (const auto& c : curve) out << c.episode << ',' << c.avg_reward << ',' << c.ci_low << ',' << c.ci_high << '\n';
}

} // namespace swing::ppo
