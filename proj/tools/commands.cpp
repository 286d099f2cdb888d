#include "commands.hpp"

#include "config.hpp"

#include "swing/calib/calibrator.hpp"
#include "swing/calib/synthetic.hpp"
#include "swing/error.hpp"
#include "swing/lsmc/pricer.hpp"
#include "swing/numerics/statistics.hpp"
#include "swing/ppo/ppo.hpp"
#include "swing/spike/spike.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace swingctl {

namespace fs = std::filesystem;
using swing::Error;
using swing::ErrorCode;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    int threads = 1;
    // subcommand extras
    std::vector<std::string> deliveries;
    bool profile = false;
    std::optional<int> restarts;
    std::optional<long long> episodes;
    std::string mode;
    std::optional<double> beta;
    std::optional<int> policy_surface;
};

class Context {
public:
    Context(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt) {
        if (opt.config.empty()) throw Error(ErrorCode::Config, "--config is required");
        config_ = load_config(opt.config);
        base_ = fs::path(opt.config).parent_path();
        hash_ = config_hash(config_);
        seed_ = opt.seed ? *opt.seed : static_cast<std::uint64_t>(section("engine").integer("seed", 42));
        if (opt.threads < 0) throw Error(ErrorCode::Config, "--threads must be >= 0");
        out_ = opt.out;
        fs::create_directories(out_);
    }

    Section section(const std::string& name) const { return Section(config_, name); }
    std::uint64_t seed() const { return seed_; }
    int threads() const { return opt_.threads; }
    const Options& options() const { return opt_; }

    std::string resolve(const std::string& p) const {
        const fs::path path(p);
        return path.is_absolute() || base_.empty() ? path.string() : (base_ / path).string();
    }

    std::string header() const {
        char buf[160];
        std::snprintf(buf, sizeof buf, "# swingctl %s command=%s config_hash=%016" PRIx64 " seed=%" PRIu64 "\n", kVersion,
                      command_.c_str(), hash_, seed_);
        return buf;
    }

    std::string output(const std::string& name) const { return (out_ / name).string(); }

    std::ofstream open(const std::string& name) const {
        std::ofstream f(output(name));
        if (!f) throw Error(ErrorCode::Io, "cannot write " + output(name));
        f << header();
        f.precision(12);
        return f;
    }

    /// Prepends the header to a file written by a library routine.
    void stamp(const std::string& name) const {
        std::ifstream in(output(name));
        std::stringstream body;
        body << in.rdbuf();
        in.close();
        std::ofstream out(output(name));
        out << header() << body.str();
    }

    swing::market::Date valuation_date() const {
        const auto s = section("market").string("valuation_date", "");
        return s.empty() ? swing::calib::synthetic_valuation_date() : swing::market::parse_iso_date(s);
    }

    swing::market::InitialCurve curve() const {
        const auto path = section("market").string("curve", "");
        if (path.empty()) return swing::calib::synthetic_curve();
        return swing::market::load_curve_csv(resolve(path), valuation_date());
    }

    swing::market::DiscountCurve discount() const {
        return swing::market::DiscountCurve::flat(section("market").number("rate", 0.0));
    }

    swing::lv::ModelParams model() const {
        const auto m = section("model");
        swing::lv::ModelParams p;
        p.a = m.number("mean_reversion", 1.0);
        const auto lv = m.string("local_vol", "");
        p.localvol = lv.empty() ? swing::calib::reference_local_vol() : swing::lv::LocalVolSurface::load_csv(resolve(lv));
        p.validate();
        return p;
    }

    swing::pde::PdeGrid grid() const {
        const auto m = section("model");
        swing::pde::PdeGrid g;
        g.nodes = static_cast<int>(m.integer("pde_nodes", g.nodes));
        g.k_max = m.number("pde_k_max", g.k_max);
        const auto steps = m.integer("pde_steps_per_day", 1);
        if (steps < 1) throw Error(ErrorCode::Config, "model.pde_steps_per_day must be >= 1");
        g.dt = swing::market::kOneDay / static_cast<double>(steps);
        g.validate();
        return g;
    }

    std::optional<swing::spike::SpikeParams> spikes() const {
        const auto s = section("spike");
        if (!s.present()) return std::nullopt;
        swing::spike::SpikeParams p;
        p.gamma = s.number("gamma", p.gamma);
        p.intensity = s.number("intensity", 0.0);
        p.zeta = s.number("amplitude", 0.0);
        p.validate();
        if (p.intensity == 0.0 || p.zeta == 0.0) return std::nullopt;
        return p;
    }

    swing::lsmc::SwingContract contract(const std::string& mode_override = "") const {
        using namespace swing;
        const auto c = section("contract");
        const auto vd = valuation_date();
        const auto first = market::parse_iso_date(c.string("first_fixing", "2018-05-01"));
        const int d0 = market::days_between(vd, first);
        if (d0 <= 0) throw Error(ErrorCode::Config, "contract.first_fixing must be after the valuation date");
        const auto days = c.integer("days", 31);
        if (days < 1) throw Error(ErrorCode::Config, "contract.days must be >= 1");
        lsmc::SwingContract k;
        for (long long d = 0; d < days; ++d) k.schedule.fixing_times.push_back(static_cast<double>(d0 + d) * market::kOneDay);
        k.schedule.level = static_cast<int>(section("engine").integer("level", 0));
        k.schedule.rng_level = k.schedule.level;
        k.N_m = c.number("min_daily", 0.0);
        k.N_M = c.number("max_daily", 1.0);
        k.C_m = c.number("min_total", 0.0);
        k.C_M = c.number("max_total", static_cast<double>(days) * k.N_M);
        const auto mode = mode_override.empty() ? c.string("mode", "continuous") : mode_override;
        if (mode == "continuous") k.mode = lsmc::SwingMode::Continuous;
        else if (mode == "bangbang") k.mode = lsmc::SwingMode::BangBang;
        else throw Error(ErrorCode::Config, "mode must be continuous or bangbang");
        k.delta = c.number("grid_step", 1.0 / 6.0);
        k.pay_lag = static_cast<double>(c.integer("pay_lag_days", 1)) * market::kOneDay;

        const auto crv = curve();
        const auto month_label = c.string("strike_month", market::format_iso_date(first).substr(0, 7));
        const auto month_date = market::parse_iso_date(month_label + "-01");
        const auto fut = calib::monthly_futures(static_cast<int>(month_date.year()), static_cast<unsigned>(month_date.month()));
        if (c.boolean("floating", false)) {
            if (c.has("strike")) throw Error(ErrorCode::Config, "contract.strike conflicts with contract.floating");
            k.floating_strike = true;
            k.month = {fut.maturity, fut.delivery};
            const int ltd = static_cast<int>(std::lround(fut.maturity / market::kOneDay));
            const auto window = c.integer("window_days", 20);
            if (window < 1 || ltd - window + 1 < 1) throw Error(ErrorCode::Config, "contract.window_days out of range");
            for (long long d = ltd - window + 1; d <= ltd; ++d) k.schedule.strike_times.push_back(static_cast<double>(d) * market::kOneDay);
        } else {
            k.strike = c.has("strike") ? c.number("strike") : market::period_futures(crv, fut.maturity, fut.delivery);
        }
        k.validate();
        return k;
    }

private:
    std::string command_;
    Options opt_;
    Json config_;
    fs::path base_;
    std::uint64_t hash_ = 0;
    std::uint64_t seed_ = 0;
    fs::path out_;
};

swing::calib::FixedPointConfig fixed_point(const Context& ctx) {
    const auto s = ctx.section("calibration");
    swing::calib::FixedPointConfig cfg;
    cfg.tol = s.number("tolerance", cfg.tol);
    cfg.max_iterations = static_cast<int>(s.integer("max_iterations", cfg.max_iterations));
    cfg.anderson = s.boolean("anderson", cfg.anderson);
    cfg.memory = static_cast<int>(s.integer("memory", cfg.memory));
    if (!(cfg.tol > 0.0) || cfg.max_iterations < 1 || cfg.memory < 1)
        throw Error(ErrorCode::Config, "calibration settings out of range");
    return cfg;
}

const char* kind_label(swing::market::OptionKind k) { return k == swing::market::OptionKind::PVO ? "PVO" : "MCO"; }

int cmd_calibrate(const Context& ctx) {
    using namespace swing;
    const auto crv = ctx.curve();
    const auto dc = ctx.discount();
    const auto grid = ctx.grid();
    const auto cfg = fixed_point(ctx);
    const auto model = ctx.section("model");
    const auto qpath = ctx.section("market").string("quotes", "");
    std::vector<market::VanillaQuote> quotes;
    if (qpath.empty()) {
        auto templates = calib::pvo_templates(crv);
        const auto mco = calib::mco_templates(crv);
        templates.insert(templates.end(), mco.begin(), mco.end());
        quotes = calib::model_quotes({model.number("mean_reversion", 1.0), calib::reference_local_vol()}, templates, crv, dc, grid);
    } else {
        quotes = market::load_quotes(ctx.resolve(qpath), ctx.valuation_date());
    }
    calib::CalibrationTarget target;
    for (const auto& q : quotes) (q.kind == market::OptionKind::PVO ? target.pvo : target.mco).push_back(q);
    if (target.pvo.empty()) throw Error(ErrorCode::MalformedRow, "no PVO quotes to calibrate on");

    lv::ModelParams params;
    calib::CalibrationReport report;
    if (model.has("mean_reversion_grid")) {
        const auto fit = calib::calibrate_mean_reversion(target, crv, dc, grid, cfg, model.numbers("mean_reversion_grid", {}));
        params = fit.params;
        report = fit.report;
    } else {
        params.a = model.number("mean_reversion", 1.0);
        auto fit = calib::calibrate_local_vol(target.pvo, params.a, crv, dc, grid, cfg);
        params.localvol = fit.surface;
        report = fit.report;
    }

    params.localvol.save_csv(ctx.output("local_vol.csv"));
    ctx.stamp("local_vol.csv");
    {
        auto f = ctx.open("calibration_history.csv");
        f << "iteration,max_error_bp\n";
        for (std::size_t i = 0; i < report.error_history_bp.size(); ++i) f << i + 1 << ',' << report.error_history_bp[i] << '\n';
    }
    {
        const auto vd = ctx.valuation_date();
        auto date = [&](double t) { return market::format_iso_date(market::add_days(vd, static_cast<int>(std::lround(t / market::kOneDay)))); };
        const auto surface = pde::solve_dupire(params, calib::QuoteBook(quotes, params.a, crv, dc).horizon(), grid);
        auto f = ctx.open("calibration_fit.csv");
        f << "kind,option_expiry,futures_maturity,delivery,strike,market_iv,model_iv,error_bp\n";
        for (const auto& q : quotes) {
            const double iv = pde::model_iv(surface, params, q, crv, dc);
            f << kind_label(q.kind) << ',' << date(q.option_expiry) << ',' << date(q.futures_maturity) << ','
              << q.delivery.label << ',' << q.strike << ',' << q.implied_vol << ',' << iv << ','
              << (iv - q.implied_vol) * 1e4 << '\n';
        }
    }
    {
        auto f = ctx.open("calibration_summary.csv");
        f << "mean_reversion,iterations,converged,max_error_bp,secondary_rmse\n";
        f << params.a << ',' << report.iterations << ',' << (report.converged ? 1 : 0) << ','
          << report.max_abs_iv_error_bp << ',' << report.secondary_rmse << '\n';
    }
    std::printf("a=%.6g iterations=%d max_error_bp=%.4g%s\n", params.a, report.iterations, report.max_abs_iv_error_bp,
                report.converged ? "" : " (not converged)");
    if (!report.converged) {
        std::fprintf(stderr, "swingctl: calibration did not reach tolerance\n");
        return 3;
    }
    return 0;
}

int cmd_imply_smile(const Context& ctx) {
    using namespace swing;
    const auto crv = ctx.curve();
    const auto dc = ctx.discount();
    const auto params = ctx.model();
    const auto s = ctx.section("smile");
    const auto months = s.strings("months", {"2018-06", "2018-07", "2018-10", "2019-01", "2019-04"});
    const auto moneyness = s.numbers("moneyness", calib::synthetic_moneyness());
    auto deliveries = s.strings("deliveries", {"1d", "1m", "3m", "6m"});
    if (!ctx.options().deliveries.empty()) deliveries = ctx.options().deliveries;
    if (months.empty() || moneyness.empty() || deliveries.empty()) throw Error(ErrorCode::Config, "smile lists must not be empty");

    std::vector<calib::MonthlyFutures> futs;
    double horizon = 0.0;
    for (const auto& m : months) {
        const auto d = market::parse_iso_date(m + "-01");
        futs.push_back(calib::monthly_futures(static_cast<int>(d.year()), static_cast<unsigned>(d.month())));
        horizon = std::max(horizon, futs.back().maturity);
    }
    const auto surface = pde::solve_dupire(params, horizon + 2 * market::kOneDay, ctx.grid());
    const auto vd = ctx.valuation_date();
    auto f = ctx.open("smile.csv");
    f << "expiry,futures,delivery,moneyness,strike,implied_vol\n";
    for (const auto& fut : futs)
        for (const auto& label : deliveries) {
            const auto dp = market::DeliveryPeriod::from_label(label, fut.delivery.delta0);
            const double F0 = market::period_futures(crv, fut.maturity, dp);
            for (double m : moneyness) {
                market::VanillaQuote q;
                q.option_expiry = fut.maturity;
                q.futures_maturity = fut.maturity;
                q.delivery = dp;
                q.strike = m * F0;
                q.implied_vol = 1.0;
                const double iv = pde::model_iv(surface, params, q, crv, dc);
                f << market::format_iso_date(market::add_days(vd, static_cast<int>(std::lround(fut.maturity / market::kOneDay))))
                  << ',' << fut.label << ',' << label << ',' << m << ',' << q.strike << ',' << iv << '\n';
            }
        }
    return 0;
}

void write_result(const Context& ctx, const std::string& name, const std::string& method,
                  const swing::lsmc::SwingContract& c, const swing::lsmc::PricingResult& r) {
    auto f = ctx.open(name);
    f << "method,mode,price,std_error,n_paths,bang_bang_fraction,regression_seed,pricing_seed\n";
    f << method << ',' << (c.mode == swing::lsmc::SwingMode::BangBang ? "bangbang" : "continuous") << ',' << r.price
      << ',' << r.std_error << ',' << r.n_paths << ',' << r.bang_bang_fraction << ',' << r.regression_seed << ','
      << r.pricing_seed << '\n';
}

void write_profile(const Context& ctx, const std::string& name, const swing::lsmc::SwingContract& c,
                   const swing::lsmc::PricingResult& r) {
    const auto vd = ctx.valuation_date();
    auto f = ctx.open(name);
    f << "date,mean_volume\n";
    for (std::size_t i = 0; i < r.consumption_profile.size(); ++i) {
        const int day = static_cast<int>(std::lround(c.schedule.fixing_times[i] / swing::market::kOneDay));
        f << swing::market::format_iso_date(swing::market::add_days(vd, day)) << ',' << r.consumption_profile[i] << '\n';
    }
}

int cmd_price_lsmc(const Context& ctx) {
    using namespace swing;
    const auto e = ctx.section("engine");
    const auto c = ctx.contract();
    lsmc::LsmcConfig cfg;
    cfg.regression_paths = static_cast<std::size_t>(e.integer("regression_paths", 100000));
    cfg.pricing_paths = static_cast<std::size_t>(e.integer("pricing_paths", 1000000));
    cfg.chunk_paths = static_cast<std::size_t>(e.integer("chunk_paths", 100000));
    cfg.threads = ctx.threads();
    if (e.integer("regression_paths", 1) < 1 || e.integer("pricing_paths", 1) < 1 || e.integer("chunk_paths", 1) < 1)
        throw Error(ErrorCode::Config, "engine path counts must be positive");
    const auto r = lsmc::price_swing(c, ctx.model(), ctx.curve(), ctx.discount(), cfg, ctx.seed(), ctx.spikes());
    write_result(ctx, "lsmc_result.csv", "lsmc", c, r);
    if (ctx.options().profile) write_profile(ctx, "lsmc_profile.csv", c, r);
    std::printf("price=%.6f se=%.6f paths=%zu\n", r.price, r.std_error, r.n_paths);
    return 0;
}

int cmd_price_ppo(const Context& ctx) {
    using namespace swing;
    const auto s = ctx.section("ppo");
    const auto& opt = ctx.options();
    const auto c = ctx.contract(opt.mode.empty() ? s.string("mode", "") : opt.mode);
    ppo::TrainConfig cfg;
    cfg.restarts = static_cast<int>(s.integer("restarts", cfg.restarts));
    cfg.total_episodes = static_cast<std::size_t>(std::max<long long>(0, s.integer("episodes", static_cast<long long>(cfg.total_episodes))));
    cfg.batch_episodes = static_cast<int>(s.integer("batch_episodes", cfg.batch_episodes));
    cfg.epochs = static_cast<int>(s.integer("epochs", cfg.epochs));
    cfg.minibatch = static_cast<int>(s.integer("minibatch", cfg.minibatch));
    cfg.learn_rate = s.number("learn_rate", cfg.learn_rate);
    cfg.value_coef = s.number("beta", cfg.value_coef);
    cfg.gae_lambda = s.number("gae_lambda", cfg.gae_lambda);
    cfg.clip_eps = s.number("clip_eps", cfg.clip_eps);
    cfg.shared_log_std = s.boolean("shared_log_std", cfg.shared_log_std);
    cfg.anneal_learn_rate = s.boolean("anneal_learn_rate", cfg.anneal_learn_rate);
    if (s.has("hidden")) {
        cfg.hidden.clear();
        for (double h : s.numbers("hidden", {})) cfg.hidden.push_back(static_cast<int>(h));
    }
    if (opt.restarts) cfg.restarts = *opt.restarts;
    if (opt.episodes) cfg.total_episodes = static_cast<std::size_t>(std::max<long long>(0, *opt.episodes));
    if (opt.beta) cfg.value_coef = *opt.beta;
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
    const auto pricing_paths = s.integer("pricing_paths", 1000000);
    if (pricing_paths < 1) throw Error(ErrorCode::Config, "ppo.pricing_paths must be positive");

    const auto crv = ctx.curve();
    const auto dc = ctx.discount();
    const auto params = ctx.model();
    const auto spikes = ctx.spikes();
    const auto tr = ppo::train(c, params, crv, dc, cfg, ctx.seed(), ctx.threads(), spikes);
    ppo::write_learning_curve(ctx.output("ppo_learning_curve.csv"), tr.curves[static_cast<std::size_t>(tr.best_restart)], ctx.header());
    ppo::save_params(ctx.output("ppo_params.bin"), tr.best);
    auto r = ppo::price_with_policy(tr.best, c, params, crv, dc, static_cast<std::size_t>(pricing_paths), ctx.seed(),
                                    ctx.threads(), 100000, spikes);
    r.regression_seed = ctx.seed();
    write_result(ctx, "ppo_result.csv", "ppo", c, r);
    if (opt.profile) write_profile(ctx, "ppo_profile.csv", c, r);
    if (opt.policy_surface) {
        const int date = *opt.policy_surface;
        if (date < 0 || date >= c.n_f()) throw Error(ErrorCode::Config, "--policy-surface date index out of range");
        auto f = ctx.open("ppo_policy_surface.csv");
        f << "log_moneyness,consumption_norm,action\n";
        const double time = c.n_f() > 1 ? static_cast<double>(date) / (c.n_f() - 1) - 0.5 : 0.0;
        for (int a = 0; a <= 40; ++a)
            for (int b = 0; b <= 20; ++b) {
                const double x[4] = {time, -0.5 + 0.05 * b, -0.5 + 0.025 * a, 0.0};
                double act = ppo::policy_output(tr.best, x);
                if (c.mode == lsmc::SwingMode::Continuous) act = std::clamp(act, 0.0, 1.0);
                f << x[2] << ',' << x[1] << ',' << act << '\n';
            }
    }
    std::printf("price=%.6f se=%.6f restart=%d\n", r.price, r.std_error, tr.best_restart);
    return 0;
}

int cmd_diagnose(const Context& ctx) {
    using namespace swing;
    const auto crv = ctx.curve();
    const auto params = ctx.model();
    const auto c = ctx.contract();
    const auto spikes = ctx.spikes();
    const auto n = ctx.section("diagnose").integer("paths", 100000);
    if (n < 2) throw Error(ErrorCode::Config, "diagnose.paths must be >= 2");
    auto f = ctx.open("diagnose.csv");
    f << "check,value,tolerance,status\n";
    bool ok = true;
    auto row = [&](const std::string& name, double value, double tol, bool pass) {
        f << name << ',' << value << ',' << tol << ',' << (pass ? "PASS" : "FAIL") << '\n';
        ok = ok && pass;
    };

    const auto paths = mc::simulate_spot(params, c.schedule, static_cast<std::size_t>(n), ctx.seed(),
                                         numerics::Domain::Diagnostic, 0, ctx.threads(), spikes);
    const auto fx = mc::day_ahead_fixings(paths, params, crv, c.schedule);
    const auto fwd = mc::day_ahead_forwards(crv, c.schedule);
    const std::size_t last = c.schedule.n_fixings() - 1, obs = paths.times.size() - 1;
    numerics::SampleStats s, F, bar;
    for (std::size_t k = 0; k < paths.n_paths; ++k) {
        s.add(paths.s(k, obs));
        F.add(fx.F(k, last));
        if (spikes) bar.add(spike::spike_adjusted_spot(paths.s(k, obs), paths.y(k, obs), paths.times[obs], crv, *spikes));
    }
    row("martingale_s_T_z", (s.mean() - 1.0) / s.std_error(), 3.0, std::abs(s.mean() - 1.0) <= 3.0 * s.std_error());
    row("martingale_fixing_z", (F.mean() - fwd[last]) / F.std_error(), 3.0, std::abs(F.mean() - fwd[last]) <= 3.0 * F.std_error());
    if (spikes) {
        const double f0 = crv(paths.times[obs]);
        row("martingale_spike_spot_z", (bar.mean() - f0) / bar.std_error(), 3.0, std::abs(bar.mean() - f0) <= 3.0 * bar.std_error());
    }
    row("floor_frequency", paths.floor_frequency(), 1e-3, paths.floor_frequency() <= 1e-3);

    const auto grid = lsmc::build_grid(c);
    double worst_bound = 0.0, worst_gap = 0.0;
    for (int i = 1; i <= c.n_f(); ++i) {
        const auto [D, U] = lsmc::global_bounds(c, i);
        const auto& lv = grid.levels[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < lv.size(); ++j) {
            worst_bound = std::max({worst_bound, D - lv[j], lv[j] - U});
            if (j) worst_gap = std::max(worst_gap, lv[j] - lv[j - 1]);
        }
    }
    row("grid_bound_violation", std::max(0.0, worst_bound), 1e-9, worst_bound <= 1e-9);
    if (c.mode == lsmc::SwingMode::Continuous) row("grid_max_gap", worst_gap, c.delta, worst_gap <= c.delta + 1e-9);

    const auto surface = pde::solve_dupire(params, c.schedule.fixing_times.back() + market::kOneDay, ctx.grid());
    const auto& d = surface.diagnostics();
    row("pde_bound_violation", d.max_bound_violation, 1e-8, d.max_bound_violation <= 1e-8);
    row("pde_convexity_violation", d.max_convexity_violation, 1e-8, d.max_convexity_violation <= 1e-8);
    std::printf("%s\n", ok ? "all checks passed" : "some checks failed");
    return ok ? 0 : 3;
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument:
        return 1;
    case ErrorCode::MalformedRow:
    case ErrorCode::Io:
    case ErrorCode::OutOfBoundsPrice:
    case ErrorCode::HorizonExceeded:
        return 2;
    default:
        return 3;
    }
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Swing option calibration and pricing"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options opt;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "TOML or JSON run configuration")->required();
        sub->add_option("--seed", opt.seed, "override engine.seed");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--threads", opt.threads, "worker threads (0 = all cores); results do not depend on it");
    };
    auto* calibrate = app.add_subcommand("calibrate", "fit the local volatility (and mean reversion) to quotes");
    auto* smile = app.add_subcommand("imply-smile", "model implied vols by expiry, strike and delivery period");
    auto* lsmc = app.add_subcommand("price-lsmc", "price a swing by least-squares Monte Carlo");
    auto* ppo = app.add_subcommand("price-ppo", "price a swing with a trained PPO policy");
    auto* diagnose = app.add_subcommand("diagnose", "martingale, grid and PDE checks");
    for (auto* s : {calibrate, smile, lsmc, ppo, diagnose}) common(s);
    smile->add_option("--deliveries", opt.deliveries, "delivery labels, e.g. 1d 1m 3m")->delimiter(',');
    lsmc->add_flag("--profile", opt.profile, "write the mean consumption per date");
    ppo->add_flag("--profile", opt.profile, "write the mean consumption per date");
    ppo->add_option("--restarts", opt.restarts, "independent training runs");
    ppo->add_option("--episodes", opt.episodes, "training episodes per run");
    ppo->add_option("--mode", opt.mode, "continuous or bangbang")->check(CLI::IsMember({"continuous", "bangbang"}));
    ppo->add_option("--beta", opt.beta, "value-loss weight");
    ppo->add_option("--policy-surface", opt.policy_surface, "dump the policy at this fixing index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    try {
        if (calibrate->parsed()) return cmd_calibrate(Context("calibrate", opt));
        if (smile->parsed()) return cmd_imply_smile(Context("imply-smile", opt));
        if (lsmc->parsed()) return cmd_price_lsmc(Context("price-lsmc", opt));
        if (ppo->parsed()) return cmd_price_ppo(Context("price-ppo", opt));
        if (diagnose->parsed()) return cmd_diagnose(Context("diagnose", opt));
    } catch (const Error& e) {
        std::fprintf(stderr, "swingctl: %s\n", e.what());
        return exit_code(e.code());
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "swingctl: %s\n", e.what());
        return 2;
    }
    return 1;
}

} // namespace swingctl
