#include "config.hpp"

#include "swing/error.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace swingctl {

using swing::Error;
using swing::ErrorCode;

namespace {

Json to_json(const toml::node& node) {
    if (auto* t = node.as_table()) {
        Json out = Json::object();
        for (auto&& [k, v] : *t) out[std::string(k.str())] = to_json(v);
        return out;
    }
    if (auto* a = node.as_array()) {
        Json out = Json::array();
        for (auto&& v : *a) out.push_back(to_json(v));
        return out;
    }
    if (auto* s = node.as_string()) return s->get();
    if (auto* i = node.as_integer()) return i->get();
    if (auto* f = node.as_floating_point()) return f->get();
    if (auto* b = node.as_boolean()) return b->get();
    if (auto* d = node.as_date()) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d->get().year, d->get().month, d->get().day);
        return std::string(buf);
    }
    throw Error(ErrorCode::Config, "unsupported TOML value type");
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"market", {"valuation_date", "curve", "quotes", "rate"}},
        {"model", {"mean_reversion", "mean_reversion_grid", "local_vol", "pde_nodes", "pde_k_max", "pde_steps_per_day"}},
        {"calibration", {"tolerance", "max_iterations", "anderson", "memory"}},
        {"spike", {"gamma", "intensity", "amplitude"}},
        {"contract",
         {"first_fixing", "days", "min_daily", "max_daily", "min_total", "max_total", "mode", "grid_step", "strike",
          "strike_month", "floating", "window_days", "pay_lag_days"}},
        {"engine", {"seed", "regression_paths", "pricing_paths", "chunk_paths", "level"}},
        {"ppo",
         {"mode", "restarts", "episodes", "batch_episodes", "epochs", "minibatch", "learn_rate", "beta", "gae_lambda",
          "clip_eps", "hidden", "shared_log_std", "anneal_learn_rate", "pricing_paths"}},
        {"smile", {"months", "moneyness", "deliveries"}},
        {"diagnose", {"paths"}},
    };
    return s;
}

} // namespace

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Config, "cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Json out;
    const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    try {
        if (json) out = Json::parse(buf.str());
        else out = to_json(toml::parse(buf.str(), path));
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << path << ':' << e.source().begin.line << ": " << e.description();
        throw Error(ErrorCode::Config, msg.str());
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Config, path + ": " + e.what());
    }
    if (!out.is_object()) throw Error(ErrorCode::Config, path + ": top level must be a table");
    validate_schema(out);
    return out;
}

std::uint64_t config_hash(const Json& config) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void validate_schema(const Json& config) {
    for (auto& [table, body] : config.items()) {
        auto it = schema().find(table);
        if (it == schema().end()) throw Error(ErrorCode::Config, "unknown table [" + table + "]");
        if (!body.is_object()) throw Error(ErrorCode::Config, "[" + table + "] must be a table");
        for (auto& [key, value] : body.items()) {
            (void)value;
            if (!it->second.count(key)) throw Error(ErrorCode::Config, "unknown key " + table + "." + key);
        }
    }
}

Section::Section(const Json& root, const std::string& name) : name_(name) {
    auto it = root.find(name);
    if (it != root.end()) table_ = &*it;
}

const Json* Section::find(const std::string& key) const {
    if (!table_) return nullptr;
    auto it = table_->find(key);
    return it == table_->end() ? nullptr : &*it;
}

void Section::bad(const std::string& key, const char* want) const {
    throw Error(ErrorCode::Config, name_ + "." + key + " must be " + want);
}

bool Section::has(const std::string& key) const { return find(key) != nullptr; }

double Section::number(const std::string& key, double fallback) const {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) bad(key, "a number");
    return v->get<double>();
}

double Section::number(const std::string& key) const {
    if (!find(key)) throw Error(ErrorCode::Config, "missing " + name_ + "." + key);
    return number(key, 0.0);
}

long long Section::integer(const std::string& key, long long fallback) const {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) bad(key, "an integer");
    return v->get<long long>();
}

bool Section::boolean(const std::string& key, bool fallback) const {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) bad(key, "true or false");
    return v->get<bool>();
}

std::string Section::string(const std::string& key, const std::string& fallback) const {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) bad(key, "a string");
    return v->get<std::string>();
}

std::string Section::string(const std::string& key) const {
    if (!find(key)) throw Error(ErrorCode::Config, "missing " + name_ + "." + key);
    return string(key, "");
}

std::vector<double> Section::numbers(const std::string& key, std::vector<double> fallback) const {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) bad(key, "an array of numbers");
    std::vector<double> out;
    for (const auto& x : *v) {
        if (!x.is_number()) bad(key, "an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::string> Section::strings(const std::string& key, std::vector<std::string> fallback) const {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) bad(key, "an array of strings");
    std::vector<std::string> out;
    for (const auto& x : *v) {
        if (!x.is_string()) bad(key, "an array of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

const Json& Section::raw(const std::string& key) const {
    const Json* v = find(key);
    if (!v) throw Error(ErrorCode::Config, "missing " + name_ + "." + key);
    return *v;
}

} // namespace swingctl
