#include "swing/lv/local_vol.hpp"

#include "swing/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace swing::lv {

LocalVolSurface::LocalVolSurface(std::vector<double> time_knots, std::vector<double> k_knots,
                                 std::vector<double> values)
    : t_(std::move(time_knots)), k_(std::move(k_knots)), v_(std::move(values)) {
    require(!t_.empty() && !k_.empty(), "LocalVolSurface: empty knot vector");
    require(v_.size() == t_.size() * k_.size(), "LocalVolSurface: values do not match the knot grid");
    for (std::size_t i = 1; i < t_.size(); ++i) require(t_[i] > t_[i - 1], "LocalVolSurface: time knots must increase");
    for (std::size_t j = 1; j < k_.size(); ++j) require(k_[j] > k_[j - 1], "LocalVolSurface: k knots must increase");
    for (double& v : v_) {
        require(std::isfinite(v), "LocalVolSurface: nonfinite vol");
        v = std::clamp(v, kVolFloor, kVolCap);
    }
    rows_.reserve(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) {
        const auto first = v_.begin() + static_cast<std::ptrdiff_t>(i * k_.size());
        if (k_.size() == 1) rows_.emplace_back(std::vector<double>{k_[0], k_[0] + 1.0}, std::vector<double>{*first, *first});
        else rows_.emplace_back(k_, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(k_.size())));
    }
}

LocalVolSurface LocalVolSurface::flat(double vol) { return LocalVolSurface({1.0}, {1.0}, {vol}); }

std::size_t LocalVolSurface::slice_index(double t) const {
    const auto it = std::lower_bound(t_.begin(), t_.end(), t);
    return it == t_.end() ? t_.size() - 1 : static_cast<std::size_t>(it - t_.begin());
}

double LocalVolSurface::operator()(double t, double k) const { return rows_[slice_index(t)](k); }

LocalVolSurface LocalVolSurface::with_values(std::vector<double> values) const {
    return LocalVolSurface(t_, k_, std::move(values));
}

void LocalVolSurface::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "t,k,vol\n";
    char buf[96];
    for (std::size_t i = 0; i < t_.size(); ++i)
        for (std::size_t j = 0; j < k_.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t_[i], k_[j], v_[i * k_.size() + j]);
            out << buf;
        }
}

LocalVolSurface LocalVolSurface::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::map<double, std::map<double, double>> grid;
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "t,k,vol") throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) + ": expected header 't,k,vol'");
            header = true;
            continue;
        }
        double t = 0, k = 0, v = 0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(line);
        if (!(ss >> t >> c1 >> k >> c2 >> v) || c1 != ',' || c2 != ',' || !(v > 0.0))
            throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) + ": bad row '" + line + "'");
        grid[t][k] = v;
    }
    if (grid.empty()) throw Error(ErrorCode::MalformedRow, path + ": no rows");
    std::vector<double> ts, ks, vs;
    for (const auto& [k, v] : grid.begin()->second) ks.push_back(k);
    for (const auto& [t, row] : grid) {
        ts.push_back(t);
        if (row.size() != ks.size()) throw Error(ErrorCode::MalformedRow, path + ": incomplete (t, k) grid");
        std::size_t j = 0;
        for (const auto& [k, v] : row) {
            if (k != ks[j++]) throw Error(ErrorCode::MalformedRow, path + ": k knots differ across times");
            vs.push_back(v);
        }
    }
    return LocalVolSurface(ts, ks, vs);
}

void ModelParams::validate() const { require(a >= 0.0 && std::isfinite(a), "mean reversion must be nonnegative"); }

} // namespace swing::lv
