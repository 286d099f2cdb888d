#include "swing/ppo/network.hpp"

#include "swing/error.hpp"

#include <algorithm>
#include <cmath>

namespace swing::ppo {

Mlp::Mlp(int inputs, std::vector<int> hidden, int outputs) {
    require(inputs > 0 && outputs > 0, "Mlp: empty layer");
    sizes_.push_back(inputs);
    for (int h : hidden) {
        require(h > 0, "Mlp: empty hidden layer");
        sizes_.push_back(h);
    }
    sizes_.push_back(outputs);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        offsets_.push_back(n_params_);
        n_params_ += sizes_[l + 1] * (sizes_[l] + 1);
    }
}

Mlp::Workspace Mlp::workspace() const {
    Workspace ws;
    for (int s : sizes_) ws.act.emplace_back(static_cast<std::size_t>(s), 0.0);
    const int widest = *std::max_element(sizes_.begin(), sizes_.end());
    ws.delta.resize(static_cast<std::size_t>(widest));
    ws.back.resize(static_cast<std::size_t>(widest));
    return ws;
}

void Mlp::init(double* params, numerics::CounterRng& rng, double out_scale, double out_bias) const {
    const std::size_t layers = offsets_.size();
    for (std::size_t l = 0; l < layers; ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in)) * (l + 1 == layers ? out_scale : 1.0);
        double* W = params + offsets_[l];
        for (int q = 0; q < in * out; ++q) W[q] = bound * (2.0 * rng.uniform() - 1.0);
        for (int o = 0; o < out; ++o) W[in * out + o] = l + 1 == layers ? out_bias : 0.0;
    }
}

void Mlp::forward(const double* params, const double* x, Workspace& ws) const {
    std::copy(x, x + sizes_[0], ws.act[0].begin());
    const std::size_t layers = offsets_.size();
    for (std::size_t l = 0; l < layers; ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double* W = params + offsets_[l];
        const double* b = W + in * out;
        const auto& h = ws.act[l];
        auto& y = ws.act[l + 1];
        for (int o = 0; o < out; ++o) {
            double z = b[o];
            for (int q = 0; q < in; ++q) z += W[o * in + q] * h[static_cast<std::size_t>(q)];
            y[static_cast<std::size_t>(o)] = l + 1 == layers ? z : std::tanh(z);
        }
    }
}

void Mlp::backward(const double* params, Workspace& ws, const double* dout, double* grad) const {
    const std::size_t layers = offsets_.size();
    std::copy(dout, dout + sizes_.back(), ws.delta.begin());
    for (std::size_t l = layers; l-- > 0;) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double* W = params + offsets_[l];
        double* gW = grad + offsets_[l];
        double* gb = gW + in * out;
        const auto& h = ws.act[l];
        for (int o = 0; o < out; ++o) {
            const double d = ws.delta[static_cast<std::size_t>(o)];
            for (int q = 0; q < in; ++q) gW[o * in + q] += d * h[static_cast<std::size_t>(q)];
            gb[o] += d;
        }
        if (l == 0) break;
        for (int q = 0; q < in; ++q) {
            double s = 0.0;
            for (int o = 0; o < out; ++o) s += W[o * in + q] * ws.delta[static_cast<std::size_t>(o)];
            const double a = h[static_cast<std::size_t>(q)];
            ws.back[static_cast<std::size_t>(q)] = s * (1.0 - a * a);
        }
        std::copy(ws.back.begin(), ws.back.begin() + in, ws.delta.begin());
    }
}

} // namespace swing::ppo
