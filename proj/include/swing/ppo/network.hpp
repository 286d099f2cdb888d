#pragma once

#include "swing/numerics/philox.hpp"

#include <vector>

namespace swing::ppo {

/// Dense feed-forward net with tanh hidden layers and a linear output.
/// Parameters live in an external flat array: per layer W (out x in,
/// row-major) then b.
class Mlp {
public:
    Mlp() = default;
    Mlp(int inputs, std::vector<int> hidden, int outputs);

    int inputs() const noexcept { return sizes_.front(); }
    int outputs() const noexcept { return sizes_.back(); }
    int n_params() const noexcept { return n_params_; }
    const std::vector<int>& sizes() const noexcept { return sizes_; }

    struct Workspace {
        std::vector<std::vector<double>> act; // act[0] is the input
        std::vector<double> delta, back;
        const std::vector<double>& out() const { return act.back(); }
    };
    Workspace workspace() const;

    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases; the
    /// output layer is scaled by out_scale and its biases set to out_bias.
    void init(double* params, numerics::CounterRng& rng, double out_scale = 1.0, double out_bias = 0.0) const;

    void forward(const double* params, const double* x, Workspace& ws) const;
    /// Adds d(dout . output)/d(params) to grad, using the activations of the
    /// last forward call.
    void backward(const double* params, Workspace& ws, const double* dout, double* grad) const;

private:
    std::vector<int> sizes_;
    std::vector<int> offsets_; // start of each layer's W
    int n_params_ = 0;
};

} // namespace swing::ppo
