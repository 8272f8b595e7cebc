#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"
#include "ricbox/mlp.hpp"

namespace ricbox {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig cfg;
    std::uint64_t step = 0;
    Gradients m; // first moments, shaped like the params
    Gradients v; // second moments

    static AdamState init(const MlpParams& params, const AdamConfig& cfg) {
        AdamState s;
        s.cfg = cfg;
        s.m = zeros_like(params);
        s.v = zeros_like(params);
        return s;
    }
};

// Standard bias-corrected Adam update. Non-finite gradients abort with the
// offending layer named; params and state are then left untouched.
inline void adam_step(MlpParams& params, const Gradients& grads, AdamState& state) {
    if (grads.weights.size() != params.weights.size())
        throw contract_error("adam_step: gradient layer count mismatch");
    for (std::size_t l = 0; l < grads.weights.size(); ++l) {
        if (!grads.weights[l].same_shape(params.weights[l]) ||
            grads.biases[l].size() != params.biases[l].size())
            throw contract_error("adam_step: gradient shape mismatch at layer " +
                                 std::to_string(l));
        if (!all_finite(grads.weights[l]) || !all_finite(grads.biases[l]))
            throw numeric_error("adam_step: non-finite gradient at layer " + std::to_string(l));
    }

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(state.cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(state.cfg.beta2, t);

    auto update = [&](double& p, double g, double& m, double& v) {
        m = state.cfg.beta1 * m + (1.0 - state.cfg.beta1) * g;
        v = state.cfg.beta2 * v + (1.0 - state.cfg.beta2) * g * g;
        const double mhat = m / bc1;
        const double vhat = v / bc2;
        p -= state.cfg.learning_rate * mhat / (std::sqrt(vhat) + state.cfg.epsilon);
    };

    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        for (std::size_t i = 0; i < params.weights[l].data.size(); ++i)
            update(params.weights[l].data[i], grads.weights[l].data[i],
                   state.m.weights[l].data[i], state.v.weights[l].data[i]);
        for (std::size_t i = 0; i < params.biases[l].size(); ++i)
            update(params.biases[l][i], grads.biases[l][i], state.m.biases[l][i],
                   state.v.biases[l][i]);
    }
}

} // namespace ricbox
