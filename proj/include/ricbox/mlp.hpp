#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"
#include "ricbox/matrix.hpp"
#include "ricbox/rng.hpp"

namespace ricbox {

struct MlpConfig {
    std::size_t input_dim = 1;
    std::size_t output_dim = 1;
    std::size_t hidden_layers = 2;
    std::size_t hidden_width = 64;
};

// Gradient buffers shaped like a parameter set.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

// Dense tanh MLP with a linear output head. Weights are stored
// (in_dim, out_dim) per layer so a batch row-vector multiplies from the left.
struct MlpParams {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t layer_count() const { return weights.size(); }
    std::size_t input_dim() const { return weights.front().rows; }
    std::size_t output_dim() const { return weights.back().cols; }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l < weights.size(); ++l)
            n += weights[l].data.size() + biases[l].size();
        return n;
    }

    bool same_shape(const MlpParams& o) const {
        if (weights.size() != o.weights.size()) return false;
        for (std::size_t l = 0; l < weights.size(); ++l)
            if (!weights[l].same_shape(o.weights[l]) || biases[l].size() != o.biases[l].size())
                return false;
        return true;
    }

    // Xavier-uniform hidden layers; the output layer is scaled down by 100x
    // so a freshly initialized policy starts near-uniform.
    static MlpParams init(const MlpConfig& cfg, Rng& rng) {
        if (cfg.input_dim == 0 || cfg.output_dim == 0)
            throw contract_error("mlp init: zero input or output dim");
        MlpParams p;
        std::vector<std::size_t> dims;
        dims.push_back(cfg.input_dim);
        for (std::size_t l = 0; l < cfg.hidden_layers; ++l) dims.push_back(cfg.hidden_width);
        dims.push_back(cfg.output_dim);
        for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
            Matrix w(dims[l], dims[l + 1]);
            const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
            const double scale = (l + 2 == dims.size()) ? 0.01 : 1.0;
            for (double& v : w.data) v = scale * rng.uniform(-limit, limit);
            p.weights.push_back(std::move(w));
            p.biases.emplace_back(dims[l + 1], 0.0);
        }
        return p;
    }
};

// Everything backward() needs from the matching forward(): the input batch
// and every layer's post-activation output (final layer is pre-activation,
// the head is linear).
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> activations;
};

inline Matrix forward(const MlpParams& params, const Matrix& input,
                      ForwardCache* cache = nullptr) {
    if (input.cols != params.input_dim())
        throw contract_error("forward: input cols " + std::to_string(input.cols) +
                             " != model input dim " + std::to_string(params.input_dim()));
    if (cache) {
        cache->input = input;
        cache->activations.clear();
    }
    Matrix a = input;
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        Matrix z = matmul(a, params.weights[l]);
        add_row_vector_inplace(z, params.biases[l]);
        if (l + 1 < params.layer_count()) tanh_inplace(z);
        a = std::move(z);
        if (cache) cache->activations.push_back(a);
    }
    return a;
}

inline Gradients zeros_like(const MlpParams& params) {
    Gradients g;
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        g.weights.emplace_back(params.weights[l].rows, params.weights[l].cols);
        g.biases.emplace_back(params.biases[l].size(), 0.0);
    }
    return g;
}

// Exact reverse-mode gradients of forward() given dL/d(output).
inline Gradients backward(const MlpParams& params, const ForwardCache& cache,
                          const Matrix& output_grad) {
    const std::size_t layers = params.layer_count();
    if (cache.activations.size() != layers)
        throw contract_error("backward: cache does not match this parameter set");
    if (output_grad.rows != cache.input.rows || output_grad.cols != params.output_dim())
        throw contract_error("backward: output_grad shape mismatch");

    Gradients grads = zeros_like(params);
    Matrix delta = output_grad;
    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& below = (l == 0) ? cache.input : cache.activations[l - 1];
        if (below.cols != params.weights[l].rows)
            throw contract_error("backward: cache does not match this parameter set");
        grads.weights[l] = matmul_transpose_a(below, delta);
        grads.biases[l] = column_sums(delta);
        if (l > 0) {
            Matrix prev = matmul_transpose_b(delta, params.weights[l]);
            const Matrix& act = cache.activations[l - 1];
            for (std::size_t i = 0; i < prev.data.size(); ++i)
                prev.data[i] *= 1.0 - act.data[i] * act.data[i]; // tanh'
            delta = std::move(prev);
        }
    }
    return grads;
}

inline double global_norm(const Gradients& g) {
    double sq = 0.0;
    for (const Matrix& w : g.weights)
        for (double v : w.data) sq += v * v;
    for (const auto& b : g.biases)
        for (double v : b) sq += v * v;
    return std::sqrt(sq);
}

inline void clip_global_norm(Gradients& g, double max_norm) {
    if (max_norm <= 0.0) return;
    const double norm = global_norm(g);
    if (norm <= max_norm) return;
    const double s = max_norm / norm;
    for (Matrix& w : g.weights)
        for (double& v : w.data) v *= s;
    for (auto& b : g.biases)
        for (double& v : b) v *= s;
}

} // namespace ricbox
