#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ricbox/mlp.hpp"
#include "ricbox/rng.hpp"

namespace ricbox {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t params_checked = 0;
    std::size_t worst_layer = 0;

    // Strict inequality: tolerance 0 can never pass.
    bool pass(double tolerance) const { return max_rel_error < tolerance; }
};

// Central finite differences on a random subsample of parameters, compared
// against the supplied analytic gradients. The denominator floor avoids 0/0
// blowups on parameters whose gradient is genuinely ~0.
inline GradCheckReport grad_check(const MlpParams& params,
                                  const std::function<double(const MlpParams&)>& loss_fn,
                                  const Gradients& analytic, Rng& rng,
                                  std::size_t max_samples = 200, double h = 1e-5) {
    GradCheckReport report;

    auto probe = [&](MlpParams& p, double* slot, double analytic_grad, std::size_t layer) {
        const double saved = *slot;
        *slot = saved + h;
        const double up = loss_fn(p);
        *slot = saved - h;
        const double down = loss_fn(p);
        *slot = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::fabs(analytic_grad), std::fabs(numeric), 1e-6});
        const double rel = std::fabs(analytic_grad - numeric) / denom;
        if (rel >= report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_layer = layer;
        }
        ++report.params_checked;
    };

    MlpParams scratch = params;
    const std::size_t total = params.param_count();
    if (total <= max_samples) {
        for (std::size_t l = 0; l < scratch.weights.size(); ++l) {
            for (std::size_t i = 0; i < scratch.weights[l].data.size(); ++i)
                probe(scratch, &scratch.weights[l].data[i], analytic.weights[l].data[i], l);
            for (std::size_t i = 0; i < scratch.biases[l].size(); ++i)
                probe(scratch, &scratch.biases[l][i], analytic.biases[l][i], l);
        }
    } else {
        for (std::size_t s = 0; s < max_samples; ++s) {
            std::size_t idx = rng.uniform_int(static_cast<std::uint32_t>(total));
            for (std::size_t l = 0; l < scratch.weights.size(); ++l) {
                if (idx < scratch.weights[l].data.size()) {
                    probe(scratch, &scratch.weights[l].data[idx], analytic.weights[l].data[idx],
                          l);
                    idx = total;
                    break;
                }
                idx -= scratch.weights[l].data.size();
                if (idx < scratch.biases[l].size()) {
                    probe(scratch, &scratch.biases[l][idx], analytic.biases[l][idx], l);
                    idx = total;
                    break;
                }
                idx -= scratch.biases[l].size();
            }
        }
    }
    return report;
}

} // namespace ricbox
