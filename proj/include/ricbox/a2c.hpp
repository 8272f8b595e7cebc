#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ricbox/adam.hpp"
#include "ricbox/categorical.hpp"
#include "ricbox/errors.hpp"
#include "ricbox/mlp.hpp"
#include "ricbox/rollout.hpp"
#include "ricbox/update_common.hpp"

namespace ricbox {

struct A2cConfig {
    double discount = 0.9;
    double entropy_coef = 0.01;
    double grad_clip_norm = 5.0;
};

namespace detail {

// Policy-gradient loss and, if requested, dL/dlogits for
// L = -mean(log pi(a_t) * A_t) - entropy_coef * mean(H_t).
// Reported actor_loss excludes the entropy bonus.
struct PolicyPass {
    double pg_loss = 0.0;
    double mean_entropy = 0.0;
};

inline PolicyPass policy_gradient_pass(const Matrix& logits, const std::vector<int>& actions,
                                       const std::vector<double>& advantages,
                                       double entropy_coef, Matrix* dlogits) {
    const std::size_t n = logits.rows;
    PolicyPass out;
    if (dlogits) *dlogits = Matrix(logits.rows, logits.cols);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::vector<double> row = matrix_row(logits, t);
        const std::vector<double> p = softmax(row);
        const auto [log_prob, entropy] = log_prob_and_entropy(row, actions[t]);
        out.pg_loss -= log_prob * advantages[t] * inv_n;
        out.mean_entropy += entropy * inv_n;
        if (dlogits) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double indicator = (static_cast<int>(j) == actions[t]) ? 1.0 : 0.0;
                const double d_pg = -advantages[t] * (indicator - p[j]);
                const double log_pj = row[j] - (row[actions[t]] - log_prob); // logit - lse
                const double d_ent = entropy_coef * p[j] * (log_pj + entropy);
                dlogits->at(t, j) = (d_pg + d_ent) * inv_n;
            }
        }
    }
    return out;
}

// Value regression: L_c = mean (V(s_t) - G_t)^2 and its output gradient.
inline double value_pass(const Matrix& values, const std::vector<double>& targets,
                         double scale, Matrix* dvalues) {
    const std::size_t n = values.rows;
    if (dvalues) *dvalues = Matrix(values.rows, values.cols);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double err = values.at(t, 0) - targets[t];
        loss += err * err * inv_n;
        if (dvalues) dvalues->at(t, 0) = scale * 2.0 * err * inv_n;
    }
    return scale * loss;
}

} // namespace detail

// Loss evaluation without touching parameters or the buffer; used for
// reporting and the monotone-improvement property test.
inline LossReport a2c_loss(const RolloutBuffer& buffer, const MlpParams& actor,
                           const MlpParams& critic, const A2cConfig& cfg) {
    const RolloutBuffer::Flat flat = buffer.flatten();
    const Matrix logits = forward(actor, flat.observations);
    const auto pass = detail::policy_gradient_pass(logits, flat.actions, flat.advantages,
                                                   cfg.entropy_coef, nullptr);
    const Matrix values = forward(critic, flat.observations);
    const double critic_loss = detail::value_pass(values, flat.returns, 1.0, nullptr);
    LossReport report;
    report.actor_loss = pass.pg_loss;
    report.critic_loss = critic_loss;
    report.total_loss = pass.pg_loss + critic_loss;
    report.entropy = pass.mean_entropy;
    return report;
}

// One synchronous gradient step on each network with its own optimizer.
// Advantages are treated as constants (no gradient into the critic from the
// actor loss). Consumes the buffer.
inline LossReport a2c_update(RolloutBuffer& buffer, MlpParams& actor, AdamState& actor_opt,
                             MlpParams& critic, AdamState& critic_opt, const A2cConfig& cfg) {
    const RolloutBuffer::Flat flat = buffer.flatten();

    ForwardCache actor_cache;
    const Matrix logits = forward(actor, flat.observations, &actor_cache);
    Matrix dlogits;
    const auto pass = detail::policy_gradient_pass(logits, flat.actions, flat.advantages,
                                                   cfg.entropy_coef, &dlogits);

    ForwardCache critic_cache;
    const Matrix values = forward(critic, flat.observations, &critic_cache);
    Matrix dvalues;
    const double critic_loss = detail::value_pass(values, flat.returns, 1.0, &dvalues);

    LossReport report;
    report.actor_loss = pass.pg_loss;
    report.critic_loss = critic_loss;
    report.total_loss = pass.pg_loss + critic_loss;
    report.entropy = pass.mean_entropy;
    if (!std::isfinite(report.total_loss) || !std::isfinite(report.entropy))
        throw numeric_error("a2c_update: non-finite loss; buffer left unconsumed");

    Gradients actor_grads = backward(actor, actor_cache, dlogits);
    Gradients critic_grads = backward(critic, critic_cache, dvalues);
    clip_global_norm(actor_grads, cfg.grad_clip_norm);
    clip_global_norm(critic_grads, cfg.grad_clip_norm);

    buffer.mark_consumed();
    adam_step(actor, actor_grads, actor_opt);
    adam_step(critic, critic_grads, critic_opt);
    return report;
}

} // namespace ricbox
