#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "ricbox/adam.hpp"
#include "ricbox/categorical.hpp"
#include "ricbox/errors.hpp"
#include "ricbox/mlp.hpp"
#include "ricbox/rng.hpp"
#include "ricbox/rollout.hpp"
#include "ricbox/update_common.hpp"

namespace ricbox {

struct PpoConfig {
    double clip_epsilon = 0.2;
    int epochs = 4;
    int minibatch_size = 64;
    double entropy_coef = 0.01;
    double value_coef = 1.0;
    double grad_clip_norm = 5.0;
};

// Clipped surrogate for one step: min(rho * A, clip(rho, 1-eps, 1+eps) * A).
inline double ppo_surrogate(double ratio, double advantage, double clip_epsilon) {
    const double clipped = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
    return std::min(ratio * advantage, clipped * advantage);
}

// Several epochs of minibatch ascent on the clipped surrogate, plus value
// regression on the rewards-to-go. Consumes the buffer. Reported losses are
// means over all processed minibatches.
inline LossReport ppo_update(RolloutBuffer& buffer, MlpParams& actor, AdamState& actor_opt,
                             MlpParams& critic, AdamState& critic_opt, const PpoConfig& cfg,
                             Rng& shuffle_rng) {
    if (cfg.clip_epsilon <= 0.0 || cfg.clip_epsilon >= 1.0)
        throw contract_error("ppo_update: clip epsilon must be in (0, 1)");
    if (cfg.epochs < 1) throw contract_error("ppo_update: epochs must be >= 1");

    const RolloutBuffer::Flat flat = buffer.flatten();
    const std::size_t steps = flat.actions.size();
    for (std::size_t t = 0; t < steps; ++t)
        if (!std::isfinite(flat.old_log_probs[t]) || !std::isfinite(flat.advantages[t]))
            throw numeric_error("ppo_update: non-finite rollout data at step " +
                                std::to_string(t) + "; buffer left unconsumed");
    buffer.mark_consumed();

    const std::size_t mb_size = cfg.minibatch_size <= 0
                                    ? steps
                                    : std::min<std::size_t>(
                                          static_cast<std::size_t>(cfg.minibatch_size), steps);

    std::vector<std::size_t> order(steps);
    std::iota(order.begin(), order.end(), std::size_t{0});

    LossReport report;
    std::size_t batches = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with the run's shuffle stream; deterministic per seed.
        for (std::size_t i = steps; i > 1; --i) {
            const std::size_t j = shuffle_rng.uniform_int(static_cast<std::uint32_t>(i));
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t start = 0; start < steps; start += mb_size) {
            const std::size_t end = std::min(start + mb_size, steps);
            const std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                order.begin() + static_cast<std::ptrdiff_t>(end));
            const std::size_t m = rows.size();
            const double inv_m = 1.0 / static_cast<double>(m);

            const Matrix obs = detail::gather_rows(flat.observations, rows);
            ForwardCache actor_cache;
            const Matrix logits = forward(actor, obs, &actor_cache);
            Matrix dlogits(logits.rows, logits.cols);

            double surrogate_loss = 0.0;
            double mean_entropy = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t t = rows[i];
                const std::vector<double> row = detail::matrix_row(logits, i);
                const std::vector<double> p = softmax(row);
                const auto [log_prob, entropy] = log_prob_and_entropy(row, flat.actions[t]);
                const double ratio = std::exp(log_prob - flat.old_log_probs[t]);
                if (!std::isfinite(ratio))
                    throw numeric_error("ppo_update: non-finite ratio at step " +
                                        std::to_string(t));
                const double adv = flat.advantages[t];
                const double clipped =
                    std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
                const bool use_unclipped = ratio * adv <= clipped * adv;
                surrogate_loss -= ppo_surrogate(ratio, adv, cfg.clip_epsilon) * inv_m;
                mean_entropy += entropy * inv_m;

                const double lse = row[flat.actions[t]] - log_prob;
                for (std::size_t j = 0; j < row.size(); ++j) {
                    const double indicator =
                        (static_cast<int>(j) == flat.actions[t]) ? 1.0 : 0.0;
                    const double d_surr =
                        use_unclipped ? -adv * ratio * (indicator - p[j]) : 0.0;
                    const double d_ent =
                        cfg.entropy_coef * p[j] * ((row[j] - lse) + entropy);
                    dlogits.at(i, j) = (d_surr + d_ent) * inv_m;
                }
            }

            Gradients actor_grads = backward(actor, actor_cache, dlogits);
            clip_global_norm(actor_grads, cfg.grad_clip_norm);
            adam_step(actor, actor_grads, actor_opt);

            ForwardCache critic_cache;
            const Matrix values = forward(critic, obs, &critic_cache);
            Matrix dvalues(values.rows, values.cols);
            double critic_loss = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double err = values.at(i, 0) - flat.returns[rows[i]];
                critic_loss += cfg.value_coef * err * err * inv_m;
                dvalues.at(i, 0) = cfg.value_coef * 2.0 * err * inv_m;
            }
            Gradients critic_grads = backward(critic, critic_cache, dvalues);
            clip_global_norm(critic_grads, cfg.grad_clip_norm);
            adam_step(critic, critic_grads, critic_opt);

            report.actor_loss += surrogate_loss;
            report.critic_loss += critic_loss;
            report.entropy += mean_entropy;
            ++batches;
        }
    }

    const double inv_b = 1.0 / static_cast<double>(batches);
    report.actor_loss *= inv_b;
    report.critic_loss *= inv_b;
    report.entropy *= inv_b;
    report.total_loss = report.actor_loss + report.critic_loss;
    if (!std::isfinite(report.total_loss))
        throw numeric_error("ppo_update: non-finite loss");
    return report;
}

} // namespace ricbox
