#pragma once

#include <functional>

#include "ricbox/action_codec.hpp"
#include "ricbox/categorical.hpp"
#include "ricbox/mlp.hpp"
#include "ricbox/ran_env.hpp"
#include "ricbox/rng.hpp"
#include "ricbox/rollout.hpp"
#include "ricbox/update_common.hpp"

namespace ricbox {

// Aggregates of one collected episode (means over its steps).
struct EpisodeStats {
    double mean_reward = 0.0;
    double mean_sum_rate_mbps = 0.0;
    double mean_fairness = 0.0;
};

using StepHook = std::function<void(const RanEnv&, const StepMetrics&)>;

// Runs the stochastic policy directly against the environment for `steps`
// transitions, storing collection-time log-probs and value estimates.
// Environment-level action errors cannot occur here (the codec only emits
// valid grants); the env would absorb them as penalty steps regardless.
inline Trajectory collect_rollout(RanEnv& env, const MlpParams& actor,
                                  const MlpParams& critic, const ActionCodec& codec,
                                  int steps, Rng& policy_rng, EpisodeStats* stats = nullptr,
                                  const StepHook& on_step = nullptr) {
    if (steps < 1) throw contract_error("collect_rollout: steps must be >= 1");
    Trajectory traj;
    EpisodeStats agg;
    for (int t = 0; t < steps; ++t) {
        ObservationVector obs = env.observe();
        Matrix input(1, obs.size());
        input.data = obs;
        const std::vector<double> logits = detail::matrix_row(forward(actor, input), 0);
        const auto [action_index, log_prob] = softmax_sample(logits, policy_rng);
        const double value = forward(critic, input).at(0, 0);
        const StepMetrics metrics = env.step(codec.decode(action_index));
        traj.push(std::move(obs), action_index, log_prob, metrics.reward, value,
                  t + 1 == steps);
        agg.mean_reward += metrics.reward;
        agg.mean_sum_rate_mbps += metrics.sum_rate_mbps;
        agg.mean_fairness += metrics.fairness_ratio;
        if (on_step) on_step(env, metrics);
    }
    if (stats) {
        const double inv = 1.0 / static_cast<double>(steps);
        stats->mean_reward = agg.mean_reward * inv;
        stats->mean_sum_rate_mbps = agg.mean_sum_rate_mbps * inv;
        stats->mean_fairness = agg.mean_fairness * inv;
    }
    return traj;
}

} // namespace ricbox
