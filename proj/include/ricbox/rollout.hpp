#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ricbox/errors.hpp"
#include "ricbox/matrix.hpp"

namespace ricbox {

// One on-policy trajectory: parallel arrays, one entry per step.
struct Trajectory {
    std::vector<std::vector<double>> observations;
    std::vector<int> actions;
    std::vector<double> log_probs; // at collection time
    std::vector<double> rewards;
    std::vector<double> values;    // critic estimate at collection time
    std::vector<std::uint8_t> dones;

    std::size_t size() const { return actions.size(); }

    void push(std::vector<double> obs, int action, double log_prob, double reward,
              double value, bool done) {
        observations.push_back(std::move(obs));
        actions.push_back(action);
        log_probs.push_back(log_prob);
        rewards.push_back(reward);
        values.push_back(value);
        dones.push_back(done ? 1 : 0);
    }
};

// G_t = r_t + gamma * G_{t+1}, with G_{T-1} = r_{T-1}. Doubles as the
// reward-to-go R_hat for PPO.
inline std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                              double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw contract_error("discounted_returns: gamma must be in (0, 1]");
    std::vector<double> out(rewards.size(), 0.0);
    double g = 0.0;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        g = rewards[i] + gamma * g;
        out[i] = g;
    }
    return out;
}

// A_t = G_t - V(s_t), normalized to zero mean / unit variance across the
// batch. Constant raw advantages normalize to all-zero (the scale guard
// replaces a zero sigma by 1).
inline std::vector<double> advantages(const std::vector<double>& returns,
                                      const std::vector<double>& values) {
    if (returns.size() != values.size())
        throw contract_error("advantages: returns/values length mismatch");
    const std::size_t n = returns.size();
    std::vector<double> adv(n, 0.0);
    if (n == 0) return adv;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        adv[i] = returns[i] - values[i];
        mean += adv[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    var /= static_cast<double>(n);
    const double sigma = std::sqrt(var);
    const double denom = sigma < 1e-12 ? 1.0 : sigma;
    for (double& a : adv) a = (a - mean) / denom;
    return adv;
}

// The trajectory set D_k plus the derived returns/advantages. On-policy: a
// buffer may be consumed by exactly one update.
class RolloutBuffer {
public:
    void add(Trajectory traj) {
        if (consumed_)
            throw contract_error("rollout buffer: cannot add to a consumed buffer");
        trajectories_.push_back(std::move(traj));
        computed_ = false;
    }

    // Returns/advantages per trajectory, then advantage normalization over
    // the whole buffer.
    void compute(double gamma) {
        returns_.clear();
        raw_values_.clear();
        for (const Trajectory& t : trajectories_) {
            const std::vector<double> g = discounted_returns(t.rewards, gamma);
            returns_.insert(returns_.end(), g.begin(), g.end());
            raw_values_.insert(raw_values_.end(), t.values.begin(), t.values.end());
        }
        advantages_ = advantages(returns_, raw_values_);
        computed_ = true;
    }

    const std::vector<Trajectory>& trajectories() const { return trajectories_; }
    const std::vector<double>& returns() const { return returns_; }
    const std::vector<double>& advantage_values() const { return advantages_; }
    bool computed() const { return computed_; }
    bool consumed() const { return consumed_; }

    std::size_t step_count() const {
        std::size_t n = 0;
        for (const Trajectory& t : trajectories_) n += t.size();
        return n;
    }

    // Flattened views used by the updates.
    struct Flat {
        Matrix observations;            // steps x obs_dim
        std::vector<int> actions;
        std::vector<double> old_log_probs;
        std::vector<double> returns;
        std::vector<double> advantages;
    };

    Flat flatten() const {
        if (!computed_)
            throw contract_error("rollout buffer: compute() must run before consumption");
        Flat f;
        const std::size_t steps = step_count();
        if (steps == 0) throw contract_error("rollout buffer: empty");
        const std::size_t obs_dim = trajectories_.front().observations.front().size();
        f.observations = Matrix(steps, obs_dim);
        std::size_t row = 0;
        for (const Trajectory& t : trajectories_) {
            for (std::size_t i = 0; i < t.size(); ++i, ++row) {
                if (t.observations[i].size() != obs_dim)
                    throw contract_error("rollout buffer: ragged observation dims");
                for (std::size_t j = 0; j < obs_dim; ++j)
                    f.observations.at(row, j) = t.observations[i][j];
                f.actions.push_back(t.actions[i]);
                f.old_log_probs.push_back(t.log_probs[i]);
            }
        }
        f.returns = returns_;
        f.advantages = advantages_;
        return f;
    }

    // To be called by the single update that consumes this buffer.
    void mark_consumed() {
        if (consumed_) throw contract_error("rollout buffer: consumed twice");
        consumed_ = true;
    }

    void clear() {
        trajectories_.clear();
        returns_.clear();
        raw_values_.clear();
        advantages_.clear();
        computed_ = false;
        consumed_ = false;
    }

private:
    std::vector<Trajectory> trajectories_;
    std::vector<double> returns_;
    std::vector<double> raw_values_;
    std::vector<double> advantages_;
    bool computed_ = false;
    bool consumed_ = false;
};

} // namespace ricbox
