#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "ricbox/allocation.hpp"
#include "ricbox/errors.hpp"

namespace ricbox {

struct RewardConfig {
    double full_reward = 1.0;
    double failure_penalty = -1.0;
    int window_slots = 100;
};

// Sliding-window history of RGB grants per UE. The min/max ratio of the
// windowed counts is the fairness factor of the reward.
class FairnessLedger {
public:
    FairnessLedger(std::size_t n_ues, int window_slots)
        : n_ues_(n_ues), window_(window_slots), counts_(n_ues, 0) {}

    std::size_t n_ues() const { return n_ues_; }
    int window() const { return window_; }

    // Appends one slot of per-UE grants and evicts slots older than the window.
    void record_slot(const std::vector<int>& rgb_per_ue) {
        if (rgb_per_ue.size() != n_ues_)
            throw contract_error("fairness ledger: grant vector length != n_ues");
        slots_.push_back(rgb_per_ue);
        for (std::size_t u = 0; u < n_ues_; ++u) counts_[u] += rgb_per_ue[u];
        while (slots_.size() > static_cast<std::size_t>(window_)) {
            for (std::size_t u = 0; u < n_ues_; ++u) counts_[u] -= slots_.front()[u];
            slots_.pop_front();
        }
    }

    const std::vector<long long>& counts() const { return counts_; }

    // min/max of the windowed counts; an all-zero ledger counts as perfectly
    // fair (no history implies no unfairness).
    double fairness_ratio() const {
        long long lo = counts_.empty() ? 0 : counts_[0];
        long long hi = lo;
        for (long long c : counts_) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        if (hi == 0) return 1.0;
        return static_cast<double>(lo) / static_cast<double>(hi);
    }

    // Per-UE count / max count; all 1.0 when the ledger is all-zero.
    std::vector<double> fairness_shares() const {
        long long hi = 0;
        for (long long c : counts_) hi = std::max(hi, c);
        std::vector<double> shares(n_ues_, 1.0);
        if (hi == 0) return shares;
        for (std::size_t u = 0; u < n_ues_; ++u)
            shares[u] = static_cast<double>(counts_[u]) / static_cast<double>(hi);
        return shares;
    }

private:
    std::size_t n_ues_;
    int window_;
    std::deque<std::vector<int>> slots_;
    std::vector<long long> counts_;
};

inline void update_ledger(FairnessLedger& ledger, const AllocationAction& action) {
    std::vector<int> per_ue(ledger.n_ues(), 0);
    for (const Grant& g : action.grants) {
        if (g.ue_id < 0 || static_cast<std::size_t>(g.ue_id) >= ledger.n_ues())
            throw contract_error("update_ledger: unknown ue id " + std::to_string(g.ue_id));
        per_ue[static_cast<std::size_t>(g.ue_id)] += g.rgb_share;
    }
    ledger.record_slot(per_ue);
}

// Per-slot reward: full reward scaled by the connected fraction, the mean
// rate utility of the connected UEs, and the fairness ratio. No connection
// at all is a failure and earns the penalty.
inline double reward(int connected_count, std::size_t n_ues, double mean_rate_utility,
                     double fairness_ratio, const RewardConfig& cfg) {
    if (connected_count <= 0) return cfg.failure_penalty;
    double connected_fraction =
        static_cast<double>(connected_count) / static_cast<double>(n_ues);
    return cfg.full_reward * connected_fraction * mean_rate_utility * fairness_ratio;
}

} // namespace ricbox
