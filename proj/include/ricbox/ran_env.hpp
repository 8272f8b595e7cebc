#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ricbox/allocation.hpp"
#include "ricbox/errors.hpp"
#include "ricbox/fairness.hpp"
#include "ricbox/matrix.hpp"
#include "ricbox/radio.hpp"
#include "ricbox/rng.hpp"
#include "ricbox/scene.hpp"

namespace ricbox {

struct BaseStation {
    int id = 0;
    double x_m = 0.0, y_m = 0.0;
    double tx_power_dbm = 30.0;
    double carrier_freq_ghz = 3.5;
    double bandwidth_mhz = 10.0;
    int rgb_count = 12;
};

struct UserEquipment {
    int id = 0;
    double x_m = 0.0, y_m = 0.0;
    double vx_m = 0.0, vy_m = 0.0;   // per-slot displacement
    double demand_mbps = 1.0;
    double waypoint_x_m = 0.0, waypoint_y_m = 0.0;
    double speed_m_per_slot = 0.0;
};

struct ScenarioConfig {
    double arena_width_m = 600.0;
    double arena_height_m = 600.0;
    int n_bss = 2;
    int n_ues = 4;
    double demand_mbps = 1.0;
    double ue_speed_m_per_slot = 2.0;
    int rgb_count = 12;
    double tx_power_dbm = 30.0;
    double carrier_freq_ghz = 3.5;
    double bandwidth_mhz = 10.0;
};

struct ChannelConfig {
    double path_loss_exponent = 3.0;
    double noise_figure_db = 9.0;
    double shadowing_sigma_db = 0.0;
};

// Full MDP state at one timeslot.
struct NetworkState {
    long long timeslot = 0;
    std::vector<UserEquipment> ues;
    std::vector<BaseStation> bss;
    std::vector<int> association;          // per UE: serving BS id this slot, -1 if none
    Matrix snr_db;                         // n_ues x n_bss
    std::vector<std::vector<int>> cqi;     // n_ues x n_bss, 0..15
    std::vector<double> rate_mbps;         // achieved last slot, per UE
    std::vector<std::uint8_t> channel_request; // 1 = demand unmet last slot
    std::vector<int> used_rgbs;            // per BS, granted last slot
};

struct StepMetrics {
    int connected_count = 0;
    double sum_rate_mbps = 0.0;
    double fairness_ratio = 1.0;
    double reward = 0.0;
};

using ObservationVector = std::vector<double>;

// Fixed observation packing, shared with the xApp-side reconstruction so
// both produce bit-identical vectors: per UE in id order,
// [request, best_cqi/15, rate/demand, fairness_share].
inline ObservationVector pack_observation(const std::vector<std::uint8_t>& requests,
                                          const std::vector<int>& best_cqis,
                                          const std::vector<double>& rates_mbps,
                                          const std::vector<double>& demands_mbps,
                                          const std::vector<double>& shares) {
    const std::size_t n = requests.size();
    if (best_cqis.size() != n || rates_mbps.size() != n || demands_mbps.size() != n ||
        shares.size() != n)
        throw contract_error("pack_observation: per-UE input lengths differ");
    ObservationVector obs(4 * n);
    for (std::size_t u = 0; u < n; ++u) {
        obs[4 * u + 0] = requests[u] ? 1.0 : 0.0;
        obs[4 * u + 1] = static_cast<double>(best_cqis[u]) / 15.0;
        obs[4 * u + 2] = rates_mbps[u] / demands_mbps[u];
        obs[4 * u + 3] = shares[u];
    }
    return obs;
}

inline int best_cqi_for_ue(const NetworkState& s, std::size_t ue) {
    int best = 0;
    for (int c : s.cqi[ue]) best = std::max(best, c);
    return best;
}

// Discrete-time multi-cell downlink simulator. Owns its PRNG, fairness
// ledger and state; one instance per training run, no shared mutation.
class RanEnv {
public:
    RanEnv(const ScenarioConfig& scenario, const ChannelConfig& channel,
           const RewardConfig& reward_cfg, CqiThresholds thresholds, McsTable mcs,
           std::uint64_t seed)
        : scenario_(scenario),
          reward_cfg_(reward_cfg),
          thresholds_(std::move(thresholds)),
          mcs_(std::move(mcs)),
          ledger_(0, reward_cfg.window_slots),
          rng_(0) {
        validate_config(scenario, channel, reward_cfg);
        channel_ = ChannelModel::make(scenario.carrier_freq_ghz, scenario.bandwidth_mhz,
                                      channel.path_loss_exponent, channel.noise_figure_db,
                                      channel.shadowing_sigma_db);
        reset(seed);
    }

    static void validate_config(const ScenarioConfig& s, const ChannelConfig& c,
                                const RewardConfig& r) {
        if (s.n_ues <= 0) throw config_error("scenario.n_ues must be positive");
        if (s.n_bss <= 0) throw config_error("scenario.n_bss must be positive");
        if (s.arena_width_m <= 0.0) throw config_error("scenario.arena_width_m must be positive");
        if (s.arena_height_m <= 0.0) throw config_error("scenario.arena_height_m must be positive");
        if (s.demand_mbps <= 0.0) throw config_error("scenario.demand_mbps must be positive");
        if (s.ue_speed_m_per_slot < 0.0)
            throw config_error("scenario.ue_speed_m_per_slot must be non-negative");
        if (s.rgb_count <= 0) throw config_error("scenario.rgb_count must be positive");
        if (s.tx_power_dbm <= 0.0) throw config_error("scenario.tx_power_dbm must be positive");
        if (s.carrier_freq_ghz <= 0.0)
            throw config_error("scenario.carrier_freq_ghz must be positive");
        if (s.bandwidth_mhz <= 0.0) throw config_error("scenario.bandwidth_mhz must be positive");
        if (c.path_loss_exponent <= 0.0)
            throw config_error("channel.path_loss_exponent must be positive");
        if (c.shadowing_sigma_db < 0.0)
            throw config_error("channel.shadowing_sigma_db must be non-negative");
        if (r.full_reward <= 0.0) throw config_error("reward.full_reward must be positive");
        if (r.failure_penalty > 0.0)
            throw config_error("reward.failure_penalty must be non-positive");
        if (r.window_slots <= 0) throw config_error("reward.window_slots must be positive");
    }

    // Fresh episode: UEs drawn uniformly in the arena, BSs on a fixed grid,
    // no associations, empty fairness window. Identical (config, seed) gives
    // a bit-identical state.
    const NetworkState& reset(std::uint64_t seed) {
        rng_ = Rng::derive(seed, rng_stream::env);
        state_ = NetworkState{};
        state_.timeslot = 0;
        const auto n_ues = static_cast<std::size_t>(scenario_.n_ues);
        const auto n_bss = static_cast<std::size_t>(scenario_.n_bss);

        state_.bss.resize(n_bss);
        place_bss_grid();
        state_.ues.resize(n_ues);
        for (std::size_t u = 0; u < n_ues; ++u) {
            UserEquipment& ue = state_.ues[u];
            ue.id = static_cast<int>(u);
            ue.x_m = rng_.uniform(0.0, scenario_.arena_width_m);
            ue.y_m = rng_.uniform(0.0, scenario_.arena_height_m);
            ue.demand_mbps = scenario_.demand_mbps;
            ue.speed_m_per_slot = scenario_.ue_speed_m_per_slot;
            draw_waypoint(ue);
        }

        state_.association.assign(n_ues, -1);
        state_.rate_mbps.assign(n_ues, 0.0);
        state_.channel_request.assign(n_ues, 1);
        state_.used_rgbs.assign(n_bss, 0);
        state_.cqi.assign(n_ues, std::vector<int>(n_bss, 0));
        state_.snr_db = Matrix(n_ues, n_bss);
        recompute_channel();

        ledger_ = FairnessLedger(n_ues, reward_cfg_.window_slots);
        return state_;
    }

    const NetworkState& state() const { return state_; }
    const ScenarioConfig& scenario() const { return scenario_; }
    const ChannelModel& channel() const { return channel_; }
    const RewardConfig& reward_config() const { return reward_cfg_; }
    const FairnessLedger& ledger() const { return ledger_; }
    const McsTable& mcs() const { return mcs_; }
    std::size_t n_ues() const { return state_.ues.size(); }
    std::size_t n_bss() const { return state_.bss.size(); }
    std::size_t observation_dim() const { return 4 * n_ues(); }

    double snr_db(const UserEquipment& ue, const BaseStation& bs) const {
        double d = std::hypot(ue.x_m - bs.x_m, ue.y_m - bs.y_m);
        return channel_.snr_db(bs.tx_power_dbm, d);
    }

    // nullopt when the action is applicable as-is.
    std::optional<std::string> validate(const AllocationAction& action) const {
        std::vector<int> used(n_bss(), 0);
        std::vector<std::uint8_t> served(n_ues(), 0);
        for (const Grant& g : action.grants) {
            if (g.bs_id < 0 || static_cast<std::size_t>(g.bs_id) >= n_bss())
                return "unknown bs id " + std::to_string(g.bs_id);
            if (g.ue_id < 0 || static_cast<std::size_t>(g.ue_id) >= n_ues())
                return "unknown ue id " + std::to_string(g.ue_id);
            if (g.rgb_share < 0) return "negative rgb share";
            if (g.rgb_share > 0) {
                if (served[static_cast<std::size_t>(g.ue_id)])
                    return "ue " + std::to_string(g.ue_id) + " granted by more than one bs";
                served[static_cast<std::size_t>(g.ue_id)] = 1;
            }
            used[static_cast<std::size_t>(g.bs_id)] += g.rgb_share;
            if (used[static_cast<std::size_t>(g.bs_id)] >
                state_.bss[static_cast<std::size_t>(g.bs_id)].rgb_count)
                return "bs " + std::to_string(g.bs_id) + " over-allocated";
        }
        return std::nullopt;
    }

    // Applies the allocation, pays the reward, advances mobility and the
    // channel, and moves to slot t+1. An invalid action never lands: it is
    // converted to an empty allocation, which earns the failure penalty.
    StepMetrics step(const AllocationAction& action) {
        static const AllocationAction empty_action{};
        const bool invalid = validate(action).has_value();
        const AllocationAction& applied = invalid ? empty_action : action;

        const std::size_t nue = n_ues();
        const std::size_t nbs = n_bss();
        std::vector<double> rates(nue, 0.0);
        std::vector<int> used(nbs, 0);
        std::vector<int> grants_per_ue(nue, 0);
        std::vector<int> serving(nue, -1);
        int connected = 0;
        double utility_sum = 0.0;

        for (const Grant& g : applied.grants) {
            if (g.rgb_share <= 0) continue;
            const auto u = static_cast<std::size_t>(g.ue_id);
            const auto b = static_cast<std::size_t>(g.bs_id);
            used[b] += g.rgb_share;
            grants_per_ue[u] += g.rgb_share;
            const int cqi = state_.cqi[u][b];
            if (cqi >= 1) {
                const BaseStation& bs = state_.bss[b];
                rates[u] = data_rate_mbps(mcs_.entry(cqi), g.rgb_share, bs.rgb_count,
                                          bs.bandwidth_mhz, state_.ues[u].demand_mbps);
                serving[u] = g.bs_id;
                ++connected;
                utility_sum += rates[u] / state_.ues[u].demand_mbps;
            }
        }

        ledger_.record_slot(grants_per_ue);
        const double fa = ledger_.fairness_ratio();

        StepMetrics metrics;
        metrics.connected_count = connected;
        metrics.fairness_ratio = fa;
        for (double r : rates) metrics.sum_rate_mbps += r;
        const double mean_utility =
            connected > 0 ? utility_sum / static_cast<double>(connected) : 0.0;
        metrics.reward = reward(connected, n_ues(), mean_utility, fa, reward_cfg_);

        state_.rate_mbps = rates;
        state_.association = serving;
        state_.used_rgbs = used;
        for (std::size_t u = 0; u < nue; ++u)
            state_.channel_request[u] =
                rates[u] < state_.ues[u].demand_mbps ? std::uint8_t{1} : std::uint8_t{0};

        advance_mobility();
        recompute_channel();
        ++state_.timeslot;
        return metrics;
    }

    ObservationVector observe() const {
        const std::size_t n = n_ues();
        std::vector<int> best(n, 0);
        std::vector<double> demands(n, 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            best[u] = best_cqi_for_ue(state_, u);
            demands[u] = state_.ues[u].demand_mbps;
        }
        return pack_observation(state_.channel_request, best, state_.rate_mbps, demands,
                                ledger_.fairness_shares());
    }

    SceneDescription render(long long episode) const {
        SceneDescription scene;
        scene.episode = episode;
        scene.slot = state_.timeslot;
        const double floor_snr = thresholds_.lower_bound(1);
        for (const BaseStation& bs : state_.bss)
            scene.bss.push_back(
                {bs.id, bs.x_m, bs.y_m, channel_.range_at_snr(bs.tx_power_dbm, floor_snr)});
        for (std::size_t u = 0; u < n_ues(); ++u) {
            const UserEquipment& ue = state_.ues[u];
            scene.ues.push_back({ue.id, ue.x_m, ue.y_m,
                                 rate_bucket(state_.rate_mbps[u], ue.demand_mbps)});
            if (state_.association[u] >= 0)
                scene.edges.push_back({ue.id, state_.association[u]});
        }
        return scene;
    }

private:
    void place_bss_grid() {
        const int n = scenario_.n_bss;
        const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        const int rows = (n + cols - 1) / cols;
        for (int i = 0; i < n; ++i) {
            const int r = i / cols;
            const int c = i % cols;
            BaseStation& bs = state_.bss[static_cast<std::size_t>(i)];
            bs.id = i;
            bs.x_m = (c + 0.5) * scenario_.arena_width_m / cols;
            bs.y_m = (r + 0.5) * scenario_.arena_height_m / rows;
            bs.tx_power_dbm = scenario_.tx_power_dbm;
            bs.carrier_freq_ghz = scenario_.carrier_freq_ghz;
            bs.bandwidth_mhz = scenario_.bandwidth_mhz;
            bs.rgb_count = scenario_.rgb_count;
        }
    }

    void draw_waypoint(UserEquipment& ue) {
        ue.waypoint_x_m = rng_.uniform(0.0, scenario_.arena_width_m);
        ue.waypoint_y_m = rng_.uniform(0.0, scenario_.arena_height_m);
        point_velocity_at_waypoint(ue);
    }

    void point_velocity_at_waypoint(UserEquipment& ue) {
        const double dx = ue.waypoint_x_m - ue.x_m;
        const double dy = ue.waypoint_y_m - ue.y_m;
        const double dist = std::hypot(dx, dy);
        if (dist <= 0.0 || ue.speed_m_per_slot <= 0.0) {
            ue.vx_m = 0.0;
            ue.vy_m = 0.0;
        } else {
            ue.vx_m = ue.speed_m_per_slot * dx / dist;
            ue.vy_m = ue.speed_m_per_slot * dy / dist;
        }
    }

    // Random waypoint: walk straight at fixed speed, redraw on arrival.
    // Waypoints are interior points, so positions never leave the arena.
    void advance_mobility() {
        for (UserEquipment& ue : state_.ues) {
            if (ue.speed_m_per_slot <= 0.0) continue;
            const double dx = ue.waypoint_x_m - ue.x_m;
            const double dy = ue.waypoint_y_m - ue.y_m;
            const double dist = std::hypot(dx, dy);
            if (dist <= ue.speed_m_per_slot) {
                ue.x_m = ue.waypoint_x_m;
                ue.y_m = ue.waypoint_y_m;
                draw_waypoint(ue);
            } else {
                ue.x_m += ue.speed_m_per_slot * dx / dist;
                ue.y_m += ue.speed_m_per_slot * dy / dist;
                point_velocity_at_waypoint(ue);
            }
        }
    }

    void recompute_channel() {
        const bool shadowed = channel_.shadowing_sigma_db > 0.0;
        for (std::size_t u = 0; u < n_ues(); ++u) {
            for (std::size_t b = 0; b < n_bss(); ++b) {
                double snr = snr_db(state_.ues[u], state_.bss[b]);
                if (shadowed) snr += channel_.shadowing_sigma_db * rng_.normal();
                state_.snr_db.at(u, b) = snr;
                state_.cqi[u][b] = thresholds_.cqi_from_snr(snr);
            }
        }
    }

    ScenarioConfig scenario_;
    RewardConfig reward_cfg_;
    CqiThresholds thresholds_;
    McsTable mcs_;
    ChannelModel channel_;
    FairnessLedger ledger_;
    Rng rng_;
    NetworkState state_;
};

} // namespace ricbox
