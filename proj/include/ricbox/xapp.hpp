#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ricbox/action_codec.hpp"
#include "ricbox/errors.hpp"
#include "ricbox/fairness.hpp"
#include "ricbox/ran_env.hpp"
#include "ricbox/wire.hpp"

namespace ricbox {

// The scheduler xApp. Holds the deployment-time scenario knowledge (UE
// demands, cell sizes, fairness window) plus its own grant-history ledger,
// mirrored from the control messages it issues. From an indication alone it
// rebuilds exactly the observation vector the environment would expose for
// that slot, asks the agent for an action, and answers with a control
// message.
class RicXapp {
public:
    using ActionSelector = std::function<int(const ObservationVector&)>;

    RicXapp(const ScenarioConfig& scenario, const RewardConfig& reward_cfg,
            std::uint16_t ran_node_id)
        : scenario_(scenario),
          ran_node_id_(ran_node_id),
          codec_(scenario.n_ues, scenario.n_bss, scenario.rgb_count),
          ledger_(static_cast<std::size_t>(scenario.n_ues), reward_cfg.window_slots) {}

    const ActionCodec& action_codec() const { return codec_; }
    const FairnessLedger& mirror_ledger() const { return ledger_; }
    const ObservationVector& last_observation() const { return last_observation_; }

    // New episode on the RAN side: grant history starts over.
    void reset_episode() {
        ledger_ = FairnessLedger(static_cast<std::size_t>(scenario_.n_ues), ledger_.window());
    }

    ObservationVector observation_from_indication(const IndicationMessage& ind) const {
        const auto n = static_cast<std::size_t>(scenario_.n_ues);
        std::vector<double> rates(n, 0.0);
        std::vector<int> best_cqi(n, 0);
        std::vector<std::uint8_t> have_rate(n, 0), have_cqi(n, 0);
        for (const KpiRecord& r : ind.records) {
            if (r.subject_id >= n) continue;
            if (r.kpi_id == static_cast<std::uint16_t>(KpiId::dl_rate_mbps)) {
                rates[r.subject_id] = r.value;
                have_rate[r.subject_id] = 1;
            } else if (r.kpi_id == static_cast<std::uint16_t>(KpiId::cqi)) {
                best_cqi[r.subject_id] = static_cast<int>(r.value);
                have_cqi[r.subject_id] = 1;
            }
        }
        std::string missing;
        for (std::size_t u = 0; u < n; ++u) {
            if (!have_rate[u]) missing += " 4";
            if (!have_cqi[u]) missing += " 5";
        }
        if (!missing.empty())
            throw decision_error("xapp: indication missing required kpi ids:" + missing);

        std::vector<std::uint8_t> requests(n, 0);
        std::vector<double> demands(n, scenario_.demand_mbps);
        for (std::size_t u = 0; u < n; ++u)
            requests[u] = rates[u] < demands[u] ? std::uint8_t{1} : std::uint8_t{0};
        return pack_observation(requests, best_cqi, rates, demands,
                                ledger_.fairness_shares());
    }

    ControlMessage decide(const IndicationMessage& ind, const ActionSelector& agent) {
        last_observation_ = observation_from_indication(ind);
        const int action_index = agent(last_observation_);
        const AllocationAction action = codec_.decode(action_index);
        update_ledger(ledger_, action);
        return to_control_message(action, ran_node_id_, ind.timestamp_slot);
    }

private:
    ScenarioConfig scenario_;
    std::uint16_t ran_node_id_;
    ActionCodec codec_;
    FairnessLedger ledger_;
    ObservationVector last_observation_;
};

} // namespace ricbox
