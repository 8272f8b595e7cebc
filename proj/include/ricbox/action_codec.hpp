#pragma once

#include <string>

#include "ricbox/allocation.hpp"
#include "ricbox/errors.hpp"

namespace ricbox {

// Maps the categorical policy head onto RGB grants. Index 0 is the reserved
// null action; index 1 + ue * n_bss + bs grants the full RGB budget of `bs`
// to `ue` for one slot. K = 1 + n_ues * n_bss.
class ActionCodec {
public:
    ActionCodec(int n_ues, int n_bss, int rgb_quantum)
        : n_ues_(n_ues), n_bss_(n_bss), rgb_quantum_(rgb_quantum) {
        if (n_ues <= 0 || n_bss <= 0 || rgb_quantum <= 0)
            throw contract_error("action codec: counts must be positive");
    }

    int action_count() const { return 1 + n_ues_ * n_bss_; }

    AllocationAction decode(int index) const {
        if (index < 0 || index >= action_count())
            throw contract_error("action codec: index " + std::to_string(index) +
                                 " out of range 0.." + std::to_string(action_count() - 1));
        AllocationAction a;
        if (index == 0) return a;
        const int flat = index - 1;
        a.grants.push_back({flat % n_bss_, flat / n_bss_, rgb_quantum_});
        return a;
    }

    int encode(const AllocationAction& action) const {
        if (action.grants.empty()) return 0;
        if (action.grants.size() != 1)
            throw contract_error("action codec: not a single-grant action");
        const Grant& g = action.grants.front();
        if (g.ue_id < 0 || g.ue_id >= n_ues_ || g.bs_id < 0 || g.bs_id >= n_bss_ ||
            g.rgb_share != rgb_quantum_)
            throw contract_error("action codec: grant not representable");
        return 1 + g.ue_id * n_bss_ + g.bs_id;
    }

private:
    int n_ues_;
    int n_bss_;
    int rgb_quantum_;
};

} // namespace ricbox
