#pragma once

#include <cstddef>
#include <vector>

namespace ricbox {

// One RGB grant: `rgb_share` resource-group blocks of BS `bs_id` go to UE
// `ue_id` this timeslot.
struct Grant {
    int bs_id = 0;
    int ue_id = 0;
    int rgb_share = 0;

    bool operator==(const Grant& o) const {
        return bs_id == o.bs_id && ue_id == o.ue_id && rgb_share == o.rgb_share;
    }
};

// Per-timeslot allocation decision. Invariants (per-BS capacity, at most one
// serving BS per UE) are enforced by the environment before application.
struct AllocationAction {
    std::vector<Grant> grants;

    bool empty() const { return grants.empty(); }

    bool operator==(const AllocationAction& o) const { return grants == o.grants; }
};

} // namespace ricbox
