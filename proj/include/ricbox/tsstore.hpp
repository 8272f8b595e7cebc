#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "ricbox/errors.hpp"

namespace ricbox {

struct TsPoint {
    std::uint64_t slot = 0;
    double value = 0.0;

    bool operator==(const TsPoint& o) const { return slot == o.slot && value == o.value; }
};

// Append-only in-memory time series keyed by (kpi_id, subject_id).
// One writer, any number of concurrent readers; readers see a consistent
// prefix of each series.
class TimeSeriesStore {
public:
    using Key = std::pair<std::uint16_t, std::uint16_t>;

    void write(std::uint16_t kpi_id, std::uint16_t subject_id, std::uint64_t slot,
               double value) {
        std::unique_lock lock(mutex_);
        auto& series = series_[{kpi_id, subject_id}];
        if (!series.empty() && slot <= series.back().slot)
            throw contract_error("ts store: out-of-order write for kpi " +
                                 std::to_string(kpi_id) + "/" + std::to_string(subject_id) +
                                 " at slot " + std::to_string(slot));
        series.push_back({slot, value});
    }

    // Inclusive slot range, points in slot order.
    std::vector<TsPoint> query(std::uint16_t kpi_id, std::uint16_t subject_id,
                               std::uint64_t slot_lo, std::uint64_t slot_hi) const {
        std::shared_lock lock(mutex_);
        std::vector<TsPoint> out;
        auto it = series_.find({kpi_id, subject_id});
        if (it == series_.end()) return out;
        for (const TsPoint& p : it->second) {
            if (p.slot < slot_lo) continue;
            if (p.slot > slot_hi) break;
            out.push_back(p);
        }
        return out;
    }

    std::size_t series_count() const {
        std::shared_lock lock(mutex_);
        return series_.size();
    }

    std::size_t point_count(std::uint16_t kpi_id, std::uint16_t subject_id) const {
        std::shared_lock lock(mutex_);
        auto it = series_.find({kpi_id, subject_id});
        return it == series_.end() ? 0 : it->second.size();
    }

private:
    mutable std::shared_mutex mutex_;
    std::map<Key, std::vector<TsPoint>> series_;
};

} // namespace ricbox
