#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"
#include "ricbox/ran_env.hpp"
#include "ricbox/tsstore.hpp"
#include "ricbox/wire.hpp"

namespace ricbox {

// Compiles per-slot RAN metrics into indication messages, persists every
// record to the time-series store, and optionally spills the encoded bytes
// to an append-only file for offline replay.
//
// Record schema per indication: for each UE, dl_rate_mbps and best-BS cqi;
// for each BS, used_prbs and avail_prbs; then cell-wide connected_ues and
// fairness. Timestamps are a monotone collection counter (they keep growing
// across episodes, unlike the per-episode env timeslot).
class KpiMonitor {
public:
    explicit KpiMonitor(TimeSeriesStore* store = nullptr, const std::string& spill_path = "")
        : store_(store) {
        if (!spill_path.empty()) {
            spill_.open(spill_path, std::ios::binary | std::ios::trunc);
            if (!spill_) throw io_error("cannot open spill file: " + spill_path);
        }
    }

    IndicationMessage collect(const NetworkState& state, const StepMetrics& metrics,
                              std::uint16_t node_id) {
        IndicationMessage m;
        m.node_id = node_id;
        m.timestamp_slot = next_slot_++;
        for (std::size_t u = 0; u < state.ues.size(); ++u) {
            const auto subject = static_cast<std::uint16_t>(state.ues[u].id);
            m.records.push_back({static_cast<std::uint16_t>(KpiId::dl_rate_mbps), subject,
                                 state.rate_mbps[u]});
            m.records.push_back({static_cast<std::uint16_t>(KpiId::cqi), subject,
                                 static_cast<double>(best_cqi_for_ue(state, u))});
        }
        for (std::size_t b = 0; b < state.bss.size(); ++b) {
            const auto subject = static_cast<std::uint16_t>(state.bss[b].id);
            m.records.push_back({static_cast<std::uint16_t>(KpiId::used_prbs), subject,
                                 static_cast<double>(state.used_rgbs[b])});
            m.records.push_back(
                {static_cast<std::uint16_t>(KpiId::avail_prbs), subject,
                 static_cast<double>(state.bss[b].rgb_count - state.used_rgbs[b])});
        }
        m.records.push_back({static_cast<std::uint16_t>(KpiId::connected_ues), 0,
                             static_cast<double>(metrics.connected_count)});
        m.records.push_back(
            {static_cast<std::uint16_t>(KpiId::fairness), 0, metrics.fairness_ratio});

        if (store_)
            for (const KpiRecord& r : m.records)
                store_->write(r.kpi_id, r.subject_id, m.timestamp_slot, r.value);
        if (spill_.is_open()) {
            const std::vector<std::uint8_t> bytes = ricbox::encode(m);
            spill_.write(reinterpret_cast<const char*>(bytes.data()),
                         static_cast<std::streamsize>(bytes.size()));
            spill_.flush();
        }
        return m;
    }

    std::uint64_t collected() const { return next_slot_; }

private:
    TimeSeriesStore* store_;
    std::ofstream spill_;
    std::uint64_t next_slot_ = 0;
};

// Reads back a spill file: a plain concatenation of encoded indications.
// codec_errors are rethrown with the absolute file offset.
inline std::vector<IndicationMessage> read_spill_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open spill file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    std::vector<IndicationMessage> out;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < wire::kHeaderSize)
            throw codec_error("spill: truncated header", pos);
        const std::uint32_t payload_len = wire::get_u32(&bytes[pos + 13]);
        const std::size_t total = wire::kHeaderSize + payload_len;
        if (bytes.size() - pos < total) throw codec_error("spill: truncated message", pos);
        Message m;
        try {
            m = decode(std::span<const std::uint8_t>(&bytes[pos], total));
        } catch (const codec_error& e) {
            throw codec_error(std::string("spill: ") + e.what(), pos + e.offset);
        }
        if (!std::holds_alternative<IndicationMessage>(m))
            throw codec_error("spill: non-indication message", pos + 2);
        out.push_back(std::get<IndicationMessage>(std::move(m)));
        pos += total;
    }
    return out;
}

} // namespace ricbox
