#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ricbox/allocation.hpp"
#include "ricbox/errors.hpp"

namespace ricbox {

// E2-style wire format standing in for ASN.1: big-endian, fixed layout.
//   header (17 B): magic 0xE2 | version 0x01 | msg_type | node_id u16 |
//                  timestamp_slot u64 | payload_len u32
//   indication payload: records of kpi_id u16 | subject_id u16 | value f64
//   control payload:    triples of bs_id u16 | ue_id u16 | rgb_share u16
namespace wire {
inline constexpr std::uint8_t kMagic = 0xE2;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::uint8_t kMsgIndication = 0x01;
inline constexpr std::uint8_t kMsgControl = 0x02;
inline constexpr std::size_t kHeaderSize = 17;
inline constexpr std::size_t kRecordSize = 12;
inline constexpr std::size_t kTripleSize = 6;
} // namespace wire

// KPI registry. Every record on the wire must carry one of these ids.
enum class KpiId : std::uint16_t {
    used_prbs = 1,
    avail_prbs = 2,
    connected_ues = 3,
    dl_rate_mbps = 4,
    cqi = 5,
    fairness = 6,
};

inline bool kpi_id_known(std::uint16_t id) { return id >= 1 && id <= 6; }

struct KpiRecord {
    std::uint16_t kpi_id = 0;
    std::uint16_t subject_id = 0; // UE or BS id; 0 for cell-wide KPIs
    double value = 0.0;

    bool operator==(const KpiRecord& o) const {
        return kpi_id == o.kpi_id && subject_id == o.subject_id && value == o.value;
    }
};

struct IndicationMessage {
    std::uint16_t node_id = 0;
    std::uint64_t timestamp_slot = 0;
    std::vector<KpiRecord> records;

    bool operator==(const IndicationMessage& o) const {
        return node_id == o.node_id && timestamp_slot == o.timestamp_slot &&
               records == o.records;
    }
};

struct ControlTriple {
    std::uint16_t bs_id = 0;
    std::uint16_t ue_id = 0;
    std::uint16_t rgb_share = 0;

    bool operator==(const ControlTriple& o) const {
        return bs_id == o.bs_id && ue_id == o.ue_id && rgb_share == o.rgb_share;
    }
};

struct ControlMessage {
    std::uint16_t target_node_id = 0;
    std::uint64_t timestamp_slot = 0;
    std::vector<ControlTriple> allocation;

    bool operator==(const ControlMessage& o) const {
        return target_node_id == o.target_node_id && timestamp_slot == o.timestamp_slot &&
               allocation == o.allocation;
    }
};

using Message = std::variant<IndicationMessage, ControlMessage>;

namespace wire {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::vector<std::uint8_t>& out, double d) {
    put_u64(out, std::bit_cast<std::uint64_t>(d));
}

inline std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>((std::uint16_t{p[0]} << 8) | p[1]);
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | p[i];
    return v;
}

inline std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

inline double get_f64(const std::uint8_t* p) { return std::bit_cast<double>(get_u64(p)); }

inline void put_header(std::vector<std::uint8_t>& out, std::uint8_t msg_type,
                       std::uint16_t node_id, std::uint64_t slot, std::uint32_t payload_len) {
    out.push_back(kMagic);
    out.push_back(kVersion);
    out.push_back(msg_type);
    put_u16(out, node_id);
    put_u64(out, slot);
    put_u32(out, payload_len);
}

} // namespace wire

inline std::vector<std::uint8_t> encode(const IndicationMessage& m) {
    if (m.records.empty()) throw codec_error("encode: indication with no records", 0);
    for (std::size_t i = 0; i < m.records.size(); ++i) {
        if (!kpi_id_known(m.records[i].kpi_id))
            throw codec_error("encode: kpi id " + std::to_string(m.records[i].kpi_id) +
                                  " not in registry",
                              wire::kHeaderSize + i * wire::kRecordSize);
        if (!std::isfinite(m.records[i].value))
            throw codec_error("encode: non-finite kpi value",
                              wire::kHeaderSize + i * wire::kRecordSize + 4);
    }
    std::vector<std::uint8_t> out;
    out.reserve(wire::kHeaderSize + m.records.size() * wire::kRecordSize);
    wire::put_header(out, wire::kMsgIndication, m.node_id, m.timestamp_slot,
                     static_cast<std::uint32_t>(m.records.size() * wire::kRecordSize));
    for (const KpiRecord& r : m.records) {
        wire::put_u16(out, r.kpi_id);
        wire::put_u16(out, r.subject_id);
        wire::put_f64(out, r.value);
    }
    return out;
}

inline std::vector<std::uint8_t> encode(const ControlMessage& m) {
    std::vector<std::uint8_t> out;
    out.reserve(wire::kHeaderSize + m.allocation.size() * wire::kTripleSize);
    wire::put_header(out, wire::kMsgControl, m.target_node_id, m.timestamp_slot,
                     static_cast<std::uint32_t>(m.allocation.size() * wire::kTripleSize));
    for (const ControlTriple& t : m.allocation) {
        wire::put_u16(out, t.bs_id);
        wire::put_u16(out, t.ue_id);
        wire::put_u16(out, t.rgb_share);
    }
    return out;
}

// Strict decoder: accepts arbitrary bytes, never crashes, reports the offset
// of the first violation. decode(encode(m)) == m for every valid message.
inline Message decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < wire::kHeaderSize)
        throw codec_error("decode: truncated header", bytes.size());
    if (bytes[0] != wire::kMagic) throw codec_error("decode: bad magic", 0);
    if (bytes[1] != wire::kVersion) throw codec_error("decode: unsupported version", 1);
    const std::uint8_t msg_type = bytes[2];
    if (msg_type != wire::kMsgIndication && msg_type != wire::kMsgControl)
        throw codec_error("decode: unknown message type", 2);
    const std::uint16_t node_id = wire::get_u16(&bytes[3]);
    const std::uint64_t slot = wire::get_u64(&bytes[5]);
    const std::uint32_t payload_len = wire::get_u32(&bytes[13]);
    if (bytes.size() != wire::kHeaderSize + payload_len)
        throw codec_error("decode: payload length mismatch", 13);

    if (msg_type == wire::kMsgIndication) {
        if (payload_len == 0) throw codec_error("decode: indication with no records", 13);
        if (payload_len % wire::kRecordSize != 0)
            throw codec_error("decode: payload not a whole number of records", 13);
        IndicationMessage m;
        m.node_id = node_id;
        m.timestamp_slot = slot;
        for (std::size_t off = wire::kHeaderSize; off < bytes.size(); off += wire::kRecordSize) {
            KpiRecord r;
            r.kpi_id = wire::get_u16(&bytes[off]);
            if (!kpi_id_known(r.kpi_id))
                throw codec_error("decode: kpi id not in registry", off);
            r.subject_id = wire::get_u16(&bytes[off + 2]);
            r.value = wire::get_f64(&bytes[off + 4]);
            if (!std::isfinite(r.value))
                throw codec_error("decode: non-finite kpi value", off + 4);
            m.records.push_back(r);
        }
        return m;
    }

    if (payload_len % wire::kTripleSize != 0)
        throw codec_error("decode: payload not a whole number of triples", 13);
    ControlMessage m;
    m.target_node_id = node_id;
    m.timestamp_slot = slot;
    for (std::size_t off = wire::kHeaderSize; off < bytes.size(); off += wire::kTripleSize) {
        ControlTriple t;
        t.bs_id = wire::get_u16(&bytes[off]);
        t.ue_id = wire::get_u16(&bytes[off + 2]);
        t.rgb_share = wire::get_u16(&bytes[off + 4]);
        m.allocation.push_back(t);
    }
    return m;
}

inline ControlMessage to_control_message(const AllocationAction& action,
                                         std::uint16_t target_node, std::uint64_t slot) {
    ControlMessage m;
    m.target_node_id = target_node;
    m.timestamp_slot = slot;
    for (const Grant& g : action.grants)
        m.allocation.push_back({static_cast<std::uint16_t>(g.bs_id),
                                static_cast<std::uint16_t>(g.ue_id),
                                static_cast<std::uint16_t>(g.rgb_share)});
    return m;
}

inline AllocationAction to_allocation_action(const ControlMessage& m) {
    AllocationAction a;
    for (const ControlTriple& t : m.allocation)
        a.grants.push_back({static_cast<int>(t.bs_id), static_cast<int>(t.ue_id),
                            static_cast<int>(t.rgb_share)});
    return a;
}

} // namespace ricbox
