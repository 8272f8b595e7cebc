#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"

namespace ricbox {

// One row of the 4-bit CQI table: what the scheduler can get out of the
// channel at a given reported quality.
struct McsEntry {
    int cqi = 0;
    int modulation_order = 0;
    int code_rate_x1024 = 0;
    double spectral_efficiency = 0.0; // bit/s/Hz
};

namespace detail {

inline std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                                      std::size_t expected_cols) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open csv file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) { // header
            first = false;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != expected_cols)
            throw io_error(path + ": expected " + std::to_string(expected_cols) +
                           " columns, got " + std::to_string(fields.size()));
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace detail

// CQI -> MCS mapping, loaded from the transcribed 4-bit CQI table.
// The loader validates CQIs 1..15 in order and monotone spectral efficiency.
class McsTable {
public:
    static McsTable load_csv(const std::string& path) {
        McsTable t;
        for (const auto& row : detail::read_csv(path, 4)) {
            McsEntry e;
            e.cqi = std::stoi(row[0]);
            e.modulation_order = std::stoi(row[1]);
            e.code_rate_x1024 = std::stoi(row[2]);
            e.spectral_efficiency = std::stod(row[3]);
            t.entries_.push_back(e);
        }
        if (t.entries_.size() != 15)
            throw io_error(path + ": expected 15 MCS rows, got " +
                           std::to_string(t.entries_.size()));
        for (std::size_t i = 0; i < t.entries_.size(); ++i) {
            if (t.entries_[i].cqi != static_cast<int>(i) + 1)
                throw io_error(path + ": cqi column must run 1..15 in order");
            if (i > 0 && t.entries_[i].spectral_efficiency <
                             t.entries_[i - 1].spectral_efficiency)
                throw io_error(path + ": spectral efficiency not monotone at cqi " +
                               std::to_string(t.entries_[i].cqi));
        }
        return t;
    }

    // cqi 0 means no transmission is possible; that is an error here, the
    // scheduler must not ask for an MCS it cannot use.
    const McsEntry& entry(int cqi) const {
        if (cqi < 1 || cqi > 15)
            throw contract_error("cqi_to_mcs: cqi " + std::to_string(cqi) +
                                 " out of range 1..15");
        return entries_[static_cast<std::size_t>(cqi - 1)];
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::vector<McsEntry> entries_;
};

// SNR -> CQI lookup: 15 lower bounds (inclusive), below the first bound the
// CQI is 0.
class CqiThresholds {
public:
    static CqiThresholds load_csv(const std::string& path) {
        CqiThresholds t;
        for (const auto& row : detail::read_csv(path, 2)) {
            if (std::stoi(row[0]) != static_cast<int>(t.bounds_.size()) + 1)
                throw io_error(path + ": cqi column must run 1..15 in order");
            t.bounds_.push_back(std::stod(row[1]));
        }
        if (t.bounds_.size() != 15)
            throw io_error(path + ": expected 15 threshold rows, got " +
                           std::to_string(t.bounds_.size()));
        for (std::size_t i = 1; i < t.bounds_.size(); ++i)
            if (t.bounds_[i] <= t.bounds_[i - 1])
                throw io_error(path + ": thresholds must be strictly increasing");
        return t;
    }

    int cqi_from_snr(double snr_db) const {
        int cqi = 0;
        for (std::size_t i = 0; i < bounds_.size(); ++i)
            if (snr_db >= bounds_[i]) cqi = static_cast<int>(i) + 1;
        return cqi;
    }

    double lower_bound(int cqi) const {
        if (cqi < 1 || cqi > 15)
            throw contract_error("cqi threshold index out of range");
        return bounds_[static_cast<std::size_t>(cqi - 1)];
    }

private:
    std::vector<double> bounds_;
};

// Log-distance path loss with free-space reference at 1 m, plus a flat
// thermal noise floor over the carrier bandwidth. All unit conversions of
// the link budget live here.
struct ChannelModel {
    double path_loss_exponent = 3.0;
    double reference_pl_db = 0.0; // PL at d0 = 1 m
    double noise_floor_dbm = 0.0;
    double shadowing_sigma_db = 0.0;

    static ChannelModel make(double carrier_freq_ghz, double bandwidth_mhz,
                             double path_loss_exponent, double noise_figure_db,
                             double shadowing_sigma_db) {
        constexpr double c = 299792458.0;
        constexpr double four_pi = 12.566370614359172;
        ChannelModel m;
        m.path_loss_exponent = path_loss_exponent;
        m.reference_pl_db = 20.0 * std::log10(four_pi * 1.0 * carrier_freq_ghz * 1e9 / c);
        m.noise_floor_dbm = -174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
        m.shadowing_sigma_db = shadowing_sigma_db;
        return m;
    }

    // Distances below 1 m clamp to the reference distance.
    double path_loss_db(double distance_m) const {
        double d = std::max(distance_m, 1.0);
        return reference_pl_db + 10.0 * path_loss_exponent * std::log10(d);
    }

    double snr_db(double tx_power_dbm, double distance_m) const {
        return tx_power_dbm - path_loss_db(distance_m) - noise_floor_dbm;
    }

    // Distance at which the SNR drops to `snr_db` (display/coverage radius).
    double range_at_snr(double tx_power_dbm, double snr_db) const {
        double pl = tx_power_dbm - noise_floor_dbm - snr_db;
        return std::pow(10.0, (pl - reference_pl_db) / (10.0 * path_loss_exponent));
    }
};

// Achievable downlink rate for a share of the resource-group blocks,
// capped at the UE's demand. bit/s/Hz x MHz gives Mbit/s directly.
inline double data_rate_mbps(const McsEntry& mcs, int rgb_share, int rgb_count,
                             double bandwidth_mhz, double demand_mbps) {
    if (rgb_share < 0 || rgb_share > rgb_count)
        throw contract_error("data_rate: rgb_share out of range");
    if (rgb_share == 0) return 0.0;
    double raw = mcs.spectral_efficiency * bandwidth_mhz *
                 (static_cast<double>(rgb_share) / static_cast<double>(rgb_count));
    return std::min(demand_mbps, raw);
}

} // namespace ricbox
