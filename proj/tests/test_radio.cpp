#include <doctest.h>

#include <cmath>

#include "ricbox/radio.hpp"
#include "test_paths.hpp"

using namespace ricbox;

namespace {
const McsTable& mcs() {
    static McsTable t = McsTable::load_csv(test_paths::mcs_csv());
    return t;
}
const CqiThresholds& thresholds() {
    static CqiThresholds t = CqiThresholds::load_csv(test_paths::thresholds_csv());
    return t;
}
ChannelModel default_channel() { return ChannelModel::make(3.5, 10.0, 3.0, 9.0, 0.0); }
} // namespace

TEST_CASE("channel: reference path loss and noise floor") {
    const ChannelModel m = default_channel();
    // free-space at 3.5 GHz, 1 m: 20*log10(4*pi*f/c)
    CHECK(m.reference_pl_db == doctest::Approx(43.32914410888889).epsilon(1e-12));
    // -174 dBm/Hz + 10*log10(10 MHz) + NF 9 dB
    CHECK(m.noise_floor_dbm == doctest::Approx(-95.0).epsilon(1e-12));
}

TEST_CASE("channel: golden snr at 100 m, 30 dBm") {
    const ChannelModel m = default_channel();
    CHECK(m.snr_db(30.0, 100.0) == doctest::Approx(21.670855891111103).epsilon(1e-12));
}

TEST_CASE("channel: distances below 1 m clamp to the 1 m value") {
    const ChannelModel m = default_channel();
    CHECK(m.snr_db(30.0, 0.0) == m.snr_db(30.0, 1.0));
    CHECK(m.snr_db(30.0, 0.5) == m.snr_db(30.0, 1.0));
    CHECK(m.snr_db(30.0, 1.0) > m.snr_db(30.0, 2.0));
}

TEST_CASE("channel: doubling distance costs 10*n*log10(2) dB") {
    const ChannelModel m = default_channel();
    const double drop = 10.0 * 3.0 * std::log10(2.0);
    for (double d : {2.0, 10.0, 123.0, 400.0})
        CHECK(m.snr_db(30.0, d) - m.snr_db(30.0, 2.0 * d) ==
              doctest::Approx(drop).epsilon(1e-12));
}

TEST_CASE("channel: snr monotone non-increasing in distance") {
    const ChannelModel m = default_channel();
    double prev = m.snr_db(30.0, 0.5);
    for (double d = 1.0; d < 2000.0; d *= 1.3) {
        const double s = m.snr_db(30.0, d);
        CHECK(s <= prev);
        prev = s;
    }
}

TEST_CASE("cqi thresholds: floor, ceiling and inclusive lower bounds") {
    const CqiThresholds& t = thresholds();
    CHECK(t.cqi_from_snr(-100.0) == 0);
    CHECK(t.cqi_from_snr(-6.0001) == 0);
    CHECK(t.cqi_from_snr(1000.0) == 15);
    for (int k = 1; k <= 15; ++k) {
        const double bound = t.lower_bound(k);
        CHECK(t.cqi_from_snr(bound) == k); // exactly at threshold k -> CQI k
        CHECK(t.cqi_from_snr(bound - 1e-9) == k - 1);
    }
}

TEST_CASE("cqi thresholds: monotone in snr") {
    const CqiThresholds& t = thresholds();
    int prev = t.cqi_from_snr(-50.0);
    for (double s = -50.0; s <= 50.0; s += 0.25) {
        const int c = t.cqi_from_snr(s);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("mcs table: cqi 0 is an error, 15 rows, monotone efficiency") {
    const McsTable& t = mcs();
    CHECK(t.size() == 15);
    CHECK_THROWS_AS(t.entry(0), contract_error);
    CHECK_THROWS_AS(t.entry(16), contract_error);
    for (int k = 1; k < 15; ++k)
        CHECK(t.entry(k + 1).spectral_efficiency >= t.entry(k).spectral_efficiency);
    // top row of the shipped table
    CHECK(t.entry(15).spectral_efficiency == doctest::Approx(5.5547));
    CHECK(t.entry(15).modulation_order == 6);
    CHECK(t.entry(15).code_rate_x1024 == 948);
    CHECK(t.entry(1).spectral_efficiency == doctest::Approx(0.1523));
}

TEST_CASE("data rate: zero share, demand cap, direct arithmetic") {
    const McsTable& t = mcs();
    CHECK(data_rate_mbps(t.entry(15), 0, 12, 10.0, 1.0) == 0.0);
    // eff 2.4063 (cqi 9), full 10 MHz: 24 Mbps raw, capped at 1 Mbps demand
    CHECK(data_rate_mbps(t.entry(9), 12, 12, 10.0, 1.0) == doctest::Approx(1.0));
    // eff 0.1523 at 1/10 of 10 MHz, huge demand: direct arithmetic
    CHECK(data_rate_mbps(t.entry(1), 1, 10, 10.0, 100.0) ==
          doctest::Approx(0.1523).epsilon(1e-12));
    CHECK_THROWS_AS(data_rate_mbps(t.entry(1), 13, 12, 10.0, 1.0), contract_error);
}

TEST_CASE("loader: malformed tables rejected") {
    CHECK_THROWS_AS(McsTable::load_csv("/nonexistent/file.csv"), io_error);
    CHECK_THROWS_AS(CqiThresholds::load_csv("/nonexistent/file.csv"), io_error);
}
