#include <doctest.h>

#include <fstream>
#include <thread>

#include "ricbox/pipe.hpp"
#include "ricbox/rng.hpp"
#include "ricbox/tsstore.hpp"
#include "ricbox/wire.hpp"
#include "test_paths.hpp"

using namespace ricbox;

namespace {

std::vector<std::uint8_t> read_hex_fixture(const std::string& rel) {
    std::ifstream in(test_paths::source(rel));
    REQUIRE(in.good());
    std::string hex;
    in >> hex;
    REQUIRE(hex.size() % 2 == 0);
    std::vector<std::uint8_t> bytes;
    for (std::size_t i = 0; i < hex.size(); i += 2)
        bytes.push_back(
            static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
    return bytes;
}

IndicationMessage golden_indication() {
    IndicationMessage m;
    m.node_id = 1;
    m.timestamp_slot = 42;
    m.records = {{4, 0, 0.75}, {5, 0, 11.0}, {3, 0, 1.0}};
    return m;
}

ControlMessage golden_control() {
    ControlMessage m;
    m.target_node_id = 1;
    m.timestamp_slot = 42;
    m.allocation = {{0, 2, 12}};
    return m;
}

} // namespace

TEST_CASE("wire: one-record indication is exactly 29 bytes") {
    IndicationMessage m;
    m.node_id = 3;
    m.timestamp_slot = 7;
    m.records = {{6, 0, 1.0}};
    const auto bytes = encode(m);
    CHECK(bytes.size() == 29);
    CHECK(bytes == read_hex_fixture("tests/golden/indication_single_v1.hex"));
}

TEST_CASE("wire: golden fixtures match byte for byte and decode back") {
    const auto ind_bytes = encode(golden_indication());
    CHECK(ind_bytes == read_hex_fixture("tests/golden/indication_v1.hex"));
    const Message ind = decode(ind_bytes);
    REQUIRE(std::holds_alternative<IndicationMessage>(ind));
    CHECK(std::get<IndicationMessage>(ind) == golden_indication());

    const auto ctl_bytes = encode(golden_control());
    CHECK(ctl_bytes == read_hex_fixture("tests/golden/control_v1.hex"));
    const Message ctl = decode(ctl_bytes);
    REQUIRE(std::holds_alternative<ControlMessage>(ctl));
    CHECK(std::get<ControlMessage>(ctl) == golden_control());
}

TEST_CASE("wire: encode is deterministic and rejects invariant violations") {
    CHECK(encode(golden_indication()) == encode(golden_indication()));
    IndicationMessage empty;
    empty.node_id = 1;
    CHECK_THROWS_AS(encode(empty), codec_error);
    IndicationMessage bad = golden_indication();
    bad.records[1].kpi_id = 99;
    CHECK_THROWS_AS(encode(bad), codec_error);
    IndicationMessage inf = golden_indication();
    inf.records[0].value = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(encode(inf), codec_error);
}

TEST_CASE("wire: decode errors report the offset of the first violation") {
    const auto good = encode(golden_indication());

    auto bad_magic = good;
    bad_magic[0] = 0x00;
    try {
        decode(bad_magic);
        FAIL("expected codec_error");
    } catch (const codec_error& e) {
        CHECK(e.offset == 0);
        CHECK(std::string(e.what()).find("magic") != std::string::npos);
    }

    auto bad_version = good;
    bad_version[1] = 0x02;
    try {
        decode(bad_version);
        FAIL("expected codec_error");
    } catch (const codec_error& e) {
        CHECK(e.offset == 1);
    }

    auto truncated = good;
    truncated.resize(10);
    try {
        decode(truncated);
        FAIL("expected codec_error");
    } catch (const codec_error& e) {
        CHECK(e.offset == 10); // reported at the end of the short buffer
    }

    auto short_payload = good;
    short_payload.resize(good.size() - 1);
    CHECK_THROWS_AS(decode(short_payload), codec_error);

    auto bad_kpi = good;
    bad_kpi[wire::kHeaderSize + 1] = 200; // first record's kpi_id low byte
    bad_kpi[wire::kHeaderSize + 0] = 0;
    try {
        decode(bad_kpi);
        FAIL("expected codec_error");
    } catch (const codec_error& e) {
        CHECK(e.offset == wire::kHeaderSize);
    }
}

TEST_CASE("wire: round-trip fuzz and mutation fuzz (unit-scale)") {
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        IndicationMessage m;
        m.node_id = static_cast<std::uint16_t>(rng.uniform_int(500));
        m.timestamp_slot = rng.next_u64() >> 8;
        const std::uint32_t n = 1 + rng.uniform_int(8);
        for (std::uint32_t r = 0; r < n; ++r)
            m.records.push_back({static_cast<std::uint16_t>(1 + rng.uniform_int(6)),
                                 static_cast<std::uint16_t>(rng.uniform_int(32)),
                                 rng.uniform(-1e9, 1e9)});
        const auto bytes = encode(m);
        const Message back = decode(bytes);
        REQUIRE(std::holds_alternative<IndicationMessage>(back));
        CHECK(std::get<IndicationMessage>(back) == m);
    }
    for (int i = 0; i < 2000; ++i) {
        auto bytes = encode(golden_indication());
        bytes[rng.uniform_int(static_cast<std::uint32_t>(bytes.size()))] ^=
            static_cast<std::uint8_t>(1 + rng.uniform_int(255));
        try {
            (void)decode(bytes);
        } catch (const codec_error&) {
            // structured rejection is fine; crashing is not
        }
    }
}

TEST_CASE("wire: allocation action conversion round-trips") {
    AllocationAction a;
    a.grants = {{1, 3, 12}, {0, 2, 6}};
    const ControlMessage m = to_control_message(a, 1, 99);
    CHECK(m.timestamp_slot == 99);
    CHECK(to_allocation_action(m) == a);
}

TEST_CASE("ts store: write/query exact slot, empty range, order error") {
    TimeSeriesStore store;
    store.write(4, 0, 10, 0.5);
    store.write(4, 0, 11, 0.75);
    store.write(5, 0, 10, 9.0);

    const auto exact = store.query(4, 0, 10, 10);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].value == 0.5);

    CHECK(store.query(4, 0, 100, 200).empty());
    CHECK(store.query(9, 9, 0, 100).empty());

    const auto range = store.query(4, 0, 0, 1000);
    REQUIRE(range.size() == 2);
    CHECK(range[0].slot < range[1].slot);

    CHECK_THROWS_AS(store.write(4, 0, 11, 1.0), contract_error);
    CHECK_THROWS_AS(store.write(4, 0, 5, 1.0), contract_error);
    // failed write left the store unchanged
    CHECK(store.point_count(4, 0) == 2);
}

TEST_CASE("pipe: blocking hand-off across threads, fifo per direction") {
    MessagePipe pipe;
    std::vector<std::uint8_t> got;
    std::thread consumer([&] {
        got = pipe.receive();
        const auto second = pipe.receive();
        got.insert(got.end(), second.begin(), second.end());
    });
    pipe.send({1, 2});
    pipe.send({3});
    consumer.join();
    CHECK(got == std::vector<std::uint8_t>{1, 2, 3});
}

TEST_CASE("e2 session: registration is required and unique") {
    E2Session session;
    session.register_node(1);
    CHECK_THROWS_AS(session.register_node(1), contract_error);
    CHECK_THROWS_AS(session.send_indication(9, {0}), contract_error);
    session.send_indication(1, {0xAA});
    CHECK(session.receive_indication() == std::vector<std::uint8_t>{0xAA});
}
