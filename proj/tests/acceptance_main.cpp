// Acceptance suite: one test case per criterion, one PASS/FAIL line each.
// Criteria 5-7 share a single set of desk-preset trainings (both algorithms
// x 5 seeds); criterion 4 reuses the PPO runs for its bus/direct comparison.

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <thread>
#include <vector>

#include "ricbox/compare.hpp"
#include "ricbox/config.hpp"
#include "ricbox/grad_check.hpp"
#include "ricbox/kpimon.hpp"
#include "ricbox/trainer.hpp"
#include "test_paths.hpp"

using namespace ricbox;

namespace {

void announce(int criterion, bool pass, const std::string& detail) {
    std::printf("ACCEPTANCE %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig desk_config() {
    RunConfig cfg = RunConfig::preset("desk");
    cfg.data.cqi_thresholds_csv = test_paths::thresholds_csv();
    cfg.data.cqi_mcs_csv = test_paths::mcs_csv();
    cfg.io.scene_every = 0; // no artifacts needed for the analysis runs
    cfg.io.spill = false;
    cfg.io.checkpoint_every = 0;
    return cfg;
}

struct SharedRuns {
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::map<std::pair<std::string, std::uint64_t>, TrainResult> bus_runs;
    std::map<std::uint64_t, TrainResult> ppo_direct_runs; // seeds 1..3
    std::map<std::uint64_t, double> baseline_mean;
    double learning_wall_s = 0.0; // 10 trainings + baselines (criterion 5 gate)
};

const SharedRuns& shared_runs() {
    static SharedRuns runs = [] {
        SharedRuns r;
        const std::string out_root = test_paths::scratch("acceptance");

        struct Job {
            std::string algorithm;
            std::string transport;
            std::uint64_t seed;
        };
        std::vector<Job> jobs;
        for (const std::string algo : {"a2c", "ppo"})
            for (std::uint64_t s : r.seeds) jobs.push_back({algo, "bus", s});

        const auto t0 = std::chrono::steady_clock::now();
        std::vector<TrainResult> results(jobs.size());
        std::vector<std::exception_ptr> failures(jobs.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                try {
                    RunConfig cfg = desk_config();
                    cfg.agent.algorithm = jobs[i].algorithm;
                    cfg.io.transport = jobs[i].transport;
                    cfg.io.out_dir = out_root + "/" + jobs[i].transport;
                    Trainer trainer(cfg, jobs[i].seed);
                    results[i] = trainer.train();
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        };
        const unsigned n_threads =
            std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(jobs.size())));
        {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        for (const auto& failure : failures)
            if (failure) std::rethrow_exception(failure);
        for (std::size_t i = 0; i < jobs.size(); ++i)
            r.bus_runs[{jobs[i].algorithm, jobs[i].seed}] = std::move(results[i]);

        const RunConfig base = desk_config();
        for (std::uint64_t s : r.seeds)
            r.baseline_mean[s] =
                mean_of(random_policy_episode_rewards(base, s, base.schedule.episodes));
        r.learning_wall_s = seconds_since(t0);

        // criterion 4's direct-transport counterparts (PPO, the desk default)
        std::vector<std::uint64_t> direct_seeds{1, 2, 3};
        std::vector<TrainResult> direct_results(direct_seeds.size());
        std::vector<std::exception_ptr> direct_failures(direct_seeds.size());
        std::atomic<std::size_t> dnext{0};
        auto dworker = [&] {
            while (true) {
                const std::size_t i = dnext.fetch_add(1);
                if (i >= direct_seeds.size()) return;
                try {
                    RunConfig cfg = desk_config();
                    cfg.io.transport = "direct";
                    cfg.io.out_dir = out_root + "/direct";
                    Trainer trainer(cfg, direct_seeds[i]);
                    direct_results[i] = trainer.train();
                } catch (...) {
                    direct_failures[i] = std::current_exception();
                }
            }
        };
        {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < std::min<unsigned>(n_threads, 3); ++t)
                pool.emplace_back(dworker);
            for (auto& t : pool) t.join();
        }
        for (const auto& failure : direct_failures)
            if (failure) std::rethrow_exception(failure);
        for (std::size_t i = 0; i < direct_seeds.size(); ++i)
            r.ppo_direct_runs[direct_seeds[i]] = std::move(direct_results[i]);
        return r;
    }();
    return runs;
}

double final_ma50(const std::vector<double>& rewards) {
    const std::size_t w = std::min<std::size_t>(50, rewards.size());
    return mean_of(std::vector<double>(rewards.end() - static_cast<std::ptrdiff_t>(w),
                                       rewards.end()));
}

} // namespace

TEST_CASE("criterion 1: gradient check over 100+ random shapes") {
    const auto t0 = std::chrono::steady_clock::now();
    Rng meta(20260808);
    double worst = 0.0;
    int shapes = 0;
    for (; shapes < 100; ++shapes) {
        MlpConfig shape;
        shape.input_dim = 1 + meta.uniform_int(8);
        shape.output_dim = 1 + meta.uniform_int(6);
        shape.hidden_layers = meta.uniform_int(4);
        shape.hidden_width = 2 + meta.uniform_int(14);
        const std::size_t batch = 1 + meta.uniform_int(6);

        Rng init(meta.next_u64());
        MlpParams params = MlpParams::init(shape, init);
        for (double& v : params.weights.back().data) v *= 100.0;
        Matrix input(batch, shape.input_dim);
        for (double& v : input.data) v = init.uniform(-2, 2);
        Matrix target(batch, shape.output_dim);
        for (double& v : target.data) v = init.uniform(-2, 2);

        const auto loss_fn = [&](const MlpParams& p) {
            const Matrix out = forward(p, input);
            double loss = 0.0;
            for (std::size_t i = 0; i < out.data.size(); ++i)
                loss += (out.data[i] - target.data[i]) * (out.data[i] - target.data[i]);
            return loss / static_cast<double>(out.rows);
        };
        ForwardCache cache;
        const Matrix out = forward(params, input, &cache);
        Matrix dout(out.rows, out.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i)
            dout.data[i] =
                2.0 * (out.data[i] - target.data[i]) / static_cast<double>(out.rows);
        const Gradients analytic = backward(params, cache, dout);

        Rng probe(meta.next_u64());
        const GradCheckReport rep = grad_check(params, loss_fn, analytic, probe, 60, 1e-5);
        worst = std::max(worst, rep.max_rel_error);
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst < 1e-4 && elapsed < 60.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d shapes, worst rel err %.3e (tol 1e-4), %.1f s (limit 60)", shapes,
                  worst, elapsed);
    announce(1, pass, detail);
    CHECK(worst < 1e-4);
    CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 2: discounted returns match the brute-force oracle") {
    Rng rng(424242);
    double worst = 0.0;
    int sequences = 0;
    for (const double gamma : {0.5, 0.9, 1.0}) {
        for (int i = 0; i < 334 && sequences < 1001; ++i, ++sequences) {
            std::vector<double> rewards(1 + rng.uniform_int(50));
            for (double& v : rewards) v = rng.uniform(-5, 5);
            const auto fast = discounted_returns(rewards, gamma);
            for (std::size_t t = 0; t < rewards.size(); ++t) {
                double acc = 0.0; // literal double sum, the independent route
                for (std::size_t k = t; k < rewards.size(); ++k)
                    acc += std::pow(gamma, static_cast<double>(k - t)) * rewards[k];
                worst = std::max(worst, std::fabs(acc - fast[t]));
            }
        }
    }
    const bool pass = worst < 1e-12;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d sequences, max |diff| %.2e (tol 1e-12)",
                  sequences, worst);
    announce(2, pass, detail);
    CHECK(worst < 1e-12);
}

TEST_CASE("criterion 3: codec fuzz, mutation robustness, golden fixtures") {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(777);

    // golden fixtures
    const auto read_hex = [](const std::string& rel) {
        std::ifstream in(test_paths::source(rel));
        REQUIRE(in.good());
        std::string hex;
        in >> hex;
        std::vector<std::uint8_t> bytes;
        for (std::size_t i = 0; i < hex.size(); i += 2)
            bytes.push_back(
                static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
        return bytes;
    };
    IndicationMessage gold_ind;
    gold_ind.node_id = 1;
    gold_ind.timestamp_slot = 42;
    gold_ind.records = {{4, 0, 0.75}, {5, 0, 11.0}, {3, 0, 1.0}};
    ControlMessage gold_ctl;
    gold_ctl.target_node_id = 1;
    gold_ctl.timestamp_slot = 42;
    gold_ctl.allocation = {{0, 2, 12}};
    bool golden_ok = encode(gold_ind) == read_hex("tests/golden/indication_v1.hex") &&
                     encode(gold_ctl) == read_hex("tests/golden/control_v1.hex");

    // 1e5 valid round-trips
    int mismatches = 0;
    const int round_trips = 100000;
    for (int i = 0; i < round_trips; ++i) {
        if (rng.uniform() < 0.5) {
            IndicationMessage m;
            m.node_id = static_cast<std::uint16_t>(rng.uniform_int(1024));
            m.timestamp_slot = rng.next_u64() >> 16;
            const std::uint32_t n = 1 + rng.uniform_int(16);
            for (std::uint32_t k = 0; k < n; ++k)
                m.records.push_back({static_cast<std::uint16_t>(1 + rng.uniform_int(6)),
                                     static_cast<std::uint16_t>(rng.uniform_int(256)),
                                     rng.uniform(-1e12, 1e12)});
            const auto bytes = encode(m);
            const Message back = decode(bytes);
            if (!std::holds_alternative<IndicationMessage>(back) ||
                !(std::get<IndicationMessage>(back) == m) ||
                encode(std::get<IndicationMessage>(back)) != bytes)
                ++mismatches;
        } else {
            ControlMessage m;
            m.target_node_id = static_cast<std::uint16_t>(rng.uniform_int(1024));
            m.timestamp_slot = rng.next_u64() >> 16;
            const std::uint32_t n = rng.uniform_int(10);
            for (std::uint32_t k = 0; k < n; ++k)
                m.allocation.push_back({static_cast<std::uint16_t>(rng.uniform_int(64)),
                                        static_cast<std::uint16_t>(rng.uniform_int(64)),
                                        static_cast<std::uint16_t>(rng.uniform_int(32))});
            const auto bytes = encode(m);
            const Message back = decode(bytes);
            if (!std::holds_alternative<ControlMessage>(back) ||
                !(std::get<ControlMessage>(back) == m) ||
                encode(std::get<ControlMessage>(back)) != bytes)
                ++mismatches;
        }
    }

    // 1e4 mutated byte strings: structured rejection or valid decode only
    const int mutations = 10000;
    int rejected = 0;
    for (int i = 0; i < mutations; ++i) {
        IndicationMessage m;
        m.node_id = 1;
        m.timestamp_slot = static_cast<std::uint64_t>(i);
        const std::uint32_t n = 1 + rng.uniform_int(6);
        for (std::uint32_t k = 0; k < n; ++k)
            m.records.push_back({static_cast<std::uint16_t>(1 + rng.uniform_int(6)),
                                 static_cast<std::uint16_t>(rng.uniform_int(16)),
                                 rng.uniform(-10, 10)});
        auto bytes = encode(m);
        const std::uint32_t flips = 1 + rng.uniform_int(5);
        for (std::uint32_t f = 0; f < flips; ++f)
            bytes[rng.uniform_int(static_cast<std::uint32_t>(bytes.size()))] ^=
                static_cast<std::uint8_t>(1 + rng.uniform_int(255));
        try {
            (void)decode(bytes);
        } catch (const codec_error&) {
            ++rejected;
        } // anything else escapes and fails the suite
    }

    const double elapsed = seconds_since(t0);
    const bool pass = golden_ok && mismatches == 0 && elapsed < 60.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "golden %s, %d round-trips (%d mismatches), %d mutations (%d rejected, "
                  "0 crashes), %.1f s (limit 60)",
                  golden_ok ? "ok" : "MISMATCH", round_trips, mismatches, mutations,
                  rejected, elapsed);
    announce(3, pass, detail);
    CHECK(golden_ok);
    CHECK(mismatches == 0);
    CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 4: transport transparency on 3 desk seeds") {
    const SharedRuns& runs = shared_runs();
    bool identical = true;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto& bus = runs.bus_runs.at({"ppo", seed}).episode_rewards;
        const auto& direct = runs.ppo_direct_runs.at(seed).episode_rewards;
        if (bus.size() != direct.size()) {
            identical = false;
            break;
        }
        for (std::size_t i = 0; i < bus.size(); ++i)
            if (bus[i] != direct[i]) { // bitwise equality of the reward sequences
                identical = false;
                break;
            }
    }
    announce(4, identical,
             identical ? "bus-mediated == direct reward sequences for seeds 1,2,3 (bitwise)"
                       : "reward sequences diverged");
    CHECK(identical);
}

TEST_CASE("criterion 5: both algorithms beat the random baseline on >= 4 of 5 seeds") {
    const SharedRuns& runs = shared_runs();
    int a2c_wins = 0, ppo_wins = 0;
    std::string detail;
    for (std::uint64_t seed : runs.seeds) {
        const double baseline = runs.baseline_mean.at(seed);
        const double threshold = baseline + 0.5 * std::fabs(baseline);
        const double a2c = final_ma50(runs.bus_runs.at({"a2c", seed}).episode_rewards);
        const double ppo = final_ma50(runs.bus_runs.at({"ppo", seed}).episode_rewards);
        if (a2c >= threshold) ++a2c_wins;
        if (ppo >= threshold) ++ppo_wins;
        char row[96];
        std::snprintf(row, sizeof(row), " s%llu: base %.3f a2c %.3f ppo %.3f;",
                      static_cast<unsigned long long>(seed), baseline, a2c, ppo);
        detail += row;
    }
    const bool within_budget = runs.learning_wall_s < 900.0;
    const bool pass = a2c_wins >= 4 && ppo_wins >= 4 && within_budget;
    char head[128];
    std::snprintf(head, sizeof(head), "a2c %d/5, ppo %d/5 above 1.5x baseline, %.0f s "
                                      "(limit 900);",
                  a2c_wins, ppo_wins, runs.learning_wall_s);
    announce(5, pass, head + detail);
    CHECK(a2c_wins >= 4);
    CHECK(ppo_wins >= 4);
    CHECK(within_budget);
}

TEST_CASE("criterion 6: ppo reaches its plateau in fewer episodes (median)") {
    const SharedRuns& runs = shared_runs();
    std::vector<double> plat_a2c, plat_ppo, early_a2c, early_ppo;
    for (std::uint64_t seed : runs.seeds) {
        const auto& a2c = runs.bus_runs.at({"a2c", seed}).episode_rewards;
        const auto& ppo = runs.bus_runs.at({"ppo", seed}).episode_rewards;
        plat_a2c.push_back(episodes_to_plateau(a2c));
        plat_ppo.push_back(episodes_to_plateau(ppo));
        early_a2c.push_back(
            mean_of(std::vector<double>(a2c.begin(), a2c.begin() + 50)));
        early_ppo.push_back(
            mean_of(std::vector<double>(ppo.begin(), ppo.begin() + 50)));
    }
    const double med_a2c = median_of(plat_a2c);
    const double med_ppo = median_of(plat_ppo);
    const bool pass = med_ppo < med_a2c;
    char detail[240];
    std::snprintf(detail, sizeof(detail),
                  "median episodes to 90%% plateau: ppo %.0f vs a2c %.0f; early-50 mean "
                  "reward (reported, not gated): a2c %.3f ppo %.3f",
                  med_ppo, med_a2c, median_of(early_a2c), median_of(early_ppo));
    announce(6, pass, detail);
    CHECK(med_ppo < med_a2c);
}

TEST_CASE("criterion 7: ppo is more stable over the last 100 episodes (median)") {
    const SharedRuns& runs = shared_runs();
    std::vector<double> std_a2c, std_ppo;
    for (std::uint64_t seed : runs.seeds) {
        const auto& a2c = runs.bus_runs.at({"a2c", seed}).episode_rewards;
        const auto& ppo = runs.bus_runs.at({"ppo", seed}).episode_rewards;
        std_a2c.push_back(
            stddev_of(std::vector<double>(a2c.end() - 100, a2c.end())));
        std_ppo.push_back(
            stddev_of(std::vector<double>(ppo.end() - 100, ppo.end())));
    }
    const double med_a2c = median_of(std_a2c);
    const double med_ppo = median_of(std_ppo);
    const bool pass = med_ppo < med_a2c;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "median last-100-episode reward std: ppo %.4f vs a2c %.4f", med_ppo,
                  med_a2c);
    announce(7, pass, detail);
    CHECK(med_ppo < med_a2c);
}

TEST_CASE("criterion 8: consolidated invariant sweep") {
    bool ok = true;
    std::string failures;
    const auto check_inv = [&](bool cond, const char* name) {
        if (!cond) {
            ok = false;
            failures += std::string(" ") + name;
        }
        CHECK_MESSAGE(cond, name);
    };

    // fairness bounds and equality case
    {
        Rng rng(81);
        for (int i = 0; i < 300; ++i) {
            FairnessLedger l(3, 50);
            std::vector<int> counts = {static_cast<int>(rng.uniform_int(7)),
                                       static_cast<int>(rng.uniform_int(7)),
                                       static_cast<int>(rng.uniform_int(7))};
            l.record_slot(counts);
            const double fa = l.fairness_ratio();
            check_inv(fa >= 0.0 && fa <= 1.0, "fairness-bounds");
            const bool all_equal = counts[0] == counts[1] && counts[1] == counts[2];
            check_inv((fa == 1.0) == all_equal, "fairness-equality-iff");
        }
    }
    // reward bounds + monotonicity in fairness
    {
        Rng rng(82);
        const RewardConfig rc;
        for (int i = 0; i < 300; ++i) {
            const int n = 1 + static_cast<int>(rng.uniform_int(10));
            const int c = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(n + 1)));
            const double util = rng.uniform();
            const double fa = rng.uniform();
            const double r = reward(c, static_cast<std::size_t>(n), util, fa, rc);
            check_inv(r >= rc.failure_penalty && r <= rc.full_reward, "reward-bounds");
            check_inv(reward(c, static_cast<std::size_t>(n), util, std::min(1.0, fa + 0.1),
                             rc) >= r - 1e-15,
                      "reward-monotone-in-fairness");
        }
    }
    // capacity, rate cap, mobility containment, observation range on a rollout
    {
        RunConfig cfg = desk_config();
        RanEnv env(cfg.make_scenario(), cfg.make_channel(), cfg.reward,
                   CqiThresholds::load_csv(cfg.data.cqi_thresholds_csv),
                   McsTable::load_csv(cfg.data.cqi_mcs_csv), 5);
        const ActionCodec codec(cfg.scenario.n_ues, cfg.scenario.n_bss,
                                cfg.scenario.rgb_count);
        Rng rng(83);
        for (int t = 0; t < 400; ++t) {
            const ObservationVector obs = env.observe();
            for (double v : obs) check_inv(v >= 0.0 && v <= 1.0, "observation-range");
            const int a = static_cast<int>(
                rng.uniform_int(static_cast<std::uint32_t>(codec.action_count())));
            env.step(codec.decode(a));
            for (std::size_t b = 0; b < env.n_bss(); ++b)
                check_inv(env.state().used_rgbs[b] <= cfg.scenario.rgb_count, "capacity");
            for (std::size_t u = 0; u < env.n_ues(); ++u) {
                check_inv(env.state().rate_mbps[u] >= 0.0 &&
                              env.state().rate_mbps[u] <=
                                  env.state().ues[u].demand_mbps + 1e-12,
                          "rate-cap");
                check_inv(env.state().ues[u].x_m >= 0.0 &&
                              env.state().ues[u].x_m <= cfg.scenario.arena_width_m &&
                              env.state().ues[u].y_m >= 0.0 &&
                              env.state().ues[u].y_m <= cfg.scenario.arena_height_m,
                          "mobility-containment");
            }
        }
        // violating actions never mutate state
        AllocationAction bad;
        bad.grants.push_back({0, 0, cfg.scenario.rgb_count + 1});
        env.step(bad);
        for (std::size_t b = 0; b < env.n_bss(); ++b)
            check_inv(env.state().used_rgbs[b] == 0, "capacity-reject");
    }
    // cqi + mcs monotonicity
    {
        const CqiThresholds th = CqiThresholds::load_csv(test_paths::thresholds_csv());
        const McsTable mcs = McsTable::load_csv(test_paths::mcs_csv());
        int prev = 0;
        for (double s = -40.0; s <= 40.0; s += 0.05) {
            const int c = th.cqi_from_snr(s);
            check_inv(c >= prev, "cqi-monotone");
            prev = c;
        }
        for (int k = 1; k < 15; ++k)
            check_inv(mcs.entry(k + 1).spectral_efficiency >=
                          mcs.entry(k).spectral_efficiency,
                      "mcs-monotone");
    }
    // determinism of a full short run
    {
        RunConfig cfg = desk_config();
        cfg.schedule.episodes = 2;
        cfg.schedule.slots_per_episode = 40;
        cfg.io.out_dir = test_paths::scratch("acc_inv") + "/d1";
        const TrainResult r1 = train_run(cfg, 31);
        cfg.io.out_dir = test_paths::scratch("acc_inv") + "/d2";
        const TrainResult r2 = train_run(cfg, 31);
        check_inv(r1.episode_rewards == r2.episode_rewards, "run-determinism");
    }
    // softmax normalization at extreme logits
    {
        Rng rng(84);
        for (int i = 0; i < 300; ++i) {
            std::vector<double> logits(2 + rng.uniform_int(12));
            for (double& v : logits) v = rng.uniform(-1000, 1000);
            const auto p = softmax(logits);
            double sum = 0.0;
            bool nonneg = true;
            for (double v : p) {
                sum += v;
                nonneg = nonneg && v >= 0.0;
            }
            check_inv(nonneg && std::fabs(sum - 1.0) <= 1e-9, "softmax-normalization");
        }
    }
    // greedy argmax invariance under monotone transforms
    {
        Rng rng(85);
        for (int i = 0; i < 300; ++i) {
            std::vector<double> logits(3 + rng.uniform_int(8));
            for (double& v : logits) v = rng.uniform(-3, 3);
            const int base = greedy_action(logits);
            std::vector<double> mono = logits;
            for (double& v : mono) v = 2.5 * v + 7.0;
            check_inv(greedy_action(mono) == base, "argmax-invariance");
        }
    }
    // buffer single consumption
    {
        RolloutBuffer buffer;
        Trajectory t;
        t.push({0.0}, 0, -0.5, 1.0, 0.2, true);
        buffer.add(std::move(t));
        buffer.compute(0.9);
        buffer.mark_consumed();
        bool threw = false;
        try {
            buffer.mark_consumed();
        } catch (const contract_error&) {
            threw = true;
        }
        check_inv(threw, "buffer-single-consumption");
    }
    // adam zero-grad no-op
    {
        Rng rng(86);
        MlpParams p = MlpParams::init({4, 3, 1, 8}, rng);
        const MlpParams before = p;
        AdamState opt = AdamState::init(p, {0.05, 0.9, 0.999, 1e-8});
        for (int i = 0; i < 5; ++i) adam_step(p, zeros_like(p), opt);
        bool unchanged = true;
        for (std::size_t l = 0; l < p.weights.size(); ++l)
            unchanged = unchanged && p.weights[l].data == before.weights[l].data;
        check_inv(unchanged, "adam-zero-grad-noop");
    }
    // time-series store monotonicity
    {
        TimeSeriesStore store;
        store.write(4, 0, 5, 1.0);
        bool threw = false;
        try {
            store.write(4, 0, 5, 2.0);
        } catch (const contract_error&) {
            threw = true;
        }
        check_inv(threw && store.point_count(4, 0) == 1, "store-monotone");
    }

    announce(8, ok, ok ? "all module invariants hold" : ("violated:" + failures));
    CHECK(ok);
}

TEST_CASE("criterion 9: paper preset runs 2 episodes end to end") {
    RunConfig cfg = RunConfig::preset("paper");
    cfg.data.cqi_thresholds_csv = test_paths::thresholds_csv();
    cfg.data.cqi_mcs_csv = test_paths::mcs_csv();
    cfg.schedule.episodes = 2;
    cfg.io.out_dir = test_paths::scratch("paper_smoke");
    cfg.io.checkpoint_every = 1;
    cfg.io.scene_every = 200;

    bool ok = true;
    std::string detail;
    try {
        const TrainResult result = train_run(cfg, 1);
        ok = ok && result.rows.size() == 2;
        for (const EpisodeRow& row : result.rows)
            ok = ok && std::isfinite(row.mean_reward) && std::isfinite(row.actor_loss) &&
                 std::isfinite(row.critic_loss) && std::isfinite(row.entropy);
        // artifacts well-formed: csv rows, loadable checkpoint, scenes, spill
        const MlpParams actor = load_checkpoint(result.artifacts.final_actor_checkpoint);
        ok = ok && actor.input_dim() == 40 && actor.output_dim() == 51;
        ok = ok && !SceneLog::read_all(result.artifacts.scene_log).empty();
        ok = ok && read_spill_file(result.artifacts.spill_file).size() ==
                       2 * (static_cast<std::size_t>(cfg.schedule.slots_per_episode) + 1);
        const EvalSummary eval_summary =
            evaluate(cfg, result.artifacts.final_actor_checkpoint, 1, 5);
        ok = ok && std::isfinite(eval_summary.mean_reward);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "5 gNB / 10 UE / 4x384 nets, 2x1000 slots, mean rewards %.3f %.3f, "
                      "artifacts well-formed",
                      result.rows[0].mean_reward, result.rows[1].mean_reward);
        detail = buf;
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    announce(9, ok, detail);
    CHECK(ok);
}
