#include <doctest.h>

#include <cmath>

#include "ricbox/action_codec.hpp"
#include "ricbox/collect.hpp"
#include "ricbox/ran_env.hpp"
#include "ricbox/rollout.hpp"
#include "test_paths.hpp"

using namespace ricbox;

// Independent oracle: the literal double sum G_t = sum_k gamma^k r_{t+k}.
static std::vector<double> brute_force_returns(const std::vector<double>& rewards,
                                               double gamma) {
    std::vector<double> out(rewards.size(), 0.0);
    for (std::size_t t = 0; t < rewards.size(); ++t) {
        double acc = 0.0;
        for (std::size_t k = t; k < rewards.size(); ++k)
            acc += std::pow(gamma, static_cast<double>(k - t)) * rewards[t + (k - t)];
        out[t] = acc;
    }
    return out;
}

TEST_CASE("returns: worked example from the recursion") {
    const auto g = discounted_returns({1.0, 0.0, 2.0}, 0.9);
    REQUIRE(g.size() == 3);
    CHECK(g[2] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(1.8));
    CHECK(g[0] == doctest::Approx(2.62));
}

TEST_CASE("returns: gamma 1 gives suffix sums; empty input gives empty output") {
    const auto g = discounted_returns({1.0, 2.0, 3.0}, 1.0);
    CHECK(g[0] == doctest::Approx(6.0));
    CHECK(g[1] == doctest::Approx(5.0));
    CHECK(g[2] == doctest::Approx(3.0));
    CHECK(discounted_returns({}, 0.9).empty());
    CHECK_THROWS_AS(discounted_returns({1.0}, 0.0), contract_error);
}

TEST_CASE("returns: recursion holds at every index and matches the oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> rewards(1 + rng.uniform_int(10));
        for (double& r : rewards) r = rng.uniform(-2, 2);
        const double gamma = 0.5 + 0.5 * rng.uniform();
        const auto g = discounted_returns(rewards, gamma);
        for (std::size_t t = 0; t + 1 < g.size(); ++t)
            CHECK(g[t] == doctest::Approx(rewards[t] + gamma * g[t + 1]).epsilon(1e-12));
        const auto oracle = brute_force_returns(rewards, gamma);
        for (std::size_t t = 0; t < g.size(); ++t)
            CHECK(std::fabs(g[t] - oracle[t]) < 1e-12);
    }
}

TEST_CASE("advantages: exact-fit critic, already-normalized pair, moments") {
    const auto zero = advantages({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
    for (double a : zero) CHECK(a == 0.0);

    const auto pair = advantages({1.0, -1.0}, {0.0, 0.0});
    CHECK(pair[0] == doctest::Approx(1.0));
    CHECK(pair[1] == doctest::Approx(-1.0));

    Rng rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> returns(2 + rng.uniform_int(40)), values(returns.size());
        for (double& v : returns) v = rng.uniform(-3, 3);
        for (double& v : values) v = rng.uniform(-3, 3);
        const auto adv = advantages(returns, values);
        double mean = 0.0, var = 0.0;
        for (double a : adv) mean += a;
        mean /= static_cast<double>(adv.size());
        for (double a : adv) var += (a - mean) * (a - mean);
        var /= static_cast<double>(adv.size());
        CHECK(std::fabs(mean) < 1e-9);
        CHECK(var == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(advantages({1.0}, {1.0, 2.0}), contract_error);
}

TEST_CASE("action codec: null action, bijection, K formula") {
    const ActionCodec codec(4, 2, 12);
    CHECK(codec.action_count() == 1 + 4 * 2);
    CHECK(codec.decode(0).empty());
    CHECK(codec.encode(AllocationAction{}) == 0);
    for (int idx = 0; idx < codec.action_count(); ++idx)
        CHECK(codec.encode(codec.decode(idx)) == idx);
    CHECK_THROWS_AS(codec.decode(-1), contract_error);
    CHECK_THROWS_AS(codec.decode(codec.action_count()), contract_error);

    const AllocationAction a = codec.decode(1 + 3 * 2 + 1);
    REQUIRE(a.grants.size() == 1);
    CHECK(a.grants[0].ue_id == 3);
    CHECK(a.grants[0].bs_id == 1);
    CHECK(a.grants[0].rgb_share == 12);
}

namespace {
RanEnv make_env(std::uint64_t seed = 7) {
    return RanEnv(ScenarioConfig{}, ChannelConfig{}, RewardConfig{},
                  CqiThresholds::load_csv(test_paths::thresholds_csv()),
                  McsTable::load_csv(test_paths::mcs_csv()), seed);
}
MlpParams zero_net(std::size_t in, std::size_t out) {
    Rng rng(0);
    MlpParams p = MlpParams::init({in, out, 1, 8}, rng);
    for (auto& w : p.weights)
        for (double& v : w.data) v = 0.0;
    for (auto& b : p.biases)
        for (double& v : b) v = 0.0;
    return p;
}
} // namespace

TEST_CASE("collect_rollout: T=1 yields parallel arrays of length 1") {
    RanEnv env = make_env();
    const ActionCodec codec(4, 2, 12);
    MlpParams actor = zero_net(env.observation_dim(), codec.action_count());
    MlpParams critic = zero_net(env.observation_dim(), 1);
    Rng rng(3);
    const Trajectory t = collect_rollout(env, actor, critic, codec, 1, rng);
    CHECK(t.size() == 1);
    CHECK(t.observations.size() == 1);
    CHECK(t.log_probs.size() == 1);
    CHECK(t.rewards.size() == 1);
    CHECK(t.values.size() == 1);
    CHECK(t.dones.size() == 1);
    CHECK(t.dones[0] == 1);
}

TEST_CASE("collect_rollout: fixed seed and params replay identically") {
    const ActionCodec codec(4, 2, 12);
    RanEnv env1 = make_env();
    RanEnv env2 = make_env();
    Rng meta(5);
    MlpParams actor = MlpParams::init({env1.observation_dim(),
                                       static_cast<std::size_t>(codec.action_count()), 2, 16},
                                      meta);
    MlpParams critic = MlpParams::init({env1.observation_dim(), 1, 2, 16}, meta);
    Rng r1(77), r2(77);
    const Trajectory a = collect_rollout(env1, actor, critic, codec, 40, r1);
    const Trajectory b = collect_rollout(env2, actor, critic, codec, 40, r2);
    CHECK(a.actions == b.actions);
    CHECK(a.rewards == b.rewards);
    CHECK(a.log_probs == b.log_probs);
    CHECK(a.values == b.values);
}

TEST_CASE("collect_rollout: uniform actor visits actions uniformly (chi-square)") {
    RanEnv env = make_env();
    const ActionCodec codec(4, 2, 12);
    const int k = codec.action_count(); // 9
    MlpParams actor = zero_net(env.observation_dim(), static_cast<std::size_t>(k));
    MlpParams critic = zero_net(env.observation_dim(), 1);
    Rng rng(1234);
    const int samples = 10000;
    const Trajectory t = collect_rollout(env, actor, critic, codec, samples, rng);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int a : t.actions) ++counts[static_cast<std::size_t>(a)];
    const double expected = static_cast<double>(samples) / k;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // dof = 8, p = 0.999 critical value
    CHECK(chi2 < 26.12);
}

TEST_CASE("buffer: compute before consume, consume exactly once") {
    RolloutBuffer buffer;
    Trajectory t;
    t.push({0.0}, 0, -0.1, 1.0, 0.5, true);
    t.push({0.0}, 0, -0.1, 0.5, 0.5, true);
    buffer.add(std::move(t));
    CHECK_THROWS_AS(buffer.flatten(), contract_error); // compute() not run yet
    buffer.compute(0.9);
    CHECK(buffer.returns().size() == 2);
    buffer.mark_consumed();
    CHECK_THROWS_AS(buffer.mark_consumed(), contract_error);
    CHECK_THROWS_AS(buffer.add(Trajectory{}), contract_error);
    buffer.clear();
    CHECK(!buffer.consumed());
}

TEST_CASE("buffer: returns computed per trajectory, not across boundaries") {
    RolloutBuffer buffer;
    Trajectory t1, t2;
    t1.push({0.0}, 0, -0.1, 1.0, 0.0, true);
    t2.push({0.0}, 0, -0.1, 5.0, 0.0, true);
    buffer.add(std::move(t1));
    buffer.add(std::move(t2));
    buffer.compute(0.9);
    // episode 1's return must not bleed into episode 0
    CHECK(buffer.returns()[0] == doctest::Approx(1.0));
    CHECK(buffer.returns()[1] == doctest::Approx(5.0));
}
