#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ricbox/a2c.hpp"
#include "ricbox/action_codec.hpp"
#include "ricbox/adam.hpp"
#include "ricbox/checkpoint.hpp"
#include "ricbox/collect.hpp"
#include "ricbox/config.hpp"
#include "ricbox/kpimon.hpp"
#include "ricbox/pipe.hpp"
#include "ricbox/ppo.hpp"
#include "ricbox/ran_env.hpp"
#include "ricbox/scene.hpp"
#include "ricbox/tsstore.hpp"
#include "ricbox/wire.hpp"
#include "ricbox/xapp.hpp"

namespace ricbox {

inline constexpr const char* kCodeVersion = "0.1.0";

// One metrics CSV row per episode.
struct EpisodeRow {
    int episode = 0;
    int steps = 0;
    double mean_reward = 0.0;
    double sum_rate_mbps = 0.0;
    double fairness = 0.0;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    double entropy = 0.0;
    long long wall_ms = 0;
};

inline constexpr const char* kMetricsCsvHeader =
    "episode,steps,mean_reward,sum_rate_mbps,fairness,actor_loss,critic_loss,entropy,wall_ms";

inline std::string format_episode_row(const EpisodeRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%lld", r.episode,
                  r.steps, r.mean_reward, r.sum_rate_mbps, r.fairness, r.actor_loss,
                  r.critic_loss, r.entropy, r.wall_ms);
    return buf;
}

struct RunArtifacts {
    std::string run_dir;
    std::string metrics_csv;
    std::string scene_log;   // empty if disabled
    std::string spill_file;  // empty if disabled or direct transport
    std::string manifest;
    std::vector<std::string> checkpoints;
    std::string final_actor_checkpoint;
    std::string final_critic_checkpoint;
};

struct TrainResult {
    std::vector<EpisodeRow> rows;
    std::vector<double> episode_rewards; // == rows[i].mean_reward, handy for analysis
    RunArtifacts artifacts;
};

// Per-episode deterministic reseed so episodes differ but the whole run is a
// pure function of (config, seed).
inline std::uint64_t episode_seed(std::uint64_t run_seed, int episode) {
    return splitmix64(run_seed ^ splitmix64(static_cast<std::uint64_t>(episode) + 0x5eedULL));
}

// Owns one full training run: env, nets, optimizers, and (in bus mode) the
// KPIMON -> store -> xApp messaging path. Nothing is shared across runs.
class Trainer {
public:
    static constexpr std::uint16_t kRanNodeId = 1;
    static constexpr std::uint16_t kXappNodeId = 2;

    Trainer(const RunConfig& cfg, std::uint64_t seed)
        : cfg_(validated(cfg)),
          seed_(seed),
          env_(cfg_.make_scenario(), cfg_.make_channel(), cfg_.reward,
               CqiThresholds::load_csv(cfg_.data.cqi_thresholds_csv),
               McsTable::load_csv(cfg_.data.cqi_mcs_csv), seed),
          codec_(cfg_.scenario.n_ues, cfg_.scenario.n_bss, cfg_.scenario.rgb_count),
          policy_rng_(Rng::derive(seed, rng_stream::policy)),
          shuffle_rng_(Rng::derive(seed, rng_stream::shuffle)) {
        const MlpConfig actor_shape{env_.observation_dim(),
                                    static_cast<std::size_t>(codec_.action_count()),
                                    static_cast<std::size_t>(cfg.agent.hidden_layers),
                                    static_cast<std::size_t>(cfg.agent.hidden_width)};
        const MlpConfig critic_shape{env_.observation_dim(), 1,
                                     static_cast<std::size_t>(cfg.agent.hidden_layers),
                                     static_cast<std::size_t>(cfg.agent.hidden_width)};
        Rng actor_rng = Rng::derive(seed, rng_stream::actor_init);
        Rng critic_rng = Rng::derive(seed, rng_stream::critic_init);
        actor_ = MlpParams::init(actor_shape, actor_rng);
        critic_ = MlpParams::init(critic_shape, critic_rng);
        actor_opt_ = AdamState::init(actor_, {cfg.agent.actor_lr, 0.9, 0.999, 1e-8});
        critic_opt_ = AdamState::init(critic_, {cfg.agent.critic_lr, 0.9, 0.999, 1e-8});
    }

    const MlpParams& actor() const { return actor_; }
    const MlpParams& critic() const { return critic_; }
    RanEnv& env() { return env_; }

    TrainResult train() {
        namespace fs = std::filesystem;
        const auto t0 = std::chrono::steady_clock::now();
        const bool bus = cfg_.io.transport == "bus";

        TrainResult result;
        RunArtifacts& art = result.artifacts;
        art.run_dir = (fs::path(cfg_.io.out_dir) /
                       (cfg_.agent.algorithm + "-s" + std::to_string(seed_)))
                          .string();
        fs::create_directories(art.run_dir);
        art.metrics_csv = (fs::path(art.run_dir) / "metrics.csv").string();

        std::ofstream csv(art.metrics_csv, std::ios::trunc);
        if (!csv) throw io_error("cannot open metrics csv: " + art.metrics_csv);
        csv << kMetricsCsvHeader << '\n';

        std::unique_ptr<SceneLog> scene_log;
        if (cfg_.io.scene_every > 0) {
            art.scene_log = (fs::path(art.run_dir) / "scene.jsonl").string();
            scene_log = std::make_unique<SceneLog>(art.scene_log);
        }

        TimeSeriesStore store;
        std::unique_ptr<KpiMonitor> kpimon;
        std::unique_ptr<RicXapp> xapp;
        std::unique_ptr<E2Session> session;
        if (bus) {
            if (cfg_.io.spill)
                art.spill_file = (fs::path(art.run_dir) / "spill.e2").string();
            kpimon = std::make_unique<KpiMonitor>(&store, art.spill_file);
            xapp = std::make_unique<RicXapp>(cfg_.make_scenario(), cfg_.reward, kRanNodeId);
            session = std::make_unique<E2Session>();
            session->register_node(kRanNodeId);
            session->register_node(kXappNodeId);
        }

        const int episodes = cfg_.schedule.episodes;
        const int slots = cfg_.schedule.slots_per_episode;
        long long global_slot = 0;

        for (int ep = 0; ep < episodes; ++ep) {
            const auto ep_t0 = std::chrono::steady_clock::now();
            env_.reset(episode_seed(seed_, ep));

            EpisodeStats stats;
            Trajectory traj;
            const auto scene_hook = [&](const RanEnv& env, const StepMetrics&) {
                ++global_slot;
                if (scene_log && cfg_.io.scene_every > 0 &&
                    global_slot % cfg_.io.scene_every == 0)
                    scene_log->append(env.render(ep));
            };

            if (bus) {
                xapp->reset_episode();
                traj = collect_episode_bus(slots, *kpimon, *xapp, *session, &stats,
                                           scene_hook);
            } else {
                traj = collect_rollout(env_, actor_, critic_, codec_, slots, policy_rng_,
                                       &stats, scene_hook);
            }

            RolloutBuffer buffer;
            buffer.add(std::move(traj));
            buffer.compute(cfg_.agent.discount);

            LossReport report;
            try {
                if (cfg_.agent.algorithm == "a2c") {
                    const A2cConfig acfg{cfg_.agent.discount, cfg_.agent.entropy_coef,
                                         cfg_.agent.grad_clip_norm};
                    report =
                        a2c_update(buffer, actor_, actor_opt_, critic_, critic_opt_, acfg);
                } else {
                    const PpoConfig pcfg{cfg_.agent.ppo_clip,      cfg_.agent.ppo_epochs,
                                         cfg_.agent.ppo_minibatch, cfg_.agent.entropy_coef,
                                         cfg_.agent.value_coef,    cfg_.agent.grad_clip_norm};
                    report = ppo_update(buffer, actor_, actor_opt_, critic_, critic_opt_,
                                        pcfg, shuffle_rng_);
                }
            } catch (const numeric_error& e) {
                // abort with coordinates; cadence checkpoints stay on disk
                throw numeric_error("episode " + std::to_string(ep) + ", slot " +
                                    std::to_string(global_slot) + ": " + e.what());
            }

            EpisodeRow row;
            row.episode = ep;
            row.steps = slots;
            row.mean_reward = stats.mean_reward;
            row.sum_rate_mbps = stats.mean_sum_rate_mbps;
            row.fairness = stats.mean_fairness;
            row.actor_loss = report.actor_loss;
            row.critic_loss = report.critic_loss;
            row.entropy = report.entropy;
            row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - ep_t0)
                              .count();
            csv << format_episode_row(row) << '\n';
            csv.flush();
            result.rows.push_back(row);
            result.episode_rewards.push_back(row.mean_reward);

            if (cfg_.io.checkpoint_every > 0 && (ep + 1) % cfg_.io.checkpoint_every == 0 &&
                ep + 1 < episodes) {
                const std::string stem =
                    (fs::path(art.run_dir) / ("ckpt_ep" + std::to_string(ep + 1))).string();
                save_checkpoint(actor_, stem + "_actor.rlck");
                save_checkpoint(critic_, stem + "_critic.rlck");
                art.checkpoints.push_back(stem + "_actor.rlck");
            }
        }

        const std::string final_stem = (fs::path(art.run_dir) / "ckpt_final").string();
        art.final_actor_checkpoint = final_stem + "_actor.rlck";
        art.final_critic_checkpoint = final_stem + "_critic.rlck";
        save_checkpoint(actor_, art.final_actor_checkpoint);
        save_checkpoint(critic_, art.final_critic_checkpoint);
        art.checkpoints.push_back(art.final_actor_checkpoint);

        const long long total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                       std::chrono::steady_clock::now() - t0)
                                       .count();
        art.manifest = (fs::path(art.run_dir) / "manifest.json").string();
        write_manifest(art, total_ms);
        return result;
    }

private:
    static RunConfig validated(RunConfig cfg) {
        cfg.validate();
        return cfg;
    }

    // One episode through the E2-style path: indication out, control back,
    // one pair per decision slot, plus a trailing indication that reports
    // the last step's metrics.
    Trajectory collect_episode_bus(int slots, KpiMonitor& kpimon, RicXapp& xapp,
                                   E2Session& session, EpisodeStats* stats,
                                   const StepHook& on_step) {
        Trajectory traj;
        EpisodeStats agg;
        StepMetrics last_metrics;
        last_metrics.fairness_ratio = env_.ledger().fairness_ratio();

        // Trainer-side policy head handed to the xApp: sample, remember
        // log-prob and value for the trajectory.
        double step_log_prob = 0.0;
        double step_value = 0.0;
        const RicXapp::ActionSelector sampler = [&](const ObservationVector& obs) {
            Matrix input(1, obs.size());
            input.data = obs;
            const std::vector<double> logits =
                detail::matrix_row(forward(actor_, input), 0);
            const auto [action_index, log_prob] = softmax_sample(logits, policy_rng_);
            step_log_prob = log_prob;
            step_value = forward(critic_, input).at(0, 0);
            return action_index;
        };

        for (int t = 0; t < slots; ++t) {
            const IndicationMessage ind =
                kpimon.collect(env_.state(), last_metrics, kRanNodeId);
            session.send_indication(kRanNodeId, encode(ind));

            // xApp side: decode, decide, answer with a control message.
            const Message received = decode(session.receive_indication());
            const ControlMessage ctrl =
                xapp.decide(std::get<IndicationMessage>(received), sampler);
            session.send_control(kXappNodeId, encode(ctrl));

            // RAN side: decode and apply.
            const Message ctrl_received = decode(session.receive_control());
            const AllocationAction action =
                to_allocation_action(std::get<ControlMessage>(ctrl_received));
            const StepMetrics metrics = env_.step(action);

            traj.push(xapp.last_observation(), xapp.action_codec().encode(action),
                      step_log_prob, metrics.reward, step_value, t + 1 == slots);
            agg.mean_reward += metrics.reward;
            agg.mean_sum_rate_mbps += metrics.sum_rate_mbps;
            agg.mean_fairness += metrics.fairness_ratio;
            last_metrics = metrics;
            if (on_step) on_step(env_, metrics);
        }
        // Trailing indication so the final step's metrics reach the store.
        const IndicationMessage tail = kpimon.collect(env_.state(), last_metrics, kRanNodeId);
        session.send_indication(kRanNodeId, encode(tail));
        (void)decode(session.receive_indication()); // xApp reads it; no decision follows

        if (stats) {
            const double inv = 1.0 / static_cast<double>(slots);
            stats->mean_reward = agg.mean_reward * inv;
            stats->mean_sum_rate_mbps = agg.mean_sum_rate_mbps * inv;
            stats->mean_fairness = agg.mean_fairness * inv;
        }
        return traj;
    }

    void write_manifest(const RunArtifacts& art, long long wall_ms) const {
        char hash_hex[32];
        std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                      static_cast<unsigned long long>(cfg_.hash()));
        nlohmann::ordered_json j;
        j["config_hash"] = hash_hex;
        j["seed"] = seed_;
        j["code_version"] = kCodeVersion;
        j["algorithm"] = cfg_.agent.algorithm;
        j["episodes"] = cfg_.schedule.episodes;
        j["slots_per_episode"] = cfg_.schedule.slots_per_episode;
        j["wall_ms"] = wall_ms;
        j["metrics_csv"] = art.metrics_csv;
        j["scene_log"] = art.scene_log;
        j["spill_file"] = art.spill_file;
        j["checkpoints"] = art.checkpoints;
        std::ofstream out(art.manifest, std::ios::trunc);
        if (!out) throw io_error("cannot open manifest: " + art.manifest);
        out << j.dump(2) << '\n';
    }

    RunConfig cfg_;
    std::uint64_t seed_;
    RanEnv env_;
    ActionCodec codec_;
    Rng policy_rng_;
    Rng shuffle_rng_;
    MlpParams actor_;
    MlpParams critic_;
    AdamState actor_opt_;
    AdamState critic_opt_;
};

inline TrainResult train_run(const RunConfig& cfg, std::uint64_t seed) {
    Trainer t(cfg, seed);
    return t.train();
}

struct EvalSummary {
    int episodes = 0;
    double mean_reward = 0.0;
    double std_reward = 0.0;
    double mean_sum_rate_mbps = 0.0;
    double std_sum_rate_mbps = 0.0;
    double mean_fairness = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return {mean, std::sqrt(var)};
}

} // namespace detail

// Greedy-policy rollouts from a saved actor checkpoint.
inline EvalSummary evaluate(const RunConfig& cfg, const std::string& checkpoint_path,
                            int episodes, std::uint64_t seed) {
    if (episodes <= 0) throw config_error("evaluate: episodes must be positive");
    const MlpParams actor = load_checkpoint(checkpoint_path);
    RanEnv env(cfg.make_scenario(), cfg.make_channel(), cfg.reward,
               CqiThresholds::load_csv(cfg.data.cqi_thresholds_csv),
               McsTable::load_csv(cfg.data.cqi_mcs_csv), seed);
    const ActionCodec codec(cfg.scenario.n_ues, cfg.scenario.n_bss, cfg.scenario.rgb_count);
    if (actor.input_dim() != env.observation_dim() ||
        actor.output_dim() != static_cast<std::size_t>(codec.action_count()))
        throw config_error("checkpoint shape (" + std::to_string(actor.input_dim()) + "->" +
                           std::to_string(actor.output_dim()) +
                           ") does not match config (" +
                           std::to_string(env.observation_dim()) + "->" +
                           std::to_string(codec.action_count()) + ")");

    std::vector<double> ep_rewards, ep_rates, ep_fairness;
    for (int ep = 0; ep < episodes; ++ep) {
        env.reset(episode_seed(seed, ep));
        double reward_sum = 0.0, rate_sum = 0.0, fairness_sum = 0.0;
        for (int t = 0; t < cfg.schedule.slots_per_episode; ++t) {
            const ObservationVector obs = env.observe();
            Matrix input(1, obs.size());
            input.data = obs;
            const int a = greedy_action(detail::matrix_row(forward(actor, input), 0));
            const StepMetrics m = env.step(codec.decode(a));
            reward_sum += m.reward;
            rate_sum += m.sum_rate_mbps;
            fairness_sum += m.fairness_ratio;
        }
        const double inv = 1.0 / cfg.schedule.slots_per_episode;
        ep_rewards.push_back(reward_sum * inv);
        ep_rates.push_back(rate_sum * inv);
        ep_fairness.push_back(fairness_sum * inv);
    }

    EvalSummary s;
    s.episodes = episodes;
    std::tie(s.mean_reward, s.std_reward) = detail::mean_std(ep_rewards);
    std::tie(s.mean_sum_rate_mbps, s.std_sum_rate_mbps) = detail::mean_std(ep_rates);
    s.mean_fairness = detail::mean_std(ep_fairness).first;
    return s;
}

// Uniform-random policy over the codec's action space; the oracle baseline
// the trained agent must beat.
inline std::vector<double> random_policy_episode_rewards(const RunConfig& cfg,
                                                         std::uint64_t seed, int episodes) {
    RanEnv env(cfg.make_scenario(), cfg.make_channel(), cfg.reward,
               CqiThresholds::load_csv(cfg.data.cqi_thresholds_csv),
               McsTable::load_csv(cfg.data.cqi_mcs_csv), seed);
    const ActionCodec codec(cfg.scenario.n_ues, cfg.scenario.n_bss, cfg.scenario.rgb_count);
    Rng rng = Rng::derive(seed, rng_stream::baseline);
    std::vector<double> out;
    for (int ep = 0; ep < episodes; ++ep) {
        env.reset(episode_seed(seed, ep));
        double reward_sum = 0.0;
        for (int t = 0; t < cfg.schedule.slots_per_episode; ++t) {
            const int a = static_cast<int>(
                rng.uniform_int(static_cast<std::uint32_t>(codec.action_count())));
            reward_sum += env.step(codec.decode(a)).reward;
        }
        out.push_back(reward_sum / cfg.schedule.slots_per_episode);
    }
    return out;
}

} // namespace ricbox
