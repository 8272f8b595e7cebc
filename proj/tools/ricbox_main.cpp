// ricbox CLI: train / evaluate / compare / replay / grad-check / fuzz-codec.
// Exit codes: 0 ok, 2 config error, 3 numeric error, 4 I/O error.

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricbox/compare.hpp"
#include "ricbox/config.hpp"
#include "ricbox/grad_check.hpp"
#include "ricbox/kpimon.hpp"
#include "ricbox/trainer.hpp"
#include "ricbox/wire.hpp"

namespace {

using namespace ricbox;

// --config accepts a preset name ("desk", "paper") or a config file path.
RunConfig resolve_config(const std::string& spec) {
    if (spec == "desk" || spec == "paper") return RunConfig::preset(spec);
    return parse_config_file(spec);
}

int cmd_train(const std::string& config_spec, std::uint64_t seed, const std::string& out,
              int episodes_override) {
    RunConfig cfg = resolve_config(config_spec);
    if (!out.empty()) cfg.io.out_dir = out;
    if (episodes_override > 0) cfg.schedule.episodes = episodes_override;
    cfg.validate();
    const TrainResult result = train_run(cfg, seed);
    std::printf("trained %s seed %" PRIu64 ": %zu episodes\n", cfg.agent.algorithm.c_str(),
                seed, result.rows.size());
    std::printf("  metrics:    %s\n", result.artifacts.metrics_csv.c_str());
    std::printf("  checkpoint: %s\n", result.artifacts.final_actor_checkpoint.c_str());
    if (!result.artifacts.spill_file.empty())
        std::printf("  spill:      %s\n", result.artifacts.spill_file.c_str());
    if (!result.artifacts.scene_log.empty())
        std::printf("  scenes:     %s\n", result.artifacts.scene_log.c_str());
    std::printf("  manifest:   %s\n", result.artifacts.manifest.c_str());
    const auto w = static_cast<std::ptrdiff_t>(std::min<std::size_t>(50, result.episode_rewards.size()));
    std::printf("final %td-episode mean reward: %.4f\n", w,
                mean_of(std::vector<double>(result.episode_rewards.end() - w,
                                            result.episode_rewards.end())));
    return 0;
}

int cmd_evaluate(const std::string& config_spec, const std::string& checkpoint, int episodes,
                 std::uint64_t seed) {
    const RunConfig cfg = resolve_config(config_spec);
    const EvalSummary s = evaluate(cfg, checkpoint, episodes, seed);
    std::printf("greedy evaluation over %d episodes (seed %" PRIu64 ")\n", s.episodes, seed);
    std::printf("  reward:   mean %.4f  std %.4f\n", s.mean_reward, s.std_reward);
    std::printf("  sum rate: mean %.4f Mbps  std %.4f\n", s.mean_sum_rate_mbps,
                s.std_sum_rate_mbps);
    std::printf("  fairness: mean %.4f\n", s.mean_fairness);
    return 0;
}

int cmd_compare(const std::string& config_spec, const std::vector<std::uint64_t>& seeds,
                const std::string& out) {
    RunConfig cfg = resolve_config(config_spec);
    const std::vector<std::uint64_t> use_seeds = seeds.empty() ? cfg.schedule.seeds : seeds;
    const std::string out_dir = out.empty() ? cfg.io.out_dir + "/compare" : out;
    const CompareReport report = compare_runs(cfg, use_seeds, out_dir);
    std::printf("%-5s %-6s %-10s %-12s %-12s %-12s\n", "algo", "seed", "plateau_ep",
                "final_ma50", "last100_std", "early50");
    for (const CompareRow& r : report.rows)
        std::printf("%-5s %-6" PRIu64 " %-10d %-12.4f %-12.4f %-12.4f\n", r.algorithm.c_str(),
                    r.seed, r.episodes_to_90pct_plateau, r.final_ma50, r.last100_std,
                    r.early50_mean);
    std::printf("median episodes to 90%% plateau: a2c=%.1f ppo=%.1f\n",
                report.median_plateau_a2c, report.median_plateau_ppo);
    std::printf("median last-100 reward std:     a2c=%.4f ppo=%.4f\n",
                report.median_last100_std_a2c, report.median_last100_std_ppo);
    std::printf("report: %s\n", report.report_csv.c_str());
    return 0;
}

int cmd_replay(const std::string& file, const std::string& csv_out) {
    std::vector<IndicationMessage> inds;
    try {
        inds = read_spill_file(file);
    } catch (const codec_error& e) {
        std::fprintf(stderr, "replay: %s\n", e.what());
        return 4;
    }
    std::FILE* csv = nullptr;
    if (!csv_out.empty()) {
        csv = std::fopen(csv_out.c_str(), "w");
        if (!csv) throw io_error("cannot open " + csv_out);
        std::fprintf(csv, "slot,connected_ues,sum_rate_mbps,fairness\n");
    }
    std::printf("%-8s %-10s %-14s %-10s %-8s\n", "slot", "connected", "sum_rate_mbps",
                "fairness", "records");
    for (const IndicationMessage& m : inds) {
        double sum_rate = 0.0, connected = 0.0, fairness = 0.0;
        for (const KpiRecord& r : m.records) {
            if (r.kpi_id == static_cast<std::uint16_t>(KpiId::dl_rate_mbps))
                sum_rate += r.value;
            else if (r.kpi_id == static_cast<std::uint16_t>(KpiId::connected_ues))
                connected = r.value;
            else if (r.kpi_id == static_cast<std::uint16_t>(KpiId::fairness))
                fairness = r.value;
        }
        std::printf("%-8" PRIu64 " %-10.0f %-14.6f %-10.6f %-8zu\n", m.timestamp_slot,
                    connected, sum_rate, fairness, m.records.size());
        if (csv)
            std::fprintf(csv, "%" PRIu64 ",%.0f,%.6f,%.6f\n", m.timestamp_slot, connected,
                         sum_rate, fairness);
    }
    if (csv) std::fclose(csv);
    std::printf("%zu indications\n", inds.size());
    return 0;
}

// Random-shape gradient verification: analytic backward vs central finite
// differences on an MSE-to-random-targets loss.
int cmd_grad_check(int shapes, double tolerance, std::uint64_t seed) {
    Rng meta(seed);
    double worst = 0.0;
    for (int s = 0; s < shapes; ++s) {
        MlpConfig shape;
        shape.input_dim = 1 + meta.uniform_int(8);
        shape.output_dim = 1 + meta.uniform_int(6);
        shape.hidden_layers = meta.uniform_int(4); // 0..3
        shape.hidden_width = 2 + meta.uniform_int(14);
        const std::size_t batch = 1 + meta.uniform_int(6);

        Rng init(meta.next_u64());
        MlpParams params = MlpParams::init(shape, init);
        // wake the net up: the 0.01-scaled head would leave gradients tiny
        for (double& v : params.weights.back().data) v *= 100.0;
        Matrix input(batch, shape.input_dim);
        for (double& v : input.data) v = init.uniform(-2.0, 2.0);
        Matrix target(batch, shape.output_dim);
        for (double& v : target.data) v = init.uniform(-2.0, 2.0);

        const auto loss_fn = [&](const MlpParams& p) {
            const Matrix out = forward(p, input);
            double loss = 0.0;
            for (std::size_t i = 0; i < out.data.size(); ++i) {
                const double e = out.data[i] - target.data[i];
                loss += e * e;
            }
            return loss / static_cast<double>(out.rows);
        };

        ForwardCache cache;
        const Matrix out = forward(params, input, &cache);
        Matrix dout(out.rows, out.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i)
            dout.data[i] = 2.0 * (out.data[i] - target.data[i]) / static_cast<double>(out.rows);
        const Gradients analytic = backward(params, cache, dout);

        Rng probe_rng(meta.next_u64());
        const GradCheckReport report = grad_check(params, loss_fn, analytic, probe_rng, 60);
        worst = std::max(worst, report.max_rel_error);
        if (!report.pass(tolerance)) {
            std::fprintf(stderr,
                         "grad-check FAILED at shape %d: max rel error %.3e (tol %.1e)\n", s,
                         report.max_rel_error, tolerance);
            return 3;
        }
    }
    std::printf("grad-check passed: %d shapes, worst relative error %.3e (tol %.1e)\n", shapes,
                worst, tolerance);
    return 0;
}

int cmd_fuzz_codec(int count, int mutations, std::uint64_t seed);

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ricbox: RL resource-allocation xApp sandbox (simulated RAN, A2C/PPO, "
                 "E2-style messaging)"};
    app.require_subcommand(1);

    std::string config_spec = "desk";
    std::string out_dir;
    std::string checkpoint;
    std::string file;
    std::string csv_out;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;
    int episodes = 0;
    int shapes = 100;
    double tolerance = 1e-4;
    int count = 100000;
    int mutations = 10000;

    auto* train = app.add_subcommand("train", "train one agent on one seed");
    train->add_option("--config", config_spec, "preset name or config file")->required();
    train->add_option("--seed", seed, "run seed")->required();
    train->add_option("--out", out_dir, "output directory override");
    train->add_option("--episodes", episodes, "episode count override");

    auto* eval = app.add_subcommand("evaluate", "greedy rollouts from a checkpoint");
    eval->add_option("--checkpoint", checkpoint, "actor checkpoint (.rlck)")->required();
    eval->add_option("--config", config_spec, "preset name or config file")->required();
    eval->add_option("--episodes", episodes, "evaluation episodes")->required();
    eval->add_option("--seed", seed, "evaluation seed")->required();

    auto* cmp = app.add_subcommand("compare", "train A2C and PPO on identical seeds");
    cmp->add_option("--config", config_spec, "preset name or config file")->required();
    cmp->add_option("--seeds", seeds, "comma-separated seeds")->delimiter(',');
    cmp->add_option("--out", out_dir, "output directory override");

    auto* replay = app.add_subcommand("replay", "decode and tabulate a spill file");
    replay->add_option("--file", file, "spill file")->required();
    replay->add_option("--csv", csv_out, "also write per-slot KPIs to this CSV");

    auto* gc = app.add_subcommand("grad-check", "finite-difference gradient verification");
    gc->add_option("--shapes", shapes, "number of random network shapes");
    gc->add_option("--tolerance", tolerance, "max relative error");
    gc->add_option("--seed", seed, "sweep seed");

    auto* fuzz = app.add_subcommand("fuzz-codec", "round-trip and mutation fuzz of the codec");
    fuzz->add_option("--count", count, "valid messages to round-trip");
    fuzz->add_option("--mutations", mutations, "mutated byte strings to decode");
    fuzz->add_option("--seed", seed, "fuzz seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(config_spec, seed, out_dir, episodes);
        if (eval->parsed()) return cmd_evaluate(config_spec, checkpoint, episodes, seed);
        if (cmp->parsed()) return cmd_compare(config_spec, seeds, out_dir);
        if (replay->parsed()) return cmd_replay(file, csv_out);
        if (gc->parsed()) return cmd_grad_check(shapes, tolerance, seed);
        if (fuzz->parsed()) return cmd_fuzz_codec(count, mutations, seed);
    } catch (const ricbox::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ricbox::numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const ricbox::codec_error& e) {
        std::fprintf(stderr, "codec error: %s\n", e.what());
        return 4;
    } catch (const ricbox::io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

namespace {

IndicationMessage random_indication(Rng& rng) {
    IndicationMessage m;
    m.node_id = static_cast<std::uint16_t>(rng.uniform_int(1000));
    m.timestamp_slot = rng.next_u64() >> 16;
    const std::uint32_t n = 1 + rng.uniform_int(20);
    for (std::uint32_t i = 0; i < n; ++i) {
        KpiRecord r;
        r.kpi_id = static_cast<std::uint16_t>(1 + rng.uniform_int(6));
        r.subject_id = static_cast<std::uint16_t>(rng.uniform_int(64));
        r.value = rng.uniform(-1e6, 1e6);
        m.records.push_back(r);
    }
    return m;
}

ControlMessage random_control(Rng& rng) {
    ControlMessage m;
    m.target_node_id = static_cast<std::uint16_t>(rng.uniform_int(1000));
    m.timestamp_slot = rng.next_u64() >> 16;
    const std::uint32_t n = rng.uniform_int(8);
    for (std::uint32_t i = 0; i < n; ++i)
        m.allocation.push_back({static_cast<std::uint16_t>(rng.uniform_int(16)),
                                static_cast<std::uint16_t>(rng.uniform_int(64)),
                                static_cast<std::uint16_t>(rng.uniform_int(13))});
    return m;
}

int cmd_fuzz_codec(int count, int mutations, std::uint64_t seed) {
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        if (rng.uniform() < 0.5) {
            const IndicationMessage m = random_indication(rng);
            const auto bytes = encode(m);
            const Message back = decode(bytes);
            if (!std::holds_alternative<IndicationMessage>(back) ||
                !(std::get<IndicationMessage>(back) == m)) {
                std::fprintf(stderr, "fuzz-codec: indication round-trip mismatch at %d\n", i);
                return 1;
            }
            if (encode(std::get<IndicationMessage>(back)) != bytes) {
                std::fprintf(stderr, "fuzz-codec: re-encode mismatch at %d\n", i);
                return 1;
            }
        } else {
            const ControlMessage m = random_control(rng);
            const auto bytes = encode(m);
            const Message back = decode(bytes);
            if (!std::holds_alternative<ControlMessage>(back) ||
                !(std::get<ControlMessage>(back) == m)) {
                std::fprintf(stderr, "fuzz-codec: control round-trip mismatch at %d\n", i);
                return 1;
            }
        }
    }
    int rejected = 0;
    for (int i = 0; i < mutations; ++i) {
        std::vector<std::uint8_t> bytes =
            rng.uniform() < 0.5 ? encode(random_indication(rng)) : encode(random_control(rng));
        const std::uint32_t flips = 1 + rng.uniform_int(4);
        for (std::uint32_t f = 0; f < flips; ++f)
            bytes[rng.uniform_int(static_cast<std::uint32_t>(bytes.size()))] ^=
                static_cast<std::uint8_t>(1 + rng.uniform_int(255));
        try {
            (void)decode(bytes); // a still-valid mutation is fine
        } catch (const codec_error&) {
            ++rejected; // structured rejection is the expected outcome
        }
    }
    std::printf("fuzz-codec passed: %d round-trips, %d mutations (%d rejected, rest decoded "
                "as valid messages)\n",
                count, mutations, rejected);
    return 0;
}

} // namespace
