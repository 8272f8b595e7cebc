#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "ricbox/config.hpp"
#include "ricbox/trainer.hpp"

namespace ricbox {

// First episode (1-based count) whose `window`-episode moving-average reward
// reaches the run's final plateau, defined as the last-window average minus
// 10% of its magnitude (the magnitude guard keeps the definition sane for
// negative plateaus). Returns the episode count if never reached.
inline int episodes_to_plateau(const std::vector<double>& rewards, int window = 50) {
    const int n = static_cast<int>(rewards.size());
    if (n == 0) return 0;
    const int w = std::min(window, n);
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + rewards[i];
    const auto window_mean = [&](int last) { // mean of rewards[last-w+1 .. last]
        return (prefix[last + 1] - prefix[last + 1 - w]) / w;
    };
    const double final_avg = window_mean(n - 1);
    const double threshold = final_avg - 0.1 * std::fabs(final_avg);
    for (int e = w - 1; e < n; ++e)
        if (window_mean(e) >= threshold) return e + 1;
    return n;
}

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double stddev_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    const double m = mean_of(xs);
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return std::sqrt(v / static_cast<double>(xs.size()));
}

inline double median_of(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct CompareRow {
    std::string algorithm;
    std::uint64_t seed = 0;
    int episodes_to_90pct_plateau = 0;
    double final_ma50 = 0.0;
    double last100_std = 0.0;
    double early50_mean = 0.0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double median_plateau_a2c = 0.0;
    double median_plateau_ppo = 0.0;
    double median_last100_std_a2c = 0.0;
    double median_last100_std_ppo = 0.0;
    std::string curves_csv;
    std::string report_csv;
    std::string report_txt;
};

inline CompareRow analyze_run(const std::string& algorithm, std::uint64_t seed,
                              const std::vector<double>& rewards) {
    CompareRow row;
    row.algorithm = algorithm;
    row.seed = seed;
    row.episodes_to_90pct_plateau = episodes_to_plateau(rewards);
    const int n = static_cast<int>(rewards.size());
    const int w50 = std::min(50, n);
    const int w100 = std::min(100, n);
    row.final_ma50 =
        mean_of(std::vector<double>(rewards.end() - w50, rewards.end()));
    row.last100_std =
        stddev_of(std::vector<double>(rewards.end() - w100, rewards.end()));
    row.early50_mean =
        mean_of(std::vector<double>(rewards.begin(), rewards.begin() + w50));
    return row;
}

// Trains A2C and PPO on identical seeds (each job fully isolated, jobs run
// in parallel) and writes the joint curves plus the per-run analysis.
inline CompareReport compare_runs(const RunConfig& base, const std::vector<std::uint64_t>& seeds,
                                  const std::string& out_dir,
                                  unsigned max_threads = std::thread::hardware_concurrency()) {
    namespace fs = std::filesystem;
    if (seeds.size() < 3) throw config_error("compare requires at least 3 seeds");
    base.validate();
    fs::create_directories(out_dir);

    struct Job {
        std::string algorithm;
        std::uint64_t seed;
        TrainResult result;
        std::exception_ptr failure;
    };
    std::vector<Job> jobs;
    for (const std::string algo : {"a2c", "ppo"})
        for (std::uint64_t s : seeds) jobs.push_back({algo, s, {}, nullptr});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                RunConfig cfg = base;
                cfg.agent.algorithm = jobs[i].algorithm;
                cfg.io.out_dir = out_dir;
                Trainer trainer(cfg, jobs[i].seed);
                jobs[i].result = trainer.train();
            } catch (...) {
                jobs[i].failure = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(max_threads, jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const Job& job : jobs)
        if (job.failure) std::rethrow_exception(job.failure);

    CompareReport report;
    report.curves_csv = (fs::path(out_dir) / "curves.csv").string();
    std::ofstream curves(report.curves_csv, std::ios::trunc);
    if (!curves) throw io_error("cannot open " + report.curves_csv);
    curves << "algorithm,seed,episode,reward,normalized_reward\n";
    for (const Job& job : jobs) {
        for (std::size_t e = 0; e < job.result.episode_rewards.size(); ++e) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%s,%llu,%zu,%.6f,%.6f",
                          job.algorithm.c_str(),
                          static_cast<unsigned long long>(job.seed), e,
                          job.result.episode_rewards[e],
                          job.result.episode_rewards[e] / base.reward.full_reward);
            curves << buf << '\n';
        }
        report.rows.push_back(analyze_run(job.algorithm, job.seed, job.result.episode_rewards));
    }

    std::vector<double> plat_a2c, plat_ppo, std_a2c, std_ppo;
    for (const CompareRow& r : report.rows) {
        (r.algorithm == "a2c" ? plat_a2c : plat_ppo)
            .push_back(static_cast<double>(r.episodes_to_90pct_plateau));
        (r.algorithm == "a2c" ? std_a2c : std_ppo).push_back(r.last100_std);
    }
    report.median_plateau_a2c = median_of(plat_a2c);
    report.median_plateau_ppo = median_of(plat_ppo);
    report.median_last100_std_a2c = median_of(std_a2c);
    report.median_last100_std_ppo = median_of(std_ppo);

    report.report_csv = (fs::path(out_dir) / "report.csv").string();
    std::ofstream rcsv(report.report_csv, std::ios::trunc);
    rcsv << "algorithm,seed,episodes_to_90pct_plateau,final_ma50,last100_std,early50_mean\n";
    for (const CompareRow& r : report.rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s,%llu,%d,%.6f,%.6f,%.6f", r.algorithm.c_str(),
                      static_cast<unsigned long long>(r.seed), r.episodes_to_90pct_plateau,
                      r.final_ma50, r.last100_std, r.early50_mean);
        rcsv << buf << '\n';
    }

    report.report_txt = (fs::path(out_dir) / "report.txt").string();
    std::ofstream rtxt(report.report_txt, std::ios::trunc);
    rtxt << "A2C vs PPO on " << seeds.size() << " seeds, " << base.schedule.episodes
         << " episodes x " << base.schedule.slots_per_episode << " slots\n"
         << "median episodes to 90% plateau: a2c=" << report.median_plateau_a2c
         << " ppo=" << report.median_plateau_ppo << "\n"
         << "median last-100-episode reward std: a2c=" << report.median_last100_std_a2c
         << " ppo=" << report.median_last100_std_ppo << "\n";
    return report;
}

} // namespace ricbox
