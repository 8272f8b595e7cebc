#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"
#include "ricbox/ran_env.hpp"

namespace ricbox {

struct AgentConfig {
    std::string algorithm = "ppo"; // "a2c" | "ppo"
    double discount = 0.9;
    double actor_lr = 0.005;
    double critic_lr = 0.02;
    int hidden_layers = 2;
    int hidden_width = 64;
    double entropy_coef = 0.01;
    double grad_clip_norm = 5.0;
    double ppo_clip = 0.1;
    int ppo_epochs = 8;
    int ppo_minibatch = 0; // 0 = full batch
    double value_coef = 1.0;
};

struct ScheduleConfig {
    int slots_per_episode = 200;
    int episodes = 300;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

struct IoConfig {
    std::string out_dir = "out";
    int checkpoint_every = 100; // episodes; 0 = final only
    int scene_every = 100;      // slots; 0 = no scene log
    bool spill = true;
    std::string transport = "bus"; // "bus" | "direct"
};

struct DataConfig {
    std::string cqi_thresholds_csv = "data/cqi_thresholds.csv";
    std::string cqi_mcs_csv = "data/cqi_mcs_table.csv";
};

// Radio-link knobs live under `channel.` in the config file; geometry,
// demand and RGB budget under `scenario.`.
struct LinkConfig {
    double tx_power_dbm = 30.0;
    double carrier_freq_ghz = 3.5;
    double bandwidth_mhz = 10.0;
    double path_loss_exponent = 3.0;
    double noise_figure_db = 9.0;
    double shadowing_sigma_db = 0.0;
};

struct GeometryConfig {
    double arena_width_m = 600.0;
    double arena_height_m = 600.0;
    int n_bss = 2;
    int n_ues = 4;
    double demand_mbps = 1.0;
    double ue_speed_m_per_slot = 2.0;
    int rgb_count = 12;
};

struct RunConfig {
    GeometryConfig scenario;
    LinkConfig channel;
    RewardConfig reward;
    AgentConfig agent;
    ScheduleConfig schedule;
    IoConfig io;
    DataConfig data;

    ScenarioConfig make_scenario() const {
        ScenarioConfig s;
        s.arena_width_m = scenario.arena_width_m;
        s.arena_height_m = scenario.arena_height_m;
        s.n_bss = scenario.n_bss;
        s.n_ues = scenario.n_ues;
        s.demand_mbps = scenario.demand_mbps;
        s.ue_speed_m_per_slot = scenario.ue_speed_m_per_slot;
        s.rgb_count = scenario.rgb_count;
        s.tx_power_dbm = channel.tx_power_dbm;
        s.carrier_freq_ghz = channel.carrier_freq_ghz;
        s.bandwidth_mhz = channel.bandwidth_mhz;
        return s;
    }

    ChannelConfig make_channel() const {
        ChannelConfig c;
        c.path_loss_exponent = channel.path_loss_exponent;
        c.noise_figure_db = channel.noise_figure_db;
        c.shadowing_sigma_db = channel.shadowing_sigma_db;
        return c;
    }

    void validate() const;
    std::string canonical() const;
    std::uint64_t hash() const;

    static RunConfig preset(const std::string& name);
};

namespace config_detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, const std::string& where) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw config_error(where + ": not a number: '" + v + "'");
    }
    if (used != v.size()) throw config_error(where + ": not a number: '" + v + "'");
    return d;
}

inline long long parse_int(const std::string& v, const std::string& where) {
    std::size_t used = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw config_error(where + ": not an integer: '" + v + "'");
    }
    if (used != v.size()) throw config_error(where + ": not an integer: '" + v + "'");
    return i;
}

inline bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error(where + ": not a boolean: '" + v + "'");
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string& v,
                                                  const std::string& where) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw config_error(where + ": empty seed entry");
        out.push_back(static_cast<std::uint64_t>(parse_int(item, where)));
    }
    if (out.empty()) throw config_error(where + ": empty seed list");
    return out;
}

inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"scenario.arena_width_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.scenario.arena_width_m = parse_double(v, w); }},
        {"scenario.arena_height_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.scenario.arena_height_m = parse_double(v, w); }},
        {"scenario.n_bss", [](RunConfig& c, const std::string& v, const std::string& w) { c.scenario.n_bss = static_cast<int>(parse_int(v, w)); }},
        {"scenario.n_ues", [](RunConfig& c, const std::string& v, const std::string& w) { c.scenario.n_ues = static_cast<int>(parse_int(v, w)); }},
        {"scenario.demand_mbps", [](RunConfig& c, const std::string& v, const std::string& w) { c.scenario.demand_mbps = parse_double(v, w); }},
        {"scenario.ue_speed_m_per_slot", [](RunConfig& c, const std::string& v, const std::string& w) { c.scenario.ue_speed_m_per_slot = parse_double(v, w); }},
        {"scenario.rgb_count", [](RunConfig& c, const std::string& v, const std::string& w) { c.scenario.rgb_count = static_cast<int>(parse_int(v, w)); }},
        {"channel.tx_power_dbm", [](RunConfig& c, const std::string& v, const std::string& w) { c.channel.tx_power_dbm = parse_double(v, w); }},
        {"channel.carrier_freq_ghz", [](RunConfig& c, const std::string& v, const std::string& w) { c.channel.carrier_freq_ghz = parse_double(v, w); }},
        {"channel.bandwidth_mhz", [](RunConfig& c, const std::string& v, const std::string& w) { c.channel.bandwidth_mhz = parse_double(v, w); }},
        {"channel.path_loss_exponent", [](RunConfig& c, const std::string& v, const std::string& w) { c.channel.path_loss_exponent = parse_double(v, w); }},
        {"channel.noise_figure_db", [](RunConfig& c, const std::string& v, const std::string& w) { c.channel.noise_figure_db = parse_double(v, w); }},
        {"channel.shadowing_sigma_db", [](RunConfig& c, const std::string& v, const std::string& w) { c.channel.shadowing_sigma_db = parse_double(v, w); }},
        {"reward.full_reward", [](RunConfig& c, const std::string& v, const std::string& w) { c.reward.full_reward = parse_double(v, w); }},
        {"reward.failure_penalty", [](RunConfig& c, const std::string& v, const std::string& w) { c.reward.failure_penalty = parse_double(v, w); }},
        {"reward.window_slots", [](RunConfig& c, const std::string& v, const std::string& w) { c.reward.window_slots = static_cast<int>(parse_int(v, w)); }},
        {"agent.algorithm", [](RunConfig& c, const std::string& v, const std::string&) { c.agent.algorithm = v; }},
        {"agent.discount", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.discount = parse_double(v, w); }},
        {"agent.actor_lr", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.actor_lr = parse_double(v, w); }},
        {"agent.critic_lr", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.critic_lr = parse_double(v, w); }},
        {"agent.hidden_layers", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.hidden_layers = static_cast<int>(parse_int(v, w)); }},
        {"agent.hidden_width", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.hidden_width = static_cast<int>(parse_int(v, w)); }},
        {"agent.entropy_coef", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.entropy_coef = parse_double(v, w); }},
        {"agent.grad_clip_norm", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.grad_clip_norm = parse_double(v, w); }},
        {"agent.ppo_clip", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.ppo_clip = parse_double(v, w); }},
        {"agent.ppo_epochs", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.ppo_epochs = static_cast<int>(parse_int(v, w)); }},
        {"agent.ppo_minibatch", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.ppo_minibatch = static_cast<int>(parse_int(v, w)); }},
        {"agent.value_coef", [](RunConfig& c, const std::string& v, const std::string& w) { c.agent.value_coef = parse_double(v, w); }},
        {"schedule.slots_per_episode", [](RunConfig& c, const std::string& v, const std::string& w) { c.schedule.slots_per_episode = static_cast<int>(parse_int(v, w)); }},
        {"schedule.episodes", [](RunConfig& c, const std::string& v, const std::string& w) { c.schedule.episodes = static_cast<int>(parse_int(v, w)); }},
        {"schedule.seeds", [](RunConfig& c, const std::string& v, const std::string& w) { c.schedule.seeds = parse_seed_list(v, w); }},
        {"io.out_dir", [](RunConfig& c, const std::string& v, const std::string&) { c.io.out_dir = v; }},
        {"io.checkpoint_every", [](RunConfig& c, const std::string& v, const std::string& w) { c.io.checkpoint_every = static_cast<int>(parse_int(v, w)); }},
        {"io.scene_every", [](RunConfig& c, const std::string& v, const std::string& w) { c.io.scene_every = static_cast<int>(parse_int(v, w)); }},
        {"io.spill", [](RunConfig& c, const std::string& v, const std::string& w) { c.io.spill = parse_bool(v, w); }},
        {"io.transport", [](RunConfig& c, const std::string& v, const std::string&) { c.io.transport = v; }},
        {"data.cqi_thresholds_csv", [](RunConfig& c, const std::string& v, const std::string&) { c.data.cqi_thresholds_csv = v; }},
        {"data.cqi_mcs_csv", [](RunConfig& c, const std::string& v, const std::string&) { c.data.cqi_mcs_csv = v; }},
    };
    return table;
}

} // namespace config_detail

inline void RunConfig::validate() const {
    if (scenario.arena_width_m <= 0.0)
        throw config_error("scenario.arena_width_m must be positive");
    if (scenario.arena_height_m <= 0.0)
        throw config_error("scenario.arena_height_m must be positive");
    if (scenario.n_bss <= 0) throw config_error("scenario.n_bss must be positive");
    if (scenario.n_ues <= 0) throw config_error("scenario.n_ues must be positive");
    if (scenario.demand_mbps <= 0.0)
        throw config_error("scenario.demand_mbps must be positive");
    if (scenario.ue_speed_m_per_slot < 0.0)
        throw config_error("scenario.ue_speed_m_per_slot must be non-negative");
    if (scenario.rgb_count <= 0) throw config_error("scenario.rgb_count must be positive");
    if (channel.tx_power_dbm <= 0.0)
        throw config_error("channel.tx_power_dbm must be positive");
    if (channel.carrier_freq_ghz <= 0.0)
        throw config_error("channel.carrier_freq_ghz must be positive");
    if (channel.bandwidth_mhz <= 0.0)
        throw config_error("channel.bandwidth_mhz must be positive");
    if (channel.path_loss_exponent <= 0.0)
        throw config_error("channel.path_loss_exponent must be positive");
    if (channel.shadowing_sigma_db < 0.0)
        throw config_error("channel.shadowing_sigma_db must be non-negative");
    if (reward.full_reward <= 0.0) throw config_error("reward.full_reward must be positive");
    if (reward.failure_penalty > 0.0)
        throw config_error("reward.failure_penalty must be non-positive");
    if (reward.window_slots <= 0) throw config_error("reward.window_slots must be positive");
    if (agent.algorithm != "a2c" && agent.algorithm != "ppo")
        throw config_error("agent.algorithm must be 'a2c' or 'ppo'");
    if (!(agent.discount > 0.0) || agent.discount > 1.0)
        throw config_error("agent.discount must be in (0, 1]");
    if (agent.actor_lr <= 0.0) throw config_error("agent.actor_lr must be positive");
    if (agent.critic_lr <= 0.0) throw config_error("agent.critic_lr must be positive");
    if (agent.hidden_layers < 0) throw config_error("agent.hidden_layers must be >= 0");
    if (agent.hidden_width <= 0) throw config_error("agent.hidden_width must be positive");
    if (agent.entropy_coef < 0.0) throw config_error("agent.entropy_coef must be >= 0");
    if (agent.grad_clip_norm < 0.0) throw config_error("agent.grad_clip_norm must be >= 0");
    if (!(agent.ppo_clip > 0.0) || agent.ppo_clip >= 1.0)
        throw config_error("agent.ppo_clip must be in (0, 1)");
    if (agent.ppo_epochs < 1) throw config_error("agent.ppo_epochs must be >= 1");
    if (agent.ppo_minibatch < 0) throw config_error("agent.ppo_minibatch must be >= 0");
    if (agent.value_coef <= 0.0) throw config_error("agent.value_coef must be positive");
    if (schedule.slots_per_episode <= 0)
        throw config_error("schedule.slots_per_episode must be positive");
    if (schedule.episodes <= 0) throw config_error("schedule.episodes must be positive");
    if (schedule.seeds.empty()) throw config_error("schedule.seeds must not be empty");
    if (io.checkpoint_every < 0) throw config_error("io.checkpoint_every must be >= 0");
    if (io.scene_every < 0) throw config_error("io.scene_every must be >= 0");
    if (io.transport != "bus" && io.transport != "direct")
        throw config_error("io.transport must be 'bus' or 'direct'");
    if (io.out_dir.empty()) throw config_error("io.out_dir must not be empty");
    if (data.cqi_thresholds_csv.empty())
        throw config_error("data.cqi_thresholds_csv must not be empty");
    if (data.cqi_mcs_csv.empty()) throw config_error("data.cqi_mcs_csv must not be empty");
}

// Sorted key=value lines; the identity that the manifest hash is taken over.
inline std::string RunConfig::canonical() const {
    using config_detail::fmt_double;
    std::map<std::string, std::string> kv;
    kv["scenario.arena_width_m"] = fmt_double(scenario.arena_width_m);
    kv["scenario.arena_height_m"] = fmt_double(scenario.arena_height_m);
    kv["scenario.n_bss"] = std::to_string(scenario.n_bss);
    kv["scenario.n_ues"] = std::to_string(scenario.n_ues);
    kv["scenario.demand_mbps"] = fmt_double(scenario.demand_mbps);
    kv["scenario.ue_speed_m_per_slot"] = fmt_double(scenario.ue_speed_m_per_slot);
    kv["scenario.rgb_count"] = std::to_string(scenario.rgb_count);
    kv["channel.tx_power_dbm"] = fmt_double(channel.tx_power_dbm);
    kv["channel.carrier_freq_ghz"] = fmt_double(channel.carrier_freq_ghz);
    kv["channel.bandwidth_mhz"] = fmt_double(channel.bandwidth_mhz);
    kv["channel.path_loss_exponent"] = fmt_double(channel.path_loss_exponent);
    kv["channel.noise_figure_db"] = fmt_double(channel.noise_figure_db);
    kv["channel.shadowing_sigma_db"] = fmt_double(channel.shadowing_sigma_db);
    kv["reward.full_reward"] = fmt_double(reward.full_reward);
    kv["reward.failure_penalty"] = fmt_double(reward.failure_penalty);
    kv["reward.window_slots"] = std::to_string(reward.window_slots);
    kv["agent.algorithm"] = agent.algorithm;
    kv["agent.discount"] = fmt_double(agent.discount);
    kv["agent.actor_lr"] = fmt_double(agent.actor_lr);
    kv["agent.critic_lr"] = fmt_double(agent.critic_lr);
    kv["agent.hidden_layers"] = std::to_string(agent.hidden_layers);
    kv["agent.hidden_width"] = std::to_string(agent.hidden_width);
    kv["agent.entropy_coef"] = fmt_double(agent.entropy_coef);
    kv["agent.grad_clip_norm"] = fmt_double(agent.grad_clip_norm);
    kv["agent.ppo_clip"] = fmt_double(agent.ppo_clip);
    kv["agent.ppo_epochs"] = std::to_string(agent.ppo_epochs);
    kv["agent.ppo_minibatch"] = std::to_string(agent.ppo_minibatch);
    kv["agent.value_coef"] = fmt_double(agent.value_coef);
    kv["schedule.slots_per_episode"] = std::to_string(schedule.slots_per_episode);
    kv["schedule.episodes"] = std::to_string(schedule.episodes);
    std::string seeds;
    for (std::size_t i = 0; i < schedule.seeds.size(); ++i)
        seeds += (i ? "," : "") + std::to_string(schedule.seeds[i]);
    kv["schedule.seeds"] = seeds;
    kv["io.out_dir"] = io.out_dir;
    kv["io.checkpoint_every"] = std::to_string(io.checkpoint_every);
    kv["io.scene_every"] = std::to_string(io.scene_every);
    kv["io.spill"] = io.spill ? "true" : "false";
    kv["io.transport"] = io.transport;
    kv["data.cqi_thresholds_csv"] = data.cqi_thresholds_csv;
    kv["data.cqi_mcs_csv"] = data.cqi_mcs_csv;

    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

inline std::uint64_t RunConfig::hash() const {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline RunConfig RunConfig::preset(const std::string& name) {
    RunConfig c; // defaults are the desk preset
    if (name == "desk") return c;
    if (name == "paper") {
        c.scenario.arena_width_m = 1500.0;
        c.scenario.arena_height_m = 1500.0;
        c.scenario.n_bss = 5;
        c.scenario.n_ues = 10;
        c.agent.algorithm = "a2c";
        c.agent.actor_lr = 0.01;
        c.agent.critic_lr = 0.04;
        c.agent.hidden_layers = 4;
        c.agent.hidden_width = 384;
        c.agent.ppo_clip = 0.2;
        c.agent.ppo_epochs = 4;
        c.agent.ppo_minibatch = 256;
        c.schedule.slots_per_episode = 1000;
        c.schedule.episodes = 600;
        c.schedule.seeds = {1, 2, 3};
        return c;
    }
    throw config_error("unknown preset '" + name + "' (expected 'desk' or 'paper')");
}

// `key = value` lines, full-line comments with '#', unknown keys rejected.
inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = config_detail::trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::string where = path + ":" + std::to_string(line_no);
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error(where + ": expected 'key = value'");
        const std::string key = config_detail::trim(stripped.substr(0, eq));
        const std::string value = config_detail::trim(stripped.substr(eq + 1));
        const auto& table = config_detail::setters();
        auto it = table.find(key);
        if (it == table.end())
            throw config_error(where + ": unknown key '" + key + "'");
        it->second(cfg, value, where + " (" + key + ")");
    }
    cfg.validate();
    return cfg;
}

} // namespace ricbox
