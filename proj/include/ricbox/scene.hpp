#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ricbox/errors.hpp"

namespace ricbox {

// One rendered timeslot, serializable as a single log line.
// Line schema (ordered JSON object):
//   {"episode": E, "slot": S,
//    "bss":   [[id, x_m, y_m, range_m], ...],
//    "ues":   [[id, x_m, y_m, rate_bucket], ...],
//    "edges": [[ue_id, bs_id], ...]}
// rate_bucket: 0 = no service, 1 = below half demand, 2 = below demand,
// 3 = demand met.
struct SceneBs {
    int id = 0;
    double x_m = 0.0, y_m = 0.0;
    double range_m = 0.0;
    bool operator==(const SceneBs&) const = default;
};

struct SceneUe {
    int id = 0;
    double x_m = 0.0, y_m = 0.0;
    int rate_bucket = 0;
    bool operator==(const SceneUe&) const = default;
};

struct SceneEdge {
    int ue_id = 0;
    int bs_id = 0;
    bool operator==(const SceneEdge&) const = default;
};

struct SceneDescription {
    long long episode = 0;
    long long slot = 0;
    std::vector<SceneBs> bss;
    std::vector<SceneUe> ues;
    std::vector<SceneEdge> edges;
    bool operator==(const SceneDescription&) const = default;
};

inline int rate_bucket(double rate_mbps, double demand_mbps) {
    if (rate_mbps <= 0.0) return 0;
    if (rate_mbps >= demand_mbps - 1e-12) return 3;
    if (rate_mbps < 0.5 * demand_mbps) return 1;
    return 2;
}

inline std::string scene_to_line(const SceneDescription& s) {
    nlohmann::ordered_json j;
    j["episode"] = s.episode;
    j["slot"] = s.slot;
    auto& bss = j["bss"] = nlohmann::ordered_json::array();
    for (const auto& b : s.bss) bss.push_back({b.id, b.x_m, b.y_m, b.range_m});
    auto& ues = j["ues"] = nlohmann::ordered_json::array();
    for (const auto& u : s.ues) ues.push_back({u.id, u.x_m, u.y_m, u.rate_bucket});
    auto& edges = j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : s.edges) edges.push_back({e.ue_id, e.bs_id});
    return j.dump();
}

inline SceneDescription scene_from_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error(std::string("scene line parse error: ") + e.what());
    }
    SceneDescription s;
    s.episode = j.at("episode").get<long long>();
    s.slot = j.at("slot").get<long long>();
    for (const auto& b : j.at("bss"))
        s.bss.push_back({b.at(0).get<int>(), b.at(1).get<double>(), b.at(2).get<double>(),
                         b.at(3).get<double>()});
    for (const auto& u : j.at("ues"))
        s.ues.push_back({u.at(0).get<int>(), u.at(1).get<double>(), u.at(2).get<double>(),
                         u.at(3).get<int>()});
    for (const auto& e : j.at("edges"))
        s.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return s;
}

// Newline-delimited scene records, one per rendered slot.
class SceneLog {
public:
    explicit SceneLog(const std::string& path) : path_(path), out_(path, std::ios::trunc) {
        if (!out_) throw io_error("cannot open scene log: " + path);
    }

    void append(const SceneDescription& s) {
        out_ << scene_to_line(s) << '\n';
        out_.flush();
    }

    const std::string& path() const { return path_; }

    static std::vector<SceneDescription> read_all(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open scene log: " + path);
        std::vector<SceneDescription> scenes;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            scenes.push_back(scene_from_line(line));
        }
        return scenes;
    }

private:
    std::string path_;
    std::ofstream out_;
};

} // namespace ricbox
