#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "csr/analysis.hpp"
#include "csr/deployment.hpp"
#include "csr/simulator.hpp"
#include "csr/timing.hpp"

namespace csr {

struct ModelConfig {
    RadioConfig radio = default_radio_config();
    MacTiming timing;
    ContentionParams contention;
};

// Timing keys are microseconds in the file, seconds in memory.
inline nlohmann::json model_config_to_json(const ModelConfig& c) {
    return {{"radio", radio_to_json(c.radio)},
            {"timing",
             {{"t_empty_us", c.timing.t_empty * 1e6},
              {"t_collision_us", c.timing.t_collision * 1e6},
              {"t_sifs_us", c.timing.t_sifs * 1e6},
              {"t_difs_us", c.timing.t_difs * 1e6},
              {"t_mapc_us", c.timing.t_mapc * 1e6},
              {"t_back_us", c.timing.t_back * 1e6},
              {"t_share_us", c.timing.t_share * 1e6},
              {"payload_bytes", c.timing.payload_bytes}}},
            {"contention",
             {{"cw_min", c.contention.cw_min}, {"stages", c.contention.stages}}}};
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    if (j.contains("radio")) c.radio = radio_from_json(j.at("radio"));
    if (j.contains("timing")) {
        const auto& t = j.at("timing");
        auto us = [&](const char* key, double fallback) {
            return t.contains(key) ? t.at(key).get<double>() * 1e-6 : fallback;
        };
        c.timing.t_empty = us("t_empty_us", c.timing.t_empty);
        c.timing.t_collision = us("t_collision_us", c.timing.t_collision);
        c.timing.t_sifs = us("t_sifs_us", c.timing.t_sifs);
        c.timing.t_difs = us("t_difs_us", c.timing.t_difs);
        c.timing.t_mapc = us("t_mapc_us", c.timing.t_mapc);
        c.timing.t_back = us("t_back_us", c.timing.t_back);
        c.timing.t_share = us("t_share_us", c.timing.t_share);
        c.timing.payload_bytes =
            t.value("payload_bytes", c.timing.payload_bytes);
    }
    if (j.contains("contention")) {
        const auto& p = j.at("contention");
        c.contention.cw_min = p.value("cw_min", c.contention.cw_min);
        c.contention.stages = p.value("stages", c.contention.stages);
    }
    c.timing.validate();
    c.contention.validate();
    return c;
}

inline ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    nlohmann::json j;
    in >> j;
    return model_config_from_json(j);
}

inline void save_model_config(const ModelConfig& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << model_config_to_json(c).dump(2) << '\n';
}

inline nlohmann::json group_set_to_json(const GroupSet& gs) {
    nlohmann::json groups = nlohmann::json::array();
    for (std::size_t i = 0; i < gs.groups.size(); ++i) {
        nlohmann::json members = nlohmann::json::array();
        for (const auto& m : gs.groups[i].members)
            members.push_back({{"ap", m.pair.ap_id},
                               {"sta", m.pair.sta_id},
                               {"sinr_db", m.sinr_db},
                               {"mcs", m.mcs ? nlohmann::json(*m.mcs)
                                             : nlohmann::json(nullptr)},
                               {"n_packets", m.n_packets}});
        groups.push_back({{"members", std::move(members)},
                          {"score", gs.groups[i].score},
                          {"phi", i < gs.phi.size() ? gs.phi[i] : 0.0}});
    }
    return {{"coverage_r", gs.coverage_r}, {"groups", std::move(groups)}};
}

inline nlohmann::json report_to_json(const ThroughputReport& rep) {
    nlohmann::json per_pair = nlohmann::json::array();
    for (const auto& [pid, bps] : rep.per_pair_bps)
        per_pair.push_back({{"ap", pid.ap_id}, {"sta", pid.sta_id},
                            {"throughput_bps", bps}});
    return {{"aggregate_bps", rep.aggregate_bps},
            {"baseline_bps", rep.baseline_bps},
            {"gain", rep.gain},
            {"per_pair", std::move(per_pair)}};
}

inline nlohmann::json sim_result_to_json(const SimResult& res) {
    nlohmann::json per_pair = nlohmann::json::array();
    for (const auto& [pid, bps] : res.per_pair_bps)
        per_pair.push_back({{"ap", pid.ap_id},
                            {"sta", pid.sta_id},
                            {"throughput_bps", bps},
                            {"ci95_bps", res.ci95_bps.at(pid)},
                            {"packets", res.per_pair_packets.at(pid)}});
    return {{"empty_slots", res.empty_slots},
            {"success_slots", res.success_slots},
            {"collision_slots", res.collision_slots},
            {"elapsed_model_time_s", res.elapsed_model_time},
            {"per_pair", std::move(per_pair)}};
}

} // namespace csr
