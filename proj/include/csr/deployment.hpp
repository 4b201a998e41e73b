#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "csr/radio.hpp"
#include "csr/rng.hpp"

namespace csr {

struct AccessPoint {
    int id = 0;
    Point2D pos;
};

struct Station {
    int id = 0;
    Point2D pos;
    int ap_id = 0;  // owner AP
};

// One downlink AP-STA flow. STA ids are globally unique, so sta_id alone
// identifies the pair; ap_id is kept for convenience.
struct PairId {
    int ap_id = 0;
    int sta_id = 0;
    friend auto operator<=>(const PairId&, const PairId&) = default;
};

struct Deployment {
    std::vector<AccessPoint> aps;
    std::vector<Station> stas;
    RadioConfig radio;
    std::uint64_t seed = 0;

    const AccessPoint& ap(int id) const {
        for (const auto& a : aps)
            if (a.id == id) return a;
        throw std::invalid_argument("deployment: unknown AP id " + std::to_string(id));
    }

    const Station& sta(int id) const {
        for (const auto& s : stas)
            if (s.id == id) return s;
        throw std::invalid_argument("deployment: unknown STA id " + std::to_string(id));
    }

    std::vector<PairId> pairs() const {
        std::vector<PairId> out;
        out.reserve(stas.size());
        for (const auto& s : stas) out.push_back({s.ap_id, s.id});
        return out;
    }

    // STAs associated to each AP, by AP id
    std::map<int, int> sta_counts() const {
        std::map<int, int> counts;
        for (const auto& a : aps) counts[a.id] = 0;
        for (const auto& s : stas) ++counts.at(s.ap_id);
        return counts;
    }

    void validate() const {
        std::map<int, int> seen_ap, seen_sta;
        for (const auto& a : aps)
            if (++seen_ap[a.id] > 1)
                throw std::invalid_argument("deployment: duplicate AP id " +
                                            std::to_string(a.id));
        for (const auto& s : stas) {
            if (++seen_sta[s.id] > 1)
                throw std::invalid_argument("deployment: duplicate STA id " +
                                            std::to_string(s.id));
            if (!seen_ap.count(s.ap_id))
                throw std::invalid_argument("deployment: STA " + std::to_string(s.id) +
                                            " references missing AP " +
                                            std::to_string(s.ap_id));
        }
        radio.validate();
    }
};

// K=4 square layout: APs on the corners of a square of side d_ap_ap (the
// minimum pairwise separation), each STA on a uniform annulus
// [d_sta_min, d_sta_max] around its AP. Deterministic for a fixed seed.
inline Deployment generate_deployment(std::uint64_t seed, int k_aps, int stas_per_ap,
                                      double d_ap_ap, double d_sta_min,
                                      double d_sta_max, RadioConfig radio) {
    if (k_aps != 4)
        throw std::invalid_argument(
            "deployment: only k_aps=4 (square corners) is generated; other "
            "layouts must be written as scenario files");
    if (stas_per_ap < 1)
        throw std::invalid_argument("deployment: stas_per_ap must be >= 1");
    if (!(0.0 < d_sta_min && d_sta_min <= d_sta_max))
        throw std::invalid_argument("deployment: need 0 < d_sta_min <= d_sta_max");
    if (d_ap_ap <= 0.0)
        throw std::invalid_argument("deployment: d_ap_ap must be > 0");

    Deployment dep;
    dep.radio = std::move(radio);
    dep.seed = seed;
    dep.aps = {{1, {0.0, 0.0}},
               {2, {d_ap_ap, 0.0}},
               {3, {0.0, d_ap_ap}},
               {4, {d_ap_ap, d_ap_ap}}};

    Rng rng(seed);
    int sta_id = 1;
    for (const auto& ap : dep.aps) {
        for (int i = 0; i < stas_per_ap; ++i, ++sta_id) {
            const double r = rng.uniform(d_sta_min, d_sta_max);
            const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
            dep.stas.push_back({sta_id,
                                {ap.pos.x + r * std::cos(theta),
                                 ap.pos.y + r * std::sin(theta)},
                                ap.id});
        }
    }
    dep.validate();
    return dep;
}

// ---- scenario file (JSON, human-editable) ----

inline nlohmann::json radio_to_json(const RadioConfig& r) {
    nlohmann::json mcs = nlohmann::json::array();
    for (const auto& e : r.mcs_table)
        mcs.push_back({{"index", e.index},
                       {"min_sinr_db", e.min_sinr_db},
                       {"data_rate_bps", e.data_rate_bps}});
    return {{"carrier_freq_ghz", r.carrier_freq_ghz},
            {"breakpoint_dist_m", r.breakpoint_dist_m},
            {"wall_count", r.wall_count},
            {"eirp_dbm", r.eirp_dbm},
            {"bandwidth_mhz", r.bandwidth_mhz},
            {"spatial_streams", r.spatial_streams},
            {"noise_floor_dbm", r.noise_floor_dbm},
            {"capture_threshold_db", r.capture_threshold_db},
            {"mcs_table", std::move(mcs)}};
}

inline RadioConfig radio_from_json(const nlohmann::json& j) {
    RadioConfig r = default_radio_config();
    j.at("carrier_freq_ghz").get_to(r.carrier_freq_ghz);
    j.at("breakpoint_dist_m").get_to(r.breakpoint_dist_m);
    j.at("wall_count").get_to(r.wall_count);
    j.at("eirp_dbm").get_to(r.eirp_dbm);
    j.at("bandwidth_mhz").get_to(r.bandwidth_mhz);
    j.at("spatial_streams").get_to(r.spatial_streams);
    j.at("noise_floor_dbm").get_to(r.noise_floor_dbm);
    j.at("capture_threshold_db").get_to(r.capture_threshold_db);
    r.mcs_table.clear();
    for (const auto& e : j.at("mcs_table"))
        r.mcs_table.push_back({e.at("index").get<int>(),
                               e.at("min_sinr_db").get<double>(),
                               e.at("data_rate_bps").get<double>()});
    r.validate();
    return r;
}

inline nlohmann::json deployment_to_json(const Deployment& d) {
    nlohmann::json aps = nlohmann::json::array();
    for (const auto& a : d.aps)
        aps.push_back({{"id", a.id}, {"x", a.pos.x}, {"y", a.pos.y}});
    nlohmann::json stas = nlohmann::json::array();
    for (const auto& s : d.stas)
        stas.push_back({{"id", s.id}, {"x", s.pos.x}, {"y", s.pos.y}, {"ap", s.ap_id}});
    return {{"seed", d.seed},
            {"radio", radio_to_json(d.radio)},
            {"aps", std::move(aps)},
            {"stas", std::move(stas)}};
}

inline Deployment deployment_from_json(const nlohmann::json& j) {
    Deployment d;
    d.seed = j.value("seed", std::uint64_t{0});
    d.radio = radio_from_json(j.at("radio"));
    for (const auto& a : j.at("aps"))
        d.aps.push_back({a.at("id").get<int>(),
                         {a.at("x").get<double>(), a.at("y").get<double>()}});
    for (const auto& s : j.at("stas")) {
        if (!s.contains("ap"))
            throw std::invalid_argument("deployment: STA " +
                                        s.at("id").dump() + " has no owner AP");
        d.stas.push_back({s.at("id").get<int>(),
                          {s.at("x").get<double>(), s.at("y").get<double>()},
                          s.at("ap").get<int>()});
    }
    d.validate();
    return d;
}

inline void save_deployment(const Deployment& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("deployment: cannot write " + path);
    out << deployment_to_json(d).dump(2) << '\n';
}

inline Deployment load_deployment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("deployment: cannot read " + path);
    nlohmann::json j;
    in >> j;
    return deployment_from_json(j);
}

inline bool operator==(const Point2D& a, const Point2D& b) {
    return a.x == b.x && a.y == b.y;
}
inline bool operator==(const AccessPoint& a, const AccessPoint& b) {
    return a.id == b.id && a.pos == b.pos;
}
inline bool operator==(const Station& a, const Station& b) {
    return a.id == b.id && a.pos == b.pos && a.ap_id == b.ap_id;
}

} // namespace csr
