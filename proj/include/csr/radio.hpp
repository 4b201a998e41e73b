#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "csr/timing.hpp"

namespace csr {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point2D& a, const Point2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

struct McsEntry {
    int index = 0;             // MCS index 0..11
    double min_sinr_db = 0.0;  // minimum SINR to sustain this MCS
    double data_rate_bps = 0.0;
};

struct RadioConfig {
    double carrier_freq_ghz = 6.0;
    double breakpoint_dist_m = 3.0;
    int wall_count = 1;
    double eirp_dbm = 24.0;
    double bandwidth_mhz = 80.0;
    int spatial_streams = 2;
    double noise_floor_dbm = -87.97;   // thermal at 80 MHz + 7 dB NF
    double capture_threshold_db = 15.0;
    std::vector<McsEntry> mcs_table;

    void validate() const {
        if (breakpoint_dist_m <= 0.0)
            throw std::invalid_argument("radio: breakpoint_dist_m must be > 0");
        if (capture_threshold_db < 0.0)
            throw std::invalid_argument("radio: capture_threshold_db must be >= 0");
        if (mcs_table.empty())
            throw std::invalid_argument("radio: mcs_table is empty");
        for (std::size_t i = 0; i < mcs_table.size(); ++i) {
            if (mcs_table[i].data_rate_bps <= 0.0)
                throw std::invalid_argument("radio: mcs data_rate_bps must be > 0");
            if (i > 0 && (mcs_table[i].min_sinr_db <= mcs_table[i - 1].min_sinr_db ||
                          mcs_table[i].data_rate_bps <= mcs_table[i - 1].data_rate_bps))
                throw std::invalid_argument(
                    "radio: mcs_table must be strictly increasing in threshold and rate");
        }
    }
};

// 802.11ax rates for 80 MHz, 2 spatial streams, 0.8 us GI, with
// commonly used minimum-SINR operating points. Overridable via config.
inline std::vector<McsEntry> default_mcs_table() {
    return {
        {0, 2.0, 72.1e6},   {1, 5.0, 144.1e6},  {2, 9.0, 216.2e6},
        {3, 11.0, 288.2e6}, {4, 15.0, 432.4e6}, {5, 18.0, 576.5e6},
        {6, 20.0, 648.5e6}, {7, 25.0, 720.6e6}, {8, 29.0, 864.7e6},
        {9, 31.0, 960.8e6}, {10, 34.0, 1080.9e6}, {11, 37.0, 1201.0e6},
    };
}

inline RadioConfig default_radio_config() {
    RadioConfig cfg;
    cfg.noise_floor_dbm = -174.0 + 10.0 * std::log10(cfg.bandwidth_mhz * 1e6) + 7.0;
    cfg.mcs_table = default_mcs_table();
    return cfg;
}

// TGax enterprise path loss; distances below 1 m are clamped to 1 m.
inline double path_loss_db(double dist_m, const RadioConfig& cfg) {
    const double d = std::max(dist_m, 1.0);
    double pl = 40.05 +
                20.0 * std::log10(std::min(d, cfg.breakpoint_dist_m) *
                                  cfg.carrier_freq_ghz / 2.4) +
                7.0 * cfg.wall_count;
    if (d > cfg.breakpoint_dist_m)
        pl += 35.0 * std::log10(d / cfg.breakpoint_dist_m);
    return pl;
}

inline double rssi_dbm(const Point2D& tx, const Point2D& rx, const RadioConfig& cfg) {
    return cfg.eirp_dbm - path_loss_db(distance(tx, rx), cfg);
}

// SINR at a receiver served from `serving_ap`, with every AP in
// `interferer_aps` transmitting concurrently. Summation in linear scale.
inline double sinr_db(const Point2D& rx, const Point2D& serving_ap,
                      std::span<const Point2D> interferer_aps,
                      const RadioConfig& cfg) {
    const double signal = db_to_linear(rssi_dbm(serving_ap, rx, cfg));
    double denom = db_to_linear(cfg.noise_floor_dbm);
    for (const Point2D& ap : interferer_aps)
        denom += db_to_linear(rssi_dbm(ap, rx, cfg));
    return linear_to_db(signal / denom);
}

// Highest MCS whose threshold is met (<= admits the entry); nullopt when
// even MCS 0 is out of reach.
inline std::optional<int> select_mcs(double sinr, const RadioConfig& cfg) {
    std::optional<int> best;
    for (const McsEntry& e : cfg.mcs_table) {
        if (e.min_sinr_db <= sinr) best = e.index;
        else break;
    }
    return best;
}

inline const McsEntry& mcs_entry(int index, const RadioConfig& cfg) {
    for (const McsEntry& e : cfg.mcs_table)
        if (e.index == index) return e;
    throw std::invalid_argument("radio: unknown MCS index");
}

// A-MPDU size for a shared TXOP of fixed duration: the data window is
// what remains of T_s after the coordination and signaling overheads.
inline std::int64_t ampdu_packets(int mcs, const MacTiming& timing,
                                  const RadioConfig& cfg, bool include_mapc = true) {
    const double t_data = timing.data_window(include_mapc);
    if (t_data <= 0.0)
        throw std::invalid_argument("radio: data window <= 0, check MacTiming");
    const double rate = mcs_entry(mcs, cfg).data_rate_bps;
    return static_cast<std::int64_t>(std::floor(t_data * rate / (8.0 * timing.payload_bytes)));
}

struct LinkBudget {
    double rssi_dbm = 0.0;
    double sinr_db = 0.0;
    std::optional<int> mcs;
    double rate_bps = 0.0;
};

} // namespace csr
