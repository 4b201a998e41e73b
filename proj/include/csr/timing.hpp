#pragma once

#include <stdexcept>

namespace csr {

// Slot and TXOP durations in seconds; payload in bytes.
struct MacTiming {
    double t_empty = 9e-6;
    double t_collision = 137e-6;
    double t_sifs = 16e-6;
    double t_difs = 34e-6;
    double t_mapc = 286e-6;
    double t_back = 100e-6;
    double t_share = 5e-3;   // shared TXOP duration T_s, same for every group
    int payload_bytes = 1500;

    // Time left for the A-MPDU once overheads are charged. The DCF
    // baseline has no coordination phase, hence include_mapc=false there.
    double data_window(bool include_mapc = true) const {
        return t_share - ((include_mapc ? t_mapc : 0.0) + 2.0 * t_sifs +
                          t_back + t_difs + t_empty);
    }

    void validate() const {
        if (t_empty <= 0 || t_collision <= 0 || t_sifs <= 0 || t_difs <= 0 ||
            t_mapc <= 0 || t_back <= 0 || t_share <= 0 || payload_bytes <= 0)
            throw std::invalid_argument("timing: all durations must be > 0");
        if (data_window(true) <= 0)
            throw std::invalid_argument(
                "timing: t_share does not cover overheads (data window <= 0)");
    }
};

struct ContentionParams {
    int cw_min = 15;
    int stages = 6;  // CW_max = (cw_min+1)*2^stages - 1 = 1023
    int k = 1;       // contending APs

    void validate() const {
        if (cw_min < 1) throw std::invalid_argument("contention: cw_min >= 1");
        if (stages < 0) throw std::invalid_argument("contention: stages >= 0");
        if (k < 1) throw std::invalid_argument("contention: k >= 1");
    }
};

} // namespace csr
