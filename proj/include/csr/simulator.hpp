#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "csr/analysis.hpp"
#include "csr/deployment.hpp"
#include "csr/groups.hpp"
#include "csr/rng.hpp"
#include "csr/timing.hpp"

namespace csr {

struct SimConfig {
    std::uint64_t horizon_slots = 1'000'000;
    std::uint64_t warmup_slots = 10'000;
    std::uint64_t seed = 1;
    ContentionParams params;
    MacTiming timing;

    void validate() const {
        if (horizon_slots <= warmup_slots)
            throw std::invalid_argument("sim: horizon must exceed warmup");
        params.validate();
        timing.validate();
    }
};

struct SimResult {
    std::map<PairId, std::int64_t> per_pair_packets;
    std::uint64_t empty_slots = 0;
    std::uint64_t success_slots = 0;
    std::uint64_t collision_slots = 0;
    double elapsed_model_time = 0.0;  // seconds, after warmup
    std::map<PairId, double> per_pair_bps;
    std::map<PairId, double> ci95_bps;  // zero for a single run
    // instrumentation for validation
    std::vector<std::uint64_t> group_fires;      // per selected group
    std::uint64_t attempts = 0;                  // tx attempts, all APs
    std::uint64_t collided_attempts = 0;
    int n_aps = 0;

    std::uint64_t total_slots() const {
        return empty_slots + success_slots + collision_slots;
    }
};

struct EmpiricalStats {
    double tau_hat = 0.0;
    double p_hat = 0.0;
    double p_empty_hat = 0.0;
    double p_success_hat = 0.0;
    double p_collision_hat = 0.0;
};

// Slot-level CSMA/CA with BEB and leader-triggered group TXOPs.
//
// Slot rules: every AP whose counter is zero at the slot boundary
// transmits. A lone winner picks one of its STAs uniformly and fires the
// selected group containing that pair; every member pair is credited its
// A-MPDU in that same slot. Two or more zeros collide; each collider
// doubles its window (capped at stage m) and redraws. Each slot, busy or
// empty, counts as one countdown step for the APs that did not transmit
// (NAV covers the busy remainder). Deterministic given the seed.
inline SimResult run_simulation(const Deployment& dep, const GroupSet& gs,
                                const SimConfig& cfg) {
    cfg.validate();
    const int k = static_cast<int>(dep.aps.size());
    if (cfg.params.k != k)
        throw std::invalid_argument("sim: params.k must match the deployment AP count");

    // pair -> (owning AP slot, unique selected group); R=1 coverage required
    std::map<PairId, std::size_t> group_of_pair;
    for (std::size_t i = 0; i < gs.groups.size(); ++i)
        for (const auto& m : gs.groups[i].members)
            if (!group_of_pair.emplace(m.pair, i).second)
                throw std::invalid_argument("sim: group set is not R=1 (pair repeated)");
    std::vector<std::vector<PairId>> pairs_of_ap(k);
    for (const auto& s : dep.stas) {
        const PairId pid{s.ap_id, s.id};
        if (!group_of_pair.count(pid))
            throw std::invalid_argument("sim: group set does not cover all pairs");
        for (int a = 0; a < k; ++a)
            if (dep.aps[a].id == s.ap_id) pairs_of_ap[a].push_back(pid);
    }

    Rng rng(cfg.seed);
    const int cw_min = cfg.params.cw_min;
    const int m_stages = cfg.params.stages;
    auto draw = [&](int stage) {
        const std::uint64_t cw = ((static_cast<std::uint64_t>(cw_min) + 1) << stage) - 1;
        return rng.below(cw + 1);  // uniform {0..CW_s}
    };

    std::vector<std::uint64_t> backoff(k);
    std::vector<int> stage(k, 0);
    for (int a = 0; a < k; ++a) backoff[a] = draw(0);

    SimResult res;
    res.n_aps = k;
    res.group_fires.assign(gs.groups.size(), 0);
    for (const auto& [pid, gi] : group_of_pair) res.per_pair_packets[pid] = 0;

    std::vector<int> zeros;
    zeros.reserve(k);
    for (std::uint64_t slot = 0; slot < cfg.horizon_slots; ++slot) {
        const bool counted = slot >= cfg.warmup_slots;
        zeros.clear();
        for (int a = 0; a < k; ++a)
            if (backoff[a] == 0) zeros.push_back(a);

        if (zeros.empty()) {
            if (counted) {
                ++res.empty_slots;
                res.elapsed_model_time += cfg.timing.t_empty;
            }
        } else if (zeros.size() == 1) {
            const int winner = zeros.front();
            const auto& own = pairs_of_ap[winner];
            const PairId target = own[rng.below(own.size())];
            const std::size_t gi = group_of_pair.at(target);
            if (counted) {
                ++res.success_slots;
                ++res.attempts;
                ++res.group_fires[gi];
                res.elapsed_model_time += cfg.timing.t_share;
                for (const auto& m : gs.groups[gi].members)
                    res.per_pair_packets[m.pair] += m.n_packets;
            }
            stage[winner] = 0;
            backoff[winner] = draw(0) + 1;  // decremented below like everyone else
        } else {
            if (counted) {
                ++res.collision_slots;
                res.attempts += zeros.size();
                res.collided_attempts += zeros.size();
                res.elapsed_model_time += cfg.timing.t_collision;
            }
            for (int a : zeros) {
                stage[a] = std::min(stage[a] + 1, m_stages);
                backoff[a] = draw(stage[a]) + 1;
            }
        }
        for (int a = 0; a < k; ++a)
            if (backoff[a] > 0) --backoff[a];
    }

    const double payload_bits = 8.0 * cfg.timing.payload_bytes;
    for (const auto& [pid, pkts] : res.per_pair_packets)
        res.per_pair_bps[pid] =
            static_cast<double>(pkts) * payload_bits / res.elapsed_model_time;
    for (const auto& [pid, pkts] : res.per_pair_packets) res.ci95_bps[pid] = 0.0;
    return res;
}

inline EmpiricalStats empirical_stats(const SimResult& res) {
    EmpiricalStats e;
    const double slots = static_cast<double>(res.total_slots());
    e.tau_hat = static_cast<double>(res.attempts) / (res.n_aps * slots);
    e.p_hat = res.attempts == 0
                  ? 0.0
                  : static_cast<double>(res.collided_attempts) / res.attempts;
    e.p_empty_hat = res.empty_slots / slots;
    e.p_success_hat = res.success_slots / slots;
    e.p_collision_hat = res.collision_slots / slots;
    return e;
}

// Independent replications; replicate i runs with derive_seed(seed, i).
// Means are per-pair across replications, CI95 is the normal
// approximation on the replicate means.
inline SimResult replicate(const Deployment& dep, const GroupSet& gs,
                           const SimConfig& cfg, int n_reps) {
    if (n_reps < 1) throw std::invalid_argument("sim: n_reps must be >= 1");
    if (n_reps == 1) return run_simulation(dep, gs, cfg);

    std::vector<SimResult> reps;
    reps.reserve(n_reps);
    for (int i = 0; i < n_reps; ++i) {
        SimConfig c = cfg;
        c.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        reps.push_back(run_simulation(dep, gs, c));
    }

    SimResult agg = reps.front();
    for (std::size_t i = 1; i < reps.size(); ++i) {
        const SimResult& r = reps[i];
        for (const auto& [pid, pkts] : r.per_pair_packets)
            agg.per_pair_packets[pid] += pkts;
        agg.empty_slots += r.empty_slots;
        agg.success_slots += r.success_slots;
        agg.collision_slots += r.collision_slots;
        agg.elapsed_model_time += r.elapsed_model_time;
        agg.attempts += r.attempts;
        agg.collided_attempts += r.collided_attempts;
        for (std::size_t g = 0; g < agg.group_fires.size(); ++g)
            agg.group_fires[g] += r.group_fires[g];
    }

    for (auto& [pid, bps] : agg.per_pair_bps) {
        double mean = 0.0;
        for (const auto& r : reps) mean += r.per_pair_bps.at(pid);
        mean /= n_reps;
        double var = 0.0;
        for (const auto& r : reps) {
            const double d = r.per_pair_bps.at(pid) - mean;
            var += d * d;
        }
        var /= (n_reps - 1);
        bps = mean;
        agg.ci95_bps[pid] = 1.96 * std::sqrt(var / n_reps);
    }
    return agg;
}

} // namespace csr
