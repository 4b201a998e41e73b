#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "csr/deployment.hpp"
#include "csr/groups.hpp"
#include "csr/timing.hpp"

namespace csr {

struct FixedPoint {
    double tau = 0.0;
    double p = 0.0;
    double expected_backoff = 0.0;  // E[B] in slots
    double residual = 0.0;          // |tau - 1/(E[B](p)+1)| at return
};

struct SlotStats {
    double p_empty = 0.0;
    double p_success = 0.0;
    double p_collision = 0.0;
    double expected_slot = 0.0;  // E[T], seconds
};

struct ThroughputReport {
    double aggregate_bps = 0.0;
    std::map<PairId, double> per_pair_bps;
    double baseline_bps = 0.0;
    double gain = 0.0;  // aggregate/baseline - 1
};

// E[B] under BEB with infinite retransmissions; the p=1/2 singularity is
// removable with limit ((cw_min+1)/2) * (2+m)/2 - 1/2.
inline double expected_backoff(double p, const ContentionParams& params) {
    const double w = params.cw_min + 1.0;
    const double m = params.stages;
    if (std::abs(1.0 - 2.0 * p) < 1e-9)
        return w / 2.0 * (2.0 + m) / 2.0 - 0.5;
    return w / 2.0 * ((1.0 - p - p * std::pow(2.0 * p, m)) / (1.0 - 2.0 * p)) - 0.5;
}

namespace detail {

inline double tau_of_p(double p, const ContentionParams& params) {
    return 1.0 / (expected_backoff(p, params) + 1.0);
}

inline double p_of_tau(double tau, const ContentionParams& params) {
    return 1.0 - std::pow(1.0 - tau, params.k - 1);
}

// residual of the scalar equation in tau
inline double fp_residual(double tau, const ContentionParams& params) {
    return tau - tau_of_p(p_of_tau(tau, params), params);
}

} // namespace detail

// Damped Picard iteration on tau with a bisection fallback; the residual
// is monotone enough on (0,1) that bisection always lands on the root.
inline FixedPoint solve_fixed_point(const ContentionParams& params,
                                    double tol = 1e-12, int max_iter = 10000,
                                    double tau0 = 0.1) {
    params.validate();
    if (tol <= 0.0) throw std::invalid_argument("analysis: tol must be > 0");

    const double damping = 0.5;
    double tau = tau0;
    for (int it = 0; it < max_iter / 2; ++it) {
        const double next = detail::tau_of_p(detail::p_of_tau(tau, params), params);
        if (std::abs(next - tau) < tol) {
            tau = next;
            break;
        }
        tau = (1.0 - damping) * tau + damping * next;
    }

    if (std::abs(detail::fp_residual(tau, params)) >= tol) {
        double lo = 1e-15, hi = 1.0 - 1e-15;
        double flo = detail::fp_residual(lo, params);
        for (int it = 0; it < max_iter; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = detail::fp_residual(mid, params);
            if ((flo <= 0.0) == (fmid <= 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
            if (hi - lo < tol) break;
        }
        tau = 0.5 * (lo + hi);
    }

    FixedPoint fp;
    fp.tau = tau;
    fp.p = detail::p_of_tau(tau, params);
    fp.expected_backoff = expected_backoff(fp.p, params);
    fp.residual = std::abs(detail::fp_residual(tau, params));
    if (fp.residual >= std::max(tol, 1e-9))
        throw std::runtime_error("analysis: fixed point did not converge, residual " +
                                 std::to_string(fp.residual));
    return fp;
}

inline SlotStats slot_stats(const FixedPoint& fp, const ContentionParams& params,
                            const MacTiming& timing, const GroupSet& gs) {
    SlotStats s;
    const double k = params.k;
    s.p_empty = std::pow(1.0 - fp.tau, k);
    s.p_success = k * fp.tau * std::pow(1.0 - fp.tau, k - 1.0);
    s.p_collision = 1.0 - s.p_empty - s.p_success;

    double phi_sum = 0.0;
    for (double phi : gs.phi) phi_sum += phi;
    // T_s,i is the same fixed share for every group
    s.expected_slot = s.p_empty * timing.t_empty +
                      s.p_success * phi_sum * timing.t_share +
                      s.p_collision * timing.t_collision;
    return s;
}

inline double aggregate_throughput(const FixedPoint&, const SlotStats& slots,
                                   const GroupSet& gs, const MacTiming& timing) {
    const double payload_bits = 8.0 * timing.payload_bytes;
    double weighted_packets = 0.0;
    for (std::size_t i = 0; i < gs.groups.size(); ++i) {
        double n_sum = 0.0;
        for (const auto& m : gs.groups[i].members)
            n_sum += static_cast<double>(m.n_packets);
        weighted_packets += gs.phi[i] * n_sum;
    }
    return slots.p_success * payload_bits * weighted_packets / slots.expected_slot;
}

inline std::map<PairId, double> per_pair_throughput(const FixedPoint&,
                                                    const SlotStats& slots,
                                                    const GroupSet& gs,
                                                    const MacTiming& timing) {
    const double payload_bits = 8.0 * timing.payload_bytes;
    std::map<PairId, double> out;
    for (std::size_t i = 0; i < gs.groups.size(); ++i)
        for (const auto& m : gs.groups[i].members)
            out[m.pair] += slots.p_success * payload_bits * gs.phi[i] *
                           static_cast<double>(m.n_packets) / slots.expected_slot;
    return out;
}

inline ThroughputReport evaluate_group_set(const Deployment& dep, const GroupSet& gs,
                                           const MacTiming& timing,
                                           ContentionParams params) {
    params.k = static_cast<int>(dep.aps.size());
    const FixedPoint fp = solve_fixed_point(params);
    const SlotStats slots = slot_stats(fp, params, timing, gs);
    ThroughputReport rep;
    rep.aggregate_bps = aggregate_throughput(fp, slots, gs, timing);
    rep.per_pair_bps = per_pair_throughput(fp, slots, gs, timing);
    return rep;
}

inline ThroughputReport dcf_baseline(const Deployment& dep, const MacTiming& timing,
                                     ContentionParams params,
                                     bool include_mapc = false) {
    ThroughputReport rep = evaluate_group_set(
        dep, singleton_group_set(dep, timing, include_mapc), timing, params);
    rep.baseline_bps = rep.aggregate_bps;
    rep.gain = 0.0;
    return rep;
}

// Full analytical report: C-SR throughput over the selected groups plus
// the DCF baseline and the relative gain.
inline ThroughputReport analyze_csr(const Deployment& dep, const GroupSet& gs,
                                    const MacTiming& timing, ContentionParams params,
                                    bool baseline_includes_mapc = false) {
    ThroughputReport rep = evaluate_group_set(dep, gs, timing, params);
    rep.baseline_bps =
        dcf_baseline(dep, timing, params, baseline_includes_mapc).aggregate_bps;
    rep.gain = rep.aggregate_bps / rep.baseline_bps - 1.0;
    return rep;
}

} // namespace csr
