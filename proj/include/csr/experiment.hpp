#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "csr/analysis.hpp"
#include "csr/deployment.hpp"
#include "csr/groups.hpp"

namespace csr {

// Bundled toy layout: pairs 1 and 4 mutually compatible, 2 and 3 served
// alone.
inline Deployment deployment1_like(RadioConfig radio = default_radio_config()) {
    Deployment dep;
    dep.radio = std::move(radio);
    dep.seed = 0;
    dep.aps = {{1, {0, 0}}, {2, {10, 0}}, {3, {0, 10}}, {4, {10, 10}}};
    dep.stas = {{1, {-1.5, -1.5}, 1},
                {2, {6.0, 3.0}, 2},
                {3, {3.0, 7.0}, 3},
                {4, {11.5, 11.5}, 4}};
    dep.validate();
    return dep;
}

// Pairs 1, 3 and 4 grouped, pair 2 alone.
inline Deployment deployment2_like(RadioConfig radio = default_radio_config()) {
    Deployment dep;
    dep.radio = std::move(radio);
    dep.seed = 0;
    dep.aps = {{1, {0, 0}}, {2, {10, 0}}, {3, {0, 10}}, {4, {10, 10}}};
    dep.stas = {{1, {-1.5, -1.5}, 1},
                {2, {6.0, 3.0}, 2},
                {3, {-1.5, 11.5}, 3},
                {4, {11.5, 11.5}, 4}};
    dep.validate();
    return dep;
}

struct SweepSpec {
    std::vector<double> d_ap_ap_list = {5.0, 10.0, 20.0};
    int n_deployments = 200;
    int stas_per_ap = 10;
    double d_sta_min = 1.0;
    double d_sta_max = 5.0;
    std::uint64_t base_seed = 1;
    std::string output_dir = "sweep_out";
};

struct SweepResult {
    // per distance: sorted per-STA gain samples and median gain
    std::map<double, std::vector<double>> gains;
    std::map<double, double> median_gain;
    // per distance: fraction of deployments whose schedule is a single
    // group containing all APs
    std::map<double, double> all_ap_group_fraction;
    int failures = 0;
};

namespace detail {

// fixed formatting so sweep outputs are byte-stable across runs
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double median_of_sorted(const std::vector<double>& v) {
    if (v.empty()) throw std::runtime_error("sweep: no samples");
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

// Per (distance, deployment index): generate, form groups, analyze C-SR
// and DCF. Writes samples.csv, per-distance CDF files, and summary.json
// under spec.output_dir. Deterministic from base_seed.
inline SweepResult run_sweep(const SweepSpec& spec, const RadioConfig& radio,
                             const MacTiming& timing, const ContentionParams& params) {
    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    std::ofstream samples(fs::path(spec.output_dir) / "samples.csv");
    if (!samples) throw std::runtime_error("sweep: cannot write samples.csv");
    samples << "d_ap_ap,seed,ap,sta,scheme,throughput_bps\n";

    SweepResult result;
    for (std::size_t di = 0; di < spec.d_ap_ap_list.size(); ++di) {
        const double d = spec.d_ap_ap_list[di];
        std::vector<double> csr_samples;
        int all_ap_deployments = 0;
        int evaluated = 0;
        for (int n = 0; n < spec.n_deployments; ++n) {
            const std::uint64_t seed =
                derive_seed(spec.base_seed, di * static_cast<std::uint64_t>(
                                                     spec.n_deployments) + n);
            try {
                Deployment dep = generate_deployment(seed, 4, spec.stas_per_ap, d,
                                                     spec.d_sta_min, spec.d_sta_max,
                                                     radio);
                GroupSet gs = form_groups(dep, timing);
                ThroughputReport csr = analyze_csr(dep, gs, timing, params);
                ThroughputReport dcf = dcf_baseline(dep, timing, params);
                for (const auto& [pid, bps] : csr.per_pair_bps) {
                    samples << detail::fmt(d) << ',' << seed << ',' << pid.ap_id
                            << ',' << pid.sta_id << ",csr," << detail::fmt(bps)
                            << '\n';
                    csr_samples.push_back(bps);
                    result.gains[d].push_back(bps / dcf.per_pair_bps.at(pid) - 1.0);
                }
                for (const auto& [pid, bps] : dcf.per_pair_bps)
                    samples << detail::fmt(d) << ',' << seed << ',' << pid.ap_id
                            << ',' << pid.sta_id << ",dcf," << detail::fmt(bps)
                            << '\n';
                const bool all_ap = std::all_of(
                    gs.groups.begin(), gs.groups.end(), [&](const Combination& g) {
                        return g.members.size() == dep.aps.size();
                    });
                if (all_ap) ++all_ap_deployments;
                ++evaluated;
            } catch (const std::exception&) {
                ++result.failures;
            }
        }
        if (evaluated == 0)
            throw std::runtime_error("sweep: every deployment failed at d=" +
                                     detail::fmt(d));
        auto& gains = result.gains[d];
        std::sort(gains.begin(), gains.end());
        result.median_gain[d] = detail::median_of_sorted(gains);
        result.all_ap_group_fraction[d] =
            static_cast<double>(all_ap_deployments) / evaluated;

        std::sort(csr_samples.begin(), csr_samples.end());
        std::ofstream cdf(fs::path(spec.output_dir) /
                          ("cdf_csr_d" + detail::fmt(d) + ".csv"));
        cdf << "throughput_bps,quantile\n";
        for (std::size_t i = 0; i < csr_samples.size(); ++i)
            cdf << detail::fmt(csr_samples[i]) << ','
                << detail::fmt(static_cast<double>(i + 1) / csr_samples.size())
                << '\n';
    }

    nlohmann::json summary;
    summary["n_deployments"] = spec.n_deployments;
    summary["stas_per_ap"] = spec.stas_per_ap;
    summary["base_seed"] = spec.base_seed;
    summary["failures"] = result.failures;
    for (const auto& [d, g] : result.median_gain) {
        summary["median_gain"][detail::fmt(d)] = g;
        summary["all_ap_group_fraction"][detail::fmt(d)] =
            result.all_ap_group_fraction.at(d);
    }
    std::ofstream out(fs::path(spec.output_dir) / "summary.json");
    out << summary.dump(2) << '\n';
    return result;
}

} // namespace csr
