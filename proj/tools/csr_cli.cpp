// Command-line front end: scenario generation, group formation,
// analytical throughput, Monte Carlo validation, and the multi-distance
// sweep experiment.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csr/analysis.hpp"
#include "csr/config_io.hpp"
#include "csr/deployment.hpp"
#include "csr/experiment.hpp"
#include "csr/groups.hpp"
#include "csr/simulator.hpp"

namespace {

struct GlobalOpts {
    std::string config_path;
    bool json = false;
};

csr::ModelConfig load_config(const GlobalOpts& g) {
    return g.config_path.empty() ? csr::ModelConfig{}
                                 : csr::load_model_config(g.config_path);
}

csr::Deployment load_scenario(const std::string& scenario,
                              const std::string& preset,
                              const csr::RadioConfig& radio) {
    if (!preset.empty()) {
        if (preset == "deployment1-like") return csr::deployment1_like(radio);
        if (preset == "deployment2-like") return csr::deployment2_like(radio);
        throw CLI::ValidationError("--preset",
                                   "unknown preset '" + preset + "'");
    }
    return csr::load_deployment(scenario);
}

void print_group_table(const csr::Deployment& dep, const csr::GroupSet& gs) {
    std::printf("selected groups (R=%d):\n", gs.coverage_r);
    std::printf("%-4s %-40s %12s %10s\n", "#", "members (AP->STA)", "score", "phi");
    for (std::size_t i = 0; i < gs.groups.size(); ++i) {
        std::string members;
        for (const auto& m : gs.groups[i].members) {
            if (!members.empty()) members += ", ";
            members += std::to_string(m.pair.ap_id) + "->" +
                       std::to_string(m.pair.sta_id);
        }
        std::printf("%-4zu %-40s %12lld %10.6f\n", i + 1, members.c_str(),
                    static_cast<long long>(gs.groups[i].score), gs.phi[i]);
    }
    (void)dep;
}

void print_candidate_table(const csr::Deployment& dep,
                           const std::vector<csr::Combination>& candidates) {
    // Table-I-style listing: one column per AP, feasible rows only,
    // sorted by descending score.
    std::vector<const csr::Combination*> rows;
    for (const auto& c : candidates)
        if (c.feasible) rows.push_back(&c);
    std::sort(rows.begin(), rows.end(),
              [](const csr::Combination* a, const csr::Combination* b) {
                  return a->score > b->score;
              });
    std::printf("feasible combinations: %zu of %zu\n", rows.size(),
                candidates.size());
    std::printf("%-4s", "#");
    for (const auto& ap : dep.aps)
        std::printf(" %-8s", ("AP" + std::to_string(ap.id)).c_str());
    std::printf(" %12s\n", "score");
    std::size_t idx = 1;
    for (const auto* c : rows) {
        std::printf("%-4zu", idx++);
        for (const auto& ap : dep.aps) {
            std::string cell = "-";
            for (const auto& m : c->members)
                if (m.pair.ap_id == ap.id) cell = "STA" + std::to_string(m.pair.sta_id);
            std::printf(" %-8s", cell.c_str());
        }
        std::printf(" %12lld\n", static_cast<long long>(c->score));
        if (idx > 25) {  // keep desk output short; full table via --json
            std::printf("... (%zu more)\n", rows.size() - 25);
            break;
        }
    }
}

void print_report(const csr::ThroughputReport& rep) {
    std::printf("%-28s %14.3f Mbps\n", "aggregate throughput", rep.aggregate_bps / 1e6);
    if (rep.baseline_bps > 0.0) {
        std::printf("%-28s %14.3f Mbps\n", "DCF baseline", rep.baseline_bps / 1e6);
        std::printf("%-28s %13.1f %%\n", "gain vs DCF", rep.gain * 100.0);
    }
    std::printf("per-pair throughput:\n");
    for (const auto& [pid, bps] : rep.per_pair_bps)
        std::printf("  AP%-3d STA%-4d %14.3f Mbps\n", pid.ap_id, pid.sta_id,
                    bps / 1e6);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordinated spatial reuse throughput pipeline for multi-AP WLANs"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "radio/MAC config file (JSON)");
    app.add_flag("--json", g.json, "emit JSON instead of text");

    // generate
    auto* gen = app.add_subcommand("generate", "generate a random scenario file");
    std::uint64_t gen_seed = 1;
    int gen_stas = 1;
    double gen_d = 10.0, gen_dmin = 1.0, gen_dmax = 5.0;
    std::string gen_out, gen_preset;
    gen->add_option("--seed", gen_seed, "deployment seed");
    gen->add_option("--stas-per-ap", gen_stas, "stations per AP");
    gen->add_option("--d-ap-ap", gen_d, "AP square side [m]");
    gen->add_option("--d-sta-min", gen_dmin, "min AP-STA distance [m]");
    gen->add_option("--d-sta-max", gen_dmax, "max AP-STA distance [m]");
    gen->add_option("--preset", gen_preset,
                    "deployment1-like | deployment2-like (approximate layouts)");
    gen->add_option("--out", gen_out, "output scenario path")->required();

    // groups
    auto* grp = app.add_subcommand("groups", "enumerate and select C-SR groups");
    std::string grp_scenario, grp_preset, grp_out;
    int grp_r = 1;
    bool grp_candidates = false;
    grp->add_option("--scenario", grp_scenario, "scenario file");
    grp->add_option("--preset", grp_preset, "bundled preset instead of a file");
    grp->add_option("-r,--coverage", grp_r, "appearances per pair (R)");
    grp->add_flag("--candidates", grp_candidates, "also print the candidate table");
    grp->add_option("--out", grp_out, "write selected groups as JSON");

    // analyze
    auto* ana = app.add_subcommand("analyze", "analytical throughput report");
    std::string ana_scenario, ana_preset;
    bool ana_dcf = false, ana_mapc_baseline = false;
    ana->add_option("--scenario", ana_scenario, "scenario file");
    ana->add_option("--preset", ana_preset, "bundled preset instead of a file");
    ana->add_flag("--dcf", ana_dcf, "baseline-only report");
    ana->add_flag("--baseline-includes-mapc", ana_mapc_baseline,
                  "charge the coordination phase to the DCF baseline too");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo validation run");
    std::string sim_scenario, sim_preset;
    std::uint64_t sim_slots = 1'000'000, sim_warmup = 10'000, sim_seed = 1;
    int sim_reps = 1;
    sim->add_option("--scenario", sim_scenario, "scenario file");
    sim->add_option("--preset", sim_preset, "bundled preset instead of a file");
    sim->add_option("--slots", sim_slots, "horizon in slots");
    sim->add_option("--warmup", sim_warmup, "warmup slots excluded from stats");
    sim->add_option("--seed", sim_seed, "simulation seed");
    sim->add_option("--reps", sim_reps, "independent replications");

    // sweep
    auto* swp = app.add_subcommand("sweep", "multi-distance random-deployment sweep");
    csr::SweepSpec spec;
    swp->add_option("--distances", spec.d_ap_ap_list, "AP-AP distances [m]");
    swp->add_option("-n,--deployments", spec.n_deployments, "deployments per distance");
    swp->add_option("--stas-per-ap", spec.stas_per_ap, "stations per AP");
    swp->add_option("--seed", spec.base_seed, "base seed");
    swp->add_option("--out", spec.output_dir, "output directory");

    // report
    auto* rpt = app.add_subcommand("report",
                                   "full pipeline: groups + analysis (+ simulation)");
    std::string rpt_scenario, rpt_preset;
    bool rpt_simulate = false;
    std::uint64_t rpt_slots = 1'000'000, rpt_seed = 1;
    rpt->add_option("--scenario", rpt_scenario, "scenario file");
    rpt->add_option("--preset", rpt_preset, "bundled preset instead of a file");
    rpt->add_flag("--simulate", rpt_simulate, "append a simulation comparison");
    rpt->add_option("--slots", rpt_slots, "simulation horizon in slots");
    rpt->add_option("--seed", rpt_seed, "simulation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        const csr::ModelConfig cfg = load_config(g);

        if (*gen) {
            csr::Deployment dep =
                gen_preset.empty()
                    ? csr::generate_deployment(gen_seed, 4, gen_stas, gen_d,
                                               gen_dmin, gen_dmax, cfg.radio)
                    : load_scenario("", gen_preset, cfg.radio);
            csr::save_deployment(dep, gen_out);
            std::printf("wrote %s (%zu APs, %zu STAs)\n", gen_out.c_str(),
                        dep.aps.size(), dep.stas.size());
        } else if (*grp) {
            if (grp_scenario.empty() && grp_preset.empty())
                throw CLI::RequiredError("--scenario or --preset");
            csr::Deployment dep = load_scenario(grp_scenario, grp_preset, cfg.radio);
            auto candidates = csr::enumerate_combinations(dep, cfg.timing);
            csr::GroupSet gs = csr::select_groups(candidates, grp_r);
            csr::compute_transmission_probabilities(
                gs, static_cast<int>(dep.aps.size()), dep.sta_counts());
            if (g.json) {
                std::cout << csr::group_set_to_json(gs).dump(2) << '\n';
            } else {
                if (grp_candidates) print_candidate_table(dep, candidates);
                print_group_table(dep, gs);
            }
            if (!grp_out.empty()) {
                std::ofstream out(grp_out);
                out << csr::group_set_to_json(gs).dump(2) << '\n';
            }
        } else if (*ana) {
            if (ana_scenario.empty() && ana_preset.empty())
                throw CLI::RequiredError("--scenario or --preset");
            csr::Deployment dep = load_scenario(ana_scenario, ana_preset, cfg.radio);
            csr::ContentionParams params = cfg.contention;
            csr::ThroughputReport rep;
            if (ana_dcf) {
                rep = csr::dcf_baseline(dep, cfg.timing, params, ana_mapc_baseline);
            } else {
                csr::GroupSet gs = csr::form_groups(dep, cfg.timing);
                rep = csr::analyze_csr(dep, gs, cfg.timing, params,
                                       ana_mapc_baseline);
            }
            if (g.json) std::cout << csr::report_to_json(rep).dump(2) << '\n';
            else print_report(rep);
        } else if (*sim) {
            if (sim_scenario.empty() && sim_preset.empty())
                throw CLI::RequiredError("--scenario or --preset");
            csr::Deployment dep = load_scenario(sim_scenario, sim_preset, cfg.radio);
            csr::GroupSet gs = csr::form_groups(dep, cfg.timing);
            csr::SimConfig sc;
            sc.horizon_slots = sim_slots;
            sc.warmup_slots = sim_warmup;
            sc.seed = sim_seed;
            sc.timing = cfg.timing;
            sc.params = cfg.contention;
            sc.params.k = static_cast<int>(dep.aps.size());
            csr::SimResult res = csr::replicate(dep, gs, sc, sim_reps);
            csr::ThroughputReport rep =
                csr::evaluate_group_set(dep, gs, cfg.timing, cfg.contention);

            nlohmann::json cmp = nlohmann::json::array();
            for (const auto& [pid, bps] : res.per_pair_bps) {
                const double model = rep.per_pair_bps.at(pid);
                cmp.push_back({{"ap", pid.ap_id},
                               {"sta", pid.sta_id},
                               {"sim_bps", bps},
                               {"model_bps", model},
                               {"rel_error", bps / model - 1.0}});
            }
            if (g.json) {
                nlohmann::json out = csr::sim_result_to_json(res);
                out["comparison"] = cmp;
                std::cout << out.dump(2) << '\n';
            } else {
                std::printf("%-6s %-6s %14s %14s %10s\n", "AP", "STA",
                            "sim [Mbps]", "model [Mbps]", "err [%]");
                for (const auto& row : cmp)
                    std::printf("%-6d %-6d %14.3f %14.3f %10.2f\n",
                                row["ap"].get<int>(), row["sta"].get<int>(),
                                row["sim_bps"].get<double>() / 1e6,
                                row["model_bps"].get<double>() / 1e6,
                                row["rel_error"].get<double>() * 100.0);
            }
        } else if (*swp) {
            csr::SweepResult res =
                csr::run_sweep(spec, cfg.radio, cfg.timing, cfg.contention);
            for (const auto& [d, gain] : res.median_gain)
                std::printf("d_ap_ap=%-5g median per-STA gain %7.1f %% "
                            "(all-AP schedules in %.1f %% of deployments)\n",
                            d, gain * 100.0,
                            res.all_ap_group_fraction.at(d) * 100.0);
            if (res.failures > 0)
                std::printf("skipped %d failed deployments\n", res.failures);
            std::printf("results in %s\n", spec.output_dir.c_str());
        } else if (*rpt) {
            if (rpt_scenario.empty() && rpt_preset.empty())
                throw CLI::RequiredError("--scenario or --preset");
            csr::Deployment dep = load_scenario(rpt_scenario, rpt_preset, cfg.radio);
            csr::GroupSet gs = csr::form_groups(dep, cfg.timing);
            csr::ThroughputReport rep =
                csr::analyze_csr(dep, gs, cfg.timing, cfg.contention);
            if (g.json) {
                nlohmann::json out;
                out["groups"] = csr::group_set_to_json(gs);
                out["analysis"] = csr::report_to_json(rep);
                std::cout << out.dump(2) << '\n';
            } else {
                print_group_table(dep, gs);
                print_report(rep);
            }
            if (rpt_simulate) {
                csr::SimConfig sc;
                sc.horizon_slots = rpt_slots;
                sc.seed = rpt_seed;
                sc.timing = cfg.timing;
                sc.params = cfg.contention;
                sc.params.k = static_cast<int>(dep.aps.size());
                csr::SimResult res = csr::run_simulation(dep, gs, sc);
                std::printf("simulation (%llu slots):\n",
                            static_cast<unsigned long long>(rpt_slots));
                for (const auto& [pid, bps] : res.per_pair_bps)
                    std::printf("  AP%-3d STA%-4d %14.3f Mbps (model %12.3f)\n",
                                pid.ap_id, pid.sta_id, bps / 1e6,
                                rep.per_pair_bps.at(pid) / 1e6);
            }
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
