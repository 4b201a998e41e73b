#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "csr/analysis.hpp"
#include "csr/experiment.hpp"
#include "csr/rng.hpp"

using namespace csr;

namespace {

// Independent oracle: reimplements E[B] from scratch and bisects the
// scalar equation in tau. Kept free of the production solver.
double oracle_expected_backoff(double p, int cw_min, int m) {
    if (std::abs(1.0 - 2.0 * p) < 1e-12)
        return (cw_min + 1.0) / 2.0 * (2.0 + m) / 2.0 - 0.5;
    return (cw_min + 1.0) / 2.0 *
               ((1.0 - p - p * std::pow(2.0 * p, m)) / (1.0 - 2.0 * p)) -
           0.5;
}

double oracle_bisect_tau(int k, int cw_min, int m) {
    auto f = [&](double tau) {
        const double p = 1.0 - std::pow(1.0 - tau, k - 1);
        return tau - 1.0 / (oracle_expected_backoff(p, cw_min, m) + 1.0);
    };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(lo) <= 0.0) == (f(mid) <= 0.0)) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

GroupSet equal_n_groups(const std::vector<std::vector<int>>& memberships,
                        std::int64_t n, int k) {
    GroupSet gs;
    for (const auto& ids : memberships) {
        Combination c;
        for (int id : ids) c.members.push_back({{id, id}, 40.0, 11, n});
        c.feasible = true;
        gs.groups.push_back(std::move(c));
        gs.phi.push_back(static_cast<double>(ids.size()) / k);
    }
    return gs;
}

} // namespace

TEST_CASE("K=1 fixed point collapses to the closed form") {
    const FixedPoint fp = solve_fixed_point({15, 6, 1});
    CHECK(fp.p == 0.0);
    CHECK(fp.expected_backoff == Catch::Approx(7.5).epsilon(1e-12));
    CHECK(fp.tau == Catch::Approx(2.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("E[B] is continuous across the p=1/2 singularity") {
    const ContentionParams params{15, 6, 4};
    const double limit = expected_backoff(0.5, params);
    CHECK(limit == Catch::Approx((15 + 1) / 2.0 * (2 + 6) / 2.0 - 0.5).epsilon(1e-12));
    CHECK(expected_backoff(0.5 - 1e-7, params) == Catch::Approx(limit).epsilon(1e-5));
    CHECK(expected_backoff(0.5 + 1e-7, params) == Catch::Approx(limit).epsilon(1e-5));
}

TEST_CASE("K=4 fixed point matches the bisection oracle") {
    const FixedPoint fp = solve_fixed_point({15, 6, 4});
    const double tau_star = oracle_bisect_tau(4, 15, 6);
    CHECK(fp.tau == Catch::Approx(tau_star).margin(1e-9));
    CHECK(fp.p == Catch::Approx(1.0 - std::pow(1.0 - tau_star, 3)).margin(1e-9));
    CHECK(fp.residual < 1e-9);
}

TEST_CASE("fixed point is independent of the initial guess") {
    for (double tau0 : {0.01, 0.1, 0.5}) {
        const FixedPoint fp = solve_fixed_point({15, 6, 4}, 1e-12, 10000, tau0);
        CHECK(fp.tau == Catch::Approx(oracle_bisect_tau(4, 15, 6)).margin(1e-9));
    }
}

TEST_CASE("slot probabilities sum to one and honor the limits") {
    const MacTiming t;
    GroupSet gs = equal_n_groups({{1}, {2}, {3}, {4}}, 100, 4);

    SECTION("idle limit") {
        FixedPoint fp;
        fp.tau = 1e-12;
        const SlotStats s = slot_stats(fp, {15, 6, 4}, t, gs);
        CHECK(s.p_empty == Catch::Approx(1.0).epsilon(1e-9));
        CHECK(s.expected_slot == Catch::Approx(t.t_empty).epsilon(1e-6));
    }
    SECTION("no collisions with a single AP") {
        const FixedPoint fp = solve_fixed_point({15, 6, 1});
        GroupSet solo = equal_n_groups({{1}}, 100, 1);
        const SlotStats s = slot_stats(fp, {15, 6, 1}, t, solo);
        CHECK(s.p_collision == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("partition of unity and direct formula recomputation") {
        const FixedPoint fp = solve_fixed_point({15, 6, 4});
        const SlotStats s = slot_stats(fp, {15, 6, 4}, t, gs);
        CHECK(std::abs(s.p_empty + s.p_success + s.p_collision - 1.0) < 1e-12);
        const double et = s.p_empty * 9e-6 + s.p_success * 5e-3 +
                          s.p_collision * 137e-6;
        CHECK(s.expected_slot == Catch::Approx(et).epsilon(1e-12));
    }
}

TEST_CASE("throughput reductions and gains on stylized group sets") {
    const MacTiming t;
    const ContentionParams params{15, 6, 4};
    const FixedPoint fp = solve_fixed_point(params);
    const std::int64_t n = 400;

    const GroupSet dcf = equal_n_groups({{1}, {2}, {3}, {4}}, n, 4);
    const SlotStats s_dcf = slot_stats(fp, params, t, dcf);
    const double gamma_dcf = aggregate_throughput(fp, s_dcf, dcf, t);

    SECTION("paired schedule with equal N gains exactly 50%") {
        const GroupSet csr = equal_n_groups({{1, 4}, {2}, {3}}, n, 4);
        const SlotStats s = slot_stats(fp, params, t, csr);
        CHECK(s.expected_slot == s_dcf.expected_slot);
        const double gamma = aggregate_throughput(fp, s, csr, t);
        CHECK(gamma / gamma_dcf == Catch::Approx(1.5).epsilon(1e-15));
    }
    SECTION("one group of four with equal N gains exactly 300%") {
        const GroupSet csr = equal_n_groups({{1, 2, 3, 4}}, n, 4);
        const SlotStats s = slot_stats(fp, params, t, csr);
        const double gamma = aggregate_throughput(fp, s, csr, t);
        CHECK(gamma / gamma_dcf == Catch::Approx(4.0).epsilon(1e-15));
    }
    SECTION("per-pair weights follow phi") {
        const GroupSet csr = equal_n_groups({{1, 4}, {2}, {3}}, n, 4);
        const SlotStats s = slot_stats(fp, params, t, csr);
        const auto per = per_pair_throughput(fp, s, csr, t);
        CHECK(per.at({1, 1}) == per.at({4, 4}));
        CHECK(per.at({1, 1}) == Catch::Approx(2.0 * per.at({2, 2})).epsilon(1e-12));
        // a pair alone in its group matches its DCF per-pair value
        const auto per_dcf = per_pair_throughput(fp, s_dcf, dcf, t);
        CHECK(per.at({2, 2}) == Catch::Approx(per_dcf.at({2, 2})).epsilon(1e-12));
    }
    SECTION("per-pair values sum to the aggregate") {
        const GroupSet csr = equal_n_groups({{1, 4}, {2}, {3}}, n, 4);
        const SlotStats s = slot_stats(fp, params, t, csr);
        const double gamma = aggregate_throughput(fp, s, csr, t);
        double sum = 0.0;
        for (const auto& [pid, v] : per_pair_throughput(fp, s, csr, t)) sum += v;
        CHECK(sum == Catch::Approx(gamma).epsilon(1e-9));
    }
}

TEST_CASE("aggregate throughput is monotone in any packet count") {
    const MacTiming t;
    const ContentionParams params{15, 6, 4};
    const FixedPoint fp = solve_fixed_point(params);
    GroupSet gs = equal_n_groups({{1, 4}, {2}, {3}}, 300, 4);
    const SlotStats s = slot_stats(fp, params, t, gs);
    const double before = aggregate_throughput(fp, s, gs, t);
    gs.groups[0].members[1].n_packets += 10;
    CHECK(aggregate_throughput(fp, s, gs, t) > before);
}

TEST_CASE("scaling L by c and dividing every N by c leaves throughput unchanged") {
    const ContentionParams params{15, 6, 4};
    const FixedPoint fp = solve_fixed_point(params);
    MacTiming t1;
    t1.payload_bytes = 1500;
    MacTiming t2 = t1;
    t2.payload_bytes = 3000;
    GroupSet g1 = equal_n_groups({{1, 4}, {2}, {3}}, 400, 4);
    GroupSet g2 = equal_n_groups({{1, 4}, {2}, {3}}, 200, 4);
    const SlotStats s1 = slot_stats(fp, params, t1, g1);
    const SlotStats s2 = slot_stats(fp, params, t2, g2);
    CHECK(aggregate_throughput(fp, s1, g1, t1) ==
          Catch::Approx(aggregate_throughput(fp, s2, g2, t2)).epsilon(1e-12));
}

TEST_CASE("dcf_baseline splits throughput evenly across symmetric pairs") {
    Deployment dep;
    dep.radio = default_radio_config();
    dep.aps = {{1, {0, 0}}, {2, {20, 0}}, {3, {0, 20}}, {4, {20, 20}}};
    dep.stas = {{1, {2, 0}, 1}, {2, {22, 0}, 2}, {3, {2, 20}, 3}, {4, {22, 20}, 4}};
    const ThroughputReport rep = dcf_baseline(dep, MacTiming{}, {15, 6, 4});
    for (const auto& [pid, v] : rep.per_pair_bps)
        CHECK(v == Catch::Approx(rep.aggregate_bps / 4.0).epsilon(1e-12));
}

TEST_CASE("csr gain is non-negative when grouping is possible") {
    const Deployment dep = deployment1_like();
    const GroupSet gs = form_groups(dep, MacTiming{});
    const ThroughputReport rep = analyze_csr(dep, gs, MacTiming{}, {15, 6, 4});
    CHECK(rep.gain >= 0.0);
    CHECK(rep.aggregate_bps > rep.baseline_bps);
}

TEST_CASE("non-convergence and bad tolerances raise") {
    CHECK_THROWS_AS(solve_fixed_point({15, 6, 4}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_fixed_point({0, 6, 4}), std::invalid_argument);
}
