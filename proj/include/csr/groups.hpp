#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csr/deployment.hpp"
#include "csr/radio.hpp"
#include "csr/timing.hpp"

namespace csr {

struct MemberLink {
    PairId pair;
    double sinr_db = 0.0;
    std::optional<int> mcs;
    std::int64_t n_packets = 0;  // A-MPDU packets this pair delivers per group TXOP
};

// One candidate set of simultaneously transmitting AP-STA pairs, at most
// one pair per AP. score = M_i * sum of per-pair packet counts.
struct Combination {
    std::vector<MemberLink> members;  // ordered by PairId
    std::int64_t score = 0;
    bool feasible = false;

    bool contains(const PairId& p) const {
        return std::any_of(members.begin(), members.end(),
                           [&](const MemberLink& m) { return m.pair == p; });
    }
};

struct GroupSet {
    std::vector<Combination> groups;
    std::vector<double> phi;  // aligned with groups
    int coverage_r = 1;
};

namespace detail {

// SINR of each chosen pair with exactly the chosen APs active, then
// MCS and packet count; feasibility needs every member at or above the
// capture threshold with a usable MCS.
inline Combination annotate(const Deployment& dep, const MacTiming& timing,
                            const std::vector<std::pair<int, int>>& choice) {
    Combination c;
    std::vector<Point2D> active_ap_pos;
    active_ap_pos.reserve(choice.size());
    for (const auto& [ap_id, sta_id] : choice)
        active_ap_pos.push_back(dep.ap(ap_id).pos);

    c.feasible = true;
    std::int64_t packet_sum = 0;
    for (std::size_t i = 0; i < choice.size(); ++i) {
        const auto& [ap_id, sta_id] = choice[i];
        std::vector<Point2D> interferers;
        for (std::size_t k = 0; k < choice.size(); ++k)
            if (k != i) interferers.push_back(active_ap_pos[k]);

        MemberLink link;
        link.pair = {ap_id, sta_id};
        link.sinr_db = sinr_db(dep.sta(sta_id).pos, dep.ap(ap_id).pos,
                               interferers, dep.radio);
        link.mcs = select_mcs(link.sinr_db, dep.radio);
        // the capture threshold gates concurrent transmissions only; an
        // alone transmission just needs a usable MCS
        const bool captured = choice.size() == 1 ||
                              link.sinr_db >= dep.radio.capture_threshold_db;
        if (!link.mcs || !captured) {
            c.feasible = false;
        } else {
            link.n_packets = ampdu_packets(*link.mcs, timing, dep.radio);
            packet_sum += link.n_packets;
        }
        c.members.push_back(link);
    }
    if (c.feasible)
        c.score = static_cast<std::int64_t>(c.members.size()) * packet_sum;
    return c;
}

} // namespace detail

inline std::int64_t score(const Combination& c) {
    if (c.members.empty())
        throw std::invalid_argument("groups: empty combination has no score");
    return c.score;
}

// All nonempty choices of (subset of APs, one associated STA per chosen
// AP): prod_k (S_k + 1) - 1 candidates, walked as a mixed-radix counter.
inline std::vector<Combination> enumerate_combinations(
    const Deployment& dep, const MacTiming& timing,
    std::uint64_t candidate_cap = 1'000'000) {
    std::vector<std::vector<int>> stas_of_ap;  // per AP, associated STA ids
    for (const auto& ap : dep.aps) {
        std::vector<int> ids;
        for (const auto& s : dep.stas)
            if (s.ap_id == ap.id) ids.push_back(s.id);
        stas_of_ap.push_back(std::move(ids));
    }

    std::uint64_t total = 1;
    for (const auto& ids : stas_of_ap) {
        total *= static_cast<std::uint64_t>(ids.size()) + 1;
        if (total - 1 > candidate_cap)
            throw std::runtime_error(
                "groups: candidate count exceeds cap (" +
                std::to_string(candidate_cap) +
                "); pre-filter STAs per AP or raise the cap");
    }

    std::vector<Combination> out;
    out.reserve(total - 1);
    std::vector<std::size_t> digit(dep.aps.size(), 0);  // 0 = AP idle
    for (std::uint64_t n = 1; n < total; ++n) {
        // increment mixed-radix counter
        for (std::size_t k = 0; k < digit.size(); ++k) {
            if (++digit[k] <= stas_of_ap[k].size()) break;
            digit[k] = 0;
        }
        std::vector<std::pair<int, int>> choice;
        for (std::size_t k = 0; k < digit.size(); ++k)
            if (digit[k] > 0)
                choice.emplace_back(dep.aps[k].id, stas_of_ap[k][digit[k] - 1]);
        out.push_back(detail::annotate(dep, timing, choice));
    }
    return out;
}

// Greedy selection in descending score order; a candidate is accepted only
// if none of its members is already covered r times. Ties break toward
// larger member count, then lexicographic member ids, so the selected set
// is deterministic.
inline GroupSet select_groups(std::vector<Combination> candidates, int r = 1) {
    if (r < 1) throw std::invalid_argument("groups: r must be >= 1");

    // coverage universe includes pairs whose every candidate is infeasible,
    // so they surface as an error instead of silently dropping out
    std::map<PairId, int> count;
    for (const auto& c : candidates)
        for (const auto& m : c.members) count.emplace(m.pair, 0);

    std::erase_if(candidates, [](const Combination& c) { return !c.feasible; });
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Combination& a, const Combination& b) {
                         if (a.score != b.score) return a.score > b.score;
                         if (a.members.size() != b.members.size())
                             return a.members.size() > b.members.size();
                         return std::lexicographical_compare(
                             a.members.begin(), a.members.end(),
                             b.members.begin(), b.members.end(),
                             [](const MemberLink& x, const MemberLink& y) {
                                 return x.pair < y.pair;
                             });
                     });

    GroupSet gs;
    gs.coverage_r = r;
    for (const auto& c : candidates) {
        const bool ok = std::all_of(c.members.begin(), c.members.end(),
                                    [&](const MemberLink& m) {
                                        return count.at(m.pair) < r;
                                    });
        if (!ok) continue;
        gs.groups.push_back(c);
        for (const auto& m : c.members) ++count.at(m.pair);
        if (std::all_of(count.begin(), count.end(),
                        [&](const auto& kv) { return kv.second == r; }))
            break;
    }

    for (const auto& [pair, n] : count)
        if (n != r)
            throw std::runtime_error(
                "groups: pair (AP " + std::to_string(pair.ap_id) + ", STA " +
                std::to_string(pair.sta_id) + ") covered " + std::to_string(n) +
                " times, want " + std::to_string(r) +
                " (its singleton combination is likely infeasible)");
    return gs;
}

// phi_i = sum over members of 1/(K * S_j); with R=1 coverage the phis sum
// to one.
inline void compute_transmission_probabilities(GroupSet& gs, int k_aps,
                                               const std::map<int, int>& stas_per_ap) {
    gs.phi.clear();
    for (const auto& g : gs.groups) {
        double phi = 0.0;
        for (const auto& m : g.members)
            phi += 1.0 / (static_cast<double>(k_aps) * stas_per_ap.at(m.pair.ap_id));
        gs.phi.push_back(phi);
    }
}

inline GroupSet form_groups(const Deployment& dep, const MacTiming& timing, int r = 1,
                            std::uint64_t candidate_cap = 1'000'000) {
    GroupSet gs = select_groups(enumerate_combinations(dep, timing, candidate_cap), r);
    compute_transmission_probabilities(gs, static_cast<int>(dep.aps.size()),
                                       dep.sta_counts());
    return gs;
}

// DCF is the degenerate schedule where every pair transmits alone. The
// baseline charges no coordination phase unless asked to.
inline GroupSet singleton_group_set(const Deployment& dep, const MacTiming& timing,
                                    bool include_mapc = false) {
    GroupSet gs;
    gs.coverage_r = 1;
    for (const auto& s : dep.stas) {
        Combination c;
        MemberLink link;
        link.pair = {s.ap_id, s.id};
        link.sinr_db = sinr_db(s.pos, dep.ap(s.ap_id).pos, {}, dep.radio);
        link.mcs = select_mcs(link.sinr_db, dep.radio);
        if (!link.mcs)
            throw std::runtime_error("groups: STA " + std::to_string(s.id) +
                                     " cannot reach MCS 0 even without interference");
        link.n_packets = ampdu_packets(*link.mcs, timing, dep.radio, include_mapc);
        c.members.push_back(link);
        c.feasible = true;
        c.score = link.n_packets;
        gs.groups.push_back(std::move(c));
    }
    compute_transmission_probabilities(gs, static_cast<int>(dep.aps.size()),
                                       dep.sta_counts());
    return gs;
}

} // namespace csr
