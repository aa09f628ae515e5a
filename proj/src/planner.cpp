#include "mcqkd/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace mcqkd::planner {

namespace {

using fibergrid::ChannelAssignment;
using fibergrid::Role;

std::vector<int> outer_cores(const CoreTopology& topo) {
    std::vector<int> out;
    for (int c = 1; c <= topo.core_count(); ++c)
        if (topo.is_outer(c)) out.push_back(c);
    return out;
}

// Per-channel contribution to the packing objective when placed in a neighbor
// core; non-neighbor placements cost nothing.
double channel_cost(const ClassicalDemand& d, const PlannerOptions& opts) {
    const double mw = dbm_to_mw(d.power_dbm);
    if (!opts.model) return mw;
    const double chi = d.direction == Direction::Co ? opts.model->chi_co
                                                    : opts.model->chi_counter;
    return chi * mw * opts.eval_length_km;
}

void check_demand(const TrafficDemand& demand, const CoreTopology& topology,
                  const FrequencyGrid& grid) {
    if (demand.quantum_count < 0) throw std::domain_error("quantum channel count must be non-negative");
    const int classical_cores = topology.core_count() - 1;
    if (classical_cores < 1 && !demand.classical.empty())
        throw std::domain_error("no classical cores available");

    std::map<int, int> per_ordinal;
    for (const auto& d : demand.classical) {
        if (d.ordinal < 1 || d.ordinal > grid.channel_count)
            throw std::domain_error("classical channel ordinal " + std::to_string(d.ordinal) +
                                    " out of range [1, " + std::to_string(grid.channel_count) + "]");
        if (!std::isfinite(d.power_dbm))
            throw std::domain_error("classical channel power must be finite");
        ++per_ordinal[d.ordinal];
    }
    // Each ordinal occupies at most one slot per core, so demand beyond the
    // number of classical cores cannot be placed.
    int shortfall = 0;
    for (const auto& [ordinal, count] : per_ordinal)
        shortfall += std::max(0, count - classical_cores);
    if (shortfall > 0)
        throw std::domain_error("demand exceeds grid capacity by " + std::to_string(shortfall) +
                                " channel(s)");
}

struct Placement {
    std::vector<int> core_of; // per classical demand index
};

ChannelPlan build_plan(const TrafficDemand& demand, const CoreTopology& topology,
                       const FrequencyGrid& grid, int quantum_core,
                       const Placement& placement) {
    ChannelPlan plan;
    plan.topology = topology;
    plan.grid = grid;
    plan.quantum_core = quantum_core;

    for (int k = 1; k <= demand.quantum_count; ++k) {
        ChannelAssignment a;
        a.core = quantum_core;
        a.freq_mhz = fibergrid::quantum_frequency(k, grid);
        a.role = Role::Quantum;
        a.direction = Direction::Co;
        plan.assignments.push_back(a);
    }
    if (demand.sync_required) {
        ChannelAssignment a;
        a.core = quantum_core;
        // Preferred sync slot is the interleave position just below the first
        // classical channel; low-f0 grids fall back to the next free slot
        // above the quantum channels.
        const FreqMhz below = grid.f0_mhz - grid.delta_f_mhz / 2;
        a.freq_mhz = below > 0 ? below : fibergrid::quantum_frequency(demand.quantum_count + 1, grid);
        a.role = Role::Sync;
        a.direction = Direction::Co;
        a.launch_power_dbm = 0.0;
        plan.assignments.push_back(a);
    }
    for (std::size_t i = 0; i < demand.classical.size(); ++i) {
        const auto& d = demand.classical[i];
        ChannelAssignment a;
        a.core = placement.core_of[i];
        a.freq_mhz = fibergrid::classical_frequency(d.ordinal, grid);
        a.role = Role::Classical;
        a.direction = d.direction;
        a.launch_power_dbm = d.power_dbm;
        plan.assignments.push_back(a);
    }
    return plan;
}

Placement greedy_placement(const TrafficDemand& demand, const CoreTopology& topology,
                           const FrequencyGrid& /*grid*/, int quantum_core,
                           const PlannerOptions& opts) {
    const std::set<int> near = topology.neighbors(quantum_core);

    std::vector<std::size_t> order(demand.classical.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return channel_cost(demand.classical[a], opts) > channel_cost(demand.classical[b], opts);
    });

    std::map<int, std::set<int>> used_ordinals; // core -> ordinals taken
    std::map<int, double> core_mw;
    Placement placement;
    placement.core_of.assign(demand.classical.size(), 0);

    for (std::size_t idx : order) {
        const auto& d = demand.classical[idx];
        int best = 0;
        bool best_is_neighbor = true;
        double best_mw = std::numeric_limits<double>::infinity();
        for (int core = 1; core <= topology.core_count(); ++core) {
            if (core == quantum_core) continue;
            if (used_ordinals[core].count(d.ordinal)) continue;
            const bool is_neighbor = near.count(core) > 0;
            const double mw = core_mw[core];
            if (best == 0 || std::make_tuple(is_neighbor, mw, core) <
                                 std::make_tuple(best_is_neighbor, best_mw, best)) {
                best = core;
                best_is_neighbor = is_neighbor;
                best_mw = mw;
            }
        }
        if (best == 0)
            throw std::domain_error("no free core slot for classical ordinal " +
                                    std::to_string(d.ordinal));
        used_ordinals[best].insert(d.ordinal);
        core_mw[best] += dbm_to_mw(d.power_dbm);
        placement.core_of[idx] = best;
    }
    return placement;
}

// Exhaustive oracle. The objective is additive per channel and placement
// feasibility only couples channels of the same ordinal (one slot per core),
// so the joint optimum factorizes over ordinals; within an ordinal every
// injective placement into the classical cores is enumerated.
Placement exhaustive_placement(const TrafficDemand& demand, const CoreTopology& topology,
                               int quantum_core, const PlannerOptions& opts) {
    const std::set<int> near = topology.neighbors(quantum_core);
    std::vector<int> cores;
    for (int c = 1; c <= topology.core_count(); ++c)
        if (c != quantum_core) cores.push_back(c);

    std::map<int, std::vector<std::size_t>> by_ordinal;
    for (std::size_t i = 0; i < demand.classical.size(); ++i)
        by_ordinal[demand.classical[i].ordinal].push_back(i);

    Placement placement;
    placement.core_of.assign(demand.classical.size(), 0);

    for (const auto& [ordinal, members] : by_ordinal) {
        const std::size_t m = members.size();
        std::vector<int> current(m, 0), best_assign;
        double best_cost = std::numeric_limits<double>::infinity();
        std::set<int> taken;
        auto recurse = [&](auto&& self, std::size_t pos, double cost) -> void {
            if (pos == m) {
                if (cost < best_cost) {
                    best_cost = cost;
                    best_assign = current;
                }
                return;
            }
            for (int core : cores) {
                if (taken.count(core)) continue;
                taken.insert(core);
                current[pos] = core;
                const double add = near.count(core)
                                       ? channel_cost(demand.classical[members[pos]], opts)
                                       : 0.0;
                self(self, pos + 1, cost + add);
                taken.erase(core);
            }
        };
        recurse(recurse, 0, 0.0);
        for (std::size_t i = 0; i < m; ++i) placement.core_of[members[i]] = best_assign[i];
    }
    return placement;
}

double placement_cost(const TrafficDemand& demand, const CoreTopology& topology,
                      int quantum_core, const Placement& placement,
                      const PlannerOptions& opts) {
    const std::set<int> near = topology.neighbors(quantum_core);
    double cost = 0;
    for (std::size_t i = 0; i < demand.classical.size(); ++i)
        if (near.count(placement.core_of[i])) cost += channel_cost(demand.classical[i], opts);
    return cost;
}

} // namespace

int choose_quantum_core(const CoreTopology& topology,
                        const std::map<int, double>& per_core_mw) {
    const std::vector<int> outers = outer_cores(topology);
    if (outers.empty()) throw std::domain_error("topology has no outer core");

    // outers is ascending, so strict < keeps the lowest index on ties.
    int best = 0;
    double best_power = std::numeric_limits<double>::infinity();
    for (int core : outers) {
        double p = 0;
        for (int n : topology.neighbors(core)) {
            auto it = per_core_mw.find(n);
            if (it != per_core_mw.end()) p += it->second;
        }
        if (best == 0 || p < best_power) {
            best = core;
            best_power = p;
        }
    }
    return best;
}

ChannelPlan assign_channels(const TrafficDemand& demand, const CoreTopology& topology,
                            const FrequencyGrid& grid, const PlannerOptions& opts) {
    check_demand(demand, topology, grid);

    if (!opts.exhaustive) {
        const int quantum_core = choose_quantum_core(topology, {});
        return build_plan(demand, topology, grid, quantum_core,
                          greedy_placement(demand, topology, grid, quantum_core, opts));
    }

    // Exhaustive mode also ranges over the quantum core choice.
    int best_core = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    Placement best_placement;
    for (int core : outer_cores(topology)) {
        Placement p = exhaustive_placement(demand, topology, core, opts);
        const double cost = placement_cost(demand, topology, core, p, opts);
        if (best_core == 0 || cost < best_cost) {
            best_core = core;
            best_cost = cost;
            best_placement = p;
        }
    }
    if (best_core == 0) throw std::domain_error("topology has no outer core");
    return build_plan(demand, topology, grid, best_core, best_placement);
}

double plan_xt_cost(const ChannelPlan& plan, const xtmodel::XtalkModel& model,
                    double eval_length_km) {
    return xtmodel::predict_xt_pcr(model, plan, eval_length_km, Direction::Co) +
           xtmodel::predict_xt_pcr(model, plan, eval_length_km, Direction::Counter);
}

double plan_neighbor_power_mw(const ChannelPlan& plan) {
    const std::set<int> near = plan.topology.neighbors(plan.quantum_core);
    double mw = 0;
    for (const auto& a : plan.assignments)
        if (a.role == fibergrid::Role::Classical && near.count(a.core) && a.launch_power_dbm)
            mw += dbm_to_mw(*a.launch_power_dbm);
    return mw;
}

} // namespace mcqkd::planner
