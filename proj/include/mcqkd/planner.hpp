#pragma once

#include <map>
#include <vector>

#include "mcqkd/fibergrid.hpp"
#include "mcqkd/xtmodel.hpp"

namespace mcqkd::planner {

using fibergrid::ChannelPlan;
using fibergrid::CoreTopology;
using fibergrid::Direction;
using fibergrid::FrequencyGrid;

struct ClassicalDemand {
    int ordinal = 1; // position on the classical frequency comb
    double power_dbm = 0;
    Direction direction = Direction::Counter;
};

struct TrafficDemand {
    std::vector<ClassicalDemand> classical;
    int quantum_count = 1;
    bool sync_required = false;
};

// The outer core whose nearest neighbors carry the least total classical
// power; ties break to the lowest core index. The center core is never chosen
// while an outer core exists.
int choose_quantum_core(const CoreTopology& topology,
                        const std::map<int, double>& per_core_mw);

struct PlannerOptions {
    // When set, the packing objective is the predicted crosstalk PCR into the
    // quantum channel (both directions, at eval_length_km); otherwise the
    // neighbor-core linear power sum.
    const xtmodel::XtalkModel* model = nullptr;
    bool exhaustive = false;
    double eval_length_km = 1.0;
};

// Produces a plan with zero validate_plan violations: quantum channels on the
// interleave comb in the chosen quantum core, classical channels packed into
// the remaining cores (non-neighbors first, then neighbors by ascending
// accumulated cost), sync co-located with the quantum channel.
ChannelPlan assign_channels(const TrafficDemand& demand, const CoreTopology& topology,
                            const FrequencyGrid& grid, const PlannerOptions& opts = {});

// Planner objective for a finished plan: total predicted crosstalk into the
// quantum channel over both propagation directions.
double plan_xt_cost(const ChannelPlan& plan, const xtmodel::XtalkModel& model,
                    double eval_length_km);

// Fallback objective without a model: total linear power in neighbor cores.
double plan_neighbor_power_mw(const ChannelPlan& plan);

} // namespace mcqkd::planner
