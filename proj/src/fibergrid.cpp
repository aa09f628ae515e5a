#include "mcqkd/fibergrid.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcqkd::fibergrid {

std::string to_string(Role r) {
    switch (r) {
    case Role::Quantum: return "quantum";
    case Role::Classical: return "classical";
    case Role::Sync: return "sync";
    }
    return "?";
}

std::string to_string(Direction d) { return d == Direction::Co ? "co" : "counter"; }

Role parse_role(const std::string& s) {
    if (s == "quantum") return Role::Quantum;
    if (s == "classical") return Role::Classical;
    if (s == "sync") return Role::Sync;
    throw std::domain_error("unknown channel role '" + s + "'");
}

Direction parse_direction(const std::string& s) {
    if (s == "co") return Direction::Co;
    if (s == "counter") return Direction::Counter;
    throw std::domain_error("unknown direction '" + s + "' (expected co or counter)");
}

CoreTopology CoreTopology::hexagonal7() {
    std::set<std::pair<int, int>> adj;
    for (int outer = 2; outer <= 7; ++outer) adj.emplace(1, outer);
    for (int outer = 2; outer <= 7; ++outer) {
        int next = outer == 7 ? 2 : outer + 1;
        adj.emplace(std::min(outer, next), std::max(outer, next));
    }
    return CoreTopology(7, 1, std::move(adj));
}

CoreTopology::CoreTopology(int core_count, int center_core,
                           std::set<std::pair<int, int>> adjacency)
    : core_count_(core_count), center_core_(center_core) {
    if (core_count < 1) throw std::domain_error("topology needs at least one core");
    if (center_core < 1 || center_core > core_count)
        throw std::domain_error("center core " + std::to_string(center_core) + " not in 1.." + std::to_string(core_count));
    for (auto [a, b] : adjacency) {
        if (a == b) throw std::domain_error("adjacency pair may not be reflexive: " + std::to_string(a));
        if (a < 1 || a > core_count || b < 1 || b > core_count)
            throw std::domain_error("adjacency pair (" + std::to_string(a) + "," + std::to_string(b) + ") references unknown core");
        adjacency_.emplace(std::min(a, b), std::max(a, b));
    }
}

std::set<int> CoreTopology::neighbors(int core) const {
    if (!has_core(core))
        throw std::domain_error("unknown core index " + std::to_string(core));
    std::set<int> out;
    for (auto [a, b] : adjacency_) {
        if (a == core) out.insert(b);
        if (b == core) out.insert(a);
    }
    return out;
}

FrequencyGrid::FrequencyGrid(FreqMhz f0, FreqMhz delta_f, int count)
    : f0_mhz(f0), delta_f_mhz(delta_f), channel_count(count) {
    if (delta_f <= 0) throw std::domain_error("grid delta_f must be positive");
    if (delta_f % 2 != 0)
        throw std::domain_error("grid delta_f must be an even number of MHz so the half-spacing offset stays exact");
    if (f0 <= 0) throw std::domain_error("grid f0 must be positive");
    if (count < 0) throw std::domain_error("grid channel_count must be non-negative");
}

FreqMhz classical_frequency(int n, const FrequencyGrid& grid) {
    if (n < 1 || n > grid.channel_count)
        throw std::domain_error("classical channel ordinal " + std::to_string(n) +
                                " out of range [1, " + std::to_string(grid.channel_count) + "]");
    return grid.f0_mhz + static_cast<FreqMhz>(n - 1) * grid.delta_f_mhz;
}

FreqMhz quantum_frequency(int k, const FrequencyGrid& grid) {
    if (k < 1)
        throw std::domain_error("quantum channel ordinal " + std::to_string(k) + " must be >= 1");
    return grid.f0_mhz + static_cast<FreqMhz>(2 * k - 1) * (grid.delta_f_mhz / 2);
}

namespace {

std::string ghz(FreqMhz f) { return format_mhz_as_ghz(f) + " GHz"; }

// k >= 1 with freq == f0 + (2k-1) * delta_f/2 exactly.
bool on_interleave_grid(FreqMhz freq, const FrequencyGrid& grid) {
    FreqMhz half = grid.delta_f_mhz / 2;
    FreqMhz r = freq - grid.f0_mhz;
    if (r < half) return false;
    if (r % half != 0) return false;
    return (r / half) % 2 == 1;
}

} // namespace

std::vector<std::string> validate_plan(const ChannelPlan& plan) {
    std::vector<std::string> v;
    const auto& topo = plan.topology;

    if (!topo.has_core(plan.quantum_core)) {
        v.push_back("quantum core " + std::to_string(plan.quantum_core) + " not in topology");
        return v; // nothing below is meaningful without a quantum core
    }
    if (!topo.is_outer(plan.quantum_core))
        v.push_back("quantum core must be outer, got center core " + std::to_string(plan.quantum_core));

    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
        const auto& a = plan.assignments[i];
        if (!topo.has_core(a.core))
            v.push_back("channel " + std::to_string(i + 1) + ": unknown core " + std::to_string(a.core));
    }

    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
        const auto& a = plan.assignments[i];
        if (a.role == Role::Quantum && !on_interleave_grid(a.freq_mhz, plan.grid))
            v.push_back("channel " + std::to_string(i + 1) + ": quantum frequency " + ghz(a.freq_mhz) +
                        " is not an interleave frequency of the grid");
    }

    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
        const auto& a = plan.assignments[i];
        if (a.role == Role::Classical && a.core == plan.quantum_core)
            v.push_back("channel " + std::to_string(i + 1) + ": classical channel occupies the quantum core");
    }

    const FreqMhz half = plan.grid.delta_f_mhz / 2;
    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
        const auto& q = plan.assignments[i];
        if (q.role != Role::Quantum) continue;
        for (std::size_t j = 0; j < plan.assignments.size(); ++j) {
            const auto& c = plan.assignments[j];
            if (c.role != Role::Classical) continue;
            FreqMhz sep = q.freq_mhz > c.freq_mhz ? q.freq_mhz - c.freq_mhz : c.freq_mhz - q.freq_mhz;
            if (sep < half)
                v.push_back("quantum " + ghz(q.freq_mhz) + " and classical " + ghz(c.freq_mhz) +
                            " separated by " + ghz(sep) + ", below delta_f/2 = " + ghz(half));
        }
    }

    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
        const auto& a = plan.assignments[i];
        if (a.role != Role::Sync) continue;
        if (a.core != plan.quantum_core)
            v.push_back("channel " + std::to_string(i + 1) + ": sync channel must share the quantum core");
        for (const auto& q : plan.assignments) {
            if (q.role == Role::Quantum && q.direction != a.direction) {
                v.push_back("channel " + std::to_string(i + 1) + ": sync channel direction differs from the quantum channel");
                break;
            }
        }
    }

    return v;
}

} // namespace mcqkd::fibergrid
