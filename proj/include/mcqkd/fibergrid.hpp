#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mcqkd/units.hpp"

namespace mcqkd::fibergrid {

enum class Role { Quantum, Classical, Sync };

// Propagation direction of a channel relative to the quantum signal.
enum class Direction { Co, Counter };

std::string to_string(Role r);
std::string to_string(Direction d);
Role parse_role(const std::string& s);
Direction parse_direction(const std::string& s);

// Core layout of a weakly coupled multicore fiber. Cores are 1-based; the
// default is the 7-core hexagonal layout: core 1 in the center, cores 2..7 on
// the outer ring in cyclic order, so core 3's nearest neighbors are {1,2,4}.
class CoreTopology {
  public:
    static CoreTopology hexagonal7();

    // Explicit layout for non-default fibers. Adjacency pairs are unordered,
    // irreflexive, and must reference existing cores.
    CoreTopology(int core_count, int center_core,
                 std::set<std::pair<int, int>> adjacency);

    int core_count() const { return core_count_; }
    int center_core() const { return center_core_; }
    bool has_core(int core) const { return core >= 1 && core <= core_count_; }
    bool is_outer(int core) const { return has_core(core) && core != center_core_; }

    // All cores adjacent to `core`; throws std::domain_error on unknown cores.
    std::set<int> neighbors(int core) const;

    const std::set<std::pair<int, int>>& adjacency() const { return adjacency_; }

  private:
    int core_count_;
    int center_core_;
    std::set<std::pair<int, int>> adjacency_; // normalized first < second
};

// DWDM grid: classical channel n sits at f0 + (n-1)*delta_f; quantum channel k
// is interleaved midway at f0 + (k-1/2)*delta_f.
struct FrequencyGrid {
    FreqMhz f0_mhz = 0;
    FreqMhz delta_f_mhz = 0;
    int channel_count = 0;

    FrequencyGrid() = default;
    FrequencyGrid(FreqMhz f0, FreqMhz delta_f, int count);
};

FreqMhz classical_frequency(int n, const FrequencyGrid& grid);
FreqMhz quantum_frequency(int k, const FrequencyGrid& grid);

struct ChannelAssignment {
    int core = 0;
    FreqMhz freq_mhz = 0;
    Role role = Role::Classical;
    Direction direction = Direction::Co;
    std::optional<double> launch_power_dbm; // absent for quantum channels
};

struct ChannelPlan {
    CoreTopology topology = CoreTopology::hexagonal7();
    FrequencyGrid grid;
    std::vector<ChannelAssignment> assignments;
    int quantum_core = 0;
};

// Violations are data, not errors; an empty list means the plan is valid.
// The check order (and therefore the output order) is deterministic.
std::vector<std::string> validate_plan(const ChannelPlan& plan);

} // namespace mcqkd::fibergrid
