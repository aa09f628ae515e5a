#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>

#include "mcqkd/fibergrid.hpp"
#include "test_helpers.hpp"

using namespace mcqkd;
using namespace mcqkd::fibergrid;

TEST_CASE("classical frequencies sit on the grid comb") {
    const FrequencyGrid grid(193350000, 100000, 4);
    CHECK(classical_frequency(1, grid) == 193350000); // 193.35 THz
    CHECK(classical_frequency(2, grid) == 193450000);
    CHECK(classical_frequency(4, grid) == 193650000); // 193.65 THz
    CHECK_THROWS_AS(classical_frequency(0, grid), std::domain_error);
    CHECK_THROWS_WITH_AS(classical_frequency(5, grid),
                         "classical channel ordinal 5 out of range [1, 4]", std::domain_error);

    const FrequencyGrid empty(193350000, 100000, 0);
    CHECK_THROWS_AS(classical_frequency(1, empty), std::domain_error);
}

TEST_CASE("quantum frequencies interleave midway") {
    const FrequencyGrid grid(193350000, 100000, 4);
    CHECK(quantum_frequency(1, grid) == 193400000);
    CHECK(quantum_frequency(2, grid) == 193500000); // 193.5 THz
    CHECK_THROWS_AS(quantum_frequency(0, grid), std::domain_error);

    const FrequencyGrid tiny(100000, 100000, 4); // f0 = 0.1 THz
    CHECK(quantum_frequency(1, tiny) == 150000);  // 0.15 THz
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(FrequencyGrid(193350000, 0, 4), std::domain_error);
    CHECK_THROWS_AS(FrequencyGrid(193350000, -100, 4), std::domain_error);
    CHECK_THROWS_AS(FrequencyGrid(193350000, 12345, 4), std::domain_error); // odd MHz
    CHECK_THROWS_AS(FrequencyGrid(0, 100000, 4), std::domain_error);
    CHECK_THROWS_AS(FrequencyGrid(193350000, 100000, -1), std::domain_error);
}

TEST_CASE("interleave offset and minimum separation are exact") {
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<FreqMhz> f0_ghz(1, 400000);
    std::uniform_int_distribution<FreqMhz> df_ghz(1, 500);
    std::uniform_int_distribution<int> ordinal(1, 100);
    for (int trial = 0; trial < 2000; ++trial) {
        const FrequencyGrid grid(f0_ghz(rng) * 1000, df_ghz(rng) * 1000, 100);
        const int k = ordinal(rng);
        const FreqMhz half = grid.delta_f_mhz / 2;

        CHECK(quantum_frequency(k, grid) - classical_frequency(k, grid) == half);

        FreqMhz min_sep = std::numeric_limits<FreqMhz>::max();
        for (int n = 1; n <= grid.channel_count; ++n) {
            const FreqMhz d = std::abs(quantum_frequency(k, grid) - classical_frequency(n, grid));
            min_sep = std::min(min_sep, d);
        }
        CHECK(min_sep == half);
    }
}

TEST_CASE("hexagonal neighbors match the ring convention") {
    const auto topo = CoreTopology::hexagonal7();
    CHECK(topo.neighbors(3) == std::set<int>{1, 2, 4});
    CHECK(topo.neighbors(1) == std::set<int>{2, 3, 4, 5, 6, 7});
    CHECK(topo.neighbors(5) == std::set<int>{1, 4, 6});
    CHECK_THROWS_AS(topo.neighbors(8), std::domain_error);
    CHECK_THROWS_AS(topo.neighbors(0), std::domain_error);
}

TEST_CASE("adjacency is symmetric with the expected degrees") {
    const auto topo = CoreTopology::hexagonal7();
    for (int a = 1; a <= 7; ++a)
        for (int b : topo.neighbors(a))
            CHECK(topo.neighbors(b).count(a) == 1);
    CHECK(topo.neighbors(topo.center_core()).size() == 6);
    for (int outer = 2; outer <= 7; ++outer) {
        CHECK(topo.is_outer(outer));
        CHECK(topo.neighbors(outer).size() == 3);
        CHECK(topo.neighbors(outer).count(1) == 1); // ring cores always touch the center
    }
}

TEST_CASE("custom topologies validate their adjacency") {
    const CoreTopology line(3, 2, {{1, 2}, {2, 3}});
    CHECK(line.neighbors(2) == std::set<int>{1, 3});
    CHECK(line.is_outer(1));
    CHECK_FALSE(line.is_outer(2));
    CHECK_THROWS_AS(CoreTopology(3, 4, {{1, 2}}), std::domain_error);  // center out of range
    CHECK_THROWS_AS(CoreTopology(3, 1, {{2, 2}}), std::domain_error);  // reflexive
    CHECK_THROWS_AS(CoreTopology(3, 1, {{1, 9}}), std::domain_error);  // unknown core
    CHECK_THROWS_AS(CoreTopology(0, 1, {}), std::domain_error);
}

TEST_CASE("the metro plan validates cleanly") {
    const auto plan = helpers::metro_plan();
    CHECK(validate_plan(plan).empty());
}

TEST_CASE("center quantum core is a single violation") {
    auto plan = helpers::metro_plan();
    plan.quantum_core = 1;
    for (auto& a : plan.assignments)
        if (a.role != Role::Classical) a.core = 1;
    // classical channels sit in cores 1,2,4: core 1 now hosts a classical
    // channel in the quantum core, so keep classical clear of core 1
    for (auto& a : plan.assignments)
        if (a.role == Role::Classical && a.core == 1) a.core = 5;
    const auto violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("quantum core must be outer") != std::string::npos);
}

TEST_CASE("quantum-classical separation below half spacing is a violation") {
    auto plan = helpers::make_plan({{2, 0.0, Direction::Counter, 193500000}});
    const auto violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("below delta_f/2") != std::string::npos);
}

TEST_CASE("off-comb quantum frequency is a violation") {
    auto plan = helpers::metro_plan();
    plan.assignments[0].freq_mhz = 193450000; // a classical slot
    const auto violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("not an interleave frequency") != std::string::npos);
}

TEST_CASE("classical channel in the quantum core is a violation") {
    auto plan = helpers::metro_plan();
    plan.assignments.push_back({3, 193400000, Role::Classical, Direction::Counter, 0.0});
    const auto violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("classical channel occupies the quantum core") != std::string::npos);
}

TEST_CASE("sync must share core and direction with the quantum channel") {
    auto plan = helpers::metro_plan();
    for (auto& a : plan.assignments)
        if (a.role == Role::Sync) a.core = 5;
    auto violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("sync channel must share the quantum core") != std::string::npos);

    plan = helpers::metro_plan();
    for (auto& a : plan.assignments)
        if (a.role == Role::Sync) a.direction = Direction::Counter;
    violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("direction differs") != std::string::npos);
}

TEST_CASE("unknown cores and missing quantum core are reported") {
    auto plan = helpers::metro_plan();
    plan.assignments[2].core = 9;
    auto violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("unknown core 9") != std::string::npos);

    plan = helpers::metro_plan();
    plan.quantum_core = 42;
    violations = validate_plan(plan);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("not in topology") != std::string::npos);
}

TEST_CASE("validation is pure and deterministic") {
    auto plan = helpers::metro_plan();
    plan.quantum_core = 1; // outer-core violation plus untouched channels in core 3
    plan.assignments.push_back({1, 193450000, Role::Classical, Direction::Counter, 0.0});
    const auto first = validate_plan(plan);
    const auto second = validate_plan(plan);
    CHECK(first == second);
    CHECK_FALSE(first.empty());
}
