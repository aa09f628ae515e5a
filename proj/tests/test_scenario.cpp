#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mcqkd/errors.hpp"
#include "mcqkd/scenario.hpp"
#include "test_helpers.hpp"

using namespace mcqkd;
using namespace mcqkd::scenario;
using fibergrid::Direction;

namespace {

SweepSpec metro_sweep(SweepVariable var, double start, double stop, double step,
                      std::vector<SweepVariant> variants) {
    SweepSpec spec;
    spec.variable = var;
    spec.start = start;
    spec.stop = stop;
    spec.step = step;
    spec.base = helpers::metro_scenario();
    spec.base.extra_filter = helpers::narrow_filter();
    spec.base.filter_xt_rejection_db = 7.5;
    spec.variants = std::move(variants);
    return spec;
}

Curve synthetic_curve(const std::vector<double>& xs, const std::vector<double>& skrs) {
    Curve c;
    c.label = "synthetic";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        qkdrate::LinkResult r;
        r.skr_bps = skrs[i];
        c.points.push_back({xs[i], r});
    }
    return c;
}

} // namespace

TEST_CASE("sweep grids are index based and inclusive") {
    SweepSpec spec = metro_sweep(SweepVariable::LengthKm, 1, 60, 1, {});
    CHECK(spec.grid().size() == 60);
    CHECK(spec.grid().front() == 1.0);
    CHECK(spec.grid().back() == 60.0);

    spec = metro_sweep(SweepVariable::PowerDbm, 5, 5, 1, {});
    CHECK(spec.grid() == std::vector<double>{5.0});

    spec = metro_sweep(SweepVariable::LengthKm, 1, 2, 0.1, {});
    CHECK(spec.grid().size() == 11);

    spec.step = 0;
    CHECK_THROWS_AS(spec.validate(), std::domain_error);
    spec.step = 1;
    spec.start = 3;
    spec.stop = 2;
    CHECK_THROWS_AS(spec.validate(), std::domain_error);
}

TEST_CASE("variant labels round trip") {
    CHECK(SweepVariant{Direction::Counter, false}.label() == "counter");
    CHECK(SweepVariant{Direction::Co, true}.label() == "co+filter");
    CHECK(parse_variant("co+filter").with_filter);
    CHECK(parse_variant("co+filter").direction == Direction::Co);
    CHECK_FALSE(parse_variant("counter").with_filter);
    CHECK_THROWS_AS(parse_variant("sideways"), std::domain_error);
}

TEST_CASE("run_sweep returns one deterministic curve per variant") {
    const auto model = helpers::make_model();
    const auto params = helpers::metro_decoy();
    const SweepSpec spec = metro_sweep(SweepVariable::LengthKm, 1, 60, 1,
                                       {{Direction::Counter, false},
                                        {Direction::Co, true},
                                        {Direction::Co, false}});
    const auto curves = run_sweep(spec, model, params);
    REQUIRE(curves.size() == 3);
    CHECK(curves[0].label == "counter");
    CHECK(curves[1].label == "co+filter");
    CHECK(curves[2].label == "co");
    for (const auto& c : curves) {
        CHECK(c.points.size() == 60);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            CHECK(c.points[i].x > c.points[i - 1].x);
            CHECK(c.points[i].result.skr_bps <= c.points[i - 1].result.skr_bps); // curve sanity
        }
    }
    // counter-propagation reaches farthest
    CHECK(max_reach(curves[0]) > max_reach(curves[1]));
    CHECK(max_reach(curves[1]) > max_reach(curves[2]));

    const auto again = run_sweep(spec, model, params);
    for (std::size_t c = 0; c < curves.size(); ++c)
        for (std::size_t i = 0; i < curves[c].points.size(); ++i)
            CHECK(curves[c].points[i].result.skr_bps == again[c].points[i].result.skr_bps);
}

TEST_CASE("power sweeps rewrite the classical launch powers") {
    const auto model = helpers::make_model();
    const auto params = helpers::metro_decoy();
    const SweepSpec spec = metro_sweep(SweepVariable::PowerDbm, 0, 12, 1,
                                       {{Direction::Counter, false}, {Direction::Co, false}});
    const auto curves = run_sweep(spec, model, params);
    REQUIRE(curves.size() == 2);
    // counter barely moves
    const auto& counter = curves[0].points;
    double mx = 0, mn = 1e18;
    for (const auto& p : counter) {
        mx = std::max(mx, p.result.skr_bps);
        mn = std::min(mn, p.result.skr_bps);
    }
    CHECK((mx - mn) / mx < 0.05);
    // co-propagation degrades with power
    const auto& co = curves[1].points;
    CHECK(co.back().result.skr_bps < co.front().result.skr_bps);
    // crosstalk scales with the per-port power on every point
    CHECK(co[9].result.xt_pcr_cps ==
          doctest::Approx(model.chi_co * 3 * dbm_to_mw(9.0)).epsilon(1e-12));
}

TEST_CASE("empty variant lists give empty results") {
    const auto curves = run_sweep(metro_sweep(SweepVariable::LengthKm, 1, 5, 1, {}),
                                  helpers::make_model(), helpers::metro_decoy());
    CHECK(curves.empty());
}

TEST_CASE("filter variants need a filter spec") {
    SweepSpec spec = metro_sweep(SweepVariable::LengthKm, 1, 5, 1, {{Direction::Co, true}});
    spec.base.extra_filter.reset();
    CHECK_THROWS_AS(run_sweep(spec, helpers::make_model(), helpers::metro_decoy()),
                    std::domain_error);
}

TEST_CASE("sweep errors carry the offending point") {
    SweepSpec spec = metro_sweep(SweepVariable::LengthKm, 1, 5, 1, {{Direction::Co, false}});
    spec.base.plan.quantum_core = 1; // invalid plan -> domain error at the first point
    try {
        run_sweep(spec, helpers::make_model(), helpers::metro_decoy());
        FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("length_km=1") != std::string::npos);
        CHECK(std::string(e.what()).find("variant 'co'") != std::string::npos);
    }
}

TEST_CASE("length emulation splits into attenuation and power boost") {
    const Emulation e10 = emulate_length(10.0, 1.0, 0.23);
    CHECK(e10.voa_db == doctest::Approx(0.23 * 9).epsilon(1e-12));
    CHECK(e10.power_boost_db == doctest::Approx(10.0).epsilon(1e-12));

    const Emulation e30 = emulate_length(30.0, 1.0, 0.23);
    CHECK(e30.power_boost_db == doctest::Approx(14.7712125471966).epsilon(1e-12));
    CHECK(std::abs(e30.power_boost_db - 14.8) < 0.05);

    const Emulation same = emulate_length(7.0, 7.0, 0.23);
    CHECK(same.voa_db == 0.0);
    CHECK(same.power_boost_db == 0.0);

    CHECK_THROWS_AS(emulate_length(1.0, 2.0, 0.23), std::domain_error);
    CHECK_THROWS_AS(emulate_length(1.0, 0.0, 0.23), std::domain_error);
}

TEST_CASE("emulation consistency holds through the full pipeline") {
    const auto model = helpers::make_model();
    const auto params = helpers::metro_decoy();
    for (double target : {5.0, 15.0, 30.0}) {
        for (double p : {0.0, 3.0}) {
            qkdrate::LinkScenario full = helpers::metro_scenario(target);
            full.plan = helpers::metro_plan(p);
            const double direct = qkdrate::secure_key_rate(full, model, params).skr_bps;

            const Emulation e = emulate_length(target, 1.0, full.attenuation_db_per_km);
            qkdrate::LinkScenario bench = helpers::metro_scenario(1.0);
            bench.fixed_losses_db += e.voa_db;
            bench.plan = helpers::metro_plan(p + e.power_boost_db);
            const double emulated = qkdrate::secure_key_rate(bench, model, params).skr_bps;
            if (direct > 0) {
                CHECK(emulated == doctest::Approx(direct).epsilon(1e-9));
            } else {
                CHECK(emulated == 0.0);
            }
        }
    }
}

TEST_CASE("crossover detection") {
    // identical curves -> none
    const Curve a = synthetic_curve({1, 2, 3, 4}, {10, 8, 6, 4});
    CHECK_FALSE(find_crossover(a, a).has_value());

    // clean sign flip between x=2 and x=3, interpolated: d = +2, -1 -> 2 + 2/3
    const Curve b = synthetic_curve({1, 2, 3, 4}, {7, 6, 7, 8});
    const auto x = find_crossover(a, b);
    REQUIRE(x.has_value());
    CHECK(*x == doctest::Approx(2.0 + 2.0 / 3.0).epsilon(1e-12));

    // flip exactly on a grid point
    const Curve c = synthetic_curve({1, 2, 3, 4}, {8, 8, 7, 3});
    const auto gx = find_crossover(a, c);
    REQUIRE(gx.has_value());
    CHECK(*gx == 2.0);

    // no flip: one curve always above
    const Curve d = synthetic_curve({1, 2, 3, 4}, {1, 1, 1, 1});
    CHECK_FALSE(find_crossover(a, d).has_value());

    // mismatched grids
    const Curve e = synthetic_curve({1, 2, 3}, {1, 1, 1});
    CHECK_THROWS_AS(find_crossover(a, e), std::domain_error);
    const Curve f = synthetic_curve({1, 2, 3, 5}, {1, 1, 1, 1});
    CHECK_THROWS_AS(find_crossover(a, f), std::domain_error);
}

TEST_CASE("max reach") {
    CHECK(max_reach(synthetic_curve({1, 2, 3}, {5, 1, 0})) == 2.0);
    CHECK(max_reach(synthetic_curve({1, 2, 3}, {0, 0, 0})) == 0.0);
    CHECK(max_reach(synthetic_curve({1, 2, 3}, {5, 4, 3})) == 3.0);
    CHECK_THROWS_AS(max_reach(Curve{}), std::domain_error);
}

TEST_CASE("baseline calibration hits the metro targets") {
    qkdrate::LinkScenario base = helpers::metro_scenario();
    base.plan = helpers::make_plan({}, true); // no classical channels
    const auto cal = calibrate_baseline(10900.0, 0.0062, base, qkdrate::DecoyParams{});
    CHECK(cal.e_detector > 0.0);
    CHECK(cal.e_detector < 0.1);
    CHECK(cal.fixed_losses_db > 0.0);
    CHECK(cal.fixed_losses_db < 30.0);

    qkdrate::LinkScenario solved = base;
    solved.fixed_losses_db = cal.fixed_losses_db;
    qkdrate::DecoyParams params;
    params.e_detector = cal.e_detector;
    const auto r = qkdrate::evaluate_with_xt(solved, params, 0.0);
    CHECK(std::abs(r.skr_bps - 10900.0) <= 0.001 * 10900.0);
    CHECK(std::abs(r.e_mu - 0.0062) <= 0.001 * 0.0062);
}

TEST_CASE("baseline calibration round trips a known operating point") {
    qkdrate::LinkScenario base = helpers::metro_scenario();
    base.plan = helpers::make_plan({}, true);
    base.fixed_losses_db = 14.0;
    qkdrate::DecoyParams params;
    params.e_detector = 0.005;
    const auto targets = qkdrate::evaluate_with_xt(base, params, 0.0);

    const auto cal = calibrate_baseline(targets.skr_bps, targets.e_mu, base, qkdrate::DecoyParams{});
    CHECK(std::abs(cal.e_detector - 0.005) < 1e-4);
    CHECK(std::abs(cal.fixed_losses_db - 14.0) < 1e-4);
    CHECK(cal.e_detector == doctest::Approx(0.005).epsilon(1e-6));
    CHECK(cal.fixed_losses_db == doctest::Approx(14.0).epsilon(1e-6));
}

TEST_CASE("baseline calibration failure modes") {
    qkdrate::LinkScenario base = helpers::metro_scenario();
    base.plan = helpers::make_plan({}, true);
    // QBER below the background floor is infeasible
    CHECK_THROWS_AS(calibrate_baseline(10900.0, 1e-9, base, qkdrate::DecoyParams{}),
                    CalibrationError);
    // absurdly high SKR cannot be met inside the loss range
    CHECK_THROWS_AS(calibrate_baseline(1e12, 0.0062, base, qkdrate::DecoyParams{}),
                    CalibrationError);
    // classical channels present
    qkdrate::LinkScenario with_classical = helpers::metro_scenario();
    CHECK_THROWS_AS(calibrate_baseline(10900.0, 0.0062, with_classical, qkdrate::DecoyParams{}),
                    std::domain_error);
    CHECK_THROWS_AS(calibrate_baseline(-1.0, 0.0062, base, qkdrate::DecoyParams{}),
                    std::domain_error);
}
