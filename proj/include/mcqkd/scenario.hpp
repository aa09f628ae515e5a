#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcqkd/qkdrate.hpp"

namespace mcqkd::scenario {

using qkdrate::DecoyParams;
using qkdrate::LinkResult;
using qkdrate::LinkScenario;

enum class SweepVariable { LengthKm, PowerDbm };

SweepVariable parse_sweep_variable(const std::string& s);
std::string to_string(SweepVariable v);

// One curve of a sweep: a propagation direction with or without the extra
// receiver filter. The variant direction is applied to the scenario and to
// every classical channel of the plan.
struct SweepVariant {
    fibergrid::Direction direction = fibergrid::Direction::Counter;
    bool with_filter = false;

    std::string label() const; // "counter", "co+filter", ...
};

SweepVariant parse_variant(const std::string& label);

struct SweepSpec {
    SweepVariable variable = SweepVariable::LengthKm;
    double start = 1;
    double stop = 60;
    double step = 1;
    LinkScenario base;
    std::vector<SweepVariant> variants;

    void validate() const;
    std::vector<double> grid() const;
};

struct CurvePoint {
    double x = 0;
    LinkResult result;
};

struct Curve {
    std::string label;
    std::vector<CurvePoint> points; // x strictly increasing
};

// One curve per variant, points in grid order; fully deterministic.
std::vector<Curve> run_sweep(const SweepSpec& spec, const xtmodel::XtalkModel& model,
                             const DecoyParams& params);

// Bench emulation of a longer fiber: a VOA supplies the extra attenuation and
// the classical launch power is raised to reproduce the length-proportional
// crosstalk at the physical spool length.
struct Emulation {
    double voa_db = 0;
    double power_boost_db = 0;
};

Emulation emulate_length(double target_km, double base_km, double attenuation_db_per_km);

// Smallest x where sign(a.skr - b.skr) flips, linearly interpolated between
// the bracketing grid points; a flip exactly on a grid point returns that x.
std::optional<double> find_crossover(const Curve& a, const Curve& b);

// Largest x with positive secure key rate; 0 when the curve never keys.
double max_reach(const Curve& curve);

struct BaselineCalibration {
    double e_detector = 0;
    double fixed_losses_db = 0;
};

// Solves (e_detector, fixed_losses) so the zero-crosstalk prediction of
// `scenario` hits the measured back-to-back SKR and QBER. Alternates
// coordinate-wise bisection: SKR is monotone in the loss at fixed e_detector,
// QBER is monotone in e_detector at fixed loss.
BaselineCalibration calibrate_baseline(double target_skr_bps, double target_qber,
                                       const LinkScenario& scenario,
                                       const DecoyParams& params);

} // namespace mcqkd::scenario
