#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "mcqkd/fibergrid.hpp"

namespace mcqkd::xtmodel {

using fibergrid::Direction;

// One gated-detector noise measurement: the photon count rate observed in the
// quantum core while classical signals are launched into a set of cores.
struct MeasurementRecord {
    double launch_power_dbm = 0; // per classical input port
    double pcr_cps = 0;
    Direction direction = Direction::Co;
    std::set<int> active_cores;
    FreqMhz probe_freq_mhz = 0;
    double fiber_length_km = 0;
    double filter_loss_db = 0; // receiver filter chain present during the measurement
};

// Calibrated intercore-crosstalk coefficients. chi is counts/s per mW of
// per-port launch power, per km of fiber, per active neighbor core; the noise
// in the quantum core scales linearly in all three.
struct XtalkModel {
    double chi_co = 0;
    double chi_counter = 0;
    double reference_filter_loss_db = 0; // filter chain present during calibration
    double dark_floor_cps = 0;

    bool calibrated() const { return chi_co > 0 && chi_counter > 0 && dark_floor_cps >= 0; }
};

struct FilterSpec {
    double insertion_loss_db = 0;
    double passband_nm = 0;
    double out_of_band_isolation_db = 0;
};

// Per measurement configuration (direction + core set + length).
struct GroupStats {
    Direction direction = Direction::Co;
    std::set<int> cores;
    double fiber_length_km = 0;
    double chi = 0;
    std::optional<double> r_squared; // of PCR vs linear power, when fittable
    std::size_t record_count = 0;
    std::size_t clamped = 0; // dark-subtracted PCRs clamped at zero
};

struct CalibrationResult {
    XtalkModel model;
    std::vector<GroupStats> groups;
};

// Mean over records of PCR / 10^(P_dBm/10): the photon count rate normalized
// to 0 dBm (1 mW) launch power. All records must share direction, core set,
// fiber length and filter chain.
double weighted_avg_pcr(const std::vector<MeasurementRecord>& records);

// Fits one chi per propagation direction: chi = dark-subtracted normalized PCR
// per active core per km, pooled over all records of that direction. Records
// must contain both directions and a single filter chain, and are assumed to
// have been taken with classical power in nearest-neighbor cores of the probe
// core (only the core count enters the normalization).
CalibrationResult calibrate_detailed(const std::vector<MeasurementRecord>& records,
                                     double dark_floor_cps);
XtalkModel calibrate(const std::vector<MeasurementRecord>& records, double dark_floor_cps);

struct LinearFit {
    double slope = 0;     // counts/s per mW
    double intercept = 0; // counts/s
    double r_squared = 0; // 0 by convention when PCR has no variance
};

// Ordinary least squares of PCR against linear-scale (mW) launch power.
// Needs >= 3 records of one configuration with distinct powers.
LinearFit fit_linearity(const std::vector<MeasurementRecord>& records);

// Predicted crosstalk photon count rate in the quantum core of `plan`:
// chi_direction * sum of linear launch powers of classical channels that sit
// in nearest-neighbor cores and propagate in `direction`, times length.
// Channel frequencies never enter. An extra receiver filter attenuates the
// noise path by its insertion loss plus `extra_rejection_db`.
double predict_xt_pcr(const XtalkModel& model, const fibergrid::ChannelPlan& plan,
                      double length_km, Direction direction,
                      const std::optional<FilterSpec>& extra_filter = std::nullopt,
                      double extra_rejection_db = 0.0);

// Predictions beyond this rate are outside plausible single-photon-detector
// operation and get flagged downstream.
inline constexpr double kXtWarningThresholdCps = 1e6;

} // namespace mcqkd::xtmodel
