#pragma once

#include <optional>

#include "mcqkd/fibergrid.hpp"
#include "mcqkd/xtmodel.hpp"

namespace mcqkd::qkdrate {

using fibergrid::Direction;

// Vacuum-state error probability (a photon-free gate clicks on noise; the
// outcome is random).
inline constexpr double kVacuumError = 0.5;

// SPD gate rate at which the crosstalk PCR model was calibrated. Noise
// probability per gate is rate / calibration gate rate, assuming identical
// gate width at the operating clock.
inline constexpr double kCalibrationGateRateHz = 20e6;

struct StateRatio {
    int signal = 14;
    int decoy = 1;
    int vacuum = 1;

    double signal_fraction() const;
};

// Decoy-state BB84 protocol parameters (vacuum + weak decoy scheme).
struct DecoyParams {
    double mu = 0.6;         // signal mean photon number
    double nu = 0.2;         // decoy mean photon number
    StateRatio ratio;        // signal : decoy : vacuum
    double f_ec = 1.16;      // error-correction inefficiency
    double e_detector = 0.0; // intrinsic misalignment error probability
    double q_sift = 0.5;     // basis-sift factor

    void validate() const; // throws std::domain_error
};

struct DetectorSpec {
    double gate_rate_hz = 20e6;
    double efficiency = 0.1;
    double dark_rate_cps = 10.0;
    double gate_width_ns = 2.1;

    void validate() const;
};

// One evaluated link configuration. fixed_losses_db covers fan-in/out and mux
// losses; the extra filter's insertion loss is added automatically whenever
// extra_filter is set, so toggling the filter cannot be double counted.
struct LinkScenario {
    double length_km = 1.0;
    double attenuation_db_per_km = 0.23;
    double fixed_losses_db = 0.0;
    fibergrid::ChannelPlan plan;
    Direction direction = Direction::Counter;
    std::optional<xtmodel::FilterSpec> extra_filter;
    double filter_xt_rejection_db = 0.0; // noise rejection beyond the insertion loss
    DetectorSpec detector;
    double system_clock_hz = 50e6;
    double xt_warning_threshold_cps = xtmodel::kXtWarningThresholdCps;

    void validate() const;
};

struct LinkResult {
    double eta = 0;        // overall transmittance
    double y0 = 0;         // background yield per gate
    double q_mu = 0, e_mu = 0;
    double q_nu = 0, e_nu = 0;
    double y1_lower = 0;   // single-photon yield lower bound
    double e1_upper = 0;   // single-photon error upper bound
    double skr_bps = 0;
    double xt_pcr_cps = 0;
    bool xt_warning = false; // crosstalk beyond plausible SPD operation
};

struct GainQber {
    double gain = 0;
    double qber = 0;
};

// H2(x) in bits, with H2(0) = H2(1) = 0 by continuity.
double binary_entropy(double x);

// eta = 10^(-(attenuation*length + fixed_losses)/10) * detector efficiency.
double transmittance(const LinkScenario& s);

// Y0 = dark/gate + crosstalk PCR / calibration gate rate, capped at 1.
double background_yield(const DetectorSpec& detector, double xt_pcr_cps,
                        double calibration_gate_rate_hz = kCalibrationGateRateHz);

// Q = Y0 + 1 - exp(-eta*m), E*Q = e0*Y0 + e_d*(1 - exp(-eta*m)).
// A dead channel (Q == 0) reports E = e0 by convention.
GainQber gain_and_qber(double mean_photon, double eta, double y0, double e_detector);

// Vacuum+weak decoy lower bound on the single-photon yield, clamped at 0.
double y1_lower_bound(const DecoyParams& p, double q_mu, double q_nu, double y0);

// Upper bound on the single-photon error rate, clamped to [0, 1/2].
// y1_lower == 0 means no extractable key and yields the trivial bound 1/2.
double e1_upper_bound(const DecoyParams& p, double q_nu, double e_nu, double y0,
                      double y1_lower);

// Full pipeline with an externally supplied crosstalk rate (used for
// no-classical-signal baselines).
LinkResult evaluate_with_xt(const LinkScenario& s, const DecoyParams& p, double xt_pcr_cps);

// Full pipeline: predicted crosstalk -> background yield -> gains/QBERs ->
// decoy bounds -> secure key rate in bits/s.
LinkResult secure_key_rate(const LinkScenario& s, const xtmodel::XtalkModel& model,
                           const DecoyParams& p);

} // namespace mcqkd::qkdrate
