#include "mcqkd/qkdrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcqkd::qkdrate {

double StateRatio::signal_fraction() const {
    return static_cast<double>(signal) / static_cast<double>(signal + decoy + vacuum);
}

void DecoyParams::validate() const {
    if (!(nu > 0 && nu < mu))
        throw std::domain_error("decoy params need 0 < nu < mu");
    if (ratio.signal <= 0 || ratio.decoy <= 0 || ratio.vacuum <= 0)
        throw std::domain_error("state ratio entries must be positive");
    if (f_ec < 1) throw std::domain_error("error-correction inefficiency f_ec must be >= 1");
    if (e_detector < 0 || e_detector >= 0.5)
        throw std::domain_error("detector error must lie in [0, 1/2)");
    if (q_sift <= 0 || q_sift > 1) throw std::domain_error("sift factor must lie in (0, 1]");
}

void DetectorSpec::validate() const {
    if (!(efficiency > 0 && efficiency <= 1))
        throw std::domain_error("detector efficiency must lie in (0, 1]");
    if (gate_rate_hz <= 0) throw std::domain_error("detector gate rate must be positive");
    if (dark_rate_cps < 0) throw std::domain_error("detector dark rate must be non-negative");
    if (gate_width_ns <= 0) throw std::domain_error("detector gate width must be positive");
}

void LinkScenario::validate() const {
    if (length_km <= 0) throw std::domain_error("scenario length must be positive");
    if (attenuation_db_per_km <= 0) throw std::domain_error("scenario attenuation must be positive");
    if (fixed_losses_db < 0) throw std::domain_error("scenario fixed losses must be non-negative");
    if (system_clock_hz <= 0) throw std::domain_error("system clock must be positive");
    detector.validate();
}

double binary_entropy(double x) {
    if (x < 0 || x > 1) throw std::domain_error("binary_entropy argument outside [0, 1]");
    if (x == 0 || x == 1) return 0;
    return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

double transmittance(const LinkScenario& s) {
    return db_loss_factor(s.attenuation_db_per_km * s.length_km + s.fixed_losses_db) *
           s.detector.efficiency;
}

double background_yield(const DetectorSpec& detector, double xt_pcr_cps,
                        double calibration_gate_rate_hz) {
    if (xt_pcr_cps < 0) throw std::domain_error("crosstalk PCR must be non-negative");
    double y0 = detector.dark_rate_cps / detector.gate_rate_hz +
                xt_pcr_cps / calibration_gate_rate_hz;
    return std::min(y0, 1.0);
}

GainQber gain_and_qber(double mean_photon, double eta, double y0, double e_detector) {
    const double signal = 1 - std::exp(-eta * mean_photon);
    GainQber out;
    out.gain = std::min(y0 + signal, 1.0);
    out.qber = out.gain == 0 ? kVacuumError
                             : (kVacuumError * y0 + e_detector * signal) / out.gain;
    return out;
}

double y1_lower_bound(const DecoyParams& p, double q_mu, double q_nu, double y0) {
    const double mu = p.mu, nu = p.nu;
    const double denom = mu * nu - nu * nu;
    if (denom <= 0) throw std::domain_error("y1 bound needs nu(mu - nu) > 0");
    const double bound = (mu / denom) *
                         (q_nu * std::exp(nu) - q_mu * std::exp(mu) * (nu * nu) / (mu * mu) -
                          (mu * mu - nu * nu) / (mu * mu) * y0);
    return std::max(bound, 0.0);
}

double e1_upper_bound(const DecoyParams& p, double q_nu, double e_nu, double y0,
                      double y1_lower) {
    if (y1_lower <= 0) return 0.5; // no extractable key; trivial bound
    const double num = e_nu * q_nu * std::exp(p.nu) - kVacuumError * y0;
    return std::clamp(num / (y1_lower * p.nu), 0.0, 0.5);
}

LinkResult evaluate_with_xt(const LinkScenario& s, const DecoyParams& p, double xt_pcr_cps) {
    s.validate();
    p.validate();

    LinkScenario budget = s;
    if (s.extra_filter) budget.fixed_losses_db += s.extra_filter->insertion_loss_db;

    LinkResult r;
    r.xt_pcr_cps = xt_pcr_cps;
    r.xt_warning = xt_pcr_cps > s.xt_warning_threshold_cps;
    r.eta = transmittance(budget);
    r.y0 = background_yield(s.detector, xt_pcr_cps);

    const GainQber sig = gain_and_qber(p.mu, r.eta, r.y0, p.e_detector);
    const GainQber dec = gain_and_qber(p.nu, r.eta, r.y0, p.e_detector);
    r.q_mu = sig.gain;
    r.e_mu = sig.qber;
    r.q_nu = dec.gain;
    r.e_nu = dec.qber;

    r.y1_lower = std::min(y1_lower_bound(p, r.q_mu, r.q_nu, r.y0), 1.0);
    r.e1_upper = e1_upper_bound(p, r.q_nu, r.e_nu, r.y0, r.y1_lower);

    const double q1 = r.y1_lower * p.mu * std::exp(-p.mu);
    const double per_pulse = p.q_sift * p.ratio.signal_fraction() *
                             (-r.q_mu * p.f_ec * binary_entropy(r.e_mu) +
                              q1 * (1 - binary_entropy(r.e1_upper)));
    r.skr_bps = std::max(per_pulse, 0.0) * s.system_clock_hz;
    return r;
}

LinkResult secure_key_rate(const LinkScenario& s, const xtmodel::XtalkModel& model,
                           const DecoyParams& p) {
    if (!model.calibrated()) throw std::domain_error("crosstalk model is not calibrated");
    const auto violations = fibergrid::validate_plan(s.plan);
    if (!violations.empty())
        throw std::domain_error("invalid channel plan: " + violations.front());

    const double xt = xtmodel::predict_xt_pcr(model, s.plan, s.length_km, s.direction,
                                              s.extra_filter, s.filter_xt_rejection_db);
    return evaluate_with_xt(s, p, xt);
}

} // namespace mcqkd::qkdrate
