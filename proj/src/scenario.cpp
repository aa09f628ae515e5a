#include "mcqkd/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "mcqkd/errors.hpp"

namespace mcqkd::scenario {

SweepVariable parse_sweep_variable(const std::string& s) {
    if (s == "length_km") return SweepVariable::LengthKm;
    if (s == "power_dbm") return SweepVariable::PowerDbm;
    throw std::domain_error("unknown sweep variable '" + s + "' (expected length_km or power_dbm)");
}

std::string to_string(SweepVariable v) {
    return v == SweepVariable::LengthKm ? "length_km" : "power_dbm";
}

std::string SweepVariant::label() const {
    std::string s = fibergrid::to_string(direction);
    if (with_filter) s += "+filter";
    return s;
}

SweepVariant parse_variant(const std::string& label) {
    SweepVariant v;
    std::string base = label;
    const std::string suffix = "+filter";
    if (base.size() > suffix.size() && base.ends_with(suffix)) {
        v.with_filter = true;
        base = base.substr(0, base.size() - suffix.size());
    }
    v.direction = fibergrid::parse_direction(base);
    return v;
}

void SweepSpec::validate() const {
    if (step <= 0) throw std::domain_error("sweep step must be positive");
    if (start > stop) throw std::domain_error("sweep start must not exceed stop");
    if (variable == SweepVariable::LengthKm && start <= 0)
        throw std::domain_error("length sweep must start above 0 km");
    for (const auto& v : variants)
        if (v.with_filter && !base.extra_filter)
            throw std::domain_error("variant '" + v.label() + "' needs an extra filter spec in the scenario");
}

std::vector<double> SweepSpec::grid() const {
    // Index-based so accumulated addition never drifts; the half-step slack
    // keeps stop itself on the grid despite binary rounding of step.
    std::vector<double> xs;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5) + 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = start + static_cast<double>(i) * step;
        if (x > stop + step * 1e-9) break;
        xs.push_back(x);
    }
    return xs;
}

std::vector<Curve> run_sweep(const SweepSpec& spec, const xtmodel::XtalkModel& model,
                             const DecoyParams& params) {
    spec.validate();
    if (!model.calibrated()) throw std::domain_error("crosstalk model is not calibrated");

    const std::vector<double> xs = spec.grid();
    std::vector<Curve> curves;
    for (const auto& variant : spec.variants) {
        Curve curve;
        curve.label = variant.label();
        LinkScenario scen = spec.base;
        scen.direction = variant.direction;
        if (!variant.with_filter) scen.extra_filter.reset();
        for (auto& a : scen.plan.assignments)
            if (a.role == fibergrid::Role::Classical) a.direction = variant.direction;

        for (double x : xs) {
            if (spec.variable == SweepVariable::LengthKm) {
                scen.length_km = x;
            } else {
                for (auto& a : scen.plan.assignments)
                    if (a.role == fibergrid::Role::Classical) a.launch_power_dbm = x;
            }
            try {
                curve.points.push_back({x, qkdrate::secure_key_rate(scen, model, params)});
            } catch (const std::exception& e) {
                throw std::domain_error("sweep point " + to_string(spec.variable) + "=" +
                                        std::to_string(x) + ", variant '" + curve.label +
                                        "': " + e.what());
            }
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

Emulation emulate_length(double target_km, double base_km, double attenuation_db_per_km) {
    if (base_km <= 0) throw std::domain_error("emulation base length must be positive");
    if (target_km < base_km) throw std::domain_error("emulation target must not be shorter than the base");
    Emulation e;
    e.voa_db = attenuation_db_per_km * (target_km - base_km);
    e.power_boost_db = 10.0 * std::log10(target_km / base_km);
    return e;
}

std::optional<double> find_crossover(const Curve& a, const Curve& b) {
    if (a.points.size() != b.points.size())
        throw std::domain_error("crossover needs curves on the same x grid");
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if (a.points[i].x != b.points[i].x)
            throw std::domain_error("crossover needs curves on the same x grid");

    int prev_sign = 0;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const double d = a.points[i].result.skr_bps - b.points[i].result.skr_bps;
        const int sign = d > 0 ? 1 : d < 0 ? -1 : 0;
        if (sign == 0) continue;
        if (prev_sign != 0 && sign != prev_sign) {
            const double d_prev = a.points[i - 1].result.skr_bps - b.points[i - 1].result.skr_bps;
            if (d_prev == 0) return a.points[i - 1].x; // flipped exactly on a grid point
            const double x0 = a.points[i - 1].x, x1 = a.points[i].x;
            return x0 + (x1 - x0) * d_prev / (d_prev - d);
        }
        prev_sign = sign;
    }
    return std::nullopt;
}

double max_reach(const Curve& curve) {
    if (curve.points.empty()) throw std::domain_error("max_reach needs a non-empty curve");
    double reach = 0;
    for (const auto& p : curve.points)
        if (p.result.skr_bps > 0) reach = p.x;
    return reach;
}

namespace {

void check_zero_classical_power(const LinkScenario& s) {
    for (const auto& a : s.plan.assignments)
        if (a.role == fibergrid::Role::Classical)
            throw std::domain_error("baseline calibration needs a scenario with zero classical power");
}

} // namespace

BaselineCalibration calibrate_baseline(double target_skr_bps, double target_qber,
                                       const LinkScenario& scenario,
                                       const DecoyParams& params) {
    if (target_skr_bps <= 0 || target_qber <= 0)
        throw std::domain_error("baseline targets must be positive");
    check_zero_classical_power(scenario);

    constexpr double kEdMax = 0.1;
    constexpr double kLossMax = 30.0;
    constexpr int kOuterIterations = 100;

    auto predict = [&](double e_d, double loss) {
        LinkScenario s = scenario;
        s.fixed_losses_db = loss;
        DecoyParams p = params;
        p.e_detector = e_d;
        return qkdrate::evaluate_with_xt(s, p, 0.0);
    };

    double e_d = 0.0, loss = 0.0;
    for (int iter = 0; iter < kOuterIterations; ++iter) {
        // SKR is monotone decreasing in the fixed loss at fixed e_detector.
        if (predict(e_d, 0.0).skr_bps < target_skr_bps)
            throw CalibrationError("baseline SKR target unreachable even at zero fixed loss");
        if (predict(e_d, kLossMax).skr_bps > target_skr_bps)
            throw CalibrationError("baseline SKR target needs more than " +
                                   std::to_string(kLossMax) + " dB of fixed loss");
        double lo = 0.0, hi = kLossMax;
        for (int i = 0; i < 200; ++i) {
            loss = 0.5 * (lo + hi);
            (predict(e_d, loss).skr_bps > target_skr_bps ? lo : hi) = loss;
        }

        // QBER is monotone increasing in e_detector at fixed loss.
        if (predict(0.0, loss).e_mu > target_qber)
            throw CalibrationError("baseline QBER target below the background-yield floor");
        if (predict(kEdMax, loss).e_mu < target_qber)
            throw CalibrationError("baseline QBER target needs detector error above " +
                                   std::to_string(kEdMax));
        double elo = 0.0, ehi = kEdMax;
        for (int i = 0; i < 200; ++i) {
            e_d = 0.5 * (elo + ehi);
            (predict(e_d, loss).e_mu < target_qber ? elo : ehi) = e_d;
        }

        const LinkResult r = predict(e_d, loss);
        if (std::abs(r.skr_bps - target_skr_bps) <= 1e-9 * target_skr_bps &&
            std::abs(r.e_mu - target_qber) <= 1e-9 * target_qber)
            break;
    }

    const LinkResult r = predict(e_d, loss);
    if (std::abs(r.skr_bps - target_skr_bps) > 1e-3 * target_skr_bps ||
        std::abs(r.e_mu - target_qber) > 1e-3 * target_qber)
        throw CalibrationError("baseline calibration did not converge to the targets");
    return {e_d, loss};
}

} // namespace mcqkd::scenario
