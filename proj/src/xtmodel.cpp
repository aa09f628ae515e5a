#include "mcqkd/xtmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "mcqkd/errors.hpp"

namespace mcqkd::xtmodel {

namespace {

std::string cores_to_string(const std::set<int>& cores) {
    std::string s;
    for (int c : cores) {
        if (!s.empty()) s += "+";
        s += std::to_string(c);
    }
    return s;
}

// Records that disagree on any of these fields cannot be averaged together;
// the error names the offending CSV field.
void check_uniform(const std::vector<MeasurementRecord>& records) {
    const auto& first = records.front();
    for (const auto& r : records) {
        if (r.direction != first.direction)
            throw std::domain_error("mixed 'direction' values in record group");
        if (r.active_cores != first.active_cores)
            throw std::domain_error("mixed 'cores' values in record group");
        if (r.fiber_length_km != first.fiber_length_km)
            throw std::domain_error("mixed 'length_km' values in record group");
        if (r.filter_loss_db != first.filter_loss_db)
            throw std::domain_error("mixed 'filter_loss_db' values in record group");
    }
}

} // namespace

double weighted_avg_pcr(const std::vector<MeasurementRecord>& records) {
    if (records.empty()) throw std::domain_error("weighted_avg_pcr needs a non-empty record group");
    check_uniform(records);
    double sum = 0;
    for (const auto& r : records) sum += r.pcr_cps / dbm_to_mw(r.launch_power_dbm);
    return sum / static_cast<double>(records.size());
}

CalibrationResult calibrate_detailed(const std::vector<MeasurementRecord>& records,
                                     double dark_floor_cps) {
    if (records.empty()) throw std::domain_error("calibrate needs measurement records");
    if (dark_floor_cps < 0) throw std::domain_error("dark floor must be non-negative");
    for (const auto& r : records) {
        if (r.fiber_length_km <= 0) throw std::domain_error("record 'length_km' must be positive");
        if (r.pcr_cps < 0) throw std::domain_error("record 'pcr_cps' must be non-negative");
        if (r.active_cores.empty()) throw std::domain_error("record 'cores' must list at least one core");
        if (r.filter_loss_db != records.front().filter_loss_db)
            throw std::domain_error("mixed 'filter_loss_db' values: calibrate one filter chain at a time");
    }

    bool have_co = false, have_counter = false;
    for (const auto& r : records) (r.direction == Direction::Co ? have_co : have_counter) = true;
    if (!have_co) throw std::domain_error("missing co-propagation records");
    if (!have_counter) throw std::domain_error("missing counter-propagation records");

    // Group records by configuration; pool per-record chi estimates per direction.
    using Key = std::tuple<Direction, std::set<int>>;
    std::map<Key, std::vector<const MeasurementRecord*>> groups;
    for (const auto& r : records) groups[{r.direction, r.active_cores}].push_back(&r);

    CalibrationResult result;
    double chi_sum[2] = {0, 0};
    std::size_t chi_n[2] = {0, 0};
    for (const auto& [key, members] : groups) {
        GroupStats g;
        g.direction = std::get<0>(key);
        g.cores = std::get<1>(key);
        g.fiber_length_km = members.front()->fiber_length_km;
        for (const auto* r : members)
            if (r->fiber_length_km != g.fiber_length_km)
                throw std::domain_error("mixed 'length_km' values in " + to_string(g.direction) +
                                        " record group (cores " + cores_to_string(g.cores) + ")");
        g.record_count = members.size();
        const double denom = static_cast<double>(g.cores.size()) * g.fiber_length_km;
        double sum = 0;
        for (const auto* r : members) {
            double net = r->pcr_cps - dark_floor_cps;
            if (net < 0) {
                net = 0;
                ++g.clamped;
            }
            sum += net / dbm_to_mw(r->launch_power_dbm) / denom;
        }
        g.chi = sum / static_cast<double>(members.size());
        if (g.chi <= 0)
            throw CalibrationError("degenerate calibration: " + to_string(g.direction) + " group (cores " +
                                   cores_to_string(g.cores) + ") is all zero after dark subtraction");
        if (members.size() >= 3) {
            std::vector<MeasurementRecord> copy;
            for (const auto* r : members) copy.push_back(*r);
            bool distinct = false;
            for (const auto& r : copy) distinct |= r.launch_power_dbm != copy.front().launch_power_dbm;
            if (distinct) g.r_squared = fit_linearity(copy).r_squared;
        }
        int d = g.direction == Direction::Co ? 0 : 1;
        chi_sum[d] += g.chi * static_cast<double>(members.size());
        chi_n[d] += members.size();
        result.groups.push_back(std::move(g));
    }

    result.model.chi_co = chi_sum[0] / static_cast<double>(chi_n[0]);
    result.model.chi_counter = chi_sum[1] / static_cast<double>(chi_n[1]);
    result.model.reference_filter_loss_db = records.front().filter_loss_db;
    result.model.dark_floor_cps = dark_floor_cps;
    return result;
}

XtalkModel calibrate(const std::vector<MeasurementRecord>& records, double dark_floor_cps) {
    return calibrate_detailed(records, dark_floor_cps).model;
}

LinearFit fit_linearity(const std::vector<MeasurementRecord>& records) {
    if (records.size() < 3) throw std::domain_error("fit_linearity needs at least 3 records");
    check_uniform(records);

    const double n = static_cast<double>(records.size());
    double sx = 0, sy = 0;
    for (const auto& r : records) {
        sx += dbm_to_mw(r.launch_power_dbm);
        sy += r.pcr_cps;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& r : records) {
        const double dx = dbm_to_mw(r.launch_power_dbm) - mx;
        const double dy = r.pcr_cps - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw std::domain_error("fit_linearity needs distinct launch powers");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0) {
        fit.r_squared = 0; // constant PCR: undefined-as-0 by convention
    } else {
        double ss_res = 0;
        for (const auto& r : records) {
            const double e = r.pcr_cps - (fit.intercept + fit.slope * dbm_to_mw(r.launch_power_dbm));
            ss_res += e * e;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

double predict_xt_pcr(const XtalkModel& model, const fibergrid::ChannelPlan& plan,
                      double length_km, Direction direction,
                      const std::optional<FilterSpec>& extra_filter,
                      double extra_rejection_db) {
    if (!model.calibrated()) throw std::domain_error("crosstalk model is not calibrated");
    if (length_km <= 0) throw std::domain_error("fiber length must be positive");

    const std::set<int> near = plan.topology.neighbors(plan.quantum_core);
    double total_mw = 0;
    for (const auto& a : plan.assignments) {
        if (a.role != fibergrid::Role::Classical) continue;
        if (a.direction != direction) continue;
        if (!near.count(a.core)) continue; // non-neighbor cores contribute nothing
        if (!a.launch_power_dbm) continue;
        total_mw += dbm_to_mw(*a.launch_power_dbm);
    }

    const double chi = direction == Direction::Co ? model.chi_co : model.chi_counter;
    double noise_factor = 1.0;
    if (extra_filter)
        noise_factor = db_loss_factor(extra_filter->insertion_loss_db + extra_rejection_db);
    return chi * total_mw * length_km * noise_factor;
}

} // namespace mcqkd::xtmodel
