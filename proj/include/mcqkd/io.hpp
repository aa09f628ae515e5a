#pragma once

#include <string>
#include <vector>

#include "mcqkd/fibergrid.hpp"
#include "mcqkd/kvdoc.hpp"
#include "mcqkd/planner.hpp"
#include "mcqkd/scenario.hpp"
#include "mcqkd/xtmodel.hpp"

namespace mcqkd::io {

// [topology] and [grid] section parsers, shared by plan files and run configs.
fibergrid::CoreTopology topology_from_section(const kv::Section& s);
fibergrid::FrequencyGrid grid_from_section(const kv::Section& s);

// Plan files: [topology], [grid] and repeated [channel] sections, frequencies
// in decimal GHz (integer in the common case).
fibergrid::ChannelPlan load_plan(const std::string& path);
std::string serialize_plan(const fibergrid::ChannelPlan& plan);

// Model files: a [model] section with chi_co, chi_counter,
// reference_filter_loss_db and dark_floor_cps.
xtmodel::XtalkModel load_model(const std::string& path);
std::string serialize_model(const xtmodel::XtalkModel& model);

// Demand files: a [demand] section plus repeated [classical] sections.
planner::TrafficDemand load_demand(const std::string& path);

// Measurement CSV, header:
//   power_dbm,pcr_cps,direction,cores,freq_ghz,length_km,filter_loss_db
// `cores` is a '+'-separated core list; '#' lines are comments.
std::vector<xtmodel::MeasurementRecord> load_measurements_csv(const std::string& path);

// Sweep CSV, header:
//   x,variant,skr_bps,qber,q_mu,e_mu,y1_lower,e1_upper,xt_pcr_cps,eta,y0
// Values are printed with 9 significant digits.
std::string serialize_sweep_csv(const std::vector<scenario::Curve>& curves);

struct SweepRow {
    double x = 0;
    std::string variant;
    double skr_bps = 0;
    double qber = 0;
};

std::vector<SweepRow> load_sweep_csv(const std::string& path);

// Writes text plus the comment-prefixed reproducibility footer line.
void write_file(const std::string& path, const std::string& body, const std::string& footer);

std::string format_value(double v); // 9 significant digits

} // namespace mcqkd::io
