#include "mcqkd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "mcqkd/errors.hpp"
#include "mcqkd/io.hpp"
#include "mcqkd/kvdoc.hpp"
#include "mcqkd/version.hpp"

namespace mcqkd::cli {

namespace fs = std::filesystem;

namespace {

struct Config {
    kv::Document doc;
    std::string hash;    // fnv1a over the raw config bytes
    fs::path config_dir; // file paths resolve relative to the config file

    std::string footer() const { return output_footer("fnv1a:" + hash); }

    fs::path resolve(const std::string& p) const {
        fs::path path(p);
        return path.is_absolute() ? path : config_dir / path;
    }

    std::string file(const std::string& key) const {
        const kv::Section& files = doc.require("files");
        return resolve(files.get(key)).string();
    }

    std::optional<std::string> file_or_none(const std::string& key) const {
        const kv::Section* files = doc.find("files");
        if (!files || !files->has(key)) return std::nullopt;
        return resolve(files->get(key)).string();
    }
};

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    Config cfg;
    cfg.doc = kv::parse(bytes, path);
    cfg.hash = fnv1a64_hex(bytes);
    cfg.config_dir = fs::path(path).parent_path();
    return cfg;
}

qkdrate::DecoyParams decoy_from(const Config& cfg) {
    qkdrate::DecoyParams p;
    if (const kv::Section* s = cfg.doc.find("decoy")) {
        p.mu = s->get_double_or("mu", p.mu);
        p.nu = s->get_double_or("nu", p.nu);
        if (s->has("ratio")) {
            std::istringstream in(s->get("ratio"));
            std::string part;
            std::vector<int> parts;
            while (std::getline(in, part, ':')) parts.push_back(std::stoi(kv::trim(part)));
            if (parts.size() != 3)
                throw ParseError("section [decoy]: ratio must be 'signal:decoy:vacuum'");
            p.ratio = {parts[0], parts[1], parts[2]};
        }
        p.f_ec = s->get_double_or("f_ec", p.f_ec);
        p.e_detector = s->get_double_or("e_detector", p.e_detector);
        p.q_sift = s->get_double_or("q_sift", p.q_sift);
    }
    return p;
}

qkdrate::DetectorSpec detector_from(const Config& cfg) {
    qkdrate::DetectorSpec d;
    if (const kv::Section* s = cfg.doc.find("detector")) {
        d.gate_rate_hz = s->get_double_or("gate_rate_hz", d.gate_rate_hz);
        d.efficiency = s->get_double_or("efficiency", d.efficiency);
        d.dark_rate_cps = s->get_double_or("dark_rate_cps", d.dark_rate_cps);
        d.gate_width_ns = s->get_double_or("gate_width_ns", d.gate_width_ns);
    }
    return d;
}

std::optional<xtmodel::FilterSpec> filter_from(const Config& cfg) {
    const kv::Section* s = cfg.doc.find("filter");
    if (!s) return std::nullopt;
    xtmodel::FilterSpec f;
    f.insertion_loss_db = s->get_double_or("insertion_loss_db", 2.1);
    f.passband_nm = s->get_double_or("passband_nm", 0.6);
    f.out_of_band_isolation_db = s->get_double_or("out_of_band_isolation_db", 40.0);
    return f;
}

fibergrid::FrequencyGrid grid_from_config(const Config& cfg) {
    if (const kv::Section* s = cfg.doc.find("grid"))
        return fibergrid::FrequencyGrid(parse_ghz_to_mhz(s->get_or("f0_ghz", "193350")),
                                        parse_ghz_to_mhz(s->get_or("delta_f_ghz", "100")),
                                        static_cast<int>(s->get_int_or("channel_count", 40)));
    return fibergrid::FrequencyGrid(parse_ghz_to_mhz("193350"), parse_ghz_to_mhz("100"), 40);
}

fibergrid::CoreTopology topology_from_config(const Config& cfg) {
    if (const kv::Section* s = cfg.doc.find("topology")) return io::topology_from_section(*s);
    return fibergrid::CoreTopology::hexagonal7();
}

struct ScenarioSetup {
    qkdrate::LinkScenario scenario;
    qkdrate::DecoyParams decoy;
};

// Builds the scenario from the config; when a [baseline] section is present,
// e_detector and fixed_losses_db are solved from its back-to-back targets.
ScenarioSetup scenario_from(const Config& cfg) {
    ScenarioSetup setup;
    setup.decoy = decoy_from(cfg);

    qkdrate::LinkScenario& scen = setup.scenario;
    scen.plan = io::load_plan(cfg.file("plan"));
    scen.detector = detector_from(cfg);

    const kv::Section& s = cfg.doc.require("scenario");
    scen.length_km = s.get_double_or("length_km", 1.0);
    scen.attenuation_db_per_km = s.get_double_or("attenuation_db_per_km", 0.23);
    scen.fixed_losses_db = s.get_double_or("fixed_losses_db", 0.0);
    scen.direction = fibergrid::parse_direction(s.get_or("direction", "counter"));
    scen.system_clock_hz = s.get_double_or("system_clock_hz", 50e6);
    scen.xt_warning_threshold_cps =
        s.get_double_or("xt_warning_threshold_cps", scen.xt_warning_threshold_cps);

    // The base scenario always carries the filter spec when one is configured;
    // predict and the sweep variants decide whether it applies.
    if (s.get_bool_or("with_filter", false) && !cfg.doc.find("filter"))
        throw ParseError("scenario requests a filter but config has no [filter] section");
    scen.extra_filter = filter_from(cfg);
    if (const kv::Section* f = cfg.doc.find("filter"))
        scen.filter_xt_rejection_db = f->get_double_or("xt_rejection_db", 0.0);

    if (const kv::Section* b = cfg.doc.find("baseline")) {
        // Back-to-back operating point: no classical channels, no extra
        // filter, measured at the baseline reference length.
        qkdrate::LinkScenario base = scen;
        base.length_km = b->get_double_or("length_km", 1.0);
        base.extra_filter.reset();
        std::erase_if(base.plan.assignments, [](const fibergrid::ChannelAssignment& a) {
            return a.role == fibergrid::Role::Classical;
        });
        const auto cal = scenario::calibrate_baseline(b->get_double("target_skr_bps"),
                                                      b->get_double("target_qber"), base,
                                                      setup.decoy);
        setup.decoy.e_detector = cal.e_detector;
        scen.fixed_losses_db = cal.fixed_losses_db;
        std::fprintf(stderr, "baseline: e_detector=%.9g fixed_losses_db=%.9g\n", cal.e_detector,
                     cal.fixed_losses_db);
    }
    return setup;
}

scenario::SweepSpec sweep_from(const Config& cfg, const ScenarioSetup& setup) {
    const kv::Section& s = cfg.doc.require("sweep");
    scenario::SweepSpec spec;
    spec.variable = scenario::parse_sweep_variable(s.get("variable"));
    spec.start = s.get_double("start");
    spec.stop = s.get_double("stop");
    spec.step = s.get_double("step");
    spec.base = setup.scenario;

    std::istringstream in(s.get("variants"));
    std::string label;
    while (std::getline(in, label, ','))
        spec.variants.push_back(scenario::parse_variant(kv::trim(label)));
    return spec;
}

fs::path prepare_out_dir(const Options& opts) {
    fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string summarize(const std::vector<scenario::Curve>& curves) {
    std::string out;
    for (const auto& c : curves)
        out += "max_reach[" + c.label + "] = " + io::format_value(scenario::max_reach(c)) + "\n";
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            const auto x = scenario::find_crossover(curves[i], curves[j]);
            out += "crossover[" + curves[i].label + " vs " + curves[j].label + "] = " +
                   (x ? io::format_value(*x) : std::string("none")) + "\n";
        }
    return out;
}

} // namespace

int cmd_plan(const Options& opts) {
    const Config cfg = load_config(opts.config_path);
    const planner::TrafficDemand demand = io::load_demand(cfg.file("demand"));

    const fibergrid::CoreTopology topology = topology_from_config(cfg);
    const fibergrid::FrequencyGrid grid = grid_from_config(cfg);

    xtmodel::XtalkModel model;
    planner::PlannerOptions popts;
    popts.exhaustive = opts.exhaustive_planner;
    if (const auto model_file = cfg.file_or_none("model")) {
        model = io::load_model(*model_file);
        popts.model = &model;
    }

    const fibergrid::ChannelPlan plan = planner::assign_channels(demand, topology, grid, popts);
    const auto violations = fibergrid::validate_plan(plan);

    const fs::path out = prepare_out_dir(opts) / "plan.kv";
    io::write_file(out.string(), io::serialize_plan(plan), cfg.footer());
    std::printf("wrote %s (%zu channels, quantum core %d)\n", out.string().c_str(),
                plan.assignments.size(), plan.quantum_core);
    if (violations.empty()) {
        std::printf("validation: ok\n");
        return kExitOk;
    }
    for (const auto& v : violations) std::printf("violation: %s\n", v.c_str());
    return kExitValidation;
}

int cmd_calibrate(const Options& opts) {
    const Config cfg = load_config(opts.config_path);
    const auto records = io::load_measurements_csv(cfg.file("measurements"));
    double dark = 10.0;
    if (const kv::Section* s = cfg.doc.find("calibration"))
        dark = s->get_double_or("dark_floor_cps", dark);

    const xtmodel::CalibrationResult result = xtmodel::calibrate_detailed(records, dark);
    std::printf("chi_co = %.9g counts/s/mW/km\n", result.model.chi_co);
    std::printf("chi_counter = %.9g counts/s/mW/km\n", result.model.chi_counter);
    for (const auto& g : result.groups) {
        std::string cores;
        for (int c : g.cores) cores += (cores.empty() ? "" : "+") + std::to_string(c);
        std::printf("group %s cores=%s length=%.9g km: chi=%.9g r2=%s%s\n",
                    fibergrid::to_string(g.direction).c_str(), cores.c_str(), g.fiber_length_km,
                    g.chi, g.r_squared ? io::format_value(*g.r_squared).c_str() : "-",
                    g.clamped ? " (clamped records)" : "");
    }

    const fs::path out = prepare_out_dir(opts) / "model.kv";
    io::write_file(out.string(), io::serialize_model(result.model), cfg.footer());
    std::printf("wrote %s\n", out.string().c_str());
    return kExitOk;
}

int cmd_predict(const Options& opts) {
    const Config cfg = load_config(opts.config_path);
    const xtmodel::XtalkModel model = io::load_model(cfg.file("model"));
    const ScenarioSetup setup = scenario_from(cfg);

    const kv::Section& s = cfg.doc.require("scenario");
    qkdrate::LinkScenario scen = setup.scenario;
    if (!s.get_bool_or("with_filter", false)) scen.extra_filter.reset();

    const qkdrate::LinkResult r = qkdrate::secure_key_rate(scen, model, setup.decoy);
    if (r.xt_warning)
        std::fprintf(stderr, "warning: predicted crosstalk %.3g counts/s exceeds plausible SPD operation\n",
                     r.xt_pcr_cps);

    scenario::Curve curve;
    curve.label = scenario::SweepVariant{scen.direction, scen.extra_filter.has_value()}.label();
    curve.points.push_back({scen.length_km, r});
    const fs::path out = prepare_out_dir(opts) / "predict.csv";
    io::write_file(out.string(), io::serialize_sweep_csv({curve}), cfg.footer());
    std::printf("skr_bps = %.9g\nqber = %.9g\nxt_pcr_cps = %.9g\n", r.skr_bps, r.e_mu, r.xt_pcr_cps);
    std::printf("wrote %s\n", out.string().c_str());
    return kExitOk;
}

int cmd_sweep(const Options& opts) {
    const Config cfg = load_config(opts.config_path);
    const xtmodel::XtalkModel model = io::load_model(cfg.file("model"));
    const ScenarioSetup setup = scenario_from(cfg);
    const scenario::SweepSpec spec = sweep_from(cfg, setup);

    const std::vector<scenario::Curve> curves = scenario::run_sweep(spec, model, setup.decoy);

    const fs::path dir = prepare_out_dir(opts);
    io::write_file((dir / "sweep.csv").string(), io::serialize_sweep_csv(curves), cfg.footer());
    const std::string summary = summarize(curves);
    io::write_file((dir / "sweep_summary.txt").string(), summary, cfg.footer());
    std::fputs(summary.c_str(), stdout);
    std::printf("wrote %s and %s\n", (dir / "sweep.csv").string().c_str(),
                (dir / "sweep_summary.txt").string().c_str());
    return kExitOk;
}

int cmd_report(const Options& opts) {
    const Config cfg = load_config(opts.config_path);
    const auto rows = io::load_sweep_csv(cfg.file("sweep"));

    // Rebuild per-variant curves in first-seen order; only x and skr matter.
    std::vector<scenario::Curve> curves;
    std::map<std::string, std::size_t> index;
    for (const auto& row : rows) {
        auto [it, inserted] = index.try_emplace(row.variant, curves.size());
        if (inserted) curves.push_back({row.variant, {}});
        qkdrate::LinkResult r;
        r.skr_bps = row.skr_bps;
        r.e_mu = row.qber;
        curves[it->second].points.push_back({row.x, r});
    }

    const std::string summary = summarize(curves);
    const fs::path out = prepare_out_dir(opts) / "report_summary.txt";
    io::write_file(out.string(), summary, cfg.footer());
    std::fputs(summary.c_str(), stdout);
    std::printf("wrote %s\n", out.string().c_str());
    return kExitOk;
}

int dispatch(const std::string& subcommand, const Options& opts) {
    try {
        if (subcommand == "plan") return cmd_plan(opts);
        if (subcommand == "calibrate") return cmd_calibrate(opts);
        if (subcommand == "predict") return cmd_predict(opts);
        if (subcommand == "sweep") return cmd_sweep(opts);
        if (subcommand == "report") return cmd_report(opts);
        std::fprintf(stderr, "unknown subcommand '%s'\n", subcommand.c_str());
        return kExitParse;
    } catch (const CalibrationError& e) {
        std::fprintf(stderr, "calibration error: %s\n", e.what());
        return kExitCalibration;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitParse;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitParse;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
}

} // namespace mcqkd::cli
