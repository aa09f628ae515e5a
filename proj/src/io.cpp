#include "mcqkd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcqkd/errors.hpp"
#include "mcqkd/kvdoc.hpp"

namespace mcqkd::io {

namespace {

double to_double(const std::string& text, const std::string& where) {
    double v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw ParseError(where + ": not a number: '" + text + "'");
    return v;
}

} // namespace

fibergrid::CoreTopology topology_from_section(const kv::Section& s) {
    const int core_count = static_cast<int>(s.get_int_or("core_count", 7));
    const int center = static_cast<int>(s.get_int_or("center_core", 1));
    if (core_count == 7 && center == 1 && !s.has("adjacency"))
        return fibergrid::CoreTopology::hexagonal7();
    if (!s.has("adjacency"))
        throw ParseError("section [topology]: non-default layouts need an explicit 'adjacency' list");
    std::set<std::pair<int, int>> adj;
    std::istringstream in(s.get("adjacency"));
    std::string pair;
    while (std::getline(in, pair, ',')) {
        pair = kv::trim(pair);
        const auto dash = pair.find('-');
        if (dash == std::string::npos)
            throw ParseError("section [topology]: adjacency entry '" + pair + "' is not 'a-b'");
        const int a = static_cast<int>(to_double(kv::trim(pair.substr(0, dash)), "[topology] adjacency"));
        const int b = static_cast<int>(to_double(kv::trim(pair.substr(dash + 1)), "[topology] adjacency"));
        adj.emplace(std::min(a, b), std::max(a, b));
    }
    return fibergrid::CoreTopology(core_count, center, std::move(adj));
}

fibergrid::FrequencyGrid grid_from_section(const kv::Section& s) {
    return fibergrid::FrequencyGrid(parse_ghz_to_mhz(s.get("f0_ghz")),
                                    parse_ghz_to_mhz(s.get("delta_f_ghz")),
                                    static_cast<int>(s.get_int("channel_count")));
}

fibergrid::ChannelPlan load_plan(const std::string& path) {
    const kv::Document doc = kv::load_file(path);
    fibergrid::ChannelPlan plan;
    plan.topology = topology_from_section(doc.require("topology"));
    plan.grid = grid_from_section(doc.require("grid"));

    for (const kv::Section* ch : doc.all("channel")) {
        fibergrid::ChannelAssignment a;
        a.core = static_cast<int>(ch->get_int("core"));
        a.freq_mhz = parse_ghz_to_mhz(ch->get("freq_ghz"));
        a.role = fibergrid::parse_role(ch->get("role"));
        a.direction = fibergrid::parse_direction(ch->get("direction"));
        if (ch->has("power_dbm")) {
            a.launch_power_dbm = ch->get_double("power_dbm");
        } else if (a.role == fibergrid::Role::Classical) {
            throw ParseError(path + ": [channel] at line " + std::to_string(ch->line) +
                             ": classical channel needs 'power_dbm'");
        }
        plan.assignments.push_back(a);
    }

    // The quantum core may be stated explicitly; otherwise it is the core of
    // the quantum channel(s).
    if (const kv::Section* p = doc.find("plan"); p && p->has("quantum_core")) {
        plan.quantum_core = static_cast<int>(p->get_int("quantum_core"));
    } else {
        for (const auto& a : plan.assignments)
            if (a.role == fibergrid::Role::Quantum) {
                plan.quantum_core = a.core;
                break;
            }
        if (plan.quantum_core == 0)
            throw ParseError(path + ": plan has no quantum channel and no [plan] quantum_core");
    }
    return plan;
}

std::string serialize_plan(const fibergrid::ChannelPlan& plan) {
    kv::Document doc;
    kv::Section topo;
    topo.name = "topology";
    topo.set("core_count", std::to_string(plan.topology.core_count()));
    topo.set("center_core", std::to_string(plan.topology.center_core()));
    const auto hexagonal = fibergrid::CoreTopology::hexagonal7();
    if (plan.topology.core_count() != 7 || plan.topology.center_core() != 1 ||
        plan.topology.adjacency() != hexagonal.adjacency()) {
        std::string adj;
        for (auto [a, b] : plan.topology.adjacency()) {
            if (!adj.empty()) adj += ",";
            adj += std::to_string(a) + "-" + std::to_string(b);
        }
        topo.set("adjacency", adj);
    }
    doc.sections.push_back(std::move(topo));

    kv::Section grid;
    grid.name = "grid";
    grid.set("f0_ghz", format_mhz_as_ghz(plan.grid.f0_mhz));
    grid.set("delta_f_ghz", format_mhz_as_ghz(plan.grid.delta_f_mhz));
    grid.set("channel_count", std::to_string(plan.grid.channel_count));
    doc.sections.push_back(std::move(grid));

    kv::Section ps;
    ps.name = "plan";
    ps.set("quantum_core", std::to_string(plan.quantum_core));
    doc.sections.push_back(std::move(ps));

    for (const auto& a : plan.assignments) {
        kv::Section ch;
        ch.name = "channel";
        ch.set("core", std::to_string(a.core));
        ch.set("freq_ghz", format_mhz_as_ghz(a.freq_mhz));
        ch.set("role", fibergrid::to_string(a.role));
        ch.set("direction", fibergrid::to_string(a.direction));
        if (a.launch_power_dbm) ch.set("power_dbm", format_value(*a.launch_power_dbm));
        doc.sections.push_back(std::move(ch));
    }
    return kv::serialize(doc);
}

xtmodel::XtalkModel load_model(const std::string& path) {
    const kv::Document doc = kv::load_file(path);
    const kv::Section& m = doc.require("model");
    xtmodel::XtalkModel model;
    model.chi_co = m.get_double("chi_co");
    model.chi_counter = m.get_double("chi_counter");
    model.reference_filter_loss_db = m.get_double("reference_filter_loss_db");
    model.dark_floor_cps = m.get_double("dark_floor_cps");
    if (!model.calibrated())
        throw ParseError(path + ": model is not calibrated (chi values must be positive)");
    return model;
}

std::string serialize_model(const xtmodel::XtalkModel& model) {
    kv::Document doc;
    kv::Section m;
    m.name = "model";
    m.set("chi_co", format_value(model.chi_co));
    m.set("chi_counter", format_value(model.chi_counter));
    m.set("reference_filter_loss_db", format_value(model.reference_filter_loss_db));
    m.set("dark_floor_cps", format_value(model.dark_floor_cps));
    doc.sections.push_back(std::move(m));
    return kv::serialize(doc);
}

planner::TrafficDemand load_demand(const std::string& path) {
    const kv::Document doc = kv::load_file(path);
    planner::TrafficDemand demand;
    const kv::Section& d = doc.require("demand");
    demand.quantum_count = static_cast<int>(d.get_int("quantum_count"));
    demand.sync_required = d.get_bool_or("sync", false);
    for (const kv::Section* c : doc.all("classical")) {
        planner::ClassicalDemand cd;
        cd.ordinal = static_cast<int>(c->get_int("ordinal"));
        cd.power_dbm = c->get_double("power_dbm");
        cd.direction = fibergrid::parse_direction(c->get("direction"));
        demand.classical.push_back(cd);
    }
    return demand;
}

std::vector<xtmodel::MeasurementRecord> load_measurements_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");

    static const std::string kHeader =
        "power_dbm,pcr_cps,direction,cores,freq_ghz,length_km,filter_loss_db";

    std::vector<xtmodel::MeasurementRecord> records;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = kv::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != kHeader)
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected header '" + kHeader + "'");
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream fs(t);
        std::string field;
        while (std::getline(fs, field, ',')) fields.push_back(kv::trim(field));
        if (fields.size() != 7)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 7 fields, got " +
                             std::to_string(fields.size()));
        const std::string where = path + ":" + std::to_string(line_no);
        xtmodel::MeasurementRecord r;
        r.launch_power_dbm = to_double(fields[0], where + " power_dbm");
        r.pcr_cps = to_double(fields[1], where + " pcr_cps");
        try {
            r.direction = fibergrid::parse_direction(fields[2]);
        } catch (const std::domain_error& e) {
            throw ParseError(where + " direction: " + e.what());
        }
        std::istringstream cs(fields[3]);
        std::string core;
        while (std::getline(cs, core, '+'))
            r.active_cores.insert(static_cast<int>(to_double(kv::trim(core), where + " cores")));
        if (r.active_cores.empty()) throw ParseError(where + " cores: empty core list");
        r.probe_freq_mhz = parse_ghz_to_mhz(fields[4]);
        r.fiber_length_km = to_double(fields[5], where + " length_km");
        r.filter_loss_db = to_double(fields[6], where + " filter_loss_db");
        if (r.pcr_cps < 0) throw ParseError(where + " pcr_cps: must be non-negative");
        if (r.fiber_length_km <= 0) throw ParseError(where + " length_km: must be positive");
        records.push_back(std::move(r));
    }
    if (!header_seen) throw ParseError(path + ": empty measurement CSV");
    return records;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
}

std::string serialize_sweep_csv(const std::vector<scenario::Curve>& curves) {
    std::string out = "x,variant,skr_bps,qber,q_mu,e_mu,y1_lower,e1_upper,xt_pcr_cps,eta,y0\n";
    for (const auto& curve : curves) {
        for (const auto& p : curve.points) {
            const auto& r = p.result;
            out += format_value(p.x) + "," + curve.label + "," + format_value(r.skr_bps) + "," +
                   format_value(r.e_mu) + "," + format_value(r.q_mu) + "," + format_value(r.e_mu) +
                   "," + format_value(r.y1_lower) + "," + format_value(r.e1_upper) + "," +
                   format_value(r.xt_pcr_cps) + "," + format_value(r.eta) + "," +
                   format_value(r.y0) + "\n";
        }
    }
    return out;
}

std::vector<SweepRow> load_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::vector<SweepRow> rows;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = kv::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            header_seen = true; // header validated by prefix only; columns are fixed
            if (t.rfind("x,variant,skr_bps,qber", 0) != 0)
                throw ParseError(path + ":" + std::to_string(line_no) + ": unexpected sweep CSV header");
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream fs(t);
        std::string field;
        while (std::getline(fs, field, ',')) fields.push_back(kv::trim(field));
        if (fields.size() < 4)
            throw ParseError(path + ":" + std::to_string(line_no) + ": truncated sweep CSV row");
        const std::string where = path + ":" + std::to_string(line_no);
        SweepRow row;
        row.x = to_double(fields[0], where + " x");
        row.variant = fields[1];
        row.skr_bps = to_double(fields[2], where + " skr_bps");
        row.qber = to_double(fields[3], where + " qber");
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError(path + ": empty sweep CSV");
    return rows;
}

void write_file(const std::string& path, const std::string& body, const std::string& footer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file '" + path + "'");
    out << body;
    if (!body.empty() && body.back() != '\n') out << '\n';
    out << footer << '\n';
    if (!out) throw ParseError("write failed for '" + path + "'");
}

} // namespace mcqkd::io
