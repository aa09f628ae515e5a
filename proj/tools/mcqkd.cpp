#include <CLI11.hpp>

#include "mcqkd/cli.hpp"
#include "mcqkd/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Planning and simulation toolkit for QKD / classical-traffic "
                 "coexistence over multicore fiber"};
    app.set_version_flag("--version", std::string(mcqkd::kVersion));
    app.require_subcommand(1);

    mcqkd::cli::Options opts;
    std::string subcommand;

    auto add = [&](const std::string& name, const std::string& desc, bool planner_flags = false) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", opts.config_path, "run configuration file")->required();
        sub->add_option("--out", opts.out_dir, "output directory (default: current)");
        if (planner_flags)
            sub->add_flag("--exhaustive-planner", opts.exhaustive_planner,
                          "verify the greedy assignment against full enumeration");
        sub->callback([&, name] { subcommand = name; });
        return sub;
    };

    add("plan", "assign cores and interleaved channels for a traffic demand", true);
    add("calibrate", "fit the crosstalk model from a measurement CSV");
    add("predict", "evaluate one link scenario and emit a single result row");
    add("sweep", "run a parameter sweep and emit curves plus a summary");
    add("report", "summarize an existing sweep CSV");

    CLI11_PARSE(app, argc, argv);
    return mcqkd::cli::dispatch(subcommand, opts);
}
