#pragma once

#include <string>

namespace mcqkd::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitCalibration = 3;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    bool exhaustive_planner = false;
};

int cmd_plan(const Options& opts);
int cmd_calibrate(const Options& opts);
int cmd_predict(const Options& opts);
int cmd_sweep(const Options& opts);
int cmd_report(const Options& opts);

// Runs a subcommand and maps exceptions onto the exit-code contract.
int dispatch(const std::string& subcommand, const Options& opts);

} // namespace mcqkd::cli
