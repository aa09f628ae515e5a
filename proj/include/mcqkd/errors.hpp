#pragma once

#include <stdexcept>
#include <string>

namespace mcqkd {

// Input text that could not be parsed (config, plan file or CSV).
// The CLI maps this to exit code 2.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A calibration solve that failed to converge or has no solution inside the
// physical parameter ranges. The CLI maps this to exit code 3.
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mcqkd
