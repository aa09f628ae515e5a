#pragma once

#include <cstdint>
#include <string>

namespace mcqkd {

// Channel frequencies are exact integer MHz end to end, so the interleave
// arithmetic (including the half-spacing offset) never rounds. File formats
// speak decimal GHz; conversion is exact or rejected.
using FreqMhz = std::int64_t;

double mhz_to_thz(FreqMhz f);

// dBm <-> mW and dB ratios. Every 10^(x/10) in the code base goes through
// these to keep the unit conventions in one place.
double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double db_gain_factor(double db);  // > 1 for positive dB
double db_loss_factor(double db);  // < 1 for positive dB

// Exact decimal-GHz parsing ("193400", "12.5", "0.125") to integer MHz.
// Throws ParseError on malformed text or sub-MHz precision.
FreqMhz parse_ghz_to_mhz(const std::string& text);

// Inverse: minimal decimal representation in GHz ("193400", "12.5").
std::string format_mhz_as_ghz(FreqMhz f);

} // namespace mcqkd
