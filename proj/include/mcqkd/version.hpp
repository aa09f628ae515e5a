#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mcqkd {

inline constexpr std::string_view kVersion = "0.1.0";

// Which single-photon-yield estimator the key-rate pipeline uses; recorded in
// every output-file footer so results stay attributable.
inline constexpr std::string_view kDecoyVariantId = "vacuum-weak+measured-y0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// "# mcqkd <version> config=<hash> decoy=<variant>" reproducibility footer.
std::string output_footer(const std::string& config_hash);

} // namespace mcqkd
