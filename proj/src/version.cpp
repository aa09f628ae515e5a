#include "mcqkd/version.hpp"

#include <cstdio>

namespace mcqkd {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

std::string output_footer(const std::string& config_hash) {
    std::string line = "# mcqkd ";
    line += kVersion;
    line += " config=";
    line += config_hash.empty() ? "-" : config_hash;
    line += " decoy=";
    line += kDecoyVariantId;
    return line;
}

} // namespace mcqkd
