#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace proofloop {

// FNV-1a 64-bit. Used wherever a stable, cross-process content hash is needed
// (request fingerprints, config fingerprints). Not cryptographic.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

}  // namespace proofloop
