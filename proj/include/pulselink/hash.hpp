#pragma once

#include <cstdint>
#include <string_view>

namespace pulselink {

// FNV-1a over the UTF-8 bytes of the input, in byte order.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace pulselink
