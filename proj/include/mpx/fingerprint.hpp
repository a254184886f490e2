#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "mpx/types.hpp"

// 128-bit state fingerprints: the first 16 bytes of SHA-256 over a canonical
// byte encoding. Collisions are treated as impossible; the explorer still
// cross-checks full state equality on every dedupe hit.

namespace mpx {

struct Fingerprint {
    std::array<uint8_t, 16> bytes{};
    auto operator<=>(const Fingerprint&) const = default;
};

Fingerprint fingerprint_bytes(const Bytes& data);

std::string to_hex(const Fingerprint& fp);
bool parse_fingerprint(const std::string& hex, Fingerprint& out);

// For unordered_map keys.
struct FingerprintHash {
    size_t operator()(const Fingerprint& fp) const {
        uint64_t x;
        static_assert(sizeof(x) <= sizeof(fp.bytes));
        __builtin_memcpy(&x, fp.bytes.data(), sizeof(x));
        return static_cast<size_t>(x);
    }
};

}  // namespace mpx
