#pragma once

// Fixed-width 256-bit unsigned helpers shared by the scalar and field types.
// Limbs are little-endian: w[0] is least significant. Serialization is always
// 32 bytes big-endian.

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

#include "sweep/error.hpp"
#include "sweep/hex.hpp"

namespace sweep {

struct U256 {
    std::array<std::uint64_t, 4> w{0, 0, 0, 0};

    friend bool operator==(const U256& a, const U256& b) { return a.w == b.w; }
};

namespace u256 {

using uint128 = unsigned __int128;

inline U256 from_u64(std::uint64_t v) {
    U256 r;
    r.w[0] = v;
    return r;
}

inline bool is_zero(const U256& a) { return (a.w[0] | a.w[1] | a.w[2] | a.w[3]) == 0; }

inline int cmp(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
        if (a.w[i] < b.w[i]) return -1;
        if (a.w[i] > b.w[i]) return 1;
    }
    return 0;
}

// r = a + b, returns the carry out.
inline std::uint64_t add(U256& r, const U256& a, const U256& b) {
    uint128 acc = 0;
    for (int i = 0; i < 4; ++i) {
        acc += static_cast<uint128>(a.w[i]) + b.w[i];
        r.w[i] = static_cast<std::uint64_t>(acc);
        acc >>= 64;
    }
    return static_cast<std::uint64_t>(acc);
}

// r = a - b, returns the borrow out (1 if a < b).
inline std::uint64_t sub(U256& r, const U256& a, const U256& b) {
    std::uint64_t borrow = 0;
    for (int i = 0; i < 4; ++i) {
        std::uint64_t bi = b.w[i];
        std::uint64_t d = a.w[i] - bi;
        std::uint64_t borrow2 = a.w[i] < bi;
        std::uint64_t d2 = d - borrow;
        borrow = borrow2 | (d < borrow);
        r.w[i] = d2;
    }
    return borrow;
}

// out[0..7] = a * b (schoolbook).
inline void mul_wide(std::uint64_t out[8], const U256& a, const U256& b) {
    std::memset(out, 0, 8 * sizeof(std::uint64_t));
    for (int i = 0; i < 4; ++i) {
        std::uint64_t carry = 0;
        for (int j = 0; j < 4; ++j) {
            uint128 cur = static_cast<uint128>(a.w[i]) * b.w[j] + out[i + j] + carry;
            out[i + j] = static_cast<std::uint64_t>(cur);
            carry = static_cast<std::uint64_t>(cur >> 64);
        }
        out[i + 4] = carry;
    }
}

inline bool bit(const U256& a, unsigned i) { return (a.w[i >> 6] >> (i & 63)) & 1; }

inline unsigned bit_length(const U256& a) {
    for (int i = 3; i >= 0; --i) {
        if (a.w[i]) return 64 * i + 64 - __builtin_clzll(a.w[i]);
    }
    return 0;
}

inline U256 from_bytes_be(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 32) raise(Error::Code::BadLength, "expected 32 bytes");
    U256 r;
    for (int i = 0; i < 4; ++i) {
        std::uint64_t v = 0;
        for (int j = 0; j < 8; ++j) v = v << 8 | bytes[8 * (3 - i) + j];
        r.w[i] = v;
    }
    return r;
}

inline std::array<std::uint8_t, 32> to_bytes_be(const U256& a) {
    std::array<std::uint8_t, 32> out;
    for (int i = 0; i < 4; ++i) {
        std::uint64_t v = a.w[3 - i];
        for (int j = 7; j >= 0; --j) {
            out[8 * i + j] = static_cast<std::uint8_t>(v);
            v >>= 8;
        }
    }
    return out;
}

inline U256 from_hex(std::string_view hex) {
    if (hex.size() != 64) raise(Error::Code::BadLength, "expected 64 hex chars");
    auto bytes = sweep::from_hex(hex);
    return from_bytes_be(bytes);
}

inline std::string to_hex(const U256& a) {
    auto bytes = to_bytes_be(a);
    return sweep::to_hex(bytes);
}

}  // namespace u256
}  // namespace sweep
