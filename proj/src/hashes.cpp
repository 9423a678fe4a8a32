#include "sweep/hashes.hpp"

#include <cstring>

namespace sweep::codecs {

// ============================================================================
// SHA-256 (FIPS 180-4)
// ============================================================================

namespace {

constexpr std::uint32_t kSha256K[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
};

inline std::uint32_t rotr32(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

Sha256::Sha256() : total_len_(0), buffered_(0) {
    state_[0] = 0x6a09e667;
    state_[1] = 0xbb67ae85;
    state_[2] = 0x3c6ef372;
    state_[3] = 0xa54ff53a;
    state_[4] = 0x510e527f;
    state_[5] = 0x9b05688c;
    state_[6] = 0x1f83d9ab;
    state_[7] = 0x5be0cd19;
}

void Sha256::transform(const std::uint8_t* block) {
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
        w[i] = static_cast<std::uint32_t>(block[4 * i]) << 24 |
               static_cast<std::uint32_t>(block[4 * i + 1]) << 16 |
               static_cast<std::uint32_t>(block[4 * i + 2]) << 8 | block[4 * i + 3];
    }
    for (int i = 16; i < 64; ++i) {
        std::uint32_t s0 = rotr32(w[i - 15], 7) ^ rotr32(w[i - 15], 18) ^ (w[i - 15] >> 3);
        std::uint32_t s1 = rotr32(w[i - 2], 17) ^ rotr32(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    std::uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (int i = 0; i < 64; ++i) {
        std::uint32_t s1 = rotr32(e, 6) ^ rotr32(e, 11) ^ rotr32(e, 25);
        std::uint32_t ch = (e & f) ^ (~e & g);
        std::uint32_t t1 = h + s1 + ch + kSha256K[i] + w[i];
        std::uint32_t s0 = rotr32(a, 2) ^ rotr32(a, 13) ^ rotr32(a, 22);
        std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        std::uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
    state_[5] += f;
    state_[6] += g;
    state_[7] += h;
}

void Sha256::update(const std::uint8_t* data, std::size_t len) {
    total_len_ += len;
    if (buffered_) {
        std::size_t take = std::min(len, 64 - buffered_);
        std::memcpy(buffer_ + buffered_, data, take);
        buffered_ += take;
        data += take;
        len -= take;
        if (buffered_ == 64) {
            transform(buffer_);
            buffered_ = 0;
        }
    }
    while (len >= 64) {
        transform(data);
        data += 64;
        len -= 64;
    }
    if (len) {
        std::memcpy(buffer_, data, len);
        buffered_ = len;
    }
}

Digest32 Sha256::finalize() {
    std::uint64_t bitlen = total_len_ * 8;
    std::uint8_t pad = 0x80;
    update(&pad, 1);
    std::uint8_t zero = 0;
    while (buffered_ != 56) update(&zero, 1);
    for (int i = 0; i < 8; ++i) buffer_[56 + i] = static_cast<std::uint8_t>(bitlen >> (56 - 8 * i));
    transform(buffer_);
    buffered_ = 0;
    Digest32 out;
    for (int i = 0; i < 8; ++i) {
        out[4 * i] = static_cast<std::uint8_t>(state_[i] >> 24);
        out[4 * i + 1] = static_cast<std::uint8_t>(state_[i] >> 16);
        out[4 * i + 2] = static_cast<std::uint8_t>(state_[i] >> 8);
        out[4 * i + 3] = static_cast<std::uint8_t>(state_[i]);
    }
    return out;
}

Digest32 Sha256::hash(std::span<const std::uint8_t> data) {
    Sha256 ctx;
    ctx.update(data.data(), data.size());
    return ctx.finalize();
}

// ============================================================================
// RIPEMD-160
// ============================================================================

namespace {

constexpr int kRmdR[80] = {
    0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
    7, 4, 13, 1, 10, 6, 15, 3, 12, 0, 9, 5, 2, 14, 11, 8,
    3, 10, 14, 4, 9, 15, 8, 1, 2, 7, 0, 6, 13, 11, 5, 12,
    1, 9, 11, 10, 0, 8, 12, 4, 13, 3, 7, 15, 14, 5, 6, 2,
    4, 0, 5, 9, 7, 12, 2, 10, 14, 1, 3, 8, 11, 6, 15, 13,
};
constexpr int kRmdRp[80] = {
    5, 14, 7, 0, 9, 2, 11, 4, 13, 6, 15, 8, 1, 10, 3, 12,
    6, 11, 3, 7, 0, 13, 5, 10, 14, 15, 8, 12, 4, 9, 1, 2,
    15, 5, 1, 3, 7, 14, 6, 9, 11, 8, 12, 2, 10, 0, 4, 13,
    8, 6, 4, 1, 3, 11, 15, 0, 5, 12, 2, 13, 9, 7, 10, 14,
    12, 15, 10, 4, 1, 5, 8, 7, 6, 2, 13, 14, 0, 3, 9, 11,
};
constexpr int kRmdS[80] = {
    11, 14, 15, 12, 5, 8, 7, 9, 11, 13, 14, 15, 6, 7, 9, 8,
    7, 6, 8, 13, 11, 9, 7, 15, 7, 12, 15, 9, 11, 7, 13, 12,
    11, 13, 6, 7, 14, 9, 13, 15, 14, 8, 13, 6, 5, 12, 7, 5,
    11, 12, 14, 15, 14, 15, 9, 8, 9, 14, 5, 6, 8, 6, 5, 12,
    9, 15, 5, 11, 6, 8, 13, 12, 5, 12, 13, 14, 11, 8, 5, 6,
};
constexpr int kRmdSp[80] = {
    8, 9, 9, 11, 13, 15, 15, 5, 7, 7, 8, 11, 14, 14, 12, 6,
    9, 13, 15, 7, 12, 8, 9, 11, 7, 7, 12, 7, 6, 15, 13, 11,
    9, 7, 15, 11, 8, 6, 6, 14, 12, 13, 5, 14, 13, 13, 7, 5,
    15, 5, 8, 11, 14, 14, 6, 14, 6, 9, 12, 9, 12, 5, 15, 8,
    8, 5, 12, 9, 12, 5, 14, 6, 8, 13, 6, 5, 15, 13, 11, 11,
};
constexpr std::uint32_t kRmdK[5] = {0x00000000, 0x5A827999, 0x6ED9EBA1, 0x8F1BBCDC, 0xA953FD4E};
constexpr std::uint32_t kRmdKp[5] = {0x50A28BE6, 0x5C4DD124, 0x6D703EF3, 0x7A6D76E9, 0x00000000};

inline std::uint32_t rotl32(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

inline std::uint32_t rmd_f(int round, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    switch (round) {
        case 0: return x ^ y ^ z;
        case 1: return (x & y) | (~x & z);
        case 2: return (x | ~y) ^ z;
        case 3: return (x & z) | (y & ~z);
        default: return x ^ (y | ~z);
    }
}

}  // namespace

Ripemd160::Ripemd160() : total_len_(0), buffered_(0) {
    state_[0] = 0x67452301;
    state_[1] = 0xEFCDAB89;
    state_[2] = 0x98BADCFE;
    state_[3] = 0x10325476;
    state_[4] = 0xC3D2E1F0;
}

void Ripemd160::transform(const std::uint8_t* block) {
    std::uint32_t x[16];
    for (int i = 0; i < 16; ++i) {
        x[i] = static_cast<std::uint32_t>(block[4 * i]) | static_cast<std::uint32_t>(block[4 * i + 1]) << 8 |
               static_cast<std::uint32_t>(block[4 * i + 2]) << 16 |
               static_cast<std::uint32_t>(block[4 * i + 3]) << 24;
    }
    std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3], e = state_[4];
    std::uint32_t ap = a, bp = b, cp = c, dp = d, ep = e;
    for (int i = 0; i < 80; ++i) {
        int round = i / 16;
        std::uint32_t t = rotl32(a + rmd_f(round, b, c, d) + x[kRmdR[i]] + kRmdK[round], kRmdS[i]) + e;
        a = e;
        e = d;
        d = rotl32(c, 10);
        c = b;
        b = t;
        t = rotl32(ap + rmd_f(4 - round, bp, cp, dp) + x[kRmdRp[i]] + kRmdKp[round], kRmdSp[i]) + ep;
        ap = ep;
        ep = dp;
        dp = rotl32(cp, 10);
        cp = bp;
        bp = t;
    }
    std::uint32_t t = state_[1] + c + dp;
    state_[1] = state_[2] + d + ep;
    state_[2] = state_[3] + e + ap;
    state_[3] = state_[4] + a + bp;
    state_[4] = state_[0] + b + cp;
    state_[0] = t;
}

void Ripemd160::update(const std::uint8_t* data, std::size_t len) {
    total_len_ += len;
    if (buffered_) {
        std::size_t take = std::min(len, 64 - buffered_);
        std::memcpy(buffer_ + buffered_, data, take);
        buffered_ += take;
        data += take;
        len -= take;
        if (buffered_ == 64) {
            transform(buffer_);
            buffered_ = 0;
        }
    }
    while (len >= 64) {
        transform(data);
        data += 64;
        len -= 64;
    }
    if (len) {
        std::memcpy(buffer_, data, len);
        buffered_ = len;
    }
}

Digest20 Ripemd160::finalize() {
    std::uint64_t bitlen = total_len_ * 8;
    std::uint8_t pad = 0x80;
    update(&pad, 1);
    std::uint8_t zero = 0;
    while (buffered_ != 56) update(&zero, 1);
    for (int i = 0; i < 8; ++i) buffer_[56 + i] = static_cast<std::uint8_t>(bitlen >> (8 * i));
    transform(buffer_);
    buffered_ = 0;
    Digest20 out;
    for (int i = 0; i < 5; ++i) {
        out[4 * i] = static_cast<std::uint8_t>(state_[i]);
        out[4 * i + 1] = static_cast<std::uint8_t>(state_[i] >> 8);
        out[4 * i + 2] = static_cast<std::uint8_t>(state_[i] >> 16);
        out[4 * i + 3] = static_cast<std::uint8_t>(state_[i] >> 24);
    }
    return out;
}

Digest20 Ripemd160::hash(std::span<const std::uint8_t> data) {
    Ripemd160 ctx;
    ctx.update(data.data(), data.size());
    return ctx.finalize();
}

// ============================================================================
// Keccak-256, original padding (0x01), rate 136
// ============================================================================

namespace {

constexpr std::uint64_t kKeccakRc[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808AULL, 0x8000000080008000ULL,
    0x000000000000808BULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008AULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000AULL,
    0x000000008000808BULL, 0x800000000000008BULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800AULL, 0x800000008000000AULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

inline std::uint64_t rotl64(std::uint64_t x, int n) { return (x << n) | (x >> (64 - n)); }

void keccak_f1600(std::uint64_t st[25]) {
    for (int round = 0; round < 24; ++round) {
        std::uint64_t bc[5];
        for (int i = 0; i < 5; ++i) bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
        for (int i = 0; i < 5; ++i) {
            std::uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
        }
        // rho + pi
        std::uint64_t t = st[1];
        static constexpr int kPiln[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                          15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};
        static constexpr int kRotc[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                          27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};
        for (int i = 0; i < 24; ++i) {
            int j = kPiln[i];
            bc[0] = st[j];
            st[j] = rotl64(t, kRotc[i]);
            t = bc[0];
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            for (int i = 0; i < 5; ++i) bc[i] = st[j + i];
            for (int i = 0; i < 5; ++i) st[j + i] = bc[i] ^ (~bc[(i + 1) % 5] & bc[(i + 2) % 5]);
        }
        st[0] ^= kKeccakRc[round];
    }
}

}  // namespace

Keccak256::Keccak256() : buffered_(0) { std::memset(state_, 0, sizeof(state_)); }

void Keccak256::absorb_block() {
    for (int i = 0; i < 17; ++i) {
        std::uint64_t lane = 0;
        std::memcpy(&lane, buffer_ + 8 * i, 8);  // little-endian hosts only
        state_[i] ^= lane;
    }
    keccak_f1600(state_);
    buffered_ = 0;
}

void Keccak256::update(const std::uint8_t* data, std::size_t len) {
    while (len) {
        std::size_t take = std::min(len, sizeof(buffer_) - buffered_);
        std::memcpy(buffer_ + buffered_, data, take);
        buffered_ += take;
        data += take;
        len -= take;
        if (buffered_ == sizeof(buffer_)) absorb_block();
    }
}

Digest32 Keccak256::finalize() {
    std::memset(buffer_ + buffered_, 0, sizeof(buffer_) - buffered_);
    buffer_[buffered_] = 0x01;  // original Keccak pad, not the SHA-3 0x06
    buffer_[sizeof(buffer_) - 1] |= 0x80;
    buffered_ = sizeof(buffer_);
    absorb_block();
    Digest32 out;
    std::memcpy(out.data(), state_, 32);
    return out;
}

Digest32 Keccak256::hash(std::span<const std::uint8_t> data) {
    Keccak256 ctx;
    ctx.update(data.data(), data.size());
    return ctx.finalize();
}

Digest32 hash256(std::span<const std::uint8_t> data) { return Sha256::hash(Sha256::hash(data)); }

}  // namespace sweep::codecs
