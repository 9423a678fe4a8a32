#pragma once

// SHA-256, RIPEMD-160 and Keccak-256 (original 0x01 padding, the pre-SHA3
// variant Ethereum uses). Portable implementations locked to the published
// reference vectors in the test suite.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace sweep::codecs {

using Digest32 = std::array<std::uint8_t, 32>;
using Digest20 = std::array<std::uint8_t, 20>;

class Sha256 {
public:
    Sha256();
    void update(const std::uint8_t* data, std::size_t len);
    Digest32 finalize();

    static Digest32 hash(std::span<const std::uint8_t> data);

private:
    void transform(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint64_t total_len_;
    std::uint8_t buffer_[64];
    std::size_t buffered_;
};

class Ripemd160 {
public:
    Ripemd160();
    void update(const std::uint8_t* data, std::size_t len);
    Digest20 finalize();

    static Digest20 hash(std::span<const std::uint8_t> data);

private:
    void transform(const std::uint8_t* block);

    std::uint32_t state_[5];
    std::uint64_t total_len_;
    std::uint8_t buffer_[64];
    std::size_t buffered_;
};

class Keccak256 {
public:
    Keccak256();
    void update(const std::uint8_t* data, std::size_t len);
    Digest32 finalize();

    static Digest32 hash(std::span<const std::uint8_t> data);

private:
    void absorb_block();

    std::uint64_t state_[25];
    std::uint8_t buffer_[136];
    std::size_t buffered_;
};

inline Digest32 sha256(std::span<const std::uint8_t> data) { return Sha256::hash(data); }
inline Digest20 ripemd160(std::span<const std::uint8_t> data) { return Ripemd160::hash(data); }
inline Digest32 keccak256(std::span<const std::uint8_t> data) { return Keccak256::hash(data); }

// SHA-256(SHA-256(data)), the Base58Check checksum primitive.
Digest32 hash256(std::span<const std::uint8_t> data);

}  // namespace sweep::codecs
