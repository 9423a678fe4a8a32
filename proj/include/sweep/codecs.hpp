#pragma once

// Address string encodings: Base58Check, Bech32 segwit v0 (BIP-173), CashAddr
// (P2PKH, bitcoincash prefix) and EIP-55 checksummed hex. Encoders have
// buffer-writing variants for the scan hot path; the std::string API wraps
// them.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sweep/hashes.hpp"

namespace sweep::codecs {

// version byte(s) + 20-byte hash payload, the Base58Check body shared by all
// the P2PKH chains (Zcash uses a two-byte version).
struct VersionedPayload {
    std::array<std::uint8_t, 2> version{0, 0};
    std::uint8_t version_len = 1;
    std::array<std::uint8_t, 20> payload{};

    std::span<const std::uint8_t> version_bytes() const { return {version.data(), version_len}; }

    friend bool operator==(const VersionedPayload& a, const VersionedPayload& b) {
        return a.version_len == b.version_len &&
               std::equal(a.version.begin(), a.version.begin() + a.version_len, b.version.begin()) &&
               a.payload == b.payload;
    }
};

VersionedPayload make_versioned(std::span<const std::uint8_t> version,
                                std::span<const std::uint8_t> payload20);

// Base58(version || payload || first 4 bytes of SHA-256d). Leading zero bytes
// become leading '1' characters.
std::string base58check_encode(const VersionedPayload& vp);
std::size_t base58check_encode_into(const VersionedPayload& vp, char* out);

// Inverse; validates the checksum and that the version is 1 or 2 bytes.
VersionedPayload base58check_decode(std::string_view s);

// Full BIP-173: witness version prepended to the 5-bit regrouped program,
// BCH checksum with constant 1. Witness version must be 0 and the program
// 20 bytes (P2WPKH).
std::string bech32_segwit_encode(std::string_view hrp, int witness_version,
                                 std::span<const std::uint8_t> program);
std::size_t bech32_segwit_encode_into(std::string_view hrp, int witness_version,
                                      std::span<const std::uint8_t> program, char* out);

struct SegwitDecoded {
    std::string hrp;
    int witness_version = 0;
    std::vector<std::uint8_t> program;
};

SegwitDecoded bech32_segwit_decode(std::string_view address);

// CashAddr P2PKH over a 20-byte hash; returns the bare "q..." form unless
// with_prefix is set, in which case "bitcoincash:q...".
std::string cashaddr_encode(std::string_view prefix, std::span<const std::uint8_t> hash20,
                            bool with_prefix = false);
std::size_t cashaddr_encode_into(std::string_view prefix, std::span<const std::uint8_t> hash20,
                                 bool with_prefix, char* out);

// Accepts both forms; verifies the 40-bit checksum against the given prefix.
std::array<std::uint8_t, 20> cashaddr_decode(std::string_view address,
                                             std::string_view prefix = "bitcoincash");

// "0x" + mixed-case hex per the Keccak-256 digest of the lowercase address.
std::string eip55_checksum(std::span<const std::uint8_t> addr20);
std::size_t eip55_checksum_into(std::span<const std::uint8_t> addr20, char* out);

// True iff the string is 0x + 40 hex chars carrying its own EIP-55 casing.
bool eip55_verify(std::string_view address);

}  // namespace sweep::codecs
