#pragma once

// Per-chain address pipelines: private key scalar -> every address variant a
// chain supports. One scalar multiplication per key; the encodings fan out
// from the two public key serializations.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sweep/codecs.hpp"
#include "sweep/curve.hpp"
#include "sweep/scalar_group.hpp"

namespace sweep::derivation {

enum class ChainId : std::uint8_t { BTC = 0, ETH, DOGE, LTC, DASH, ZEC, BCH };

inline constexpr std::array<ChainId, 7> kAllChains = {
    ChainId::BTC, ChainId::ETH, ChainId::DOGE, ChainId::LTC,
    ChainId::DASH, ChainId::ZEC, ChainId::BCH};

enum class AddressKind : std::uint8_t {
    P2PKH_UNCOMPRESSED = 0,
    P2PKH_COMPRESSED,
    SEGWIT_V0,
    ETH_EOA,
    CASHADDR_UNCOMPRESSED,
    CASHADDR_COMPRESSED,
};

std::string_view chain_name(ChainId chain);            // "btc", "eth", ...
std::optional<ChainId> parse_chain(std::string_view);  // case-insensitive
std::string_view kind_name(AddressKind kind);          // "p2pkh_u", "segwit", ...
std::optional<AddressKind> parse_kind(std::string_view);

bool is_valid_combination(ChainId chain, AddressKind kind);
// The chain's variants in deterministic order (BTC: p2pkh_u, p2pkh_c, segwit).
std::vector<AddressKind> valid_kinds(ChainId chain);

struct ChainAddress {
    ChainId chain;
    AddressKind kind;
    std::string text;
    std::string key_hex;
    std::optional<int> coset;
    std::optional<std::uint64_t> exponent;
};

// RIPEMD-160(SHA-256(pubkey)); 33- or 65-byte serializations only.
std::array<std::uint8_t, 20> hash160(std::span<const std::uint8_t> pubkey);

// ---------------------------------------------------------------------------
// Hot path: precomputed digests of one key's public point, shared by every
// chain that needs them. The scanner fills one of these per key and renders
// each requested (chain, kind) into a stack buffer.
// ---------------------------------------------------------------------------

struct DigestNeeds {
    bool h160_uncompressed = false;
    bool h160_compressed = false;
    bool eth = false;
};

struct KeyDigests {
    std::array<std::uint8_t, 20> h160_uncompressed;
    std::array<std::uint8_t, 20> h160_compressed;
    std::array<std::uint8_t, 20> eth;
};

DigestNeeds digest_needs(std::span<const std::pair<ChainId, AddressKind>> combos);
KeyDigests make_key_digests(const curve::AffinePoint& point, const DigestNeeds& needs);

struct AddressBuf {
    char data[64];
    std::uint8_t len = 0;

    std::string_view view() const { return {data, len}; }
    std::string str() const { return std::string(data, len); }
};

AddressBuf render_address(ChainId chain, AddressKind kind, const KeyDigests& digests);

// ---------------------------------------------------------------------------
// Convenience API
// ---------------------------------------------------------------------------

ChainAddress derive(const scalars::Scalar& key, ChainId chain, AddressKind kind,
                    const curve::PrecompTable& table);

// Every valid (chain, kind) variant for the requested chains, from a single
// scalar multiplication.
std::vector<ChainAddress> derive_all(const scalars::Scalar& key, std::span<const ChainId> chains,
                                     const curve::PrecompTable& table);

}  // namespace sweep::derivation
