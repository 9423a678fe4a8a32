#include "sweep/derivation.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

#include "sweep/error.hpp"
#include "sweep/u256.hpp"

namespace sweep::derivation {

namespace {

struct ChainInfo {
    const char* name;
    std::uint8_t version[2];
    std::uint8_t version_len;  // 0 for chains without Base58 addresses
    const char* segwit_hrp;    // nullptr if the chain has no segwit
};

// Version bytes: BTC 0x00, DOGE 0x1E ('D...'), LTC 0x30 ('L...'),
// DASH 0x4C ('X...'), ZEC 0x1C,0xB8 ("t1..."). ETH and BCH do not use
// Base58Check.
constexpr ChainInfo kChains[7] = {
    {"btc", {0x00, 0x00}, 1, "bc"},
    {"eth", {0x00, 0x00}, 0, nullptr},
    {"doge", {0x1E, 0x00}, 1, nullptr},
    {"ltc", {0x30, 0x00}, 1, "ltc"},
    {"dash", {0x4C, 0x00}, 1, nullptr},
    {"zec", {0x1C, 0xB8}, 2, nullptr},
    {"bch", {0x00, 0x00}, 0, nullptr},
};

constexpr const char* kKindNames[6] = {"p2pkh_u", "p2pkh_c", "segwit", "eth",
                                       "cashaddr_u", "cashaddr_c"};

const ChainInfo& info(ChainId chain) { return kChains[static_cast<std::size_t>(chain)]; }

}  // namespace

std::string_view chain_name(ChainId chain) { return info(chain).name; }

std::optional<ChainId> parse_chain(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](char c) { return static_cast<char>(std::tolower(c)); });
    for (ChainId chain : kAllChains) {
        if (lower == info(chain).name) return chain;
    }
    return std::nullopt;
}

std::string_view kind_name(AddressKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<AddressKind> parse_kind(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](char c) { return static_cast<char>(std::tolower(c)); });
    for (int i = 0; i < 6; ++i) {
        if (lower == kKindNames[i]) return static_cast<AddressKind>(i);
    }
    return std::nullopt;
}

bool is_valid_combination(ChainId chain, AddressKind kind) {
    switch (kind) {
        case AddressKind::P2PKH_UNCOMPRESSED:
        case AddressKind::P2PKH_COMPRESSED:
            return info(chain).version_len > 0;
        case AddressKind::SEGWIT_V0:
            return info(chain).segwit_hrp != nullptr;
        case AddressKind::ETH_EOA:
            return chain == ChainId::ETH;
        case AddressKind::CASHADDR_UNCOMPRESSED:
        case AddressKind::CASHADDR_COMPRESSED:
            return chain == ChainId::BCH;
    }
    return false;
}

std::vector<AddressKind> valid_kinds(ChainId chain) {
    std::vector<AddressKind> out;
    for (int i = 0; i < 6; ++i) {
        auto kind = static_cast<AddressKind>(i);
        if (is_valid_combination(chain, kind)) out.push_back(kind);
    }
    return out;
}

std::array<std::uint8_t, 20> hash160(std::span<const std::uint8_t> pubkey) {
    if (pubkey.size() != 33 && pubkey.size() != 65)
        raise(Error::Code::BadLength, "hash160 expects a 33- or 65-byte public key");
    auto sha = codecs::sha256(pubkey);
    return codecs::ripemd160(sha);
}

DigestNeeds digest_needs(std::span<const std::pair<ChainId, AddressKind>> combos) {
    DigestNeeds needs;
    for (const auto& [chain, kind] : combos) {
        (void)chain;
        switch (kind) {
            case AddressKind::P2PKH_UNCOMPRESSED:
            case AddressKind::CASHADDR_UNCOMPRESSED:
                needs.h160_uncompressed = true;
                break;
            case AddressKind::P2PKH_COMPRESSED:
            case AddressKind::SEGWIT_V0:
            case AddressKind::CASHADDR_COMPRESSED:
                needs.h160_compressed = true;
                break;
            case AddressKind::ETH_EOA:
                needs.eth = true;
                break;
        }
    }
    return needs;
}

KeyDigests make_key_digests(const curve::AffinePoint& point, const DigestNeeds& needs) {
    KeyDigests out{};
    std::uint8_t buf[65];
    if (needs.h160_uncompressed || needs.eth) {
        curve::serialize_pubkey_into(point, false, buf);
        if (needs.h160_uncompressed) out.h160_uncompressed = hash160({buf, 65});
        if (needs.eth) {
            // Ethereum hashes the raw 64-byte X||Y (no 0x04) and keeps the
            // last 20 bytes of the digest.
            auto digest = codecs::keccak256({buf + 1, 64});
            std::memcpy(out.eth.data(), digest.data() + 12, 20);
        }
    }
    if (needs.h160_compressed) {
        curve::serialize_pubkey_into(point, true, buf);
        out.h160_compressed = hash160({buf, 33});
    }
    return out;
}

AddressBuf render_address(ChainId chain, AddressKind kind, const KeyDigests& digests) {
    if (!is_valid_combination(chain, kind))
        raise(Error::Code::InvalidCombination,
              std::string("chain ") + std::string(chain_name(chain)) + " has no " +
                  std::string(kind_name(kind)) + " addresses");
    const ChainInfo& ci = info(chain);
    AddressBuf out;
    switch (kind) {
        case AddressKind::P2PKH_UNCOMPRESSED:
        case AddressKind::P2PKH_COMPRESSED: {
            const auto& h160 = kind == AddressKind::P2PKH_UNCOMPRESSED ? digests.h160_uncompressed
                                                                       : digests.h160_compressed;
            auto vp = codecs::make_versioned({ci.version, ci.version_len}, h160);
            out.len = static_cast<std::uint8_t>(codecs::base58check_encode_into(vp, out.data));
            break;
        }
        case AddressKind::SEGWIT_V0:
            out.len = static_cast<std::uint8_t>(
                codecs::bech32_segwit_encode_into(ci.segwit_hrp, 0, digests.h160_compressed, out.data));
            break;
        case AddressKind::ETH_EOA:
            out.len = static_cast<std::uint8_t>(codecs::eip55_checksum_into(digests.eth, out.data));
            break;
        case AddressKind::CASHADDR_UNCOMPRESSED:
            out.len = static_cast<std::uint8_t>(
                codecs::cashaddr_encode_into("bitcoincash", digests.h160_uncompressed, false, out.data));
            break;
        case AddressKind::CASHADDR_COMPRESSED:
            out.len = static_cast<std::uint8_t>(
                codecs::cashaddr_encode_into("bitcoincash", digests.h160_compressed, false, out.data));
            break;
    }
    return out;
}

ChainAddress derive(const scalars::Scalar& key, ChainId chain, AddressKind kind,
                    const curve::PrecompTable& table) {
    if (key.is_zero()) raise(Error::Code::ZeroKey, "zero is not a valid private key");
    if (!is_valid_combination(chain, kind))
        raise(Error::Code::InvalidCombination,
              std::string("chain ") + std::string(chain_name(chain)) + " has no " +
                  std::string(kind_name(kind)) + " addresses");
    auto point = curve::to_affine(curve::scalar_mul(key, table));
    std::pair<ChainId, AddressKind> combo{chain, kind};
    auto digests = make_key_digests(point, digest_needs({&combo, 1}));
    ChainAddress out;
    out.chain = chain;
    out.kind = kind;
    out.text = render_address(chain, kind, digests).str();
    out.key_hex = key.to_hex();
    return out;
}

std::vector<ChainAddress> derive_all(const scalars::Scalar& key, std::span<const ChainId> chains,
                                     const curve::PrecompTable& table) {
    if (key.is_zero()) raise(Error::Code::ZeroKey, "zero is not a valid private key");
    if (chains.empty()) raise(Error::Code::EmptyInput, "no chains requested");
    std::vector<std::pair<ChainId, AddressKind>> combos;
    for (ChainId chain : chains) {
        for (AddressKind kind : valid_kinds(chain)) combos.emplace_back(chain, kind);
    }
    auto point = curve::to_affine(curve::scalar_mul(key, table));
    auto digests = make_key_digests(point, digest_needs(combos));
    std::vector<ChainAddress> out;
    out.reserve(combos.size());
    for (const auto& [chain, kind] : combos) {
        ChainAddress addr;
        addr.chain = chain;
        addr.kind = kind;
        addr.text = render_address(chain, kind, digests).str();
        addr.key_hex = key.to_hex();
        out.push_back(std::move(addr));
    }
    return out;
}

}  // namespace sweep::derivation
