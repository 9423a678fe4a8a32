#include "sweep/codecs.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

#include "sweep/error.hpp"
#include "sweep/hex.hpp"

namespace sweep::codecs {

// ============================================================================
// Base58Check
// ============================================================================

namespace {

constexpr const char* kBase58Alphabet = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

constexpr std::array<std::int8_t, 128> make_base58_rev() {
    std::array<std::int8_t, 128> rev{};
    for (auto& v : rev) v = -1;
    for (int i = 0; i < 58; ++i) rev[static_cast<unsigned char>(kBase58Alphabet[i])] = static_cast<std::int8_t>(i);
    return rev;
}

constexpr auto kBase58Rev = make_base58_rev();

// data is at most 26 bytes (2 version + 20 payload + 4 checksum).
std::size_t base58_encode_into(const std::uint8_t* data, std::size_t len, char* out) {
    std::uint8_t buf[32];
    std::memcpy(buf, data, len);
    std::size_t zeros = 0;
    while (zeros < len && data[zeros] == 0) ++zeros;

    char digits[48];
    std::size_t ndigits = 0;
    std::size_t start = zeros;
    while (start < len) {
        // one pass of long division by 58 over the big-endian byte string
        std::uint32_t rem = 0;
        for (std::size_t i = start; i < len; ++i) {
            std::uint32_t cur = rem << 8 | buf[i];
            buf[i] = static_cast<std::uint8_t>(cur / 58);
            rem = cur % 58;
        }
        digits[ndigits++] = kBase58Alphabet[rem];
        while (start < len && buf[start] == 0) ++start;
    }
    std::size_t pos = 0;
    for (std::size_t i = 0; i < zeros; ++i) out[pos++] = '1';
    while (ndigits) out[pos++] = digits[--ndigits];
    return pos;
}

}  // namespace

VersionedPayload make_versioned(std::span<const std::uint8_t> version,
                                std::span<const std::uint8_t> payload20) {
    if (version.size() != 1 && version.size() != 2)
        raise(Error::Code::BadLength, "version must be 1 or 2 bytes");
    if (payload20.size() != 20) raise(Error::Code::BadLength, "payload must be 20 bytes");
    VersionedPayload vp;
    vp.version_len = static_cast<std::uint8_t>(version.size());
    std::copy(version.begin(), version.end(), vp.version.begin());
    std::copy(payload20.begin(), payload20.end(), vp.payload.begin());
    return vp;
}

std::size_t base58check_encode_into(const VersionedPayload& vp, char* out) {
    std::uint8_t data[26];
    std::size_t len = vp.version_len;
    std::memcpy(data, vp.version.data(), len);
    std::memcpy(data + len, vp.payload.data(), 20);
    len += 20;
    auto checksum = hash256({data, len});
    std::memcpy(data + len, checksum.data(), 4);
    len += 4;
    return base58_encode_into(data, len, out);
}

std::string base58check_encode(const VersionedPayload& vp) {
    char buf[64];
    return std::string(buf, base58check_encode_into(vp, buf));
}

VersionedPayload base58check_decode(std::string_view s) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(s.size());
    std::size_t zeros = 0;
    for (char c : s) {
        if (c != '1') break;
        ++zeros;
    }
    for (char c : s) {
        if (static_cast<unsigned char>(c) >= 128 || kBase58Rev[static_cast<unsigned char>(c)] < 0)
            raise(Error::Code::BadAlphabet, "character outside the Base58 alphabet");
        std::uint32_t carry = static_cast<std::uint32_t>(kBase58Rev[static_cast<unsigned char>(c)]);
        for (auto it = bytes.rbegin(); it != bytes.rend(); ++it) {
            std::uint32_t cur = static_cast<std::uint32_t>(*it) * 58 + carry;
            *it = static_cast<std::uint8_t>(cur);
            carry = cur >> 8;
        }
        while (carry) {
            bytes.insert(bytes.begin(), static_cast<std::uint8_t>(carry));
            carry >>= 8;
        }
    }
    std::vector<std::uint8_t> full(zeros, 0);
    full.insert(full.end(), bytes.begin(), bytes.end());
    if (full.size() < 25 || full.size() > 26)
        raise(Error::Code::BadLength, "decoded length is not a versioned 20-byte payload");
    auto checksum = hash256({full.data(), full.size() - 4});
    if (!std::equal(checksum.begin(), checksum.begin() + 4, full.end() - 4))
        raise(Error::Code::BadChecksum, "Base58Check checksum mismatch");
    std::size_t vlen = full.size() - 24;
    return make_versioned({full.data(), vlen}, {full.data() + vlen, 20});
}

// ============================================================================
// Bech32 (BIP-173) and CashAddr share the 32-character set
// ============================================================================

namespace {

constexpr const char* kCharset32 = "qpzry9x8gf2tvdw0s3jn54khce6mua7l";

constexpr std::array<std::int8_t, 128> make_rev32() {
    std::array<std::int8_t, 128> rev{};
    for (auto& v : rev) v = -1;
    for (int i = 0; i < 32; ++i) rev[static_cast<unsigned char>(kCharset32[i])] = static_cast<std::int8_t>(i);
    return rev;
}

constexpr auto kRev32 = make_rev32();

std::uint32_t bech32_polymod(std::span<const std::uint8_t> values) {
    static constexpr std::uint32_t kGen[5] = {0x3B6A57B2, 0x26508E6D, 0x1EA119FA, 0x3D4233DD,
                                              0x2A1462B3};
    std::uint32_t chk = 1;
    for (std::uint8_t v : values) {
        std::uint32_t top = chk >> 25;
        chk = (chk & 0x1FFFFFF) << 5 ^ v;
        for (int i = 0; i < 5; ++i) {
            if ((top >> i) & 1) chk ^= kGen[i];
        }
    }
    return chk;
}

// 8-bit groups to 5-bit groups, padded; out must hold ceil(len*8/5).
std::size_t convert_8to5(std::span<const std::uint8_t> in, std::uint8_t* out) {
    std::uint32_t acc = 0;
    int bits = 0;
    std::size_t n = 0;
    for (std::uint8_t b : in) {
        acc = acc << 8 | b;
        bits += 8;
        while (bits >= 5) {
            bits -= 5;
            out[n++] = (acc >> bits) & 31;
        }
    }
    if (bits) out[n++] = (acc << (5 - bits)) & 31;
    return n;
}

std::vector<std::uint8_t> convert_5to8_strict(std::span<const std::uint8_t> in) {
    std::vector<std::uint8_t> out;
    std::uint32_t acc = 0;
    int bits = 0;
    for (std::uint8_t b : in) {
        acc = acc << 5 | b;
        bits += 5;
        if (bits >= 8) {
            bits -= 8;
            out.push_back((acc >> bits) & 0xFF);
        }
    }
    if (bits >= 5 || ((acc << (8 - bits)) & 0xFF))
        raise(Error::Code::BadChecksum, "invalid padding in 5-bit data");
    return out;
}

std::uint64_t cashaddr_polymod(std::span<const std::uint8_t> values) {
    std::uint64_t c = 1;
    for (std::uint8_t d : values) {
        std::uint8_t c0 = static_cast<std::uint8_t>(c >> 35);
        c = ((c & 0x07FFFFFFFFULL) << 5) ^ d;
        if (c0 & 0x01) c ^= 0x98F2BC8E61ULL;
        if (c0 & 0x02) c ^= 0x79B76D99E2ULL;
        if (c0 & 0x04) c ^= 0xF33E5FB3C4ULL;
        if (c0 & 0x08) c ^= 0xAE2EABE2A8ULL;
        if (c0 & 0x10) c ^= 0x1E4F43E470ULL;
    }
    return c ^ 1;
}

}  // namespace

std::size_t bech32_segwit_encode_into(std::string_view hrp, int witness_version,
                                      std::span<const std::uint8_t> program, char* out) {
    if (witness_version != 0)
        raise(Error::Code::OutOfRange, "only witness version 0 is supported");
    if (program.size() != 20)
        raise(Error::Code::BadProgramLength, "witness program must be 20 bytes");
    if (hrp.empty() || hrp.size() > 20) raise(Error::Code::BadLength, "hrp length out of range");

    std::uint8_t data[40];
    data[0] = 0;  // witness version
    std::size_t dlen = 1 + convert_8to5(program, data + 1);

    std::uint8_t check_input[96];
    std::size_t n = 0;
    for (char c : hrp) check_input[n++] = static_cast<std::uint8_t>(c) >> 5;
    check_input[n++] = 0;
    for (char c : hrp) check_input[n++] = static_cast<std::uint8_t>(c) & 31;
    std::memcpy(check_input + n, data, dlen);
    n += dlen;
    std::memset(check_input + n, 0, 6);
    std::uint32_t pm = bech32_polymod({check_input, n + 6}) ^ 1;

    std::size_t pos = 0;
    for (char c : hrp) out[pos++] = c;
    out[pos++] = '1';
    for (std::size_t i = 0; i < dlen; ++i) out[pos++] = kCharset32[data[i]];
    for (int i = 0; i < 6; ++i) out[pos++] = kCharset32[(pm >> (5 * (5 - i))) & 31];
    return pos;
}

std::string bech32_segwit_encode(std::string_view hrp, int witness_version,
                                 std::span<const std::uint8_t> program) {
    char buf[128];
    return std::string(buf, bech32_segwit_encode_into(hrp, witness_version, program, buf));
}

SegwitDecoded bech32_segwit_decode(std::string_view address) {
    if (address.size() < 8 || address.size() > 90)
        raise(Error::Code::BadLength, "bech32 string length out of range");
    bool lower = false, upper = false;
    for (char c : address) {
        if (c < 33 || c > 126) raise(Error::Code::BadAlphabet, "bech32 character out of range");
        lower |= (c >= 'a' && c <= 'z');
        upper |= (c >= 'A' && c <= 'Z');
    }
    if (lower && upper) raise(Error::Code::BadAlphabet, "bech32 strings must not mix case");
    std::string s(address);
    std::transform(s.begin(), s.end(), s.begin(), [](char c) { return static_cast<char>(std::tolower(c)); });

    std::size_t sep = s.find_last_of('1');
    if (sep == std::string::npos || sep == 0 || sep + 7 > s.size())
        raise(Error::Code::BadLength, "missing bech32 separator");
    std::string hrp = s.substr(0, sep);
    std::vector<std::uint8_t> data;
    for (std::size_t i = sep + 1; i < s.size(); ++i) {
        std::int8_t v = kRev32[static_cast<unsigned char>(s[i])];
        if (v < 0) raise(Error::Code::BadAlphabet, "invalid bech32 data character");
        data.push_back(static_cast<std::uint8_t>(v));
    }

    std::vector<std::uint8_t> check_input;
    for (char c : hrp) check_input.push_back(static_cast<std::uint8_t>(c) >> 5);
    check_input.push_back(0);
    for (char c : hrp) check_input.push_back(static_cast<std::uint8_t>(c) & 31);
    check_input.insert(check_input.end(), data.begin(), data.end());
    if (bech32_polymod(check_input) != 1)
        raise(Error::Code::BadChecksum, "bech32 checksum mismatch");

    if (data.size() < 7) raise(Error::Code::BadLength, "bech32 data part too short");
    SegwitDecoded out;
    out.hrp = hrp;
    out.witness_version = data[0];
    if (out.witness_version != 0)
        raise(Error::Code::OutOfRange, "only witness version 0 is supported");
    out.program = convert_5to8_strict({data.data() + 1, data.size() - 7});
    if (out.program.size() != 20)
        raise(Error::Code::BadProgramLength, "witness program must be 20 bytes");
    return out;
}

std::size_t cashaddr_encode_into(std::string_view prefix, std::span<const std::uint8_t> hash20,
                                 bool with_prefix, char* out) {
    if (hash20.size() != 20) raise(Error::Code::BadHashLength, "cashaddr hash must be 20 bytes");
    if (prefix.empty() || prefix.size() > 20)
        raise(Error::Code::BadLength, "prefix length out of range");

    std::uint8_t raw[21];
    raw[0] = 0x00;  // type 0 (P2PKH), size bits 0 (160-bit hash)
    std::memcpy(raw + 1, hash20.data(), 20);
    std::uint8_t payload[34];
    std::size_t plen = convert_8to5({raw, 21}, payload);

    std::uint8_t check_input[64];
    std::size_t n = 0;
    for (char c : prefix) check_input[n++] = static_cast<std::uint8_t>(c) & 0x1F;
    check_input[n++] = 0;
    std::memcpy(check_input + n, payload, plen);
    n += plen;
    std::memset(check_input + n, 0, 8);
    std::uint64_t pm = cashaddr_polymod({check_input, n + 8});

    std::size_t pos = 0;
    if (with_prefix) {
        for (char c : prefix) out[pos++] = c;
        out[pos++] = ':';
    }
    for (std::size_t i = 0; i < plen; ++i) out[pos++] = kCharset32[payload[i]];
    for (int i = 0; i < 8; ++i) out[pos++] = kCharset32[(pm >> (5 * (7 - i))) & 31];
    return pos;
}

std::string cashaddr_encode(std::string_view prefix, std::span<const std::uint8_t> hash20,
                            bool with_prefix) {
    char buf[128];
    return std::string(buf, cashaddr_encode_into(prefix, hash20, with_prefix, buf));
}

std::array<std::uint8_t, 20> cashaddr_decode(std::string_view address, std::string_view prefix) {
    std::string body(address);
    std::transform(body.begin(), body.end(), body.begin(),
                   [](char c) { return static_cast<char>(std::tolower(c)); });
    std::string pfx(prefix);
    if (auto colon = body.find(':'); colon != std::string::npos) {
        if (body.substr(0, colon) != pfx)
            raise(Error::Code::BadAlphabet, "unexpected cashaddr prefix");
        body = body.substr(colon + 1);
    }

    std::vector<std::uint8_t> data;
    for (char c : body) {
        std::int8_t v = kRev32[static_cast<unsigned char>(c)];
        if (v < 0) raise(Error::Code::BadAlphabet, "invalid cashaddr character");
        data.push_back(static_cast<std::uint8_t>(v));
    }
    if (data.size() < 9) raise(Error::Code::BadLength, "cashaddr too short");

    std::vector<std::uint8_t> check_input;
    for (char c : pfx) check_input.push_back(static_cast<std::uint8_t>(c) & 0x1F);
    check_input.push_back(0);
    check_input.insert(check_input.end(), data.begin(), data.end());
    if (cashaddr_polymod(check_input) != 0)
        raise(Error::Code::BadChecksum, "cashaddr checksum mismatch");

    auto bytes = convert_5to8_strict({data.data(), data.size() - 8});
    if (bytes.size() != 21 || bytes[0] != 0x00)
        raise(Error::Code::BadHashLength, "unsupported cashaddr payload");
    std::array<std::uint8_t, 20> out;
    std::copy(bytes.begin() + 1, bytes.end(), out.begin());
    return out;
}

// ============================================================================
// EIP-55
// ============================================================================

std::size_t eip55_checksum_into(std::span<const std::uint8_t> addr20, char* out) {
    if (addr20.size() != 20) raise(Error::Code::BadLength, "EIP-55 input must be 20 bytes");
    char lower[40];
    for (int i = 0; i < 20; ++i) {
        lower[2 * i] = hex_digit(addr20[i] >> 4);
        lower[2 * i + 1] = hex_digit(addr20[i]);
    }
    auto digest = Keccak256::hash({reinterpret_cast<const std::uint8_t*>(lower), 40});
    out[0] = '0';
    out[1] = 'x';
    for (int i = 0; i < 40; ++i) {
        char c = lower[i];
        unsigned nibble = (digest[i / 2] >> (i % 2 ? 0 : 4)) & 0xF;
        if (c >= 'a' && c <= 'f' && nibble >= 8) c = static_cast<char>(c - 'a' + 'A');
        out[2 + i] = c;
    }
    return 42;
}

std::string eip55_checksum(std::span<const std::uint8_t> addr20) {
    char buf[42];
    return std::string(buf, eip55_checksum_into(addr20, buf));
}

bool eip55_verify(std::string_view address) {
    if (address.size() != 42 || address[0] != '0' || address[1] != 'x') return false;
    std::uint8_t bytes[20];
    for (int i = 0; i < 20; ++i) {
        int hi = hex_value(address[2 + 2 * i]);
        int lo = hex_value(address[3 + 2 * i]);
        if (hi < 0 || lo < 0) return false;
        bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    char expect[42];
    eip55_checksum_into({bytes, 20}, expect);
    return std::equal(address.begin(), address.end(), expect);
}

}  // namespace sweep::codecs
