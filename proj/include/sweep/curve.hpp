#pragma once

// secp256k1 point arithmetic: y^2 = x^3 + 7 over F_p. Jacobian coordinates
// internally, batch conversion to affine with a single inversion chain, and
// fixed-base windowed multiplication for the throughput path.
//
// Not constant-time, deliberately: this library enumerates public candidate
// keys, it never handles secrets worth protecting from a timing channel.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sweep/scalar_group.hpp"
#include "sweep/u256.hpp"

namespace sweep::curve {

struct FieldElement {
    U256 v;  // canonical residue mod p

    bool is_zero() const { return u256::is_zero(v); }
    bool is_odd() const { return v.w[0] & 1; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.v == b.v; }
};

const U256& field_prime();

FieldElement fe_from_u64(std::uint64_t v);
FieldElement fe_from_bytes(std::span<const std::uint8_t> bytes32);  // rejects >= p
FieldElement fe_from_hex(std::string_view hex64);

FieldElement fe_add(const FieldElement& a, const FieldElement& b);
FieldElement fe_sub(const FieldElement& a, const FieldElement& b);
FieldElement fe_mul(const FieldElement& a, const FieldElement& b);
FieldElement fe_sqr(const FieldElement& a);
FieldElement fe_neg(const FieldElement& a);
FieldElement fe_inv(const FieldElement& a);                  // a != 0
std::optional<FieldElement> fe_sqrt(const FieldElement& a);  // even root if it exists

struct AffinePoint {
    FieldElement x;
    FieldElement y;
    bool infinity = false;

    static AffinePoint make_infinity() { return AffinePoint{{}, {}, true}; }

    friend bool operator==(const AffinePoint& a, const AffinePoint& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

// Z == 0 encodes the point at infinity.
struct JacobianPoint {
    FieldElement X;
    FieldElement Y;
    FieldElement Z;

    bool is_infinity() const { return Z.is_zero(); }

    static JacobianPoint make_infinity() { return JacobianPoint{}; }
};

const AffinePoint& generator();

bool is_on_curve(const AffinePoint& pt);

JacobianPoint to_jacobian(const AffinePoint& pt);
AffinePoint to_affine(const JacobianPoint& pt);

JacobianPoint jacobian_double(const JacobianPoint& a);
JacobianPoint jacobian_add(const JacobianPoint& a, const JacobianPoint& b);
JacobianPoint jacobian_add_mixed(const JacobianPoint& a, const AffinePoint& b);

// Group law on affine points; handles doubling, inverses and infinity.
AffinePoint point_add(const AffinePoint& a, const AffinePoint& b);
AffinePoint point_negate(const AffinePoint& a);

// Normalizes every point with one field inversion total (product-tree trick).
// Output order matches input order; infinities pass through.
std::vector<AffinePoint> batch_normalize(std::span<const JacobianPoint> points);

// Precomputed multiples of the generator: entry(w, d) = d * 2^(4w) * G in
// affine form, d in [0, 15], entry(w, 0) = infinity. Built once, immutable,
// safe to share across threads.
class PrecompTable {
public:
    static constexpr int kWindowBits = 4;
    static constexpr int kWindows = 64;
    static constexpr int kEntriesPerWindow = 16;

    PrecompTable();

    const AffinePoint& entry(int window, int digit) const {
        return entries_[static_cast<std::size_t>(window) * kEntriesPerWindow +
                        static_cast<std::size_t>(digit)];
    }

private:
    std::vector<AffinePoint> entries_;
};

// k * G via the window table. Rejects k == 0.
JacobianPoint scalar_mul(const scalars::Scalar& k, const PrecompTable& table);
// Unchecked variant over a raw 256-bit value (order checks in tests use q).
JacobianPoint scalar_mul_raw(const U256& k, const PrecompTable& table);

// 0x04 || X || Y (65 bytes) or 0x02/0x03 || X (33 bytes). Rejects infinity.
std::vector<std::uint8_t> serialize_pubkey(const AffinePoint& pt, bool compressed);
std::size_t serialize_pubkey_into(const AffinePoint& pt, bool compressed, std::uint8_t* out);

// Accepts both serialized forms; solves the curve equation for compressed.
AffinePoint deserialize_pubkey(std::span<const std::uint8_t> bytes);

}  // namespace sweep::curve
