#include "sweep/curve.hpp"

#include <cstring>

#include "sweep/error.hpp"

namespace sweep::curve {

namespace {

using uint128 = unsigned __int128;

// p = 2^256 - 2^32 - 977
constexpr U256 kPrime{{0xFFFFFFFEFFFFFC2FULL, 0xFFFFFFFFFFFFFFFFULL,
                       0xFFFFFFFFFFFFFFFFULL, 0xFFFFFFFFFFFFFFFFULL}};
constexpr std::uint64_t kComp = 0x1000003D1ULL;  // 2^256 - p

constexpr const char* kGenX = "79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798";
constexpr const char* kGenY = "483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8";

FieldElement make_fe(const U256& v) {
    FieldElement fe;
    fe.v = v;
    return fe;
}

// Folds the high limbs through 2^256 ≡ 2^256 - p (mod p). The fold constant
// is a single limb, so two unrolled passes leave at most one subtraction.
U256 reduce_wide(const std::uint64_t in[8]) {
    // pass 1: lo + hi * c, result in t[0..3] with a small t4 overflow limb
    std::uint64_t t[4];
    uint128 acc = 0;
    for (int i = 0; i < 4; ++i) {
        acc += in[i];
        acc += static_cast<uint128>(in[4 + i]) * kComp;
        t[i] = static_cast<std::uint64_t>(acc);
        acc >>= 64;
    }
    std::uint64_t t4 = static_cast<std::uint64_t>(acc);  // < 2^34

    // pass 2: fold t4 back in; the carry out is at most 1
    acc = static_cast<uint128>(t4) * kComp + t[0];
    U256 r;
    r.w[0] = static_cast<std::uint64_t>(acc);
    acc >>= 64;
    for (int i = 1; i < 4; ++i) {
        acc += t[i];
        r.w[i] = static_cast<std::uint64_t>(acc);
        acc >>= 64;
    }
    if (acc) {
        // value = 2^256 + r ≡ r + c (mod p); adding c cannot carry again here
        uint128 acc2 = static_cast<uint128>(r.w[0]) + kComp;
        r.w[0] = static_cast<std::uint64_t>(acc2);
        acc2 >>= 64;
        for (int i = 1; acc2 && i < 4; ++i) {
            acc2 += r.w[i];
            r.w[i] = static_cast<std::uint64_t>(acc2);
            acc2 >>= 64;
        }
    }
    while (u256::cmp(r, kPrime) >= 0) u256::sub(r, r, kPrime);
    return r;
}

FieldElement fe_pow(const FieldElement& base, const U256& exponent) {
    FieldElement result = fe_from_u64(1);
    for (int i = static_cast<int>(u256::bit_length(exponent)); i-- > 0;) {
        result = fe_sqr(result);
        if (u256::bit(exponent, static_cast<unsigned>(i))) result = fe_mul(result, base);
    }
    return result;
}

const FieldElement& curve_b() {
    static const FieldElement b = fe_from_u64(7);
    return b;
}

}  // namespace

const U256& field_prime() { return kPrime; }

FieldElement fe_from_u64(std::uint64_t v) { return make_fe(u256::from_u64(v)); }

FieldElement fe_from_bytes(std::span<const std::uint8_t> bytes32) {
    U256 v = u256::from_bytes_be(bytes32);
    if (u256::cmp(v, kPrime) >= 0)
        raise(Error::Code::OutOfRange, "field element is not below the field prime");
    return make_fe(v);
}

FieldElement fe_from_hex(std::string_view hex64) {
    auto bytes = from_hex(hex64);
    return fe_from_bytes(bytes);
}

FieldElement fe_add(const FieldElement& a, const FieldElement& b) {
    U256 r;
    std::uint64_t carry = u256::add(r, a.v, b.v);
    while (carry) {
        carry = u256::add(r, r, u256::from_u64(kComp));
    }
    if (u256::cmp(r, kPrime) >= 0) u256::sub(r, r, kPrime);
    return make_fe(r);
}

FieldElement fe_sub(const FieldElement& a, const FieldElement& b) {
    U256 r;
    if (u256::sub(r, a.v, b.v)) u256::add(r, r, kPrime);
    return make_fe(r);
}

FieldElement fe_mul(const FieldElement& a, const FieldElement& b) {
    std::uint64_t wide[8];
    u256::mul_wide(wide, a.v, b.v);
    return make_fe(reduce_wide(wide));
}

FieldElement fe_sqr(const FieldElement& a) { return fe_mul(a, a); }

FieldElement fe_neg(const FieldElement& a) {
    if (a.is_zero()) return a;
    U256 r;
    u256::sub(r, kPrime, a.v);
    return make_fe(r);
}

FieldElement fe_inv(const FieldElement& a) {
    if (a.is_zero()) raise(Error::Code::OutOfRange, "zero has no field inverse");
    U256 exp;
    u256::sub(exp, kPrime, u256::from_u64(2));
    return fe_pow(a, exp);
}

std::optional<FieldElement> fe_sqrt(const FieldElement& a) {
    // p ≡ 3 (mod 4), so a^((p+1)/4) is a root whenever one exists.
    U256 exp;
    u256::add(exp, kPrime, u256::from_u64(1));
    // divide by 4: shift right two bits
    for (int shift = 0; shift < 2; ++shift) {
        for (int i = 0; i < 4; ++i) {
            exp.w[i] >>= 1;
            if (i < 3) exp.w[i] |= exp.w[i + 1] << 63;
        }
    }
    FieldElement root = fe_pow(a, exp);
    if (!(fe_sqr(root) == a)) return std::nullopt;
    return root;
}

const AffinePoint& generator() {
    static const AffinePoint g{fe_from_hex(kGenX), fe_from_hex(kGenY), false};
    return g;
}

bool is_on_curve(const AffinePoint& pt) {
    if (pt.infinity) return true;
    FieldElement lhs = fe_sqr(pt.y);
    FieldElement rhs = fe_add(fe_mul(fe_sqr(pt.x), pt.x), curve_b());
    return lhs == rhs;
}

JacobianPoint to_jacobian(const AffinePoint& pt) {
    if (pt.infinity) return JacobianPoint::make_infinity();
    return JacobianPoint{pt.x, pt.y, fe_from_u64(1)};
}

AffinePoint to_affine(const JacobianPoint& pt) {
    if (pt.is_infinity()) return AffinePoint::make_infinity();
    FieldElement zi = fe_inv(pt.Z);
    FieldElement zi2 = fe_sqr(zi);
    return AffinePoint{fe_mul(pt.X, zi2), fe_mul(pt.Y, fe_mul(zi2, zi)), false};
}

JacobianPoint jacobian_double(const JacobianPoint& pt) {
    if (pt.is_infinity() || pt.Y.is_zero()) return JacobianPoint::make_infinity();
    FieldElement a = fe_sqr(pt.X);
    FieldElement b = fe_sqr(pt.Y);
    FieldElement c = fe_sqr(b);
    FieldElement t = fe_sqr(fe_add(pt.X, b));
    FieldElement d = fe_sub(fe_sub(t, a), c);
    d = fe_add(d, d);
    FieldElement e = fe_add(fe_add(a, a), a);
    FieldElement f = fe_sqr(e);
    JacobianPoint out;
    out.X = fe_sub(f, fe_add(d, d));
    FieldElement c8 = fe_add(c, c);
    c8 = fe_add(c8, c8);
    c8 = fe_add(c8, c8);
    out.Y = fe_sub(fe_mul(e, fe_sub(d, out.X)), c8);
    out.Z = fe_mul(fe_add(pt.Y, pt.Y), pt.Z);
    return out;
}

JacobianPoint jacobian_add_mixed(const JacobianPoint& a, const AffinePoint& b) {
    if (b.infinity) return a;
    if (a.is_infinity()) return to_jacobian(b);
    FieldElement z1z1 = fe_sqr(a.Z);
    FieldElement u2 = fe_mul(b.x, z1z1);
    FieldElement s2 = fe_mul(b.y, fe_mul(a.Z, z1z1));
    FieldElement h = fe_sub(u2, a.X);
    FieldElement r = fe_sub(s2, a.Y);
    if (h.is_zero()) {
        if (r.is_zero()) return jacobian_double(a);
        return JacobianPoint::make_infinity();
    }
    FieldElement hh = fe_sqr(h);
    FieldElement hhh = fe_mul(h, hh);
    FieldElement v = fe_mul(a.X, hh);
    JacobianPoint out;
    out.X = fe_sub(fe_sub(fe_sqr(r), hhh), fe_add(v, v));
    out.Y = fe_sub(fe_mul(r, fe_sub(v, out.X)), fe_mul(a.Y, hhh));
    out.Z = fe_mul(a.Z, h);
    return out;
}

JacobianPoint jacobian_add(const JacobianPoint& a, const JacobianPoint& b) {
    if (a.is_infinity()) return b;
    if (b.is_infinity()) return a;
    FieldElement z1z1 = fe_sqr(a.Z);
    FieldElement z2z2 = fe_sqr(b.Z);
    FieldElement u1 = fe_mul(a.X, z2z2);
    FieldElement u2 = fe_mul(b.X, z1z1);
    FieldElement s1 = fe_mul(a.Y, fe_mul(b.Z, z2z2));
    FieldElement s2 = fe_mul(b.Y, fe_mul(a.Z, z1z1));
    FieldElement h = fe_sub(u2, u1);
    FieldElement r = fe_sub(s2, s1);
    if (h.is_zero()) {
        if (r.is_zero()) return jacobian_double(a);
        return JacobianPoint::make_infinity();
    }
    FieldElement hh = fe_sqr(h);
    FieldElement hhh = fe_mul(h, hh);
    FieldElement v = fe_mul(u1, hh);
    JacobianPoint out;
    out.X = fe_sub(fe_sub(fe_sqr(r), hhh), fe_add(v, v));
    out.Y = fe_sub(fe_mul(r, fe_sub(v, out.X)), fe_mul(s1, hhh));
    out.Z = fe_mul(fe_mul(a.Z, b.Z), h);
    return out;
}

AffinePoint point_add(const AffinePoint& a, const AffinePoint& b) {
    return to_affine(jacobian_add(to_jacobian(a), to_jacobian(b)));
}

AffinePoint point_negate(const AffinePoint& a) {
    if (a.infinity) return a;
    return AffinePoint{a.x, fe_neg(a.y), false};
}

std::vector<AffinePoint> batch_normalize(std::span<const JacobianPoint> points) {
    std::vector<AffinePoint> out(points.size());
    std::vector<std::size_t> live;
    live.reserve(points.size());
    std::vector<FieldElement> prefix;
    prefix.reserve(points.size());
    FieldElement acc = fe_from_u64(1);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].is_infinity()) {
            out[i] = AffinePoint::make_infinity();
            continue;
        }
        live.push_back(i);
        acc = fe_mul(acc, points[i].Z);
        prefix.push_back(acc);
    }
    if (live.empty()) return out;
    FieldElement inv = fe_inv(prefix.back());
    for (std::size_t k = live.size(); k-- > 0;) {
        std::size_t i = live[k];
        FieldElement zi = (k == 0) ? inv : fe_mul(inv, prefix[k - 1]);
        inv = fe_mul(inv, points[i].Z);
        FieldElement zi2 = fe_sqr(zi);
        out[i] = AffinePoint{fe_mul(points[i].X, zi2), fe_mul(points[i].Y, fe_mul(zi2, zi)), false};
    }
    return out;
}

PrecompTable::PrecompTable() {
    std::vector<JacobianPoint> raw;
    raw.reserve(kWindows * (kEntriesPerWindow - 1));
    JacobianPoint base = to_jacobian(generator());
    for (int w = 0; w < kWindows; ++w) {
        JacobianPoint cur = base;
        for (int d = 1; d < kEntriesPerWindow; ++d) {
            raw.push_back(cur);
            cur = jacobian_add(cur, base);
        }
        base = cur;  // 16 * 2^(4w) * G = 2^(4(w+1)) * G
    }
    auto affine = batch_normalize(raw);
    entries_.assign(static_cast<std::size_t>(kWindows) * kEntriesPerWindow,
                    AffinePoint::make_infinity());
    std::size_t idx = 0;
    for (int w = 0; w < kWindows; ++w) {
        for (int d = 1; d < kEntriesPerWindow; ++d) {
            entries_[static_cast<std::size_t>(w) * kEntriesPerWindow + d] = affine[idx++];
        }
    }
}

JacobianPoint scalar_mul_raw(const U256& k, const PrecompTable& table) {
    JacobianPoint acc = JacobianPoint::make_infinity();
    for (int w = 0; w < PrecompTable::kWindows; ++w) {
        unsigned digit = (k.w[w >> 4] >> (4 * (w & 15))) & 0xF;
        if (digit) acc = jacobian_add_mixed(acc, table.entry(w, static_cast<int>(digit)));
    }
    return acc;
}

JacobianPoint scalar_mul(const scalars::Scalar& k, const PrecompTable& table) {
    if (k.is_zero()) raise(Error::Code::ZeroKey, "scalar_mul requires a nonzero scalar");
    return scalar_mul_raw(k.v, table);
}

std::size_t serialize_pubkey_into(const AffinePoint& pt, bool compressed, std::uint8_t* out) {
    if (pt.infinity) raise(Error::Code::InfinityPoint, "cannot serialize the point at infinity");
    auto xb = u256::to_bytes_be(pt.x.v);
    if (compressed) {
        out[0] = pt.y.is_odd() ? 0x03 : 0x02;
        std::memcpy(out + 1, xb.data(), 32);
        return 33;
    }
    auto yb = u256::to_bytes_be(pt.y.v);
    out[0] = 0x04;
    std::memcpy(out + 1, xb.data(), 32);
    std::memcpy(out + 33, yb.data(), 32);
    return 65;
}

std::vector<std::uint8_t> serialize_pubkey(const AffinePoint& pt, bool compressed) {
    std::vector<std::uint8_t> out(compressed ? 33 : 65);
    serialize_pubkey_into(pt, compressed, out.data());
    return out;
}

AffinePoint deserialize_pubkey(std::span<const std::uint8_t> bytes) {
    if (bytes.size() == 65 && bytes[0] == 0x04) {
        AffinePoint pt{fe_from_bytes(bytes.subspan(1, 32)), fe_from_bytes(bytes.subspan(33, 32)),
                       false};
        if (!is_on_curve(pt)) raise(Error::Code::OutOfRange, "point is not on the curve");
        return pt;
    }
    if (bytes.size() == 33 && (bytes[0] == 0x02 || bytes[0] == 0x03)) {
        FieldElement x = fe_from_bytes(bytes.subspan(1, 32));
        FieldElement rhs = fe_add(fe_mul(fe_sqr(x), x), fe_from_u64(7));
        auto y = fe_sqrt(rhs);
        if (!y) raise(Error::Code::OutOfRange, "x has no point on the curve");
        bool want_odd = bytes[0] == 0x03;
        FieldElement yy = (y->is_odd() == want_odd) ? *y : fe_neg(*y);
        return AffinePoint{x, yy, false};
    }
    raise(Error::Code::BadLength, "unrecognized public key encoding");
}

}  // namespace sweep::curve
