#include "sweep/scalar_group.hpp"

#include <cstring>
#include <fstream>

#include "sweep/error.hpp"

namespace sweep::scalars {

namespace {

using uint128 = unsigned __int128;

// q = fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141
constexpr U256 kOrder{{0xBFD25E8CD0364141ULL, 0xBAAEDCE6AF48A03BULL,
                       0xFFFFFFFFFFFFFFFEULL, 0xFFFFFFFFFFFFFFFFULL}};

// 2^256 - q, the fold constant for reduction; fits in 129 bits.
constexpr std::uint64_t kComp0 = 0x402DA1732FC9BEBFULL;
constexpr std::uint64_t kComp1 = 0x4551231950B75FC4ULL;
// kComp2 == 1 (the 2^128 term), handled as a shifted add.

constexpr const char* kP1 = "107361793816595537";
constexpr const char* kP2 = "174723607534414371449";
constexpr const char* kP3 = "341948486974166000522343609283189";

// dst[off..] += a[0..an) * m
void acc_mul(std::uint64_t* dst, std::size_t dn, const std::uint64_t* a, std::size_t an,
             std::uint64_t m, std::size_t off) {
    std::uint64_t carry = 0;
    std::size_t i = 0;
    for (; i < an; ++i) {
        uint128 cur = static_cast<uint128>(a[i]) * m + dst[off + i] + carry;
        dst[off + i] = static_cast<std::uint64_t>(cur);
        carry = static_cast<std::uint64_t>(cur >> 64);
    }
    for (; carry && off + i < dn; ++i) {
        uint128 cur = static_cast<uint128>(dst[off + i]) + carry;
        dst[off + i] = static_cast<std::uint64_t>(cur);
        carry = static_cast<std::uint64_t>(cur >> 64);
    }
}

// dst[off..] += a[0..an)
void acc_add(std::uint64_t* dst, std::size_t dn, const std::uint64_t* a, std::size_t an,
             std::size_t off) {
    std::uint64_t carry = 0;
    std::size_t i = 0;
    for (; i < an; ++i) {
        uint128 cur = static_cast<uint128>(dst[off + i]) + a[i] + carry;
        dst[off + i] = static_cast<std::uint64_t>(cur);
        carry = static_cast<std::uint64_t>(cur >> 64);
    }
    for (; carry && off + i < dn; ++i) {
        uint128 cur = static_cast<uint128>(dst[off + i]) + carry;
        dst[off + i] = static_cast<std::uint64_t>(cur);
        carry = static_cast<std::uint64_t>(cur >> 64);
    }
}

// Reduces an up-to-512-bit value modulo q by folding the high limbs through
// 2^256 ≡ 2^256 - q (mod q) until the value fits four limbs.
U256 reduce_wide(const std::uint64_t in[8]) {
    std::uint64_t cur[8];
    std::memcpy(cur, in, sizeof(cur));
    std::size_t n = 8;
    while (true) {
        while (n > 4 && cur[n - 1] == 0) --n;
        if (n <= 4) break;
        std::uint64_t hi[4] = {0, 0, 0, 0};
        std::size_t hn = n - 4;
        std::memcpy(hi, cur + 4, hn * sizeof(std::uint64_t));
        std::uint64_t next[8] = {0};
        std::memcpy(next, cur, 4 * sizeof(std::uint64_t));
        acc_mul(next, 8, hi, hn, kComp0, 0);
        acc_mul(next, 8, hi, hn, kComp1, 1);
        acc_add(next, 8, hi, hn, 2);
        std::memcpy(cur, next, sizeof(cur));
        n = 8;
    }
    U256 r{{cur[0], cur[1], cur[2], cur[3]}};
    while (u256::cmp(r, kOrder) >= 0) u256::sub(r, r, kOrder);
    return r;
}

Scalar make_canonical(const U256& v) {
    Scalar s;
    s.v = v;
    return s;
}

const std::array<Scalar, 8>& generators() {
    static std::array<Scalar, 8> gens = [] {
        const BigUint h(kSubgroupSize);
        const BigUint p1 = BigUint::from_decimal(kP1);
        const BigUint p2 = BigUint::from_decimal(kP2);
        const BigUint p3 = BigUint::from_decimal(kP3);
        const std::array<BigUint, 8> exps = {
            p1 * p2 * p3, h * p2 * p3, h * p1 * p3, h * p1 * p2,
            h * p1,       h * p2,      h * p3,      h,
        };
        const Scalar seven = scalar_from_u64(7);
        std::array<Scalar, 8> out;
        for (int i = 0; i < 8; ++i) out[i] = mod_exp(seven, exps[i]);
        return out;
    }();
    return gens;
}

}  // namespace

const U256& group_order() { return kOrder; }

const BigUint& cofactor_p1() {
    static const BigUint v = BigUint::from_decimal(kP1);
    return v;
}
const BigUint& cofactor_p2() {
    static const BigUint v = BigUint::from_decimal(kP2);
    return v;
}
const BigUint& cofactor_p3() {
    static const BigUint v = BigUint::from_decimal(kP3);
    return v;
}

Scalar scalar_from_bytes(std::span<const std::uint8_t> bytes) {
    U256 v = u256::from_bytes_be(bytes);
    if (u256::cmp(v, kOrder) >= 0)
        raise(Error::Code::OutOfRange, "scalar value is not below the group order");
    return make_canonical(v);
}

Scalar key_from_bytes(std::span<const std::uint8_t> bytes) {
    Scalar s = scalar_from_bytes(bytes);
    if (s.is_zero()) raise(Error::Code::ZeroKey, "zero is not a valid private key");
    return s;
}

Scalar scalar_from_u64(std::uint64_t v) { return make_canonical(u256::from_u64(v)); }

Scalar scalar_from_hex(std::string_view hex64) {
    U256 v = u256::from_hex(hex64);
    if (u256::cmp(v, kOrder) >= 0)
        raise(Error::Code::OutOfRange, "scalar value is not below the group order");
    return make_canonical(v);
}

Scalar mod_mul(const Scalar& a, const Scalar& b) {
    std::uint64_t wide[8];
    u256::mul_wide(wide, a.v, b.v);
    return make_canonical(reduce_wide(wide));
}

Scalar mod_exp(const Scalar& base, const BigUint& exponent) {
    if (base.is_zero()) raise(Error::Code::ZeroBase, "mod_exp base must be nonzero");
    Scalar result = scalar_from_u64(1);
    for (unsigned i = exponent.bit_length(); i-- > 0;) {
        result = mod_mul(result, result);
        if (exponent.bit(i)) result = mod_mul(result, base);
    }
    return result;
}

Scalar mod_exp(const Scalar& base, std::uint64_t exponent) {
    return mod_exp(base, BigUint(exponent));
}

bool is_trivial_key(const Scalar& k) {
    if (k.v == u256::from_u64(1)) return true;
    U256 qm1;
    u256::sub(qm1, kOrder, u256::from_u64(1));
    return k.v == qm1;
}

OrderFactorization make_factorization(std::vector<PrimePower> factors) {
    OrderFactorization out;
    out.product = BigUint(1);
    const BigUint* prev = nullptr;
    for (const auto& pp : factors) {
        if (pp.exponent == 0) raise(Error::Code::OutOfRange, "zero exponent in factorization");
        if (prev && !(*prev < pp.prime))
            raise(Error::Code::OutOfRange, "factorization primes must be distinct and ascending");
        prev = &pp.prime;
        for (unsigned e = 0; e < pp.exponent; ++e) out.product *= pp.prime;
    }
    out.factors = std::move(factors);
    return out;
}

Scalar coset_generator(int index) {
    if (index < 0 || index > 7) raise(Error::Code::IndexOutOfRange, "coset index must be in [0,7]");
    return generators()[static_cast<std::size_t>(index)];
}

OrderFactorization subgroup_order(int index) {
    if (index < 0 || index > 7) raise(Error::Code::IndexOutOfRange, "coset index must be in [0,7]");
    const BigUint p1 = cofactor_p1();
    const BigUint p2 = cofactor_p2();
    const BigUint p3 = cofactor_p3();
    auto h_factors = [] {
        return std::vector<PrimePower>{
            {BigUint(2), 6}, {BigUint(3), 1}, {BigUint(149), 1}, {BigUint(631), 1}};
    };
    switch (index) {
        case 0: return make_factorization(h_factors());
        case 1: return make_factorization({{p1, 1}});
        case 2: return make_factorization({{p2, 1}});
        case 3: return make_factorization({{p3, 1}});
        case 4: return make_factorization({{p2, 1}, {p3, 1}});
        case 5: return make_factorization({{p1, 1}, {p3, 1}});
        case 6: return make_factorization({{p1, 1}, {p2, 1}});
        default: return make_factorization({{p1, 1}, {p2, 1}, {p3, 1}});
    }
}

bool verify_order(const Scalar& x, const OrderFactorization& claimed) {
    if (x.is_zero()) raise(Error::Code::ZeroBase, "order is undefined for zero");
    BigUint q_minus_1 = BigUint::from_hex(u256::to_hex(kOrder)) - BigUint(1);
    if (!q_minus_1.divisible_by(claimed.product))
        raise(Error::Code::NonDivisor, "claimed order does not divide q-1");

    const Scalar one = scalar_from_u64(1);
    if (!(mod_exp(x, claimed.product) == one)) return false;
    // Exact order: dropping one power of any prime must leave the residue != 1.
    for (std::size_t drop = 0; drop < claimed.factors.size(); ++drop) {
        BigUint exp(1);
        for (std::size_t i = 0; i < claimed.factors.size(); ++i) {
            unsigned e = claimed.factors[i].exponent - (i == drop ? 1 : 0);
            for (unsigned j = 0; j < e; ++j) exp *= claimed.factors[i].prime;
        }
        if (mod_exp(x, exp) == one) return false;
    }
    return true;
}

CosetSpec coset_spec(int index) {
    if (index < 0 || index > 7) raise(Error::Code::IndexOutOfRange, "coset index must be in [0,7]");
    CosetSpec spec;
    spec.index = index;
    spec.representative = index == 0 ? scalar_from_u64(1) : coset_generator(index);
    spec.step = coset_generator(0);
    spec.cardinality = kSubgroupSize;
    return spec;
}

CosetIter::CosetIter(const CosetSpec& spec, std::uint64_t start, std::uint64_t count)
    : step_(spec.step), exponent_(start), remaining_(count) {
    if (start > spec.cardinality || count > spec.cardinality - start)
        raise(Error::Code::RangeOverflow, "coset range exceeds cardinality");
    current_ = mod_mul(spec.representative, mod_exp(spec.step, BigUint(start)));
}

std::optional<CosetIter::Item> CosetIter::next() {
    if (remaining_ == 0) return std::nullopt;
    Item item{exponent_, current_};
    current_ = mod_mul(current_, step_);
    ++exponent_;
    --remaining_;
    return item;
}

void verify_generator_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Error::Code::FileUnreadable, "cannot open generator fixture: " + path);
    std::string line;
    for (int i = 0; i < 8; ++i) {
        if (!std::getline(in, line))
            raise(Error::Code::BadLength, "generator fixture has fewer than 8 lines");
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!(scalar_from_hex(line) == coset_generator(i)))
            raise(Error::Code::ConfigError,
                  "generator fixture mismatch at line " + std::to_string(i + 1));
    }
}

}  // namespace sweep::scalars
