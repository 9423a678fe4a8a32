#pragma once

// Arithmetic modulo the secp256k1 group order q, the eight coset generators
// g_0..g_7 of the order-18051648 subgroup H of F_q*, and streaming coset
// enumeration. Scalars are canonical residues in [0, q-1], stored as four
// 64-bit limbs; serialization is 32 bytes big-endian.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sweep/biguint.hpp"
#include "sweep/u256.hpp"

namespace sweep::scalars {

struct Scalar {
    U256 v;

    bool is_zero() const { return u256::is_zero(v); }
    std::array<std::uint8_t, 32> to_bytes() const { return u256::to_bytes_be(v); }
    std::string to_hex() const { return u256::to_hex(v); }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.v == b.v; }
};

// The group order q and the size h = |H| = 2^6 * 3 * 149 * 631.
const U256& group_order();
inline constexpr std::uint64_t kSubgroupSize = 18051648;

// q-1 = h * p1 * p2 * p3; the three large prime cofactors.
const BigUint& cofactor_p1();
const BigUint& cofactor_p2();
const BigUint& cofactor_p3();

// Strict construction: values >= q are rejected, never silently reduced.
Scalar scalar_from_bytes(std::span<const std::uint8_t> bytes);
// Same, for use as a private key: additionally rejects zero.
Scalar key_from_bytes(std::span<const std::uint8_t> bytes);

Scalar scalar_from_u64(std::uint64_t v);
Scalar scalar_from_hex(std::string_view hex64);

Scalar mod_mul(const Scalar& a, const Scalar& b);
// Square-and-multiply; exponent 0 yields 1. Rejects a zero base.
Scalar mod_exp(const Scalar& base, const BigUint& exponent);
Scalar mod_exp(const Scalar& base, std::uint64_t exponent);

// Keys 1 and q-1 derive addresses that are expected to exist on-chain.
bool is_trivial_key(const Scalar& k);

struct PrimePower {
    BigUint prime;
    unsigned exponent = 1;
};

struct OrderFactorization {
    std::vector<PrimePower> factors;  // distinct primes, ascending
    BigUint product;
};

// Validates ordering/distinctness and computes the product.
OrderFactorization make_factorization(std::vector<PrimePower> factors);

struct CosetSpec {
    int index = 0;
    Scalar representative;  // c_i; 1 for index 0 so coset 0 is H itself
    Scalar step;            // g_0, multiplicative order exactly h
    std::uint64_t cardinality = kSubgroupSize;
};

// g_i as defined by its exponent on the generator 7 of F_q*.
Scalar coset_generator(int index);

// The claimed multiplicative order of <g_i>.
OrderFactorization subgroup_order(int index);

// True iff x has multiplicative order exactly claimed.product mod q.
bool verify_order(const Scalar& x, const OrderFactorization& claimed);

CosetSpec coset_spec(int index);

// Streams (exponent j, key c_i * g_0^j) for j in [start, start+count): one
// modular exponentiation up front, then one multiplication per step.
class CosetIter {
public:
    CosetIter(const CosetSpec& spec, std::uint64_t start, std::uint64_t count);

    struct Item {
        std::uint64_t exponent;
        Scalar key;
    };

    std::optional<Item> next();

private:
    Scalar current_;
    Scalar step_;
    std::uint64_t exponent_;
    std::uint64_t remaining_;
};

// Cross-checks the computed g_i against a fixture file of 8 hex lines.
// Throws on any mismatch; used at scanner startup.
void verify_generator_fixture(const std::string& path);

}  // namespace sweep::scalars
