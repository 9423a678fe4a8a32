#pragma once

// Minimal unsigned big integer: enough for ~256-bit subgroup-order products,
// exponent arithmetic, and divisibility checks. Not a general bignum library.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sweep {

class BigUint {
public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v) {
        if (v) limbs_.push_back(v);
    }

    static BigUint from_decimal(std::string_view s);
    static BigUint from_hex(std::string_view s);

    bool is_zero() const { return limbs_.empty(); }
    bool is_one() const { return limbs_.size() == 1 && limbs_[0] == 1; }

    unsigned bit_length() const;
    bool bit(unsigned i) const;

    // -1, 0, 1
    static int cmp(const BigUint& a, const BigUint& b);

    BigUint& operator+=(const BigUint& rhs);
    BigUint& operator-=(const BigUint& rhs);  // requires *this >= rhs
    BigUint& operator*=(const BigUint& rhs);

    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
    friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
    friend BigUint operator*(BigUint a, const BigUint& b) { return a *= b; }

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
    friend bool operator<(const BigUint& a, const BigUint& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const BigUint& a, const BigUint& b) { return cmp(a, b) <= 0; }

    // Binary long division; quotient and remainder. Slow but only used on
    // startup checks and catalog validation, never in the scan loop.
    static std::pair<BigUint, BigUint> divmod(const BigUint& num, const BigUint& den);

    // Fast path for single-limb divisors.
    std::pair<BigUint, std::uint64_t> divmod_u64(std::uint64_t den) const;

    bool divisible_by(const BigUint& den) const { return divmod(*this, den).second.is_zero(); }

    // Fits-in-u64 check and value (0 if zero).
    bool fits_u64() const { return limbs_.size() <= 1; }
    std::uint64_t low_u64() const { return limbs_.empty() ? 0 : limbs_[0]; }

    std::string to_decimal() const;
    std::string to_hex() const;

    const std::vector<std::uint64_t>& limbs() const { return limbs_; }

private:
    void trim();
    void shift_left_bits(unsigned bits);

    std::vector<std::uint64_t> limbs_;  // little-endian, no trailing zeros
};

}  // namespace sweep
