#include "sweep/biguint.hpp"

#include <algorithm>
#include <stdexcept>

#include "sweep/error.hpp"
#include "sweep/hex.hpp"

namespace sweep {

using uint128 = unsigned __int128;

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::from_decimal(std::string_view s) {
    if (s.empty()) raise(Error::Code::BadLength, "empty decimal string");
    BigUint r;
    for (char c : s) {
        if (c < '0' || c > '9') raise(Error::Code::BadAlphabet, "invalid decimal digit");
        // r = r * 10 + digit
        std::uint64_t carry = static_cast<std::uint64_t>(c - '0');
        for (auto& limb : r.limbs_) {
            uint128 cur = static_cast<uint128>(limb) * 10 + carry;
            limb = static_cast<std::uint64_t>(cur);
            carry = static_cast<std::uint64_t>(cur >> 64);
        }
        if (carry) r.limbs_.push_back(carry);
    }
    return r;
}

BigUint BigUint::from_hex(std::string_view s) {
    if (s.empty()) raise(Error::Code::BadLength, "empty hex string");
    BigUint r;
    for (char c : s) {
        int v = hex_value(c);
        if (v < 0) raise(Error::Code::BadAlphabet, "invalid hex digit");
        r.shift_left_bits(4);
        if (r.limbs_.empty() && v) r.limbs_.push_back(0);
        if (!r.limbs_.empty()) r.limbs_[0] |= static_cast<std::uint64_t>(v);
    }
    r.trim();
    return r;
}

unsigned BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    return static_cast<unsigned>(64 * (limbs_.size() - 1)) + 64 -
           static_cast<unsigned>(__builtin_clzll(limbs_.back()));
}

bool BigUint::bit(unsigned i) const {
    std::size_t limb = i >> 6;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i & 63)) & 1;
}

int BigUint::cmp(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    limbs_.resize(std::max(limbs_.size(), rhs.limbs_.size()), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        uint128 cur = static_cast<uint128>(limbs_[i]) + carry;
        if (i < rhs.limbs_.size()) cur += rhs.limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(cur);
        carry = static_cast<std::uint64_t>(cur >> 64);
    }
    if (carry) limbs_.push_back(carry);
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
    if (cmp(*this, rhs) < 0) raise(Error::Code::OutOfRange, "BigUint subtraction underflow");
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t sub = (i < rhs.limbs_.size()) ? rhs.limbs_[i] : 0;
        std::uint64_t d = limbs_[i] - sub;
        std::uint64_t b1 = limbs_[i] < sub;
        std::uint64_t d2 = d - borrow;
        std::uint64_t b2 = d < borrow;
        limbs_[i] = d2;
        borrow = b1 | b2;
    }
    trim();
    return *this;
}

BigUint& BigUint::operator*=(const BigUint& rhs) {
    if (is_zero() || rhs.is_zero()) {
        limbs_.clear();
        return *this;
    }
    std::vector<std::uint64_t> out(limbs_.size() + rhs.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < rhs.limbs_.size(); ++j) {
            uint128 cur = static_cast<uint128>(limbs_[i]) * rhs.limbs_[j] + out[i + j] + carry;
            out[i + j] = static_cast<std::uint64_t>(cur);
            carry = static_cast<std::uint64_t>(cur >> 64);
        }
        out[i + rhs.limbs_.size()] = carry;
    }
    limbs_ = std::move(out);
    trim();
    return *this;
}

void BigUint::shift_left_bits(unsigned bits) {
    if (is_zero() || bits == 0) return;
    unsigned limb_shift = bits / 64;
    unsigned bit_shift = bits % 64;
    limbs_.insert(limbs_.begin(), limb_shift, 0);
    if (bit_shift) {
        std::uint64_t carry = 0;
        for (std::size_t i = limb_shift; i < limbs_.size(); ++i) {
            std::uint64_t next = limbs_[i] >> (64 - bit_shift);
            limbs_[i] = limbs_[i] << bit_shift | carry;
            carry = next;
        }
        if (carry) limbs_.push_back(carry);
    }
}

std::pair<BigUint, BigUint> BigUint::divmod(const BigUint& num, const BigUint& den) {
    if (den.is_zero()) raise(Error::Code::OutOfRange, "division by zero");
    if (den.fits_u64()) {
        auto [q, r] = num.divmod_u64(den.low_u64());
        return {q, BigUint(r)};
    }
    if (cmp(num, den) < 0) return {BigUint(), num};

    BigUint quo, rem;
    quo.limbs_.assign(num.limbs_.size(), 0);
    for (unsigned i = num.bit_length(); i-- > 0;) {
        rem.shift_left_bits(1);
        if (num.bit(i)) {
            if (rem.limbs_.empty()) rem.limbs_.push_back(0);
            rem.limbs_[0] |= 1;
        }
        if (cmp(rem, den) >= 0) {
            rem -= den;
            quo.limbs_[i >> 6] |= 1ULL << (i & 63);
        }
    }
    quo.trim();
    return {quo, rem};
}

std::pair<BigUint, std::uint64_t> BigUint::divmod_u64(std::uint64_t den) const {
    if (den == 0) raise(Error::Code::OutOfRange, "division by zero");
    BigUint quo;
    quo.limbs_.assign(limbs_.size(), 0);
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        uint128 cur = static_cast<uint128>(rem) << 64 | limbs_[i];
        quo.limbs_[i] = static_cast<std::uint64_t>(cur / den);
        rem = static_cast<std::uint64_t>(cur % den);
    }
    quo.trim();
    return {quo, rem};
}

std::string BigUint::to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    BigUint cur = *this;
    constexpr std::uint64_t kChunk = 10000000000000000000ULL;  // 10^19
    while (!cur.is_zero()) {
        auto [q, r] = cur.divmod_u64(kChunk);
        cur = std::move(q);
        for (int i = 0; i < 19; ++i) {
            if (cur.is_zero() && r == 0 && i > 0) break;
            out.push_back(static_cast<char>('0' + r % 10));
            r /= 10;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string BigUint::to_hex() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        for (int nib = 15; nib >= 0; --nib) {
            unsigned v = (limbs_[i] >> (4 * nib)) & 0xF;
            if (out.empty() && v == 0) continue;
            out.push_back(hex_digit(v));
        }
    }
    return out;
}

}  // namespace sweep
