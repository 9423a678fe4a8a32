#pragma once

// Divisor catalogs for other curves' group orders: given a factorization of
// |group| - 1, enumerate every subgroup order under a budget and report how
// the scan space compares to the h = 18051648 sweep. Analysis only, no point
// arithmetic for these curves.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sweep/scalar_group.hpp"

namespace sweep::survey {

struct CurveProfile {
    std::string name;
    scalars::OrderFactorization order_minus_one;
    // Documented constants (group order, field prime, curve coefficients...)
    // carried along for reporting; not used in computation.
    std::vector<std::pair<std::string, std::string>> constants;
};

const CurveProfile& secp256k1_profile();
const CurveProfile& curve25519_profile();
const CurveProfile& p256_profile();
// nullptr if the name is unknown ("secp256k1", "curve25519", "p256").
const CurveProfile* profile_by_name(std::string_view name);

struct DivisorEntry {
    std::uint64_t value;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;  // prime, exponent

    std::string factorization_string() const;
};

struct DivisorCatalog {
    std::string curve;
    std::uint64_t budget = 0;
    std::vector<DivisorEntry> divisors;  // ascending, exactly the divisors <= budget

    std::uint64_t max_divisor() const { return divisors.empty() ? 0 : divisors.back().value; }
};

// Exact enumeration by recursive products over the prime powers, pruned at
// the budget. Guards against catalogs above 10^7 entries.
DivisorCatalog divisors_under(const CurveProfile& profile, std::uint64_t budget);

struct ReportOptions {
    double keys_per_sec = 50000.0;  // rate used for the scan-time column
    bool json = false;
};

// Human-readable table (or JSON): divisor, factorization, estimated scan
// time, and whether a sweep comparable to the h = 18051648 one is feasible.
std::string report(const DivisorCatalog& catalog, const ReportOptions& options = {});

}  // namespace sweep::survey
