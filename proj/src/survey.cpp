#include "sweep/survey.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sweep/error.hpp"

namespace sweep::survey {

using scalars::OrderFactorization;
using scalars::PrimePower;

namespace {

constexpr std::uint64_t kCatalogGuard = 10000000;
// The sweep this tool compares against enumerated h = 18051648 elements; a
// subgroup is only worth a coset-style analysis when it is of broadly
// comparable size.
constexpr std::uint64_t kComparableThreshold = 1000000;

OrderFactorization fac(std::vector<PrimePower> pp) { return scalars::make_factorization(std::move(pp)); }

CurveProfile make_secp256k1() {
    CurveProfile p;
    p.name = "secp256k1";
    p.order_minus_one = fac({{BigUint(2), 6},
                             {BigUint(3), 1},
                             {BigUint(149), 1},
                             {BigUint(631), 1},
                             {scalars::cofactor_p1(), 1},
                             {scalars::cofactor_p2(), 1},
                             {scalars::cofactor_p3(), 1}});
    p.constants = {
        {"q", "115792089237316195423570985008687907852837564279074904382605163141518161494337"},
        {"p", "2^256 - 2^32 - 2^9 - 2^8 - 2^7 - 2^6 - 2^4 - 1"},
        {"equation", "y^2 = x^3 + 7"},
    };
    return p;
}

CurveProfile make_curve25519() {
    CurveProfile p;
    p.name = "curve25519";
    p.order_minus_one =
        fac({{BigUint(2), 2},
             {BigUint(3), 1},
             {BigUint(11), 1},
             {BigUint::from_decimal("198211423230930754013084525763697"), 1},
             {BigUint::from_decimal("276602624281642239937218680557139826668747"), 1}});
    p.constants = {
        {"l", "7237005577332262213973186563042994240857116359379907606001950938285454250989"},
        {"n", "8*l"},
        {"p", "2^255 - 19"},
        {"equation", "y^2 = x^3 + 486662*x^2 + x"},
        {"q1", "276602624281642239937218680557139826668747"},
        {"q2", "198211423230930754013084525763697"},
    };
    return p;
}

CurveProfile make_p256() {
    CurveProfile p;
    p.name = "p256";
    p.order_minus_one = fac({{BigUint(2), 4},
                             {BigUint(3), 1},
                             {BigUint(71), 1},
                             {BigUint(131), 1},
                             {BigUint(373), 1},
                             {BigUint(3407), 1},
                             {BigUint(17449), 1},
                             {BigUint(38189), 1},
                             {BigUint(187019741), 1},
                             {BigUint(622491383), 1},
                             {BigUint::from_decimal("1002328039319"), 1},
                             {BigUint::from_decimal("2624747550333869278416773953"), 1}});
    p.constants = {
        {"q", "115792089210356248762697446949407573529996955224135760342422259061068512044369"},
        {"p", "2^256 - 2^224 + 2^192 + 2^96 - 1"},
        {"B", "41058363725152142129326129780047268409114441015993725554835256314039467401291"},
        {"equation", "y^2 = x^3 - 3*x + B"},
        {"q1", "2624747550333869278416773953"},
        {"q2", "1002328039319"},
    };
    return p;
}

std::string humanize_seconds(double s) {
    std::ostringstream os;
    os.precision(3);
    if (s < 1.0) {
        os << s * 1000.0 << " ms";
    } else if (s < 60.0) {
        os << s << " s";
    } else if (s < 3600.0) {
        os << s / 60.0 << " min";
    } else if (s < 86400.0) {
        os << s / 3600.0 << " h";
    } else if (s < 86400.0 * 365.25) {
        os << s / 86400.0 << " days";
    } else {
        os << s / (86400.0 * 365.25) << " years";
    }
    return os.str();
}

}  // namespace

const CurveProfile& secp256k1_profile() {
    static const CurveProfile p = make_secp256k1();
    return p;
}
const CurveProfile& curve25519_profile() {
    static const CurveProfile p = make_curve25519();
    return p;
}
const CurveProfile& p256_profile() {
    static const CurveProfile p = make_p256();
    return p;
}

const CurveProfile* profile_by_name(std::string_view name) {
    if (name == "secp256k1") return &secp256k1_profile();
    if (name == "curve25519") return &curve25519_profile();
    if (name == "p256" || name == "P-256" || name == "p-256") return &p256_profile();
    return nullptr;
}

std::string DivisorEntry::factorization_string() const {
    if (factors.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << "*";
        os << factors[i].first;
        if (factors[i].second > 1) os << "^" << factors[i].second;
    }
    return os.str();
}

DivisorCatalog divisors_under(const CurveProfile& profile, std::uint64_t budget) {
    if (budget < 1) raise(Error::Code::OutOfRange, "budget must be at least 1");

    // Only primes that fit the budget can appear in a divisor <= budget.
    struct SmallFactor {
        std::uint64_t prime;
        unsigned max_exponent;
    };
    std::vector<SmallFactor> usable;
    for (const auto& pp : profile.order_minus_one.factors) {
        if (pp.prime.fits_u64() && pp.prime.low_u64() <= budget)
            usable.push_back({pp.prime.low_u64(), pp.exponent});
    }

    DivisorCatalog catalog;
    catalog.curve = profile.name;
    catalog.budget = budget;

    // Counting pass first, so an oversized catalog aborts without
    // materializing millions of entries.
    std::uint64_t qualifying = 0;
    auto count_walk = [&](auto&& self, std::size_t at, std::uint64_t value) -> void {
        if (at == usable.size()) {
            if (++qualifying > kCatalogGuard)
                raise(Error::Code::CatalogTooLarge, "divisor catalog exceeds 10^7 entries");
            return;
        }
        std::uint64_t v = value;
        for (unsigned e = 0;; ++e) {
            self(self, at + 1, v);
            if (e == usable[at].max_exponent) break;
            if (v > budget / usable[at].prime) break;  // v * prime would exceed the budget
            v *= usable[at].prime;
        }
    };
    count_walk(count_walk, 0, 1);
    catalog.divisors.reserve(qualifying);

    std::vector<std::pair<std::uint64_t, unsigned>> current;
    auto walk = [&](auto&& self, std::size_t at, std::uint64_t value) -> void {
        if (at == usable.size()) {
            DivisorEntry entry;
            entry.value = value;
            for (const auto& [prime, exp] : current) {
                if (exp) entry.factors.emplace_back(prime, exp);
            }
            catalog.divisors.push_back(std::move(entry));
            return;
        }
        current.emplace_back(usable[at].prime, 0);
        std::uint64_t v = value;
        for (unsigned e = 0;; ++e) {
            current.back().second = e;
            self(self, at + 1, v);
            if (e == usable[at].max_exponent) break;
            if (v > budget / usable[at].prime) break;
            v *= usable[at].prime;
        }
        current.pop_back();
    };
    walk(walk, 0, 1);

    std::sort(catalog.divisors.begin(), catalog.divisors.end(),
              [](const DivisorEntry& a, const DivisorEntry& b) { return a.value < b.value; });
    return catalog;
}

std::string report(const DivisorCatalog& catalog, const ReportOptions& options) {
    const std::uint64_t max_div = catalog.max_divisor();
    const bool comparable = max_div >= kComparableThreshold;

    if (options.json) {
        std::ostringstream os;
        os << "{\"curve\":\"" << catalog.curve << "\",\"budget\":" << catalog.budget
           << ",\"divisor_count\":" << catalog.divisors.size() << ",\"max_divisor\":" << max_div
           << ",\"comparable_sweep_feasible\":" << (comparable ? "true" : "false")
           << ",\"keys_per_sec\":" << options.keys_per_sec << ",\"divisors\":[";
        for (std::size_t i = 0; i < catalog.divisors.size(); ++i) {
            const auto& d = catalog.divisors[i];
            if (i) os << ",";
            os << "{\"order\":" << d.value << ",\"factorization\":\"" << d.factorization_string()
               << "\",\"scan_seconds\":" << static_cast<double>(d.value) / options.keys_per_sec << "}";
        }
        os << "]}";
        return os.str();
    }

    std::ostringstream os;
    os << "curve: " << catalog.curve << "\n";
    os << "subgroup orders dividing |group|-1, up to budget " << catalog.budget << ":\n\n";
    os << "  order                factorization                        est. scan time @ "
       << static_cast<std::uint64_t>(options.keys_per_sec) << " keys/s\n";
    for (const auto& d : catalog.divisors) {
        std::string order = std::to_string(d.value);
        std::string factorization = d.factorization_string();
        os << "  " << order << std::string(order.size() < 20 ? 21 - order.size() : 1, ' ')
           << factorization
           << std::string(factorization.size() < 36 ? 37 - factorization.size() : 1, ' ')
           << humanize_seconds(static_cast<double>(d.value) / options.keys_per_sec) << "\n";
    }
    os << "\nmax feasible subgroup order: " << max_div << "\n";
    if (comparable) {
        os << "a coset-style sweep comparable to h=18051648 is feasible on this curve\n";
    } else {
        os << "a coset-style sweep comparable to h=18051648 is NOT feasible: the largest "
              "scannable subgroup has only "
           << max_div << " elements\n";
    }
    return os.str();
}

}  // namespace sweep::survey
