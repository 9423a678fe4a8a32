#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "../fixture_data.hpp"
#include "../support/gmp_oracle.hpp"
#include "sweep/curve.hpp"
#include "sweep/error.hpp"
#include "sweep/hex.hpp"

using namespace sweep;
using namespace sweep::curve;

namespace {

const PrecompTable& table() {
    static const PrecompTable t;
    return t;
}

scalars::Scalar random_key(std::mt19937_64& rng) {
    std::array<std::uint8_t, 32> bytes{};
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    bytes[0] &= 0x7F;
    auto k = scalars::scalar_from_bytes(bytes);
    return k.is_zero() ? scalars::scalar_from_u64(1) : k;
}

AffinePoint oracle_mul(const scalars::Scalar& k) {
    auto pt = oracle::ec_mul(oracle::Mpz::from_hex(k.to_hex()));
    if (pt.infinity) return AffinePoint::make_infinity();
    return AffinePoint{fe_from_hex(pt.x.to_hex64()), fe_from_hex(pt.y.to_hex64()), false};
}

bool throws_code(Error::Code code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

}  // namespace

TEST_CASE("generator is on the curve, perturbations are not") {
    CHECK(is_on_curve(generator()));
    CHECK(is_on_curve(AffinePoint::make_infinity()));
    AffinePoint off{generator().x, fe_add(generator().y, fe_from_u64(1)), false};
    CHECK(!is_on_curve(off));
}

TEST_CASE("field inverse and sqrt") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        FieldElement x = fe_from_hex(random_key(rng).to_hex());
        if (x.is_zero()) continue;
        CHECK(fe_mul(x, fe_inv(x)) == fe_from_u64(1));
        FieldElement sq = fe_sqr(x);
        auto root = fe_sqrt(sq);
        REQUIRE(root.has_value());
        CHECK((fe_sqr(*root) == sq));
    }
    CHECK(throws_code(Error::Code::OutOfRange, [] { fe_inv(fe_from_u64(0)); }));
}

TEST_CASE("point_add identities") {
    const AffinePoint& g = generator();
    CHECK(point_add(AffinePoint::make_infinity(), g) == g);
    CHECK(point_add(g, AffinePoint::make_infinity()) == g);
    CHECK(point_add(g, point_negate(g)).infinity);

    AffinePoint two_g = point_add(g, g);
    CHECK(two_g.x == fe_from_hex(fixtures::kTwoGx));
    CHECK(two_g.y == fe_from_hex(fixtures::kTwoGy));
}

TEST_CASE("group law sanity on random multiples") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        AffinePoint a = to_affine(scalar_mul(random_key(rng), table()));
        AffinePoint b = to_affine(scalar_mul(random_key(rng), table()));
        AffinePoint c = to_affine(scalar_mul(random_key(rng), table()));
        CHECK(point_add(a, b) == point_add(b, a));
        CHECK(point_add(point_add(a, b), c) == point_add(a, point_add(b, c)));
    }
}

TEST_CASE("scalar_mul fixed points") {
    CHECK(to_affine(scalar_mul(scalars::scalar_from_u64(1), table())) == generator());
    AffinePoint two_g = to_affine(scalar_mul(scalars::scalar_from_u64(2), table()));
    CHECK(two_g.x == fe_from_hex(fixtures::kTwoGx));
    CHECK(two_g.y == fe_from_hex(fixtures::kTwoGy));

    scalars::Scalar qm1 = scalars::scalar_from_hex(
        "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364140");
    AffinePoint neg = to_affine(scalar_mul(qm1, table()));
    CHECK(neg == point_negate(generator()));

    CHECK(throws_code(Error::Code::ZeroKey,
                      [] { scalar_mul(scalars::scalar_from_u64(0), table()); }));
}

TEST_CASE("order check: qP is the point at infinity") {
    U256 q = scalars::group_order();
    CHECK(scalar_mul_raw(q, table()).is_infinity());

    scalars::Scalar qm1 = scalars::scalar_from_hex(
        "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364140");
    AffinePoint sum = point_add(to_affine(scalar_mul(qm1, table())), generator());
    CHECK(sum.infinity);
}

TEST_CASE("scalar_mul agrees with the naive GMP oracle") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        scalars::Scalar k = random_key(rng);
        AffinePoint fast = to_affine(scalar_mul(k, table()));
        CHECK(fast == oracle_mul(k));
        CHECK(is_on_curve(fast));
    }
    // small scalars too
    for (std::uint64_t k = 1; k < 20; ++k) {
        scalars::Scalar s = scalars::scalar_from_u64(k);
        CHECK(to_affine(scalar_mul(s, table())) == oracle_mul(s));
    }
}

TEST_CASE("batch_normalize") {
    SUBCASE("empty") { CHECK(batch_normalize({}).empty()); }

    SUBCASE("single already-normalized point") {
        auto j = to_jacobian(generator());
        auto out = batch_normalize({&j, 1});
        REQUIRE(out.size() == 1);
        CHECK(out[0] == generator());
    }

    SUBCASE("batch of 1024 equals per-point normalization") {
        std::mt19937_64 rng(9);
        std::vector<JacobianPoint> pts;
        for (int i = 0; i < 1024; ++i) pts.push_back(scalar_mul(random_key(rng), table()));
        auto batched = batch_normalize(pts);
        for (int i = 0; i < 1024; ++i) {
            CHECK(batched[static_cast<std::size_t>(i)] == to_affine(pts[static_cast<std::size_t>(i)]));
        }
    }

    SUBCASE("infinities pass through") {
        std::vector<JacobianPoint> pts{JacobianPoint::make_infinity(),
                                       scalar_mul(scalars::scalar_from_u64(5), table()),
                                       JacobianPoint::make_infinity()};
        auto out = batch_normalize(pts);
        CHECK(out[0].infinity);
        CHECK(!out[1].infinity);
        CHECK(out[2].infinity);
        CHECK(out[1] == to_affine(pts[1]));
    }
}

TEST_CASE("pubkey serialization") {
    const AffinePoint& g = generator();
    auto unc = serialize_pubkey(g, false);
    REQUIRE(unc.size() == 65);
    CHECK(to_hex(unc) ==
          "0479be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798"
          "483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8");

    auto cmp = serialize_pubkey(g, true);
    REQUIRE(cmp.size() == 33);
    CHECK(cmp[0] == 0x02);  // generator y is even

    CHECK(throws_code(Error::Code::InfinityPoint,
                      [] { serialize_pubkey(AffinePoint::make_infinity(), true); }));
}

TEST_CASE("serialize / deserialize round trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 25; ++i) {
        AffinePoint pt = to_affine(scalar_mul(random_key(rng), table()));
        CHECK(deserialize_pubkey(serialize_pubkey(pt, false)) == pt);
        CHECK(deserialize_pubkey(serialize_pubkey(pt, true)) == pt);
    }
    CHECK(throws_code(Error::Code::BadLength, [] {
        std::vector<std::uint8_t> junk(10, 0x02);
        deserialize_pubkey(junk);
    }));
}

TEST_CASE("precomp table shape") {
    for (int w = 0; w < PrecompTable::kWindows; ++w) {
        CHECK(table().entry(w, 0).infinity);
    }
    CHECK(table().entry(0, 1) == generator());
    // entry(1, 1) = 16 * G
    CHECK(table().entry(1, 1) == to_affine(scalar_mul(scalars::scalar_from_u64(16), table())));
    for (int d = 1; d < 16; ++d) {
        CHECK(is_on_curve(table().entry(37, d)));
    }
}
