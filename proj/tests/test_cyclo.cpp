#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymfree/cyclo.hpp"

using namespace asymfree;

namespace {

std::vector<long> coeffs_of(const std::vector<BigInt>& v) {
    std::vector<long> out;
    for (const auto& c : v) out.push_back(c.get_si());
    return out;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(coeffs_of(cyclotomic_polynomial(1)) == std::vector<long>{-1, 1});
    CHECK(coeffs_of(cyclotomic_polynomial(2)) == std::vector<long>{1, 1});
    CHECK(coeffs_of(cyclotomic_polynomial(3)) == std::vector<long>{1, 1, 1});
    CHECK(coeffs_of(cyclotomic_polynomial(4)) == std::vector<long>{1, 0, 1});
    CHECK(coeffs_of(cyclotomic_polynomial(5)) == std::vector<long>{1, 1, 1, 1, 1});
    CHECK(coeffs_of(cyclotomic_polynomial(6)) == std::vector<long>{1, -1, 1});
    CHECK(coeffs_of(cyclotomic_polynomial(12)) == std::vector<long>{1, 0, -1, 0, 1});
}

TEST_CASE("sum of all k-th roots of unity is zero") {
    for (long k : {2L, 3L, 4L, 5L, 6L, 7L, 12L}) {
        ExactScalar sum;
        for (long e = 0; e < k; ++e) sum = sum + ExactScalar::root_power(k, e);
        CHECK(sum.is_zero());
    }
}

TEST_CASE("zeta_4 is i and zeta_4^2 is -1") {
    ExactScalar i = ExactScalar::root_power(4, 1);
    auto r = i.as_rational();
    REQUIRE(r.has_value());
    CHECK(r->re == 0);
    CHECK(r->im == 1);
    auto sq = (i * i).as_rational();
    REQUIRE(sq.has_value());
    CHECK(sq->re == -1);
    CHECK(sq->im == 0);
}

TEST_CASE("conjugation and abs2 of unit roots") {
    for (long k : {3L, 5L, 6L}) {
        ExactScalar z = ExactScalar::root_power(k, 1);
        auto a2 = z.abs2().as_rational();
        REQUIRE(a2.has_value());
        CHECK(a2->re == 1);
        CHECK(a2->im == 0);
    }
}

TEST_CASE("zeta_6 + zeta_6^5 equals 1 exactly") {
    ExactScalar z = ExactScalar::root_power(6, 1) + ExactScalar::root_power(6, 5);
    auto r = z.as_rational();
    REQUIRE(r.has_value());
    CHECK(r->re == 1);
    CHECK(r->im == 0);
    CHECK(z.abs_le(Rational(1)) == ExactScalar::Cmp::LessOrEqual);
    CHECK(z.abs_le(Rational(99, 100)) == ExactScalar::Cmp::Greater);
}

TEST_CASE("abs_le decision ladder") {
    // Rational: exact either way.
    ExactScalar half = ExactScalar::from_rational(Rational(1, 2), Rational(0));
    CHECK(half.abs_le(Rational(1, 2)) == ExactScalar::Cmp::LessOrEqual);
    CHECK(half.abs_le(Rational(49, 100)) == ExactScalar::Cmp::Greater);

    // Gaussian rational: |3/5 + 4/5 i| = 1.
    ExactScalar g = ExactScalar::from_rational(Rational(3, 5), Rational(4, 5));
    CHECK(g.abs_le(Rational(1)) == ExactScalar::Cmp::LessOrEqual);
    CHECK(g.abs_le(Rational(999, 1000)) == ExactScalar::Cmp::Greater);

    // Irrational with slack: triangle bound settles it.
    ExactScalar z = ExactScalar::from_rational(Rational(1)) + ExactScalar::root_power(5, 1);
    CHECK(z.abs_le(Rational(3)) == ExactScalar::Cmp::LessOrEqual);
    // |1 + zeta_5| = 2 cos(pi/5) ~ 1.618; neither one-sided route decides 1.6.
    CHECK(z.abs_le(Rational(8, 5)) == ExactScalar::Cmp::Unknown);
}

TEST_CASE("equality across compatible orders") {
    CHECK(ExactScalar::root_power(6, 2) == ExactScalar::root_power(3, 1));
    CHECK(ExactScalar::root_power(4, 2) == ExactScalar::from_rational(Rational(-1)));
    CHECK_FALSE(ExactScalar::root_power(6, 1) == ExactScalar::root_power(6, 2));
}

TEST_CASE("to_complex matches the root on the unit circle") {
    for (long k : {3L, 5L, 8L}) {
        ExactScalar z = ExactScalar::root_power(k, 1);
        std::complex<double> expect = std::polar(1.0, 2.0 * M_PI / static_cast<double>(k));
        CHECK(std::abs(z.to_complex() - expect) < 1e-14);
    }
}

TEST_CASE("str renders rationals plainly") {
    CHECK(ExactScalar::from_rational(Rational(-1, 6)).str() == "-1/6");
    CHECK(ExactScalar::root_power(4, 1).str() == "0+1i");
}
