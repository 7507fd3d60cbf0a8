#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "kq/residue.hpp"

using kq::annihilator;
using kq::extended_gcd;
using kq::is_unit;
using kq::kMaxModulus;
using kq::Modulus;
using kq::Residue;
using kq::unit_inverse;

TEST_CASE("modulus validation") {
    CHECK_THROWS_AS(Modulus(1), std::invalid_argument);
    CHECK_THROWS_AS(Modulus(0), std::invalid_argument);
    CHECK_THROWS_AS(Modulus(-5), std::invalid_argument);
    CHECK_THROWS_AS(Modulus(kMaxModulus + 1), std::invalid_argument);
    CHECK(Modulus(2).value() == 2);
    CHECK(Modulus(kMaxModulus).value() == kMaxModulus);
}

TEST_CASE("canonical representatives") {
    const Modulus q(7);
    CHECK(Residue(0, q).value() == 0);
    CHECK(Residue(13, q).value() == 6);
    CHECK(Residue(-1, q).value() == 6);
    CHECK(Residue(-14, q).value() == 0);
}

TEST_CASE("residue arithmetic stays canonical") {
    const Modulus q(6);
    const Residue a(4, q), b(5, q);
    CHECK((a + b).value() == 3);
    CHECK((a - b).value() == 5);
    CHECK((a * b).value() == 2);
    CHECK((-b).value() == 1);
    CHECK((-Residue(0, q)).value() == 0);
}

TEST_CASE("mixed moduli fail loudly") {
    const Residue a(1, Modulus(4)), b(1, Modulus(6));
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    CHECK_THROWS_AS(a - b, std::invalid_argument);
    CHECK_THROWS_AS(a * b, std::invalid_argument);
    CHECK(a != b);
}

TEST_CASE("extended_gcd frozen examples") {
    SUBCASE("gcd(0, 0) is 0") {
        const auto e = extended_gcd(0, 0);
        CHECK(e.g == 0);
    }
    SUBCASE("gcd(4, 6)") {
        const auto e = extended_gcd(4, 6);
        CHECK(e.g == 2);
        CHECK(e.s * 4 + e.t * 6 == 2);
    }
    SUBCASE("gcd(3, 7)") {
        const auto e = extended_gcd(3, 7);
        CHECK(e.g == 1);
        CHECK(e.s * 3 + e.t * 7 == 1);
    }
}

TEST_CASE("extended_gcd identity on random inputs") {
    std::mt19937_64 rng(20240901);
    std::uniform_int_distribution<std::int64_t> dist(-1000000, 1000000);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t a = dist(rng), b = dist(rng);
        const auto e = extended_gcd(a, b);
        CHECK(e.g >= 0);
        CHECK(e.g == std::gcd(a, b));
        CHECK(e.s * a + e.t * b == e.g);
    }
}

TEST_CASE("unit_inverse frozen examples") {
    CHECK(unit_inverse(Residue(1, Modulus(2)))->value() == 1);
    CHECK(unit_inverse(Residue(1, Modulus(12)))->value() == 1);
    CHECK(unit_inverse(Residue(3, Modulus(7)))->value() == 5);
    CHECK(!unit_inverse(Residue(2, Modulus(4))).has_value());
    CHECK(!unit_inverse(Residue(0, Modulus(5))).has_value());
}

TEST_CASE("unit_inverse succeeds exactly on units, q <= 30") {
    for (std::int64_t q = 2; q <= 30; ++q) {
        const Modulus m(q);
        for (std::int64_t a = 0; a < q; ++a) {
            const Residue r(a, m);
            const auto inv = unit_inverse(r);
            const bool unit = std::gcd(a, q) == 1;
            CHECK(inv.has_value() == unit);
            CHECK(is_unit(r) == unit);
            if (inv) CHECK((r * *inv).value() == 1);
        }
    }
}

TEST_CASE("annihilator frozen examples") {
    CHECK(annihilator(Residue(0, Modulus(6))).value() == 1);
    CHECK(annihilator(Residue(2, Modulus(6))).value() == 3);
    CHECK(annihilator(Residue(5, Modulus(6))).value() == 0);
}

TEST_CASE("annihilator generates the full annihilating ideal, q <= 30") {
    for (std::int64_t q = 2; q <= 30; ++q) {
        const Modulus m(q);
        for (std::int64_t a = 0; a < q; ++a) {
            const Residue ann = annihilator(Residue(a, m));
            CHECK((a * ann.value()) % q == 0);
            // Every annihilating x must be a multiple of the generator.
            for (std::int64_t x = 0; x < q; ++x) {
                if ((a * x) % q != 0) continue;
                if (ann.value() == 0) {
                    CHECK(x == 0);
                } else {
                    CHECK(x % ann.value() == 0);
                }
            }
        }
    }
}
