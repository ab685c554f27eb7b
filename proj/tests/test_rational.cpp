#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "fdecay/rational.hpp"

using fdecay::Rational;
using fdecay::rat;

TEST_CASE("construction reduces to lowest terms with positive denominator") {
    CHECK(rat(2, 4) == rat(1, 2));
    CHECK(rat(-2, 4) == rat(-1, 2));
    CHECK(rat(2, -4) == rat(-1, 2));
    CHECK(rat(-2, -4) == rat(1, 2));
    CHECK(rat(0, 7) == rat(0));
    CHECK(rat(0, -7).den() == 1);
    CHECK(rat(6, 3).num() == 2);
    CHECK(rat(6, 3).den() == 1);
    CHECK_THROWS_AS(rat(1, 0), std::domain_error);
}

TEST_CASE("arithmetic") {
    CHECK(rat(1, 2) + rat(1, 3) == rat(5, 6));
    CHECK(rat(1, 2) - rat(1, 3) == rat(1, 6));
    CHECK(rat(2, 3) * rat(3, 4) == rat(1, 2));
    CHECK(rat(2, 3) / rat(4, 3) == rat(1, 2));
    CHECK(-rat(3, 7) == rat(-3, 7));
    CHECK(rat(1, 3) + rat(-1, 3) == rat(0));
    CHECK_THROWS_AS(rat(1, 2) / rat(0), std::domain_error);

    Rational acc(0);
    for (int i = 1; i <= 64; ++i) acc += rat(1, i) - rat(1, i + 1);
    CHECK(acc == rat(64, 65));
}

TEST_CASE("ordering is exact cross-multiplication") {
    CHECK(rat(1, 3) < rat(1, 2));
    CHECK(rat(-1, 2) < rat(-1, 3));
    CHECK(rat(7, 4) > rat(13, 8));
    CHECK(rat(2, 6) <= rat(1, 3));
    CHECK(rat(2, 6) >= rat(1, 3));
    // A comparison that is wrong in double precision stays exact here.
    Rational a(10000000000000001LL, 10000000000000000LL);
    CHECK(a > rat(1));
    CHECK_FALSE(a == rat(1));
}

TEST_CASE("parse and str round-trip") {
    CHECK(Rational::parse("7/4") == rat(7, 4));
    CHECK(Rational::parse("-7/4") == rat(-7, 4));
    CHECK(Rational::parse("7/-4") == rat(-7, 4));
    CHECK(Rational::parse("3") == rat(3));
    CHECK(Rational::parse("0") == rat(0));
    CHECK(rat(7, 4).str() == "7/4");
    CHECK(rat(-1, 2).str() == "-1/2");
    CHECK(rat(5).str() == "5");
    CHECK(Rational::parse(rat(-355, 113).str()) == rat(-355, 113));
    CHECK_THROWS_AS(Rational::parse(""), std::domain_error);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::domain_error);
    CHECK_THROWS_AS(Rational::parse("a/b"), std::domain_error);
    CHECK_THROWS_AS(Rational::parse("1/2/3"), std::domain_error);
    CHECK_THROWS_AS(Rational::parse("1.5"), std::domain_error);
}

TEST_CASE("stream output matches str") {
    std::ostringstream os;
    os << rat(-13, 6);
    CHECK(os.str() == "-13/6");
}

TEST_CASE("to_double") {
    CHECK(rat(1, 2).to_double() == doctest::Approx(0.5));
    CHECK(rat(-13, 6).to_double() == doctest::Approx(-2.1666666666666665));
}

TEST_CASE("abs") {
    CHECK(fdecay::abs(rat(-3, 4)) == rat(3, 4));
    CHECK(fdecay::abs(rat(3, 4)) == rat(3, 4));
}

TEST_CASE("overflow is detected, not wrapped") {
    Rational big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK_NOTHROW(big + big);  // 2*(INT64_MAX/2) still fits
    CHECK_THROWS_AS(big * rat(4), std::overflow_error);
}
