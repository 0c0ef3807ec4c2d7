#include "quasisim/rational.hpp"

#include <gtest/gtest.h>

namespace quasisim {
namespace {

TEST(RationalTest, CanonicalizesOnConstruction) {
  const Rational r(4, -6);
  EXPECT_EQ(r.numerator(), -2);
  EXPECT_EQ(r.denominator(), 3);
  EXPECT_EQ(r.str(), "-2/3");
  EXPECT_EQ(Rational(6, 3).str(), "2");
  EXPECT_EQ(Rational(0, 5).str(), "0");
}

TEST(RationalTest, ArithmeticIsExact) {
  const Rational third(1, 3);
  EXPECT_EQ(third + third + third, Rational(1));
  EXPECT_EQ(Rational(2, 3) - Rational(-1, 3), Rational(1));
  EXPECT_EQ(Rational(4, 3) / Rational(5, 3), Rational(4, 5));
  EXPECT_LT(Rational(-1, 3), Rational(0));
  EXPECT_THROW(third / Rational(0), std::domain_error);
}

TEST(RationalTest, ParsesCanonicalText) {
  EXPECT_EQ(Rational::parse("-1/3"), Rational(-1, 3));
  EXPECT_EQ(Rational::parse("2/3"), Rational(2, 3));
  EXPECT_EQ(Rational::parse("0"), Rational(0));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
  EXPECT_EQ(Rational::parse("123456789012345678901234567890/11").str(),
            "123456789012345678901234567890/11");
}

TEST(RationalTest, RejectsNonCanonicalText) {
  for (const char* bad : {"2/6", "1/1", "0/3", "-0", "+1/3", "01/3", "1/03", "1/-3", "1/0",
                          " 1/3", "1/3 ", "", "-", "1/", "/3", "a/3", "1.5"}) {
    EXPECT_THROW(Rational::parse(bad), ParseError) << bad;
  }
}

TEST(RationalTest, ParseErrorNamesTheReason) {
  try {
    Rational::parse("2/6");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("lowest terms"), std::string::npos);
  }
}

TEST(RationalTest, StrParseRoundTrip) {
  for (long n = -13; n <= 13; ++n) {
    for (long d = 1; d <= 12; ++d) {
      const Rational r(n, d);
      EXPECT_EQ(Rational::parse(r.str()), r);
    }
  }
}

}  // namespace
}  // namespace quasisim
