#include <gtest/gtest.h>

#include "ftcausal/error.hpp"
#include "ftcausal/rational.hpp"

namespace ftcausal {
namespace {

TEST(RationalTest, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-3/4"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("0/5"), Rational(0));
}

TEST(RationalTest, RejectsDecimalsAndGarbage) {
  for (const char* bad : {"0.5", "1e3", "", "/2", "1/", "1/0", "a/b", "1//2", "+1/2", " 1/2"}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
}

TEST(RationalTest, SerialisesAsNumDen) {
  EXPECT_EQ(to_fraction_string(Rational(2) / 4), "1/2");
  EXPECT_EQ(to_fraction_string(Rational(3)), "3/1");
  EXPECT_EQ(to_fraction_string(Rational(0)), "0/1");
  EXPECT_EQ(to_fraction_string(Rational(-3, 4)), "-3/4");
  EXPECT_EQ(to_display_string(Rational(3)), "3");
  EXPECT_EQ(to_display_string(Rational(-1, 2)), "-1/2");
}

TEST(RationalTest, RoundTripsLargeValues) {
  Rational q("123456789012345678901234567890/987654321987654321", 10);
  q.canonicalize();
  EXPECT_EQ(parse_rational(to_fraction_string(q)), q);
}

}  // namespace
}  // namespace ftcausal
