#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ary/error.hpp"
#include "ary/text.hpp"

using namespace ary;

TEST(Utf8, RoundTrip) {
  const std::string s = "salam سلام ḥâž 👍";
  EXPECT_EQ(utf8_encode(utf8_decode(s)), s);
  EXPECT_EQ(utf8_decode("ḥ").size(), 1u);
  EXPECT_EQ(utf8_decode("👍")[0], U'\U0001F44D');
}

TEST(Utf8, InvalidBytesBecomeReplacement) {
  const auto d = utf8_decode(std::string("a\xff" "b"));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[1], U'�');
  EXPECT_EQ(utf8_decode(std::string("\xe2\x82")).back(), U'�');
}

TEST(Alphabetic, Scripts) {
  EXPECT_TRUE(is_alphabetic(U'a'));
  EXPECT_TRUE(is_alphabetic(U'س'));
  EXPECT_TRUE(is_alphabetic(U'é'));
  EXPECT_FALSE(is_alphabetic(U'3'));
  EXPECT_FALSE(is_alphabetic(U'!'));
  EXPECT_FALSE(is_alphabetic(U'\U0001F44D'));
}

TEST(Tokens, Alphabet) {
  EXPECT_TRUE(is_valid_token("wa3er"));
  EXPECT_TRUE(is_valid_token("7amd"));
  EXPECT_FALSE(is_valid_token(""));
  EXPECT_FALSE(is_valid_token("9alb"));
  EXPECT_FALSE(is_valid_token("Qalb"));
  EXPECT_FALSE(is_valid_token("a b"));
}

TEST(Split, Whitespace) {
  EXPECT_EQ(split_whitespace("  a \t b\n c "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(split_whitespace("   ").empty());
  EXPECT_EQ(split("a\t\tb", '\t'), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(join({"a", "b", "c"}, ","), "a,b,c");
}

TEST(Fnv, KnownVectors) {
  EXPECT_EQ(fingerprint(""), "cbf29ce484222325");
  EXPECT_EQ(fingerprint("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fingerprint("foobar"), "85944171f73967e8");
}

TEST(Numbers, ShortestRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_fixed(0.875, 6), "0.875000");
  EXPECT_EQ(format_fixed(2.0 / 3.0, 6), "0.666667");
}

TEST(Numbers, ParseErrors) {
  EXPECT_THROW(parse_double("abc"), Error);
  EXPECT_THROW(parse_double("1.5x"), Error);
  EXPECT_THROW(parse_double(""), Error);
  EXPECT_THROW(parse_int("12a"), Error);
  EXPECT_EQ(parse_int("-42"), -42);
}
