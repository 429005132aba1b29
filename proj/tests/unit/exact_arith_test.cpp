#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "henon/errors.hpp"
#include "henon/exact_arith.hpp"

using namespace henon;

namespace {

BigRational q(const char* s) { return parse_rational(s); }

}  // namespace

TEST(ParseRational, AcceptsIntegersAndFractions) {
  EXPECT_EQ(q("-9/16"), BigRational(-9, 16));
  EXPECT_EQ(q(" 6/4 "), BigRational(3, 2));
  EXPECT_EQ(q("+7"), BigRational(7));
  EXPECT_EQ(q("0/5"), BigRational(0));
}

TEST(ParseRational, RejectsMalformed) {
  for (const char* bad : {"", "x", "1/", "/2", "1/0", "1/-2", "1.5", "--1", "3/4/5"}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
}

TEST(ToString, CanonicalForms) {
  EXPECT_EQ(to_string(q("-9/16")), "-9/16");
  EXPECT_EQ(to_string(q("4/2")), "2");
  EXPECT_EQ(to_fraction_string(q("4/2")), "2/1");
}

TEST(Primes, SmallAndLarge) {
  EXPECT_FALSE(is_prime(std::uint64_t{1}));
  EXPECT_TRUE(is_prime(std::uint64_t{2}));
  EXPECT_TRUE(is_prime(std::uint64_t{1000000007}));
  EXPECT_FALSE(is_prime(std::uint64_t{3215031751}));  // strong pseudoprime to 2, 3, 5, 7
  EXPECT_TRUE(is_prime(BigInt("18446744073709551557")));
  const auto f = factor(BigInt(360));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], (std::pair<std::uint64_t, unsigned>{2, 3}));
  EXPECT_EQ(f[1], (std::pair<std::uint64_t, unsigned>{3, 2}));
  EXPECT_EQ(f[2], (std::pair<std::uint64_t, unsigned>{5, 1}));
  EXPECT_EQ(prime_divisors(BigInt(-84)), (std::vector<std::uint64_t>{2, 3, 7}));
}

TEST(PadicValuation, Examples) {
  EXPECT_EQ(padic_valuation(q("-9/16"), 2), -4);
  EXPECT_EQ(padic_valuation(q("0"), 5), std::nullopt);
  EXPECT_EQ(padic_valuation(q("50/27"), 3), -3);
  EXPECT_EQ(padic_valuation(q("50/27"), 5), 2);
  EXPECT_EQ(padic_valuation(q("50/27"), 7), 0);
}

TEST(AbsAtPlace, Examples) {
  const QPlace inf = QPlace::archimedean();
  EXPECT_EQ(abs_at_place(q("-9/16"), inf), q("9/16"));
  EXPECT_EQ(abs_at_place(q("-9/16"), QPlace::finite(2)), BigRational(16));
  EXPECT_EQ(abs_at_place(q("50/27"), QPlace::finite(3)), BigRational(27));
  EXPECT_EQ(abs_at_place(q("50/27"), QPlace::finite(5)), q("1/25"));
  EXPECT_EQ(abs_at_place(q("0"), QPlace::finite(5)), BigRational(0));
  EXPECT_THROW(QPlace::finite(4), std::invalid_argument);
}

TEST(Places, OrderingAndNames) {
  EXPECT_LT(QPlace::archimedean(), QPlace::finite(2));
  EXPECT_LT(QPlace::finite(3), QPlace::finite(5));
  EXPECT_EQ(QPlace::archimedean().name(), "inf");
  EXPECT_EQ(QPlace::finite(7).name(), "7");
}

TEST(Heights, Examples) {
  EXPECT_EQ(mult_height(q("3")), 3);
  EXPECT_DOUBLE_EQ(weil_height(q("3")), std::log(3.0));
  EXPECT_EQ(mult_height(q("-9/16")), 16);
  EXPECT_EQ(mult_height(q("0")), 1);
  EXPECT_EQ(weil_height(q("0")), 0.0);
}

TEST(LogAbs, HugeIntegers) {
  BigInt n = 1;
  for (int i = 0; i < 5000; ++i) n *= 10;
  EXPECT_NEAR(log_abs(n), 5000 * std::log(10.0), 1e-9);
  EXPECT_NEAR(log_abs(BigRational(BigInt(1), n)), -5000 * std::log(10.0), 1e-9);
}

TEST(IntegerSqrt, Examples) {
  EXPECT_EQ(integer_sqrt_exact(BigInt(16)), BigInt(4));
  EXPECT_EQ(integer_sqrt_exact(BigInt(2)), std::nullopt);
  EXPECT_EQ(integer_sqrt_exact(BigInt(1)), BigInt(1));
}

TEST(RationalRoot, Examples) {
  EXPECT_EQ(rational_root(q("-8/27"), 3), q("-2/3"));
  EXPECT_EQ(rational_root(q("9/16"), 2), q("3/4"));
  EXPECT_EQ(rational_root(q("2"), 2), std::nullopt);
}

TEST(Enumerate, HeightOne) {
  EXPECT_EQ(enumerate_rationals(1, false), (std::vector<BigRational>{q("-1"), q("0"), q("1")}));
}

TEST(Enumerate, HeightTwoAll) {
  const auto v = enumerate_rationals(2, false);
  const std::set<BigRational> got(v.begin(), v.end());
  const std::set<BigRational> want{q("-2"), q("-1"), q("-1/2"), q("0"), q("1/2"), q("1"), q("2")};
  EXPECT_EQ(got, want);
  EXPECT_EQ(v.size(), 7u);
}

TEST(Enumerate, HeightFourSquareDenominators) {
  const auto v = enumerate_rationals(4, true);
  const std::set<BigRational> got(v.begin(), v.end());
  EXPECT_EQ(v.size(), 13u);
  EXPECT_TRUE(got.count(q("3/4")));
  EXPECT_TRUE(got.count(q("-1/4")));
  EXPECT_FALSE(got.count(q("-9/16")));
  EXPECT_FALSE(got.count(q("1/2")));
}

TEST(Enumerate, CountAtHundred) {
  EXPECT_EQ(enumerate_rationals(100, false).size(), 12175u);
  EXPECT_EQ(enumerate_rationals(100, true).size(), 1247u);
}

TEST(Enumerate, StreamMatchesVector) {
  RationalEnumerator e(30, false);
  const auto v = enumerate_rationals(30, false);
  std::size_t i = 0;
  while (auto x = e.next()) {
    ASSERT_LT(i, v.size());
    EXPECT_EQ(*x, v[i++]);
  }
  EXPECT_EQ(i, v.size());
}
