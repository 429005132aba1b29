#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "henon/exact_arith.hpp"
#include "../support/random_rationals.hpp"

using namespace henon;
using henon::testing::random_nonzero;

namespace {

std::vector<QPlace> places_of(const BigRational& q) {
  std::vector<QPlace> v{QPlace::archimedean()};
  std::set<std::uint64_t> ps;
  for (auto p : prime_divisors(q.get_num())) ps.insert(p);
  for (auto p : prime_divisors(q.get_den())) ps.insert(p);
  for (auto p : ps) v.push_back(QPlace::finite(p));
  return v;
}

}  // namespace

// prod_v |q|_v = 1 as an exact rational, so sum_v log|q|_v = 0 exactly.
TEST(ArithProps, ProductFormula) {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const BigRational q = random_nonzero(rng, 1000000, 1000000);
    BigRational prod(1);
    for (const auto& v : places_of(q)) prod *= abs_at_place(q, v);
    EXPECT_EQ(prod, BigRational(1)) << to_string(q);
  }
}

// H(q) = prod_v max(|q|_v, 1), hence h(q) = sum_v log+|q|_v.
TEST(ArithProps, HeightIsSumOfLocalLogPlus) {
  std::mt19937_64 rng(1002);
  for (int i = 0; i < 1000; ++i) {
    const BigRational q = random_nonzero(rng, 1000000, 1000000);
    BigRational prod(1);
    double sum = 0.0;
    for (const auto& v : places_of(q)) {
      prod *= std::max(abs_at_place(q, v), BigRational(1));
      sum += std::max(log_abs_at_place(q, v), 0.0);
    }
    EXPECT_EQ(prod, BigRational(mult_height(q))) << to_string(q);
    EXPECT_NEAR(sum, weil_height(q), 1e-12);
  }
}

TEST(ArithProps, EnumerationOrderedAndUnique) {
  for (bool square : {false, true}) {
    const auto v = enumerate_rationals(60, square);
    std::set<BigRational> seen;
    auto key = [](const BigRational& q) {
      return std::make_tuple(BigInt(mult_height(q)), BigInt(q.get_den()), BigInt(q.get_num()));
    };
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_TRUE(seen.insert(v[i]).second);
      if (i > 0) { EXPECT_LT(key(v[i - 1]), key(v[i])); }
      EXPECT_LE(mult_height(v[i]), 60);
      if (square) { EXPECT_TRUE(integer_sqrt_exact(v[i].get_den())); }
    }
  }
}

TEST(ArithProps, EnumerationIsComplete) {
  std::size_t count = 0;
  for (long m = 1; m <= 40; ++m) {
    for (long n = -40; n <= 40; ++n) {
      if (std::gcd(n, m) == 1 || (n == 0 && m == 1)) ++count;
    }
  }
  EXPECT_EQ(enumerate_rationals(40, false).size(), count);
}
