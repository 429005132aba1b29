#include <gtest/gtest.h>

#include <random>

#include "henon/mod_p.hpp"
#include "henon/periodic_search.hpp"

using namespace henon;

namespace {

std::uint64_t det_mod(const FpMatrix2& m, std::uint64_t p) {
  return (m.m11 * m.m22 % p + p * p - m.m12 * m.m21 % p) % p;
}

const FpMatrix2 kIdentity{1, 0, 0, 1};

}  // namespace

TEST(ModPProps, Bijectivity) {
  for (std::uint64_t p : {5u, 7u, 11u, 13u, 31u, 101u}) {
    for (std::uint64_t b = 0; b < p; b += (p > 13 ? 7 : 1)) {
      std::uint64_t total = 0;
      for (const auto& c : cycle_decomposition(FpMap(p, b))) total += c.length;
      EXPECT_EQ(total, p * p) << "p=" << p << " b=" << b;
    }
  }
}

TEST(ModPProps, MultiplierDeterminant) {
  for (std::uint64_t p : {5u, 7u, 11u, 13u, 17u}) {
    for (std::uint64_t b = 0; b < p; ++b) {
      for (const auto& c : cycle_decomposition(FpMap(p, b))) {
        EXPECT_EQ(det_mod(c.multiplier, p), c.length % 2 == 0 ? 1u : p - 1);
        EXPECT_EQ(matrix_power(c.multiplier, c.multiplier_order, p), kIdentity);
      }
    }
  }
}

TEST(ModPProps, MatrixOrderIsMinimal) {
  std::mt19937_64 rng(4001);
  for (std::uint64_t p : {5u, 7u, 11u, 13u, 97u, 101u}) {
    std::uniform_int_distribution<std::uint64_t> entry(0, p - 1);
    for (int i = 0; i < 200; ++i) {
      const FpMatrix2 m{entry(rng), entry(rng), entry(rng), entry(rng)};
      if (det_mod(m, p) == 0) {
        EXPECT_THROW(matrix_order(m, p), SingularMatrix);
        continue;
      }
      const std::uint64_t r = matrix_order(m, p);
      EXPECT_EQ(matrix_power(m, r, p), kIdentity);
      for (auto q : prime_divisors(BigInt(static_cast<unsigned long>(r)))) {
        EXPECT_NE(matrix_power(m, r / q, p), kIdentity) << "p=" << p << " r=" << r << " q=" << q;
      }
    }
  }
}

// Brute force on tiny primes: the order is the least r with M^r = I.
TEST(ModPProps, MatrixOrderAgainstRepeatedMultiplication) {
  for (std::uint64_t p : {5u, 7u}) {
    for (std::uint64_t a = 0; a < p; ++a) {
      for (std::uint64_t b = 0; b < p; ++b) {
        for (std::uint64_t c = 0; c < p; c += 2) {
          for (std::uint64_t d = 0; d < p; d += 3) {
            const FpMatrix2 m{a, b, c, d};
            if (det_mod(m, p) == 0) continue;
            std::uint64_t r = 1;
            for (FpMatrix2 acc = m; !(acc == kIdentity); acc = matrix_multiply(acc, m, p)) ++r;
            EXPECT_EQ(matrix_order(m, p), r);
          }
        }
      }
    }
  }
}

// The rational period set of every b with H(b) <= 20 lies in S(b, p).
TEST(ModPProps, FilterSoundness) {
  std::size_t checks = 0;
  for (const auto& b : enumerate_rationals(20, true)) {
    const auto cycles = find_rational_periodic_points(b);
    for (std::uint64_t p : {5u, 7u, 11u}) {
      const PeriodSet s = period_filter_set(b, p);
      if (s.is_unfiltered()) continue;
      for (const auto& c : cycles) EXPECT_TRUE(s.contains(c.period())) << to_string(b) << " p=" << p;
      ++checks;
    }
  }
  EXPECT_GT(checks, 250u);
}
