#include <gtest/gtest.h>

#include <cmath>

#include "henon/local_heights.hpp"
#include "henon/periodic_search.hpp"
#include "../support/random_rationals.hpp"

using namespace henon;
using henon::testing::random_rational;

namespace {

struct Directional {
  double value = 0.0;
  double radius = 0.0;
};

Directional directional(const CanonicalHeightValue& h, Direction dir) {
  Directional out;
  for (const auto& lv : h.locals) {
    if (lv.direction != dir) continue;
    out.value += lv.value();
    out.radius += lv.radius();
  }
  return out;
}

}  // namespace

// h+(phi P) = 2 h+(P) and h-(phi^-1 P) = 2 h-(P) within the certified radii.
TEST(HeightsProps, Functoriality) {
  std::mt19937_64 rng(3001);
  for (int i = 0; i < 200; ++i) {
    const BigRational b = random_rational(rng, 12, 9);
    const QMap map = quadratic_map(b);
    const QPoint p{random_rational(rng, 12, 6), random_rational(rng, 12, 6)};
    const auto h0 = canonical_height(map, p);
    const auto hf = canonical_height(map, map.apply(p));
    const auto hb = canonical_height(map, map.apply_inverse(p));

    const Directional p0 = directional(h0, Direction::Plus);
    const Directional p1 = directional(hf, Direction::Plus);
    const double plus_gap = std::fabs(p1.value - 2 * p0.value);
    EXPECT_LE(plus_gap, p1.radius + 2 * p0.radius) << to_string(b) << " " << to_string(p.x) << "," << to_string(p.y);
    if (p1.radius + p0.radius < 1e-9) { EXPECT_LE(plus_gap, 1e-8); }

    const Directional m0 = directional(h0, Direction::Minus);
    const Directional m1 = directional(hb, Direction::Minus);
    const double minus_gap = std::fabs(m1.value - 2 * m0.value);
    EXPECT_LE(minus_gap, m1.radius + 2 * m0.radius) << to_string(b) << " " << to_string(p.x) << "," << to_string(p.y);
    if (m1.radius + m0.radius < 1e-9) { EXPECT_LE(minus_gap, 1e-8); }
  }
}

TEST(HeightsProps, NonnegativeLocals) {
  std::mt19937_64 rng(3002);
  for (int i = 0; i < 200; ++i) {
    const QMap map = quadratic_map(random_rational(rng, 30, 16));
    const QPoint p{random_rational(rng, 20, 8), random_rational(rng, 20, 8)};
    for (const auto& lv : canonical_height(map, p).locals) {
      EXPECT_GE(lv.value(), 0.0);
      if (const auto* iv = std::get_if<Interval>(&lv.form)) { EXPECT_GE(iv->lo, 0.0); }
    }
  }
}

// With a = 1, d^N times the stored coefficient is an integer (N = escape step).
TEST(HeightsProps, FinitePlaceIntegrality) {
  std::mt19937_64 rng(3003);
  std::size_t exact = 0;
  for (int i = 0; i < 300; ++i) {
    const unsigned d = 2 + i % 2;
    std::vector<BigRational> coeffs;
    for (unsigned k = 0; k < d; ++k) coeffs.push_back(random_rational(rng, 10, 12));
    const QMap map(BigRational(1), coeffs);
    const QPoint p{random_rational(rng, 10, 12), random_rational(rng, 10, 12)};
    for (const auto& lv : canonical_height(map, p).locals) {
      const auto* e = std::get_if<ExactLog>(&lv.form);
      if (!e) continue;
      BigRational scaled = e->coeff;
      for (std::size_t k = 0; k < e->escape_step; ++k) scaled *= static_cast<long>(d);
      EXPECT_EQ(scaled.get_den(), 1) << to_string(e->coeff) << " step " << e->escape_step;
      ++exact;
    }
  }
  EXPECT_GT(exact, 100u);
}

// Local contributions at finite places vanish outside the relevant places.
TEST(HeightsProps, GoodPlacesAreZero) {
  std::mt19937_64 rng(3004);
  for (int i = 0; i < 100; ++i) {
    const BigRational b = random_rational(rng, 30, 16);
    const QPoint p{random_rational(rng, 20, 8), random_rational(rng, 20, 8)};
    for (std::uint64_t prime : {5u, 7u, 11u, 13u}) {
      if (b.get_den() % prime == 0 || p.x.get_den() % prime == 0 || p.y.get_den() % prime == 0) continue;
      for (Direction dir : {Direction::Plus, Direction::Minus}) {
        const auto lv = local_height(quadratic_map(b), p, QPlace::finite(prime), dir);
        EXPECT_EQ(lv.kind(), "certified_zero");
      }
    }
  }
}

TEST(HeightsProps, PeriodicImpliesZero) {
  std::size_t cycles = 0;
  for (const auto& b : enumerate_rationals(20, true)) {
    const QMap map = quadratic_map(b);
    for (const auto& c : find_rational_periodic_points(b)) {
      for (const auto& p : c.points) {
        const auto h = canonical_height(map, p);
        EXPECT_LE(h.total, h.error_radius) << to_string(b);
      }
      ++cycles;
    }
  }
  EXPECT_GT(cycles, 0u);
}
