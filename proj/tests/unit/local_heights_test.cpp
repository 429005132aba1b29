#include <gtest/gtest.h>

#include <cmath>

#include "henon/local_heights.hpp"

using namespace henon;

namespace {

BigRational q(const char* s) { return parse_rational(s); }
QPoint pt(const char* x, const char* y) { return {q(x), q(y)}; }
const QPlace kInf = QPlace::archimedean();

// 2^-N log|y_N| and the backward analogue, evaluated to 20 digits with mpmath.
constexpr double kLambdaPlus02 = 0.72413715800388971268;
constexpr double kLambdaMinus02 = 0.3311557729473948197;

}  // namespace

TEST(CFv, Examples) {
  EXPECT_DOUBLE_EQ(c_f_v({q("-9/16"), q("0")}, kInf), 1.0);
  EXPECT_DOUBLE_EQ(c_f_v({q("-9/16"), q("0")}, QPlace::finite(2)), 4.0);
  EXPECT_DOUBLE_EQ(c_f_v({q("0"), q("0")}, QPlace::finite(3)), 1.0);
  EXPECT_DOUBLE_EQ(c_f_v({q("0"), q("0")}, kInf), 1.0);
  EXPECT_EQ(c_f_v_exponent({q("-9/16"), q("0")}, 2), BigRational(2));
  // b_1 = 1/8 contributes |1/8|_2^{1/(3-1)} = 2^{3/2}.
  EXPECT_EQ(c_f_v_exponent({q("0"), q("1/8"), q("0")}, 2), q("3/2"));
}

TEST(EscapeRegions, Examples) {
  const QMap m = quadratic_map(q("-9/16"));
  EXPECT_TRUE(in_escape_plus(m, pt("0", "2"), kInf));
  EXPECT_FALSE(in_escape_minus(m, pt("0", "2"), kInf));
  EXPECT_TRUE(in_escape_minus(m, pt("2", "0"), kInf));
  const QMap good = quadratic_map(q("3"));
  EXPECT_FALSE(in_escape_plus(good, pt("4", "-5"), QPlace::finite(7)));
  EXPECT_FALSE(in_escape_minus(good, pt("4", "-5"), QPlace::finite(7)));
  EXPECT_TRUE(in_escape_plus(quadratic_map(q("1/9")), pt("0", "1/9"), QPlace::finite(3)));
  // Boundary: |y|^2 = 9 = 3 max(|x|, |b|, 1) is not inside.
  EXPECT_FALSE(in_escape_plus(quadratic_map(q("0")), pt("3", "3"), kInf));
}

TEST(EscapeRegions, GeneralDegree) {
  const QMap cubic(q("2"), {q("1"), q("0"), q("0")});
  EXPECT_TRUE(in_escape_plus(cubic, pt("0", "100"), kInf));
  EXPECT_FALSE(in_escape_plus(cubic, pt("0", "4"), kInf));
}

TEST(NonarchimedeanEscape, ExponentForm) {
  EscapeExponents quad{2, true, q("0"), q("2"), q("1")};
  EXPECT_TRUE(nonarchimedean_escape(quad, Direction::Plus, std::nullopt, q("2")));
  EXPECT_FALSE(nonarchimedean_escape(quad, Direction::Plus, std::nullopt, q("1")));
  EXPECT_FALSE(nonarchimedean_escape(quad, Direction::Plus, q("5"), q("2")));
  EXPECT_FALSE(nonarchimedean_escape(quad, Direction::Plus, q("1"), std::nullopt));
  EXPECT_TRUE(nonarchimedean_escape(quad, Direction::Minus, q("2"), std::nullopt));
  EscapeExponents cubic{3, false, q("0"), std::nullopt, q("0")};
  EXPECT_TRUE(nonarchimedean_escape(cubic, Direction::Plus, q("2"), q("1")));
  EXPECT_FALSE(nonarchimedean_escape(cubic, Direction::Plus, q("3"), q("1")));
}

TEST(EpsilonBounds, QuadraticAndGeneral) {
  const Interval e2 = epsilon_bounds(quadratic_map(q("5")));
  EXPECT_DOUBLE_EQ(e2.lo, -std::log(3.0));
  EXPECT_DOUBLE_EQ(e2.hi, std::log(5.0 / 3.0));
  const Interval e3 = epsilon_bounds(QMap(q("1"), {q("0"), q("0"), q("0")}));
  EXPECT_NEAR(e3.lo, -std::log(5.0) / 2.0, 1e-15);
  EXPECT_NEAR(e3.hi, std::log(9.0 / 5.0) / 2.0, 1e-15);
}

TEST(LocalHeight, ExactLogAtStepZero) {
  const auto lv = local_height(quadratic_map(q("1/9")), pt("0", "1/9"), QPlace::finite(3), Direction::Plus);
  ASSERT_EQ(lv.kind(), "exact_log");
  const auto& e = std::get<ExactLog>(lv.form);
  EXPECT_EQ(e.coeff, BigRational(2));
  EXPECT_EQ(e.base, 3u);
  EXPECT_EQ(e.escape_step, 0u);
  EXPECT_DOUBLE_EQ(lv.value(), 2 * std::log(3.0));
  EXPECT_LE(lv.radius(), 1e-15);
}

TEST(LocalHeight, ExactLogAfterOneStep) {
  const QMap m = quadratic_map(q("1/4"));
  const auto plus = local_height(m, pt("0", "0"), QPlace::finite(2), Direction::Plus);
  const auto minus = local_height(m, pt("0", "0"), QPlace::finite(2), Direction::Minus);
  EXPECT_EQ(std::get<ExactLog>(plus.form).coeff, BigRational(1));
  EXPECT_EQ(std::get<ExactLog>(plus.form).escape_step, 1u);
  EXPECT_EQ(std::get<ExactLog>(minus.form).coeff, BigRational(1));
  EXPECT_EQ(std::get<ExactLog>(minus.form).escape_step, 1u);
}

TEST(LocalHeight, GoodReductionIsZero) {
  const auto lv = local_height(quadratic_map(q("3")), pt("1", "2"), QPlace::finite(5), Direction::Plus);
  EXPECT_EQ(lv.kind(), "certified_zero");
  EXPECT_EQ(lv.value(), 0.0);
  EXPECT_EQ(lv.radius(), 0.0);
}

TEST(LocalHeight, ArchimedeanInterval) {
  const auto lv = local_height(quadratic_map(q("0")), pt("0", "2"), kInf, Direction::Plus);
  ASSERT_EQ(lv.kind(), "interval");
  const auto& iv = std::get<Interval>(lv.form);
  EXPECT_LE(iv.lo, kLambdaPlus02);
  EXPECT_GE(iv.hi, kLambdaPlus02);
  EXPECT_LE(iv.width(), 1e-9);
  EXPECT_EQ(iv.escape_step, 0u);
}

// Escapes only at step 19, with ~10^5-digit coordinates; the enclosure is
// finished in floating point. Oracle: 2^-40 log|y_40| at 3000 digits.
TEST(LocalHeight, LateEscapeFinishedInFloatingPoint) {
  const QMap m(q("1"), {q("-1"), q("1/6")});
  const auto lv = local_height(m, pt("1/3", "4/5"), kInf, Direction::Plus);
  ASSERT_EQ(lv.kind(), "interval");
  const auto& iv = std::get<Interval>(lv.form);
  EXPECT_EQ(iv.escape_step, 19u);
  EXPECT_LE(iv.lo, 4.0029344203378e-6);
  EXPECT_GE(iv.hi, 4.0029344203378e-6);
  EXPECT_LE(iv.width(), 1e-9);
}

TEST(LocalHeight, PeriodicAtInfinity) {
  const auto lv = local_height(quadratic_map(q("-9/16")), pt("1/4", "-3/4"), kInf, Direction::Minus);
  EXPECT_EQ(lv.kind(), "certified_zero");
}

TEST(LocalHeight, HeuristicZeroAtCap) {
  // (1/4, 1/4) is not periodic for b = -9/16 but its 2-adic orbit stays bounded.
  const auto lv = local_height(quadratic_map(q("-9/16")), pt("1/4", "1/4"), QPlace::finite(2), Direction::Plus);
  ASSERT_EQ(lv.kind(), "heuristic_zero");
  EXPECT_GT(lv.radius(), 0.0);
  EXPECT_LT(lv.radius(), 1e-15);
}

TEST(LocalHeight, CapExceededCarriesPartial) {
  HeightConfig cfg;
  cfg.max_digits = 6;
  try {
    local_height(quadratic_map(q("0")), pt("0", "2"), kInf, Direction::Plus, cfg);
    FAIL() << "expected HeightCapExceeded";
  } catch (const HeightCapExceeded& e) {
    const auto& iv = std::get<Interval>(e.partial().form);
    EXPECT_LE(iv.lo, kLambdaPlus02);
    EXPECT_GE(iv.hi, kLambdaPlus02);
  }
}

TEST(CanonicalHeight, PeriodicPointIsZero) {
  const auto h = canonical_height(quadratic_map(q("-9/16")), pt("1/4", "-3/4"));
  EXPECT_EQ(h.total, 0.0);
  EXPECT_LE(h.total, h.error_radius);
  for (const auto& lv : h.locals) EXPECT_EQ(lv.kind(), "certified_zero");
}

TEST(CanonicalHeight, FixedOriginExactlyZero) {
  const auto h = canonical_height(quadratic_map(q("0")), pt("0", "0"));
  EXPECT_EQ(h.total, 0.0);
  EXPECT_EQ(h.error_radius, 0.0);
}

TEST(CanonicalHeight, ZeroTwo) {
  const auto h = canonical_height(quadratic_map(q("0")), pt("0", "2"));
  EXPECT_NEAR(h.h_plus, kLambdaPlus02, 1e-9);
  EXPECT_NEAR(h.h_minus, kLambdaMinus02, 1e-9);
  EXPECT_NEAR(h.total, 1.0552929310, 1e-9);
  EXPECT_LT(h.error_radius, 1e-9);
  EXPECT_EQ(h.locals.size(), 2u);
}

TEST(RelevantPlaces, CollectsDenominatorsAndA) {
  const QMap m(q("6/5"), {q("1/4"), q("0")});
  const auto places = relevant_places(m, pt("1/9", "7"));
  EXPECT_EQ(places, (std::vector<QPlace>{kInf, QPlace::finite(2), QPlace::finite(3), QPlace::finite(5)}));
}

TEST(Confinement, Examples) {
  EXPECT_TRUE(confinement_check(quadratic_map(q("-9/16")), pt("3/4", "3/4")));
  EXPECT_TRUE(confinement_check_at(quadratic_map(q("0")), pt("0", "2"), kInf));
  EXPECT_FALSE(confinement_check_at(quadratic_map(q("0")), pt("0", "4"), kInf));
  EXPECT_FALSE(confinement_check_at(quadratic_map(q("1/4")), pt("1/3", "0"), QPlace::finite(3)));
  EXPECT_FALSE(confinement_check(quadratic_map(q("1/4")), pt("1/3", "0")));
}
