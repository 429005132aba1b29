#include <gtest/gtest.h>

#include <algorithm>

#include "henon/periodic_search.hpp"

using namespace henon;

namespace {

BigRational q(const char* s) { return parse_rational(s); }
QPoint pt(const char* x, const char* y) { return {q(x), q(y)}; }

bool has_cycle_through(const std::vector<RationalCycle>& cycles, const QPoint& p, std::size_t period) {
  return std::any_of(cycles.begin(), cycles.end(), [&](const RationalCycle& c) {
    return c.period() == period && std::find(c.points.begin(), c.points.end(), p) != c.points.end();
  });
}

}  // namespace

TEST(SearchBounds, Examples) {
  const auto a = search_bounds(q("-9/16"));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->s, 4);
  EXPECT_EQ(a->numerator_bound, 12);
  EXPECT_FALSE(search_bounds(q("1/2")));
  const auto c = search_bounds(q("5"));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->s, 1);
  EXPECT_EQ(c->numerator_bound, 7);
  EXPECT_EQ(grid_size(*a), 625);
}

TEST(FindCycles, MinusNineSixteenths) {
  const auto cycles = find_rational_periodic_points(q("-9/16"));
  ASSERT_EQ(cycles.size(), 4u);
  EXPECT_TRUE(has_cycle_through(cycles, pt("3/4", "3/4"), 1));
  EXPECT_TRUE(has_cycle_through(cycles, pt("-3/4", "-3/4"), 1));
  EXPECT_TRUE(has_cycle_through(cycles, pt("3/4", "-3/4"), 2));
  EXPECT_TRUE(has_cycle_through(cycles, pt("1/4", "-3/4"), 8));
  // Ordered by base point in (y, x) order; each base point is the least in its cycle.
  EXPECT_EQ(cycles[0].points[0], pt("1/4", "-5/4"));
}

TEST(FindCycles, MinusQuarter) {
  const auto cycles = find_rational_periodic_points(q("-1/4"));
  ASSERT_EQ(cycles.size(), 3u);
  EXPECT_TRUE(has_cycle_through(cycles, pt("1/2", "1/2"), 1));
  EXPECT_TRUE(has_cycle_through(cycles, pt("-1/2", "-1/2"), 1));
  EXPECT_TRUE(has_cycle_through(cycles, pt("1/2", "-1/2"), 2));
}

TEST(FindCycles, OtherParameters) {
  EXPECT_TRUE(find_rational_periodic_points(q("1")).empty());
  EXPECT_TRUE(find_rational_periodic_points(q("5")).empty());
  EXPECT_TRUE(find_rational_periodic_points(q("1/2")).empty());
  const auto zero = find_rational_periodic_points(q("0"));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].points, (std::vector<QPoint>{pt("0", "0")}));
  std::vector<std::size_t> lengths;
  for (const auto& c : find_rational_periodic_points(q("-1"))) lengths.push_back(c.period());
  std::sort(lengths.begin(), lengths.end());
  EXPECT_EQ(lengths, (std::vector<std::size_t>{1, 1, 2}));
}

TEST(Outcome, StringsRoundTrip) {
  for (Outcome o : {Outcome::VerifiedByFilter, Outcome::VerifiedBySearch, Outcome::VacuousNonSquareDenominator,
                    Outcome::Refuted}) {
    EXPECT_EQ(parse_outcome(to_string(o)), o);
  }
  EXPECT_EQ(to_string(Outcome::VacuousNonSquareDenominator), "vacuous_non_square_denominator");
  EXPECT_FALSE(parse_outcome("verified"));
}

TEST(Verify, MinusNineSixteenths) {
  const Verdict v = verify_conjecture_for(q("-9/16"));
  EXPECT_EQ(v.outcome, Outcome::VerifiedByFilter);
  EXPECT_EQ(v.filter.allowed(), (std::set<std::uint64_t>{1, 2, 8}));
  const Verdict s = verify_conjecture_for(q("-9/16"), {}, true);
  EXPECT_EQ(s.outcome, Outcome::VerifiedBySearch);
  EXPECT_EQ(s.periods(), (std::vector<std::size_t>{1, 1, 2, 8}));
}

TEST(Verify, MinusQuarterFallsBackToSearch) {
  const Verdict v = verify_conjecture_for(q("-1/4"), {5, 7, 11, 13});
  EXPECT_EQ(v.outcome, Outcome::VerifiedBySearch);
  EXPECT_TRUE(v.filter.contains(12));
  EXPECT_EQ(v.periods(), (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_FALSE(v.witness);
}

TEST(Verify, Vacuous) {
  const Verdict v = verify_conjecture_for(q("1/2"));
  EXPECT_EQ(v.outcome, Outcome::VacuousNonSquareDenominator);
  EXPECT_TRUE(v.periods().empty());
}

TEST(BatchRecord, LineRoundTrip) {
  const BigRational b = q("-9/16");
  const BatchRecord r = make_record(b, verify_conjecture_for(b));
  EXPECT_EQ(r.line(), "-9/16\tverified_by_filter\tS=1,2,8");
  const auto back = parse_record(r.line());
  ASSERT_TRUE(back);
  EXPECT_EQ(back->b, b);
  EXPECT_EQ(back->outcome, Outcome::VerifiedByFilter);
  EXPECT_EQ(back->detail, "S=1,2,8");
  EXPECT_EQ(make_record(q("-1/4"), verify_conjecture_for(q("-1/4"))).line(), "-1/4\tverified_by_search\tperiods=1,1,2");
  EXPECT_EQ(make_record(q("1/2"), verify_conjecture_for(q("1/2"))).line(), "1/2\tvacuous_non_square_denominator\t-");
  EXPECT_FALSE(parse_record("-9/16\tverified_by_filter"));
  EXPECT_FALSE(parse_record("x\tverified_by_filter\t-"));
}

TEST(Batch, HeightOne) {
  BatchOptions o;
  o.max_height = 1;
  o.workers = 1;
  const BatchReport r = batch_verify(o);
  EXPECT_EQ(r.parameters, 3u);
  EXPECT_EQ(r.verified_by_filter + r.verified_by_search, 3u);
  EXPECT_EQ(r.refuted, 0u);
}

TEST(Batch, WorkerCountDoesNotChangeResult) {
  BatchOptions o;
  o.max_height = 20;
  o.workers = 1;
  const BatchReport one = batch_verify(o);
  o.workers = 3;
  o.chunk = 17;
  const BatchReport three = batch_verify(o);
  EXPECT_EQ(one.digest, three.digest);
  EXPECT_EQ(one.parameters, 511u);
  EXPECT_EQ(one.square_denominators, 109u);
  EXPECT_EQ(one.verified_by_filter, 104u);
  EXPECT_EQ(one.verified_by_search, 5u);
  EXPECT_EQ(one.vacuous, 402u);
  EXPECT_EQ(one.digest, "8c86e6ba28c520d0");
}
