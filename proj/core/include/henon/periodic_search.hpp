#pragma once

// Exhaustive search for the rational periodic points of
// phi(x, y) = (y, x + y^2 + b), the per-parameter verdict pipeline and the
// checkpointed batch driver over all b of bounded height.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "henon/exact_arith.hpp"
#include "henon/local_heights.hpp"
#include "henon/mod_p.hpp"

namespace henon {

// A rational cycle has coordinates m/s with s^2 = den(b) and |m| <= numerator_bound.
struct SearchBounds {
  BigInt s;
  BigInt numerator_bound;
};

// std::nullopt when den(b) is not a perfect square (no periodic points).
std::optional<SearchBounds> search_bounds(const BigRational& b);

struct RationalCycle {
  // points[0] is the least point in (y, x) order; points[i+1] = phi(points[i]).
  std::vector<QPoint> points;

  std::size_t period() const { return points.size(); }
};

// Every rational cycle, ordered by the (y, x) order of their base points.
std::vector<RationalCycle> find_rational_periodic_points(const BigRational& b);

// Number of grid candidates (2B + 1)^2; also the orbit cap used by the search.
BigInt grid_size(const SearchBounds& bounds);

// {1, 2, 3, 4, 6, 8}
const std::set<std::uint64_t>& allowed_periods();

enum class Outcome { VerifiedByFilter, VerifiedBySearch, VacuousNonSquareDenominator, Refuted };

std::string to_string(Outcome o);
std::optional<Outcome> parse_outcome(const std::string& s);

struct Verdict {
  Outcome outcome;
  std::vector<std::uint64_t> primes;
  PeriodSet filter = PeriodSet::unfiltered();
  // Filled when the grid search ran.
  std::optional<std::vector<RationalCycle>> cycles;
  std::optional<RationalCycle> witness;

  // Sorted period multiset of the searched cycles (empty if not searched).
  std::vector<std::size_t> periods() const;
};

// Pipeline: non-square denominator -> vacuous; filter intersection inside the
// allowed set -> verified by filter; otherwise the grid search decides.
// force_search skips the filter verdict (the filter is still computed).
// Empty primes means default_filter_primes(b).
Verdict verify_conjecture_for(const BigRational& b, const std::vector<std::uint64_t>& primes = {},
                              bool force_search = false);

// ---------------------------------------------------------------------------
// Batch driver

struct BatchOptions {
  std::uint64_t max_height = 1;
  // Empty: first 8 good primes per parameter.
  std::vector<std::uint64_t> primes;
  // 0: HENON_WORKERS, else hardware concurrency.
  unsigned workers = 0;
  std::optional<std::string> checkpoint;
  bool resume = false;
  std::size_t chunk = 256;
  // Test hook: exit abruptly once this many new records are on disk.
  std::optional<std::size_t> crash_after;
};

struct BatchRecord {
  BigRational b;
  Outcome outcome;
  std::string detail;

  // n/m<TAB>outcome<TAB>detail
  std::string line() const;
};

struct BatchReport {
  std::uint64_t max_height;
  std::size_t parameters;
  std::size_t square_denominators;
  std::size_t verified_by_filter;
  std::size_t verified_by_search;
  std::size_t vacuous;
  std::size_t refuted;
  std::size_t resumed;
  std::vector<BatchRecord> refuted_records;
  // FNV-1a over the record lines in enumeration order.
  std::string digest;
};

// Raised for checkpoint read/write failures.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

BatchRecord make_record(const BigRational& b, const Verdict& v);
std::optional<BatchRecord> parse_record(const std::string& line);

unsigned default_workers();

BatchReport batch_verify(const BatchOptions& options);

}  // namespace henon
