#include "henon/periodic_search.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace henon {

namespace {

// Candidate walk on scaled numerators: x = X/s, y = Y/s, so
// phi(x, y) = (Y/s, Y'/s) with Y' = X + (Y^2 + n)/s. A step that leaves the
// grid (non-integral Y' or |Y'| > B) rules the start point out.
template <class Int>
struct Grid {
  Int n;
  Int s;
  Int bound;

  bool step(Int& X, Int& Y) const {
    Int t = Y * Y + n;
    if (t % s != 0) return false;
    Int next = X + t / s;
    if (next > bound || next < -bound) return false;
    X = Y;
    Y = next;
    return true;
  }
};

inline bool fits(const BigInt& v) { return v.fits_slong_p(); }
inline long to_long(const BigInt& v) { return v.get_si(); }

template <class Int>
std::vector<std::vector<std::pair<Int, Int>>> search_grid(const Grid<Int>& g, const BigInt& cap_big) {
  const std::uint64_t cap = cap_big.fits_ulong_p() ? cap_big.get_ui() : std::numeric_limits<std::uint64_t>::max();
  std::vector<std::vector<std::pair<Int, Int>>> out;
  for (Int Y0 = -g.bound; Y0 <= g.bound; ++Y0) {
    for (Int X0 = -g.bound; X0 <= g.bound; ++X0) {
      Int X = X0;
      Int Y = Y0;
      std::uint64_t steps = 0;
      bool periodic = false;
      while (steps < cap) {
        if (!g.step(X, Y)) break;
        ++steps;
        if (X == X0 && Y == Y0) {
          periodic = true;
          break;
        }
        // A point preceding the start in (y, x) order: if the start is
        // periodic, its cycle was already recorded from that point.
        if (Y < Y0 || (Y == Y0 && X < X0)) break;
      }
      if (!periodic) continue;
      std::vector<std::pair<Int, Int>> cycle;
      cycle.reserve(steps);
      X = X0;
      Y = Y0;
      for (std::uint64_t i = 0; i < steps; ++i) {
        cycle.emplace_back(X, Y);
        g.step(X, Y);
      }
      out.push_back(std::move(cycle));
    }
  }
  return out;
}

BigInt as_big(long v) { return BigInt(v); }
BigInt as_big(const BigInt& v) { return v; }

}  // namespace

std::optional<SearchBounds> search_bounds(const BigRational& b) {
  const auto s = integer_sqrt_exact(b.get_den());
  if (!s) return std::nullopt;
  const BigInt& den = b.get_den();
  const BigInt n_abs = abs(b.get_num());
  const BigInt m = 9 * (n_abs > den ? n_abs : den);
  // ceil(3 sqrt(max(s^2, |n|))) = ceil(sqrt(9 max(s^2, |n|)))
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
  if (r * r != m) r += 1;
  return SearchBounds{*s, r};
}

BigInt grid_size(const SearchBounds& bounds) {
  const BigInt side = 2 * bounds.numerator_bound + 1;
  return side * side;
}

std::vector<RationalCycle> find_rational_periodic_points(const BigRational& b) {
  const auto bounds = search_bounds(b);
  if (!bounds) return {};
  const BigInt cap = grid_size(*bounds);
  std::vector<RationalCycle> out;
  auto convert = [&](const auto& cycles) {
    for (const auto& c : cycles) {
      RationalCycle rc;
      for (const auto& [X, Y] : c) {
        rc.points.push_back({make_rational(as_big(X), bounds->s), make_rational(as_big(Y), bounds->s)});
      }
      out.push_back(std::move(rc));
    }
  };
  const BigInt& n = b.get_num();
  // int64 arithmetic is safe while Y^2 + |n| and |X| + (Y^2 + |n|) stay below 2^62.
  const bool small = fits(n) && fits(bounds->s) && bounds->numerator_bound < BigInt(1L << 30) &&
                     abs(n) < BigInt(1L << 60);
  if (small) {
    convert(search_grid(Grid<long>{to_long(n), to_long(bounds->s), to_long(bounds->numerator_bound)}, cap));
  } else {
    convert(search_grid(Grid<BigInt>{n, bounds->s, bounds->numerator_bound}, cap));
  }
  return out;
}

const std::set<std::uint64_t>& allowed_periods() {
  static const std::set<std::uint64_t> periods{1, 2, 3, 4, 6, 8};
  return periods;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::VerifiedByFilter:
      return "verified_by_filter";
    case Outcome::VerifiedBySearch:
      return "verified_by_search";
    case Outcome::VacuousNonSquareDenominator:
      return "vacuous_non_square_denominator";
    case Outcome::Refuted:
      return "refuted";
  }
  return "unknown";
}

std::optional<Outcome> parse_outcome(const std::string& s) {
  for (Outcome o : {Outcome::VerifiedByFilter, Outcome::VerifiedBySearch, Outcome::VacuousNonSquareDenominator,
                    Outcome::Refuted}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

std::vector<std::size_t> Verdict::periods() const {
  std::vector<std::size_t> out;
  if (!cycles) return out;
  for (const auto& c : *cycles) out.push_back(c.period());
  std::sort(out.begin(), out.end());
  return out;
}

Verdict verify_conjecture_for(const BigRational& b, const std::vector<std::uint64_t>& primes, bool force_search) {
  Verdict v{Outcome::VacuousNonSquareDenominator, primes, PeriodSet::unfiltered(), std::nullopt, std::nullopt};
  if (!search_bounds(b)) return v;
  if (v.primes.empty()) v.primes = default_filter_primes(b);
  v.filter = intersect_filters(b, v.primes);
  if (!force_search && v.filter.subset_of(allowed_periods())) {
    v.outcome = Outcome::VerifiedByFilter;
    return v;
  }
  v.cycles = find_rational_periodic_points(b);
  v.outcome = Outcome::VerifiedBySearch;
  for (const auto& c : *v.cycles) {
    if (allowed_periods().count(c.period()) == 0) {
      v.outcome = Outcome::Refuted;
      v.witness = c;
      break;
    }
  }
  return v;
}

}  // namespace henon
