#pragma once

// Reduction of phi(x, y) = (y, x + y^2 + b) modulo p, cycle decomposition of
// the induced permutation of A^2(F_p), multiplier orders in GL_2(F_p) and the
// period filter sets S(b, p).

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "henon/exact_arith.hpp"

namespace henon {

// Residue mod p as a field scalar (models henon::Scalar).
class ModP {
 public:
  ModP() = default;
  ModP(std::int64_t value, std::uint64_t p);

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return p_; }
  ModP inverse() const;

  friend ModP operator+(const ModP& l, const ModP& r);
  friend ModP operator-(const ModP& l, const ModP& r);
  friend ModP operator*(const ModP& l, const ModP& r);
  friend ModP operator/(const ModP& l, const ModP& r) { return l * r.inverse(); }
  friend ModP operator*(const ModP& l, long k) { return l * ModP(k, l.p_); }
  ModP operator-() const { return ModP(0, p_) - *this; }
  friend bool operator==(const ModP& l, const ModP& r) { return l.value_ == r.value_ && l.p_ == r.p_; }

 private:
  std::uint64_t value_ = 0;
  std::uint64_t p_ = 1;
};

inline bool is_zero(const ModP& v) { return v.value() == 0; }

struct FpPoint {
  std::uint64_t x;
  std::uint64_t y;
  friend bool operator==(const FpPoint&, const FpPoint&) = default;
};

struct FpMatrix2 {
  std::uint64_t m11, m12, m21, m22;
  friend bool operator==(const FpMatrix2&, const FpMatrix2&) = default;
};

// The reduced quadratic map (x, y) -> (y, x + y^2 + b) over F_p.
class FpMap {
 public:
  FpMap(std::uint64_t p, std::uint64_t b);

  std::uint64_t prime() const { return p_; }
  std::uint64_t b() const { return b_; }

  FpPoint apply(FpPoint q) const;
  // Jacobian [[0, 1], [1, 2y]].
  FpMatrix2 jacobian(FpPoint q) const;

 private:
  std::uint64_t p_;
  std::uint64_t b_;
};

// Reduction when p >= 5 and v_p(b) >= 0; std::nullopt (bad prime) otherwise.
std::optional<FpMap> reduce_map(const BigRational& b, std::uint64_t p);

struct CycleData {
  std::uint64_t length;
  FpPoint representative;
  FpMatrix2 multiplier;
  std::uint64_t multiplier_order;
};

// Every cycle of the permutation, in order of smallest index x*p + y of a
// first-visited point. Lengths sum to p^2.
std::vector<CycleData> cycle_decomposition(const FpMap& map);

FpMatrix2 matrix_multiply(const FpMatrix2& l, const FpMatrix2& r, std::uint64_t p);
FpMatrix2 matrix_power(FpMatrix2 m, std::uint64_t e, std::uint64_t p);

// Least r >= 1 with m^r = I in GL_2(F_p). Throws SingularMatrix if det m = 0.
std::uint64_t matrix_order(const FpMatrix2& m, std::uint64_t p);

// Either a finite set of admissible periods or no information (bad prime).
class PeriodSet {
 public:
  static PeriodSet unfiltered() { return PeriodSet{}; }
  static PeriodSet of(std::set<std::uint64_t> periods) { return PeriodSet{std::move(periods)}; }

  bool is_unfiltered() const { return !allowed_.has_value(); }
  // Throws std::logic_error when unfiltered.
  const std::set<std::uint64_t>& allowed() const;
  bool contains(std::uint64_t n) const { return is_unfiltered() || allowed_->count(n) != 0; }
  // Unfiltered is never a subset of a finite set.
  bool subset_of(const std::set<std::uint64_t>& other) const;

  PeriodSet intersect(const PeriodSet& other) const;

  friend bool operator==(const PeriodSet&, const PeriodSet&) = default;

 private:
  PeriodSet() = default;
  explicit PeriodSet(std::set<std::uint64_t> s) : allowed_(std::move(s)) {}
  std::optional<std::set<std::uint64_t>> allowed_;
};

// S(b, p) = union over cycles of { M*d : d | multiplier_order }.
PeriodSet period_filter_set(const BigRational& b, std::uint64_t p);
PeriodSet period_filter_set(const FpMap& map);

// Intersection over the primes where b reduces; unfiltered if none does.
PeriodSet intersect_filters(const BigRational& b, const std::vector<std::uint64_t>& primes);

// The first `count` primes p >= 5 with v_p(b) >= 0.
std::vector<std::uint64_t> default_filter_primes(const BigRational& b, std::size_t count = 8);

}  // namespace henon
