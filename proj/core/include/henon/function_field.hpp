#pragma once

// Henon maps over Q(t): rational functions, places of Q(t), isotriviality,
// the height divisors D+ and D- of a point, generic canonical heights and
// the specialization experiment.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "henon/errors.hpp"
#include "henon/henon_map.hpp"
#include "henon/local_heights.hpp"
#include "henon/polynomial.hpp"

namespace henon {

// num/den in lowest terms with den monic.
class RatFunc {
 public:
  RatFunc() : den_(BigRational(1)) {}
  RatFunc(const BigRational& c) : num_(c), den_(BigRational(1)) {}  // NOLINT
  RatFunc(const QPoly& p) : num_(p), den_(BigRational(1)) {}        // NOLINT
  // Throws ZeroInput when den is zero.
  RatFunc(QPoly num, QPoly den);

  static RatFunc variable() { return RatFunc(QPoly::variable()); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_polynomial() const { return den_.degree() == 0; }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  // The constant value; throws std::logic_error unless is_constant().
  BigRational constant_value() const;

  // Value at t0, or std::nullopt at a pole.
  std::optional<BigRational> eval(const BigRational& t0) const;

  friend RatFunc operator+(const RatFunc& l, const RatFunc& r);
  friend RatFunc operator-(const RatFunc& l, const RatFunc& r);
  friend RatFunc operator*(const RatFunc& l, const RatFunc& r);
  friend RatFunc operator/(const RatFunc& l, const RatFunc& r);
  friend RatFunc operator*(const RatFunc& l, long k) { return l * RatFunc(BigRational(k)); }
  RatFunc operator-() const { return RatFunc(-num_, den_, true); }
  friend bool operator==(const RatFunc& l, const RatFunc& r) { return l.num_ == r.num_ && l.den_ == r.den_; }

  std::string to_string(const std::string& var = "t") const;

 private:
  RatFunc(QPoly num, QPoly den, bool /*reduced*/) : num_(std::move(num)), den_(std::move(den)) {}
  QPoly num_;
  QPoly den_;
};

inline bool is_zero(const RatFunc& f) { return f.num().is_zero(); }

// Exact k-th roots exist here only for constants with a rational root.
std::optional<RatFunc> exact_root(const RatFunc& f, unsigned k);

// Accepts expressions in t with + - * / ^, parentheses, integers and
// implicit multiplication, e.g. "t^2+2t", "1/t", "(t^2+1)/t^3".
RatFunc parse_ratfunc(std::string_view text);

using FFMap = HenonMap<RatFunc>;
using FFPoint = PlanePoint<RatFunc>;

class FFPlace {
 public:
  static FFPlace infinity() { return FFPlace(QPoly()); }
  // Throws std::invalid_argument unless pi is monic and irreducible over Q.
  static FFPlace finite(const QPoly& pi);

  bool is_infinity() const { return pi_.is_zero(); }
  const QPoly& poly() const { return pi_; }
  int degree() const { return is_infinity() ? 1 : pi_.degree(); }
  std::string name() const;

  // Infinity first, then by polynomial order.
  friend bool operator==(const FFPlace& l, const FFPlace& r) { return l.pi_ == r.pi_; }
  friend bool operator<(const FFPlace& l, const FFPlace& r) { return l.pi_ < r.pi_; }

 private:
  explicit FFPlace(QPoly pi) : pi_(std::move(pi)) {}
  QPoly pi_;
};

// ord_beta(g); ord_inf = deg(den) - deg(num). Throws ZeroInput for g = 0.
long ord_at_place(const RatFunc& g, const FFPlace& beta);

// Places where g has a zero or a pole, plus infinity.
std::vector<FFPlace> support_places(const RatFunc& g);

class QDivisor {
 public:
  void add(const FFPlace& place, const BigRational& weight);
  const std::map<FFPlace, BigRational>& weights() const { return w_; }
  BigRational weight(const FFPlace& place) const;
  BigRational degree() const;
  bool is_zero() const { return w_.empty(); }
  std::string to_string() const;

  friend bool operator==(const QDivisor& l, const QDivisor& r) { return l.w_ == r.w_; }

 private:
  std::map<FFPlace, BigRational> w_;
};

// Depresses f by y -> y - b_{d-1}/d (the affine conjugacy of the map, which
// also moves (a - 1) * shift into the constant term) and tests whether every
// coefficient is constant. Throws UnsupportedNonConstantA for non-constant a.
bool is_isotrivial(const FFMap& map);

// For f = y^2 + b1 y + b0: whether the root difference sqrt(b1^2 - 4 b0)
// has |.|_beta > 1, i.e. ord_beta(b1^2 - 4 b0) < 0. Throws DegreeUnsupported for d >= 3.
bool rho_exceeds_one(const FFMap& map, const FFPlace& beta);

struct HeightDivisors {
  QDivisor plus;
  QDivisor minus;
  // Escape step per place with a nonzero weight.
  std::map<FFPlace, std::size_t> plus_steps;
  std::map<FFPlace, std::size_t> minus_steps;
};

class FFCapExceeded : public CapExceeded {
 public:
  FFCapExceeded(const std::string& what, HeightDivisors partial)
      : CapExceeded(what), partial_(std::move(partial)) {}
  const HeightDivisors& partial() const { return partial_; }

 private:
  HeightDivisors partial_;
};

constexpr std::size_t kFunctionFieldCap = 12;

// Places where a coefficient, a or a coordinate is non-integral, plus infinity.
std::vector<FFPlace> relevant_places(const FFMap& map, const FFPoint& pt);

HeightDivisors height_divisors(const FFMap& map, const FFPoint& pt, std::size_t cap = kFunctionFieldCap);

// deg D+ + deg D-
BigRational generic_canonical_height(const FFMap& map, const FFPoint& pt);

struct SpecializationRow {
  BigRational t0;
  double h_t0;
  double hhat;
  double error_radius;
  double ratio;
  // "ok", "pole_at_sample", "zero_height_sample" or "cap_exceeded"
  std::string status;
};

std::vector<SpecializationRow> specialization_experiment(const FFMap& map, const FFPoint& pt,
                                                         const std::vector<BigRational>& samples,
                                                         const HeightConfig& config = {});

// t0,h_t0,hhat,ratio,status
std::string specialization_csv(const std::vector<SpecializationRow>& rows);

}  // namespace henon
