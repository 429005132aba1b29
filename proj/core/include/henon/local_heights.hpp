#pragma once

// Escape regions, local canonical heights at the places of Q and the global
// canonical heights h+, h-, h = h+ + h- with a certified error radius.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "henon/errors.hpp"
#include "henon/exact_arith.hpp"
#include "henon/henon_map.hpp"

namespace henon {

using QMap = HenonMap<BigRational>;
using QPoint = PlanePoint<BigRational>;

enum class Direction { Plus, Minus };

std::string to_string(Direction d);

// coeff * log(base); only at finite places. escape_step is the N at which
// the orbit entered the escape region, so coeff * d^N is integral when a = 1.
struct ExactLog {
  BigRational coeff;
  std::uint64_t base;
  std::size_t escape_step;

  double value() const;
};

// Certified enclosure [lo, hi] of an archimedean local height.
struct Interval {
  double lo;
  double hi;
  // Iterations spent, and the step the orbit entered the escape region
  // (std::nullopt for an orbit that stayed bounded up to the cap).
  std::size_t steps;
  std::optional<std::size_t> escape_step;

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// lambda = 0. With heuristic set the orbit merely stayed out of the escape
// region up to the cap; the true value lies in [0, allowance].
struct CertifiedZero {
  bool heuristic = false;
  double allowance = 0.0;
};

using LocalForm = std::variant<ExactLog, Interval, CertifiedZero>;

struct LocalHeightValue {
  LocalForm form;
  QPlace place;
  Direction direction;

  // Reported value: the exact value, the interval midpoint, or 0.
  double value() const;
  // Radius of the uncertainty around value().
  double radius() const;
  std::string kind() const;
};

struct HeightConfig {
  double arch_tolerance = 1e-9;
  std::size_t pre_escape_cap = 64;
  std::size_t max_digits = 1000000;
};

struct CanonicalHeightValue {
  double h_plus;
  double h_minus;
  double total;
  double error_radius;
  std::vector<LocalHeightValue> locals;
};

// Raised when coordinates outgrow HeightConfig::max_digits.
class HeightCapExceeded : public CapExceeded {
 public:
  HeightCapExceeded(const std::string& what, LocalHeightValue partial)
      : CapExceeded(what), partial_(std::move(partial)) {}
  const LocalHeightValue& partial() const { return partial_; }

 private:
  LocalHeightValue partial_;
};

// C_{f,v} = max(|b_i|_v^{1/(d-i)}, 1) for f given by [b_0, ..., b_{d-1}].
double c_f_v(const std::vector<BigRational>& lower_coeffs, const QPlace& v);
// At a finite place C_{f,p} = p^e; returns e exactly.
BigRational c_f_v_exponent(const std::vector<BigRational>& lower_coeffs, std::uint64_t p);

// Membership in the escape regions B+_v and B-_v. The sharper quadratic
// regions are used when d = 2, a = 1 and f = y^2 + b.
bool in_escape_plus(const QMap& map, const QPoint& pt, const QPlace& v);
bool in_escape_minus(const QMap& map, const QPoint& pt, const QPlace& v);

// The escape regions at a non-archimedean place in terms of the exponents
// e(q) = -v(q), so |q|_v = r^{e(q)}; std::nullopt stands for q = 0.
struct EscapeExponents {
  unsigned d;
  bool quadratic;
  BigRational e_a;
  std::optional<BigRational> e_b;  // quadratic form only
  BigRational c_exp;               // C_{f,v} = r^{c_exp}
};

bool nonarchimedean_escape(const EscapeExponents& ee, Direction dir, const std::optional<BigRational>& ex,
                           const std::optional<BigRational>& ey);

// Lower and upper bound of lambda_v - (log|g| - correction) at infinity inside
// the escape region, where g is y (Plus) or x (Minus).
Interval epsilon_bounds(const QMap& map);

LocalHeightValue local_height(const QMap& map, const QPoint& pt, const QPlace& v, Direction dir,
                              const HeightConfig& config = {});

// The archimedean place plus every prime dividing a denominator of a
// coefficient or coordinate, plus primes where |a|_p != 1.
std::vector<QPlace> relevant_places(const QMap& map, const QPoint& pt);

CanonicalHeightValue canonical_height(const QMap& map, const QPoint& pt, const HeightConfig& config = {});

// ||x, y||_v <= (3)_v max(1, |b|_v)^{1/2} at infinity and at every prime
// dividing den(x), den(y) or den(b). Requires the quadratic normal form.
bool confinement_check(const QMap& map, const QPoint& pt);
bool confinement_check_at(const QMap& map, const QPoint& pt, const QPlace& v);

}  // namespace henon
