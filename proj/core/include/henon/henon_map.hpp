#pragma once

// Henon maps phi(x, y) = (a*y, x + f(y)) with f monic of degree d >= 2,
// generic over the scalar field. Rationals, prime fields (ModP) and
// rational functions (RatFunc) all model `Scalar`.

#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "henon/errors.hpp"
#include "henon/exact_arith.hpp"

namespace henon {

inline std::optional<BigRational> exact_root(const BigRational& q, unsigned k) {
  return rational_root(q, k);
}

template <class S>
concept Scalar = std::copyable<S> && requires(const S& a, const S& b, long k) {
  S(a + b);
  S(a - b);
  S(a * b);
  S(a / b);
  S(-a);
  S(a * k);
  { a == b } -> std::convertible_to<bool>;
  { is_zero(a) } -> std::convertible_to<bool>;
};

template <Scalar S>
struct PlanePoint {
  S x;
  S y;

  friend bool operator==(const PlanePoint& p, const PlanePoint& q) { return p.x == q.x && p.y == q.y; }
};

template <Scalar S>
struct Matrix2 {
  S m11, m12, m21, m22;

  static Matrix2 identity(const S& one) {
    const S zero(one - one);
    return {one, zero, zero, one};
  }

  S det() const { return S(m11 * m22 - m12 * m21); }
  S trace() const { return S(m11 + m22); }

  friend Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
    return {S(l.m11 * r.m11 + l.m12 * r.m21), S(l.m11 * r.m12 + l.m12 * r.m22),
            S(l.m21 * r.m11 + l.m22 * r.m21), S(l.m21 * r.m12 + l.m22 * r.m22)};
  }
  friend bool operator==(const Matrix2& l, const Matrix2& r) {
    return l.m11 == r.m11 && l.m12 == r.m12 && l.m21 == r.m21 && l.m22 == r.m22;
  }
};

template <Scalar S>
class HenonMap {
 public:
  // lower_coeffs = [b_0, ..., b_{d-1}]; the leading coefficient is 1.
  HenonMap(S a, std::vector<S> lower_coeffs) : a_(std::move(a)), coeffs_(std::move(lower_coeffs)) {
    if (coeffs_.size() < 2) throw std::invalid_argument("Henon map needs degree >= 2");
    if (is_zero(a_)) throw std::invalid_argument("Henon map needs a != 0");
  }

  const S& a() const { return a_; }
  const std::vector<S>& coeffs() const { return coeffs_; }
  unsigned degree() const { return static_cast<unsigned>(coeffs_.size()); }
  S one() const { return S(a_ / a_); }
  S zero() const { return S(a_ - a_); }

  // d = 2, a = 1, f = y^2 + b_0: the family where the sharper escape
  // regions and the confinement bound apply.
  bool is_quadratic_normal_form() const {
    return degree() == 2 && a_ == one() && is_zero(coeffs_[1]);
  }

  S f(const S& y) const {
    const std::size_t d = coeffs_.size();
    S acc(y + coeffs_[d - 1]);
    for (std::size_t i = d - 1; i-- > 0;) acc = S(acc * y + coeffs_[i]);
    return acc;
  }

  S f_prime(const S& y) const {
    const std::size_t d = coeffs_.size();
    S acc(one() * static_cast<long>(d));
    for (std::size_t i = d - 1; i >= 1; --i) acc = S(acc * y + coeffs_[i] * static_cast<long>(i));
    return acc;
  }

  PlanePoint<S> apply(const PlanePoint<S>& p) const { return {S(a_ * p.y), S(p.x + f(p.y))}; }

  // phi^{-1}(u, v) = (v - f(u/a), u/a)
  PlanePoint<S> apply_inverse(const PlanePoint<S>& p) const {
    S u(p.x / a_);
    return {S(p.y - f(u)), u};
  }

  PlanePoint<S> iterate(PlanePoint<S> p, long n) const {
    for (; n > 0; --n) p = apply(p);
    for (; n < 0; ++n) p = apply_inverse(p);
    return p;
  }

 private:
  S a_;
  std::vector<S> coeffs_;
};

inline HenonMap<BigRational> quadratic_map(const BigRational& b) {
  return HenonMap<BigRational>(BigRational(1), {b, BigRational(0)});
}

// ---------------------------------------------------------------------------
// Orbits

struct Periodic {
  std::size_t period;
};
struct EscapedForward {
  std::size_t step;
};
struct EscapedBackward {
  std::size_t step;
};
struct CapReached {};

using OrbitStatus = std::variant<Periodic, EscapedForward, EscapedBackward, CapReached>;

template <Scalar S>
struct OrbitReport {
  OrbitStatus status;
  // The full cycle starting at P when status is Periodic, else empty.
  std::vector<PlanePoint<S>> cycle;
  // Forward iterates phi^1(P), phi^2(P), ... when retention was requested.
  std::vector<PlanePoint<S>> trace;

  std::optional<std::size_t> period() const {
    if (const auto* p = std::get_if<Periodic>(&status)) return p->period;
    return std::nullopt;
  }
};

template <Scalar S>
struct OrbitOptions {
  std::size_t cap = 1000;
  std::function<bool(const PlanePoint<S>&)> forward_escape;
  std::function<bool(const PlanePoint<S>&)> backward_escape;
  bool retain_trace = false;
};

template <Scalar S>
OrbitReport<S> orbit(const HenonMap<S>& map, const PlanePoint<S>& start, const OrbitOptions<S>& opts) {
  if (opts.cap == 0) throw std::invalid_argument("orbit cap must be >= 1");
  OrbitReport<S> report{CapReached{}, {}, {}};
  PlanePoint<S> forward = start;
  PlanePoint<S> backward = start;
  for (std::size_t step = 1; step <= opts.cap; ++step) {
    forward = map.apply(forward);
    if (opts.retain_trace) report.trace.push_back(forward);
    // A bijection can only repeat by returning to the start, so comparing
    // against P alone detects every cycle.
    if (forward == start) {
      report.cycle.reserve(step);
      PlanePoint<S> q = start;
      for (std::size_t i = 0; i < step; ++i) {
        report.cycle.push_back(q);
        q = map.apply(q);
      }
      for (std::size_t k = 1; k < step; ++k) {
        if (step % k == 0 && report.cycle[k] == start) {
          throw std::logic_error("orbit: return time is not minimal");
        }
      }
      report.status = Periodic{step};
      return report;
    }
    if (opts.forward_escape && opts.forward_escape(forward)) {
      report.status = EscapedForward{step};
      return report;
    }
    if (opts.backward_escape) {
      backward = map.apply_inverse(backward);
      if (opts.backward_escape(backward)) {
        report.status = EscapedBackward{step};
        return report;
      }
    }
  }
  return report;
}

template <Scalar S>
OrbitReport<S> orbit(const HenonMap<S>& map, const PlanePoint<S>& start, std::size_t cap,
                     std::function<bool(const PlanePoint<S>&)> escape_test = {}) {
  OrbitOptions<S> opts;
  opts.cap = cap;
  opts.forward_escape = std::move(escape_test);
  return orbit(map, start, opts);
}

// ---------------------------------------------------------------------------
// Jacobians and multipliers

template <Scalar S>
Matrix2<S> jacobian(const HenonMap<S>& map, const PlanePoint<S>& p) {
  return {map.zero(), map.a(), map.one(), map.f_prime(p.y)};
}

// Lambda = J(phi^{N-1}(Q)) * ... * J(phi(Q)) * J(Q) for the N-cycle starting
// at cycle[0]. Throws NotACycle unless cycle is an exact N-cycle in order.
template <Scalar S>
Matrix2<S> multiplier(const HenonMap<S>& map, const std::vector<PlanePoint<S>>& cycle, std::size_t length) {
  if (length == 0 || cycle.size() != length) throw NotACycle("cycle length mismatch");
  for (std::size_t i = 0; i < length; ++i) {
    if (!(map.apply(cycle[i]) == cycle[(i + 1) % length])) {
      throw NotACycle("point " + std::to_string(i) + " does not map to its successor");
    }
    if (i > 0 && cycle[i] == cycle[0]) throw NotACycle("cycle is not minimal");
  }
  Matrix2<S> acc = jacobian(map, cycle[0]);
  for (std::size_t i = 1; i < length; ++i) acc = jacobian(map, cycle[i]) * acc;
  return acc;
}

// ---------------------------------------------------------------------------
// Affine conjugacy

// psi(x, y) = (scale*x + shift_x, scale*y + shift_y)
template <Scalar S>
struct AffineChange {
  S scale;
  S shift_x;
  S shift_y;

  PlanePoint<S> apply(const PlanePoint<S>& p) const {
    return {S(scale * p.x + shift_x), S(scale * p.y + shift_y)};
  }
  PlanePoint<S> apply_inverse(const PlanePoint<S>& p) const {
    return {S((p.x - shift_x) / scale), S((p.y - shift_y) / scale)};
  }
  bool is_identity() const { return scale == S(scale / scale) && is_zero(shift_x) && is_zero(shift_y); }
};

// phi(x, y) = (a*y, x + f(y)) with f given by all coefficients, lowest first,
// and a possibly non-unit leading coefficient.
template <Scalar S>
struct GeneralHenon {
  S a;
  std::vector<S> f;

  S eval_f(const S& y) const {
    S acc(f.back());
    for (std::size_t i = f.size() - 1; i-- > 0;) acc = S(acc * y + f[i]);
    return acc;
  }
  PlanePoint<S> apply(const PlanePoint<S>& p) const { return {S(a * p.y), S(p.x + eval_f(p.y))}; }
};

template <Scalar S>
struct NormalizedHenon {
  HenonMap<S> map;
  // The conjugating map: map == change^{-1} o input o change.
  AffineChange<S> change;
};

// Coefficients of g(y) = f(y + t), lowest first.
template <Scalar S>
std::vector<S> taylor_shift(const std::vector<S>& f, const S& t) {
  // Repeated synthetic division by (y - t) yields the shifted coefficients.
  std::vector<S> work = f;
  std::vector<S> out;
  out.reserve(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::size_t n = work.size();
    std::vector<S> quotient(n - 1, S(t - t));
    S carry = work[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      quotient[i] = carry;
      carry = S(work[i] + carry * t);
    }
    out.push_back(carry);
    work = std::move(quotient);
    if (work.empty()) break;
  }
  return out;
}

template <Scalar S>
NormalizedHenon<S> conjugacy_normalize(const GeneralHenon<S>& input, bool depress = false) {
  const std::size_t d = input.f.size() - 1;
  if (input.f.size() < 3) throw std::invalid_argument("conjugacy_normalize needs deg f >= 2");
  const S& lead = input.f.back();
  if (is_zero(lead)) throw std::invalid_argument("leading coefficient of f is zero");
  if (is_zero(input.a)) throw std::invalid_argument("a must be nonzero");
  const S one(lead / lead);
  const S zero(lead - lead);

  // Scaling psi(x, y) = (l*x, l*y) turns f into f(l*y)/l, monic iff l^{d-1} = 1/lead.
  S scale = one;
  if (!(lead == one)) {
    auto root = exact_root(S(one / lead), static_cast<unsigned>(d - 1));
    if (!root) throw NoRationalConjugate("no (d-1)-th root of 1/leading coefficient in the field");
    scale = *root;
  }
  std::vector<S> monic(d + 1, zero);
  S power = S(one / scale);  // scale^{i-1}
  for (std::size_t i = 0; i <= d; ++i) {
    monic[i] = S(input.f[i] * power);
    power = S(power * scale);
  }
  monic[d] = one;

  S shift = zero;
  if (depress) {
    shift = S(-(monic[d - 1] / S(one * static_cast<long>(d))));
    monic = taylor_shift(monic, shift);
    monic[0] = S(monic[0] + (input.a - one) * shift);
  }
  monic.pop_back();
  return {HenonMap<S>(input.a, std::move(monic)), AffineChange<S>{scale, S(scale * input.a * shift), S(scale * shift)}};
}

}  // namespace henon
