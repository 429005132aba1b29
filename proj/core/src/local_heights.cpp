#include "henon/local_heights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace henon {

namespace {

using Exponent = std::optional<BigRational>;  // -v_p(q); std::nullopt is -infinity

constexpr std::size_t kExactPhaseDigits = 20000;
constexpr long kPadicPrecision = 600;
constexpr long kExactAbs = 1L << 40;

std::size_t digits(const BigRational& q) {
  return mpz_sizeinbase(q.get_num().get_mpz_t(), 10) + mpz_sizeinbase(q.get_den().get_mpz_t(), 10);
}
std::size_t digits(const QPoint& p) { return digits(p.x) + digits(p.y); }

BigRational pow_q(const BigRational& q, unsigned k) {
  BigRational r(1);
  for (unsigned i = 0; i < k; ++i) r *= q;
  return r;
}

Exponent exponent(const BigRational& q, std::uint64_t p) {
  const auto v = padic_valuation(q, p);
  if (!v) return std::nullopt;
  return BigRational(-*v);
}

BigRational max_of(const BigRational& floor, std::initializer_list<Exponent> xs) {
  BigRational m = floor;
  for (const auto& x : xs) {
    if (x && *x > m) m = *x;
  }
  return m;
}

bool is_integral_at(const BigRational& q, std::uint64_t p) {
  return mpz_divisible_ui_p(q.get_den().get_mpz_t(), static_cast<unsigned long>(p)) == 0;
}

double log_plus(double x) { return x > 0.0 ? x : 0.0; }

// Upward nudge for quantities that must bound something from above.
double up(double x) { return x * (1.0 + 1e-12) + 1e-300; }

// Data of the map at a finite place p needed by the valuation escape tests.
struct FiniteData {
  std::uint64_t p;
  EscapeExponents ee;
  std::vector<Exponent> e_coeffs;
};

FiniteData finite_data(const QMap& map, std::uint64_t p) {
  FiniteData fd{p, {map.degree(), map.is_quadratic_normal_form(), *exponent(map.a(), p), std::nullopt,
                    c_f_v_exponent(map.coeffs(), p)}, {}};
  if (fd.ee.quadratic) fd.ee.e_b = exponent(map.coeffs()[0], p);
  for (const auto& b : map.coeffs()) fd.e_coeffs.push_back(exponent(b, p));
  return fd;
}

bool finite_escape(const FiniteData& fd, Direction dir, const Exponent& ex, const Exponent& ey) {
  return nonarchimedean_escape(fd.ee, dir, ex, ey);
}

// Growth constant A with log+||phi^{+-1}(P)||_v <= A + d log+||P||_v.
double growth_constant_finite(const FiniteData& fd, Direction dir) {
  BigRational m(0);
  for (const auto& e : fd.e_coeffs) {
    if (e && *e > m) m = *e;
  }
  if (dir == Direction::Plus) {
    if (fd.ee.e_a > m) m = fd.ee.e_a;
  } else if (fd.ee.e_a < 0) {
    m -= static_cast<long>(fd.ee.d) * fd.ee.e_a;
  }
  return m.get_d() * std::log(static_cast<double>(fd.p));
}

double growth_constant_arch(const QMap& map) {
  BigRational s = 2 + abs(map.a());
  for (const auto& b : map.coeffs()) s += abs(b);
  double A = log_abs(s);
  if (abs(map.a()) < 1) A -= map.degree() * log_abs(map.a());
  return up(A);
}

// ---------------------------------------------------------------------------
// Fixed-precision p-adic numbers with tracked absolute precision. A value is
// p^val * unit known modulo p^abs; `small` means it is 0 mod p^abs.

struct Padic {
  bool small = true;
  long val = 0;
  BigInt unit;
  long abs = kExactAbs;

  bool exact_zero() const { return small && abs >= kExactAbs; }
};

class PadicField {
 public:
  explicit PadicField(std::uint64_t p) : p_(p) {}

  BigInt power(long k) const {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(std::max(k, 0L)));
    return r;
  }

  Padic zero_mod(long abs) const {
    Padic z;
    z.abs = std::min(abs, kExactAbs);
    return z;
  }

  Padic from_rational(const BigRational& q, long rel) const {
    if (is_zero(q)) return zero_mod(kExactAbs);
    BigInt num = q.get_num();
    BigInt den = q.get_den();
    const BigInt prime(static_cast<unsigned long>(p_));
    const long vn = static_cast<long>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), prime.get_mpz_t()));
    const long vd = static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), prime.get_mpz_t()));
    const BigInt mod = power(rel);
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    Padic out;
    out.small = false;
    out.val = vn - vd;
    out.unit = num * inv;
    mpz_mod(out.unit.get_mpz_t(), out.unit.get_mpz_t(), mod.get_mpz_t());
    out.abs = out.val + rel;
    return out;
  }

  Padic normalize(BigInt s, long m, long abs) const {
    if (abs - m <= 0) return zero_mod(abs);
    const BigInt mod = power(abs - m);
    mpz_mod(s.get_mpz_t(), s.get_mpz_t(), mod.get_mpz_t());
    if (s == 0) return zero_mod(abs);
    const BigInt prime(static_cast<unsigned long>(p_));
    const long k = static_cast<long>(mpz_remove(s.get_mpz_t(), s.get_mpz_t(), prime.get_mpz_t()));
    Padic out;
    out.small = false;
    out.val = m + k;
    out.unit = s;
    out.abs = abs;
    return out;
  }

  Padic add(const Padic& l, const Padic& r) const {
    const long abs = std::min(l.abs, r.abs);
    if (l.small && r.small) return zero_mod(abs);
    long m = kExactAbs;
    if (!l.small) m = std::min(m, l.val);
    if (!r.small) m = std::min(m, r.val);
    BigInt s = 0;
    if (!l.small) s += l.unit * power(l.val - m);
    if (!r.small) s += r.unit * power(r.val - m);
    return normalize(s, m, abs);
  }

  Padic neg(const Padic& v) const {
    if (v.small) return v;
    Padic out = v;
    out.unit = -v.unit;
    return normalize(out.unit, v.val, v.abs);
  }

  Padic mul(const Padic& l, const Padic& r) const {
    if (l.exact_zero() || r.exact_zero()) return zero_mod(kExactAbs);
    if (l.small || r.small) {
      const long lo_l = l.small ? l.abs : l.val;
      const long lo_r = r.small ? r.abs : r.val;
      return zero_mod(lo_l + lo_r);
    }
    const long rel = std::min(l.abs - l.val, r.abs - r.val);
    return normalize(l.unit * r.unit, l.val + r.val, l.val + r.val + rel);
  }

  std::uint64_t prime() const { return p_; }

 private:
  std::uint64_t p_;
};

// Upper bound on -v(q): exact for known values, -abs for small ones.
Exponent exponent_upper(const Padic& q) {
  if (q.exact_zero()) return std::nullopt;
  return BigRational(q.small ? -q.abs : -q.val);
}

struct PadicPoint {
  Padic x;
  Padic y;
};

class PadicMap {
 public:
  PadicMap(const QMap& map, const PadicField& field) : field_(field) {
    a_ = field.from_rational(map.a(), kPadicPrecision * 2);
    a_inv_ = field.from_rational(1 / map.a(), kPadicPrecision * 2);
    for (const auto& b : map.coeffs()) coeffs_.push_back(field.from_rational(b, kPadicPrecision * 2));
  }

  Padic f(const Padic& y) const {
    const std::size_t d = coeffs_.size();
    Padic acc = field_.add(y, coeffs_[d - 1]);
    for (std::size_t i = d - 1; i-- > 0;) acc = field_.add(field_.mul(acc, y), coeffs_[i]);
    return acc;
  }

  PadicPoint step(const PadicPoint& q, Direction dir) const {
    if (dir == Direction::Plus) return {field_.mul(a_, q.y), field_.add(q.x, f(q.y))};
    Padic u = field_.mul(q.x, a_inv_);
    return {field_.add(q.y, field_.neg(f(u))), u};
  }

 private:
  const PadicField& field_;
  Padic a_;
  Padic a_inv_;
  std::vector<Padic> coeffs_;
};

QPoint step_exact(const QMap& map, const QPoint& p, Direction dir) {
  return dir == Direction::Plus ? map.apply(p) : map.apply_inverse(p);
}

LocalHeightValue finite_local_height(const QMap& map, const QPoint& pt, std::uint64_t p, Direction dir,
                                     const HeightConfig& config) {
  const QPlace place = QPlace::finite(p);
  const FiniteData fd = finite_data(map, p);
  const double log_p = std::log(static_cast<double>(p));
  const unsigned d = fd.ee.d;

  bool good = fd.ee.e_a == 0;
  for (const auto& b : map.coeffs()) good = good && is_integral_at(b, p);
  auto integral = [&](const QPoint& q) { return is_integral_at(q.x, p) && is_integral_at(q.y, p); };
  if (good && integral(pt)) return {CertifiedZero{}, place, dir};

  auto exact_log = [&](std::size_t n, const Exponent& ex, const Exponent& ey) {
    BigRational dn = pow_q(BigRational(static_cast<long>(d)), static_cast<unsigned>(n));
    BigRational coeff = dir == Direction::Plus
                            ? *ey
                            : BigRational(*ex - BigRational(static_cast<long>(d), static_cast<long>(d - 1)) * fd.ee.e_a);
    coeff /= dn;
    coeff.canonicalize();
    return LocalHeightValue{ExactLog{coeff, p, n}, place, dir};
  };
  const double growth = growth_constant_finite(fd, dir);
  auto heuristic = [&](std::size_t n, const Exponent& norm_exp) {
    const double norm_log = norm_exp ? log_plus(norm_exp->get_d() * log_p) : 0.0;
    const double allowance = up(std::pow(static_cast<double>(d), -static_cast<double>(n)) *
                                (norm_log + growth / static_cast<double>(d - 1)));
    return LocalHeightValue{CertifiedZero{true, allowance}, place, dir};
  };

  QPoint cur = pt;
  std::size_t n = 0;
  for (;; ++n) {
    const Exponent ex = exponent(cur.x, p);
    const Exponent ey = exponent(cur.y, p);
    if (finite_escape(fd, dir, ex, ey)) return exact_log(n, ex, ey);
    if (n > 0 && cur == pt) return {CertifiedZero{}, place, dir};
    if (n > 0 && good && integral(cur)) return {CertifiedZero{}, place, dir};
    if (n >= config.pre_escape_cap) return heuristic(n, max_of(BigRational(0), {ex, ey}));
    if (digits(cur) > kExactPhaseDigits) break;
    cur = step_exact(map, cur, dir);
  }

  // Exact coordinates have outgrown the budget; continue with fixed-precision
  // p-adic arithmetic, which decides valuations unless precision runs out.
  const PadicField field(p);
  const PadicMap pmap(map, field);
  PadicPoint q{field.from_rational(cur.x, kPadicPrecision), field.from_rational(cur.y, kPadicPrecision)};
  for (;; ++n) {
    const Exponent ux = exponent_upper(q.x);
    const Exponent uy = exponent_upper(q.y);
    const Exponent norm = max_of(BigRational(0), {ux, uy});
    // A small coordinate with negative absolute precision could be anything.
    if ((q.x.small && q.x.abs < 0) || (q.y.small && q.y.abs < 0)) return heuristic(n, norm);
    const Exponent ex = q.x.small ? std::nullopt : ux;
    const Exponent ey = q.y.small ? std::nullopt : uy;
    if (finite_escape(fd, dir, ex, ey)) return exact_log(n, ex, ey);
    if (good && *norm == 0) return {CertifiedZero{}, place, dir};
    if (n >= config.pre_escape_cap) return heuristic(n, norm);
    q = pmap.step(q, dir);
  }
}

// ---------------------------------------------------------------------------
// Archimedean place

struct ArchData {
  unsigned d;
  double inv_d_log;  // log d
  double log_abs_a;
  double c;           // max(|a|, |b_i|, 1), rounded up
  double deep_log;    // log max(4, 2(1 + 2c))
};

ArchData arch_data(const QMap& map) {
  ArchData ad{};
  ad.d = map.degree();
  ad.inv_d_log = std::log(static_cast<double>(ad.d));
  ad.log_abs_a = log_abs(map.a());
  BigRational c = std::max(BigRational(1), BigRational(abs(map.a())));
  for (const auto& b : map.coeffs()) c = std::max(c, BigRational(abs(b)));
  ad.c = up(c.get_d());
  ad.deep_log = std::log(std::max(4.0, 2.0 * (1.0 + 2.0 * ad.c))) + 1e-12;
  return ad;
}

double log_abs_or_neg_inf(const BigRational& q) {
  return is_zero(q) ? -std::numeric_limits<double>::infinity() : log_abs(q);
}

double scale(const ArchData& ad, std::size_t n) { return std::exp(-static_cast<double>(n) * ad.inv_d_log); }

// d^{-n} log|y| (Plus) or d^{-n}(log|x| - d/(d-1) log|a|) (Minus), with a
// bound on the rounding error.
std::pair<double, double> base_value(const ArchData& ad, const QPoint& q, Direction dir, std::size_t n) {
  const BigRational& g = dir == Direction::Plus ? q.y : q.x;
  const double ln = log_abs(g.get_num());
  const double ld = log_abs(g.get_den());
  const double corr = dir == Direction::Plus ? 0.0 : ad.d / (ad.d - 1.0) * ad.log_abs_a;
  const double s = scale(ad, n);
  const double value = (ln - ld - corr) * s;
  const double slack = 1e-14 * s * (std::fabs(ln) + std::fabs(ld) + std::fabs(corr) + 1.0) + 1e-300;
  return {value, slack};
}

double residual_bound(const QMap& map, const ArchData& ad, const QPoint& q, std::size_t n) {
  const double norm = std::max(log_abs_or_neg_inf(q.x), log_abs_or_neg_inf(q.y));
  return up(scale(ad, n) * (log_plus(norm) + growth_constant_arch(map) / (ad.d - 1.0)));
}

// Orbit in binary floating point with rigorous absolute error bounds, used
// once exact coordinates outgrow kExactPhaseDigits inside the escape region.
// Error bounds are propagated in low precision and rounded up.
class FloatOrbit {
 public:
  static constexpr mp_bitcnt_t kBits = 1024;
  static constexpr mp_bitcnt_t kErrBits = 64;

  FloatOrbit(const QMap& map, const QPoint& start, Direction dir)
      : d_(map.degree()), dir_(dir), a_(to_mpf(map.a())), x_(to_mpf(start.x)), y_(to_mpf(start.y)),
        ex_(err(abs(x_) * unit())), ey_(err(abs(y_) * unit())) {
    for (const auto& b : map.coeffs()) coeffs_.push_back(to_mpf(b));
  }

  void step() {
    if (dir_ == Direction::Plus) {
      const mpf_class nx(a_ * y_, kBits);
      const mpf_class ny(x_ + f(y_), kBits);
      const mpf_class enx = err(abs(a_) * ey_ + 3 * abs(nx) * unit());
      const mpf_class eny = err(ex_ + f_error(y_, ey_) + 2 * (abs(ny) + abs(x_)) * unit());
      x_ = nx;
      y_ = ny;
      ex_ = enx;
      ey_ = eny;
    } else {
      const mpf_class u(x_ / a_, kBits);
      const mpf_class eu = err(ex_ / abs(a_) + 3 * abs(u) * unit());
      const mpf_class nx(y_ - f(u), kBits);
      const mpf_class enx = err(ey_ + f_error(u, eu) + 2 * (abs(nx) + abs(y_)) * unit());
      x_ = nx;
      y_ = u;
      ex_ = enx;
      ey_ = eu;
    }
  }

  double log_x() const { return log_abs_mpf(x_); }
  double log_y() const { return log_abs_mpf(y_); }
  // Bound on |log|z_true| - log|z|| for both coordinates, or +inf.
  double log_error() const { return std::max(rel_log_error(x_, ex_), rel_log_error(y_, ey_)); }

 private:
  static mpf_class to_mpf(const BigRational& q) {
    mpf_class r(0, kBits);
    mpf_set_q(r.get_mpf_t(), q.get_mpq_t());
    return r;
  }

  static mpf_class unit() {
    mpf_class u(1, kErrBits);
    mpf_div_2exp(u.get_mpf_t(), u.get_mpf_t(), kBits - 4);
    return u;
  }

  // Low precision copy nudged upwards.
  static mpf_class err(const mpf_class& v) {
    mpf_class r(v, kErrBits);
    r *= 1.0 + 1e-15;
    return r;
  }

  static double log_abs_mpf(const mpf_class& v) {
    if (sgn(v) == 0) return -std::numeric_limits<double>::infinity();
    long e = 0;
    const double m = mpf_get_d_2exp(&e, v.get_mpf_t());
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
  }

  // |log(1 + t)| <= 2|t| for |t| <= 1/2.
  static double rel_log_error(const mpf_class& v, const mpf_class& e) {
    if (sgn(e) == 0) return 0.0;
    if (sgn(v) == 0) return std::numeric_limits<double>::infinity();
    const mpf_class t(e / abs(v), kErrBits);
    const double r = t.get_d() * (1.0 + 1e-12);
    return r <= 0.5 ? 2.0 * r : std::numeric_limits<double>::infinity();
  }

  mpf_class f(const mpf_class& y) const {
    mpf_class acc(y + coeffs_[d_ - 1], kBits);
    for (std::size_t i = d_ - 1; i-- > 0;) acc = acc * y + coeffs_[i];
    return acc;
  }

  // Propagated error sum_k |c_k| k e (|y| + e)^(k-1) plus Horner rounding.
  mpf_class f_error(const mpf_class& y, const mpf_class& e) const {
    const mpf_class big = err(abs(y) + e);
    mpf_class prop(0, kErrBits);
    mpf_class mag(0, kErrBits);
    mpf_class pw(1, kErrBits);  // big^(k-1)
    for (unsigned k = 1; k <= d_; ++k) {
      const mpf_class c = k == d_ ? mpf_class(1, kErrBits) : err(abs(coeffs_[k]));
      prop += c * k * e * pw;
      pw = err(pw * big);
      mag += c * pw;
    }
    mag += err(abs(coeffs_[0]));
    return err(prop + (2 * d_ + 2) * mag * unit());
  }

  unsigned d_;
  Direction dir_;
  mpf_class a_;
  mpf_class x_;
  mpf_class y_;
  mpf_class ex_;
  mpf_class ey_;
  std::vector<mpf_class> coeffs_;
};

LocalHeightValue arch_local_height(const QMap& map, const QPoint& pt, Direction dir, const HeightConfig& config) {
  const QPlace place = QPlace::archimedean();
  const ArchData ad = arch_data(map);

  QPoint cur = pt;
  std::size_t n = 0;
  for (;; ++n) {
    const bool escaped =
        dir == Direction::Plus ? in_escape_plus(map, cur, place) : in_escape_minus(map, cur, place);
    if (escaped) break;
    if (n > 0 && cur == pt) return {CertifiedZero{}, place, dir};
    // A bounded real orbit whose denominators blow up p-adically never
    // escapes; stop at the cap or the digit budget with the upper bound.
    if (n >= config.pre_escape_cap || digits(cur) > config.max_digits) {
      return {Interval{0.0, residual_bound(map, ad, cur, n), n, std::nullopt}, place, dir};
    }
    cur = step_exact(map, cur, dir);
  }

  const std::size_t escape_step = n;
  const Interval eps = epsilon_bounds(map);
  auto [b0, slack0] = base_value(ad, cur, dir, n);
  double lo = std::max(0.0, b0 + eps.lo * scale(ad, n) - slack0);
  double hi = b0 + eps.hi * scale(ad, n) + slack0;

  // Bound on the tail after step n for a deep point with log|g| = log_g and
  // log|other| = log_other, or nullopt if the point is not deep.
  auto deep_tail = [&](double log_g, double log_other, std::size_t n) -> std::optional<double> {
    // |log(1 + delta)| <= 2|delta| needs |delta| <= 1/2, hence the extra log 2.
    if (log_g < ad.deep_log + std::log(2.0) || log_other > (ad.d - 1.0) * log_g - 1e-12) return std::nullopt;
    return up(4.0 * (1.0 + 2.0 * ad.c) * std::exp(-(static_cast<double>(n) + 1.0) * ad.inv_d_log - log_g));
  };

  while (hi - lo > config.arch_tolerance) {
    if (digits(cur) > kExactPhaseDigits) break;
    if (digits(cur) > config.max_digits) {
      throw HeightCapExceeded("coordinates exceed " + std::to_string(config.max_digits) +
                                  " digits while tightening at infinity",
                              {Interval{lo, hi, n, escape_step}, place, dir});
    }
    cur = step_exact(map, cur, dir);
    ++n;
    auto [b, slack] = base_value(ad, cur, dir, n);
    lo = std::max(lo, b + eps.lo * scale(ad, n) - slack);
    hi = std::min(hi, b + eps.hi * scale(ad, n) + slack);

    // Deep in the escape region the orbit grows like g -> g^d (1 + delta)
    // with |log(1 + delta)| <= 2(1 + 2c)/|g|, which sums to a tail bound.
    const double log_g = dir == Direction::Plus ? log_abs_or_neg_inf(cur.y) : log_abs_or_neg_inf(cur.x) - ad.log_abs_a;
    const double log_other = dir == Direction::Plus ? log_abs_or_neg_inf(cur.x) : log_abs_or_neg_inf(cur.y);
    if (const auto tail = deep_tail(log_g, log_other, n)) {
      lo = std::max(lo, b - *tail - slack);
      hi = std::min(hi, b + *tail + slack);
    }
    if (lo > hi) throw std::logic_error("archimedean enclosures do not intersect");
  }

  if (hi - lo > config.arch_tolerance) {
    FloatOrbit orbit(map, cur, dir);
    const double corr = dir == Direction::Plus ? 0.0 : ad.d / (ad.d - 1.0) * ad.log_abs_a;
    while (hi - lo > config.arch_tolerance) {
      orbit.step();
      ++n;
      const double err = orbit.log_error();
      if (!std::isfinite(err) || n > config.pre_escape_cap + escape_step) {
        throw HeightCapExceeded("floating-point orbit lost precision while tightening at infinity",
                                {Interval{lo, hi, n, escape_step}, place, dir});
      }
      const double log_g = dir == Direction::Plus ? orbit.log_y() : orbit.log_x() - ad.log_abs_a;
      const double log_other = dir == Direction::Plus ? orbit.log_x() : orbit.log_y();
      const double s = scale(ad, n);
      const double b = (dir == Direction::Plus ? log_g : log_g + ad.log_abs_a - corr) * s;
      const double slack = up(s * (2.0 * err + 1e-14 * (std::fabs(log_g) + std::fabs(corr) + 1.0)));
      lo = std::max(lo, b + eps.lo * s - slack);
      hi = std::min(hi, b + eps.hi * s + slack);
      if (const auto tail = deep_tail(log_g - err, log_other + err, n)) {
        lo = std::max(lo, b - *tail - slack);
        hi = std::min(hi, b + *tail + slack);
      }
      if (lo > hi) throw std::logic_error("archimedean enclosures do not intersect");
    }
  }
  return {Interval{lo, hi, n, escape_step}, place, dir};
}

}  // namespace

bool nonarchimedean_escape(const EscapeExponents& ee, Direction dir, const std::optional<BigRational>& ex,
                           const std::optional<BigRational>& ey) {
  const BigRational d(static_cast<long>(ee.d));
  const BigRational dm1(static_cast<long>(ee.d - 1));
  if (dir == Direction::Plus) {
    if (!ey) return false;
    if (ee.quadratic) return 2 * *ey > max_of(BigRational(0), {ex, ee.e_b});
    Exponent ex_scaled = ex ? Exponent(*ex / d) : std::nullopt;
    return *ey > max_of(ee.c_exp, {ex_scaled, Exponent(ee.e_a / dm1)});
  }
  if (!ex) return false;
  if (ee.quadratic) return 2 * *ex > max_of(BigRational(0), {ey, ee.e_b});
  Exponent ey_scaled = ey ? Exponent(*ey / d) : std::nullopt;
  return *ex - ee.e_a > max_of(ee.c_exp, {ey_scaled, Exponent(ee.e_a / dm1)});
}

std::string to_string(Direction d) { return d == Direction::Plus ? "plus" : "minus"; }

double ExactLog::value() const { return coeff.get_d() * std::log(static_cast<double>(base)); }

double LocalHeightValue::value() const {
  if (const auto* e = std::get_if<ExactLog>(&form)) return e->value();
  if (const auto* i = std::get_if<Interval>(&form)) return i->mid();
  return 0.0;
}

double LocalHeightValue::radius() const {
  if (const auto* e = std::get_if<ExactLog>(&form)) return 4e-16 * std::fabs(e->value());
  if (const auto* i = std::get_if<Interval>(&form)) return up(0.5 * i->width());
  return std::get<CertifiedZero>(form).allowance;
}

std::string LocalHeightValue::kind() const {
  if (std::holds_alternative<ExactLog>(form)) return "exact_log";
  if (std::holds_alternative<Interval>(form)) return "interval";
  return std::get<CertifiedZero>(form).heuristic ? "heuristic_zero" : "certified_zero";
}

double c_f_v(const std::vector<BigRational>& lower_coeffs, const QPlace& v) {
  if (!v.is_archimedean()) {
    return std::pow(static_cast<double>(v.prime()), c_f_v_exponent(lower_coeffs, v.prime()).get_d());
  }
  const std::size_t d = lower_coeffs.size();
  double c = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (is_zero(lower_coeffs[i])) continue;
    c = std::max(c, std::pow(BigRational(abs(lower_coeffs[i])).get_d(), 1.0 / static_cast<double>(d - i)));
  }
  return c;
}

BigRational c_f_v_exponent(const std::vector<BigRational>& lower_coeffs, std::uint64_t p) {
  const std::size_t d = lower_coeffs.size();
  BigRational e(0);
  for (std::size_t i = 0; i < d; ++i) {
    const auto v = padic_valuation(lower_coeffs[i], p);
    if (!v) continue;
    BigRational cand(-*v, static_cast<long>(d - i));
    cand.canonicalize();
    if (cand > e) e = cand;
  }
  return e;
}

namespace {

// |g| > (d+2) max(|h|^{1/d}, C_{f,inf}, |a|^{1/(d-1)}), decided exactly.
bool arch_general_escape(const QMap& map, const BigRational& g, const BigRational& h) {
  const unsigned d = map.degree();
  const BigRational t = abs(g) / BigRational(static_cast<long>(d + 2));
  if (!(t > 1)) return false;
  if (!(pow_q(t, d) > abs(h))) return false;
  if (!(pow_q(t, d - 1) > abs(map.a()))) return false;
  for (unsigned i = 0; i < d; ++i) {
    if (!(pow_q(t, d - i) > abs(map.coeffs()[i]))) return false;
  }
  return true;
}

BigRational max3(const BigRational& a, const BigRational& b, const BigRational& c) {
  return std::max(a, std::max(b, c));
}

}  // namespace

bool in_escape_plus(const QMap& map, const QPoint& pt, const QPlace& v) {
  if (!v.is_archimedean()) {
    const FiniteData fd = finite_data(map, v.prime());
    return finite_escape(fd, Direction::Plus, exponent(pt.x, v.prime()), exponent(pt.y, v.prime()));
  }
  if (map.is_quadratic_normal_form()) {
    return pt.y * pt.y > 3 * max3(abs(pt.x), abs(map.coeffs()[0]), BigRational(1));
  }
  return arch_general_escape(map, pt.y, pt.x);
}

bool in_escape_minus(const QMap& map, const QPoint& pt, const QPlace& v) {
  if (!v.is_archimedean()) {
    const FiniteData fd = finite_data(map, v.prime());
    return finite_escape(fd, Direction::Minus, exponent(pt.x, v.prime()), exponent(pt.y, v.prime()));
  }
  if (map.is_quadratic_normal_form()) {
    return pt.x * pt.x > 3 * max3(abs(pt.y), abs(map.coeffs()[0]), BigRational(1));
  }
  return arch_general_escape(map, BigRational(pt.x / map.a()), pt.y);
}

Interval epsilon_bounds(const QMap& map) {
  if (map.is_quadratic_normal_form()) return {-std::log(3.0), std::log(5.0 / 3.0), 0, std::nullopt};
  const double d = map.degree();
  return {-std::log(d + 2.0) / (d - 1.0), std::log((2.0 * d + 3.0) / (d + 2.0)) / (d - 1.0), 0, std::nullopt};
}

LocalHeightValue local_height(const QMap& map, const QPoint& pt, const QPlace& v, Direction dir,
                              const HeightConfig& config) {
  if (v.is_archimedean()) return arch_local_height(map, pt, dir, config);
  return finite_local_height(map, pt, v.prime(), dir, config);
}

std::vector<QPlace> relevant_places(const QMap& map, const QPoint& pt) {
  std::set<std::uint64_t> primes;
  auto add = [&](const BigInt& n) {
    if (n == 0) return;
    for (auto p : prime_divisors(n)) primes.insert(p);
  };
  for (const auto& b : map.coeffs()) add(b.get_den());
  add(pt.x.get_den());
  add(pt.y.get_den());
  add(map.a().get_num());
  add(map.a().get_den());
  std::vector<QPlace> out{QPlace::archimedean()};
  for (auto p : primes) out.push_back(QPlace::finite(p));
  return out;
}

CanonicalHeightValue canonical_height(const QMap& map, const QPoint& pt, const HeightConfig& config) {
  CanonicalHeightValue out{0.0, 0.0, 0.0, 0.0, {}};
  for (const QPlace& v : relevant_places(map, pt)) {
    for (Direction dir : {Direction::Plus, Direction::Minus}) {
      LocalHeightValue lv = local_height(map, pt, v, dir, config);
      (dir == Direction::Plus ? out.h_plus : out.h_minus) += lv.value();
      out.error_radius += lv.radius();
      out.locals.push_back(std::move(lv));
    }
  }
  out.total = out.h_plus + out.h_minus;
  // Only an all-zero certified result keeps a radius of exactly 0.
  if (out.error_radius > 0 || out.total != 0) out.error_radius = up(out.error_radius + 1e-15 * out.total);
  return out;
}

bool confinement_check_at(const QMap& map, const QPoint& pt, const QPlace& v) {
  if (!map.is_quadratic_normal_form()) throw std::invalid_argument("confinement_check needs y^2 + b with a = 1");
  const BigRational& b = map.coeffs()[0];
  if (v.is_archimedean()) {
    const BigRational m = std::max(BigRational(abs(pt.x)), BigRational(abs(pt.y)));
    return m * m <= 9 * std::max(BigRational(1), BigRational(abs(b)));
  }
  const std::uint64_t p = v.prime();
  const BigRational norm = max_of(BigRational(-1000000000L), {exponent(pt.x, p), exponent(pt.y, p)});
  return 2 * norm <= max_of(BigRational(0), {exponent(b, p)});
}

bool confinement_check(const QMap& map, const QPoint& pt) {
  if (!confinement_check_at(map, pt, QPlace::archimedean())) return false;
  std::set<std::uint64_t> primes;
  for (const BigInt* n : {&pt.x.get_den(), &pt.y.get_den(), &map.coeffs()[0].get_den()}) {
    for (auto p : prime_divisors(*n)) primes.insert(p);
  }
  for (auto p : primes) {
    if (!confinement_check_at(map, pt, QPlace::finite(p))) return false;
  }
  return true;
}

}  // namespace henon
