#include "henon/function_field.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace henon {

RatFunc::RatFunc(QPoly num, QPoly den) {
  if (den.is_zero()) throw ZeroInput("rational function with zero denominator");
  if (num.is_zero()) {
    den_ = QPoly(BigRational(1));
    return;
  }
  if (den.degree() > 0) {
    const QPoly g = gcd(num, den);
    if (g.degree() > 0) {
      num = divmod(num, g).first;
      den = divmod(den, g).first;
    }
  }
  const BigRational lead = den.leading();
  num_ = num * QPoly(BigRational(1) / lead);
  den_ = den.monic();
}

BigRational RatFunc::constant_value() const {
  if (!is_constant()) throw std::logic_error("rational function is not constant");
  return num_.coeff(0) / den_.coeff(0);
}

std::optional<BigRational> RatFunc::eval(const BigRational& t0) const {
  const BigRational d = den_(t0);
  if (henon::is_zero(d)) return std::nullopt;
  return num_(t0) / d;
}

RatFunc operator+(const RatFunc& l, const RatFunc& r) {
  if (l.is_polynomial() && r.is_polynomial()) return RatFunc(l.num_ + r.num_, l.den_, true);
  if (l.den_ == r.den_) return RatFunc(l.num_ + r.num_, l.den_);
  return RatFunc(l.num_ * r.den_ + r.num_ * l.den_, l.den_ * r.den_);
}

RatFunc operator-(const RatFunc& l, const RatFunc& r) { return l + (-r); }

RatFunc operator*(const RatFunc& l, const RatFunc& r) {
  if (l.is_polynomial() && r.is_polynomial()) return RatFunc(l.num_ * r.num_, l.den_, true);
  return RatFunc(l.num_ * r.num_, l.den_ * r.den_);
}

RatFunc operator/(const RatFunc& l, const RatFunc& r) {
  if (r.num_.is_zero()) throw ZeroInput("division by the zero rational function");
  return RatFunc(l.num_ * r.den_, l.den_ * r.num_);
}

std::string RatFunc::to_string(const std::string& var) const {
  if (is_polynomial()) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

std::optional<RatFunc> exact_root(const RatFunc& f, unsigned k) {
  if (!f.is_constant()) return std::nullopt;
  auto r = rational_root(f.constant_value(), k);
  if (!r) return std::nullopt;
  return RatFunc(*r);
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  RatFunc parse() {
    RatFunc v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("bad expression '" + std::string(s_) + "': " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return c == 't' || c == '(' || std::isdigit(static_cast<unsigned char>(c));
  }

  RatFunc expr() {
    RatFunc v = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        v = v + term();
      } else if (peek('-')) {
        ++pos_;
        v = v - term();
      } else {
        return v;
      }
    }
  }

  RatFunc term() {
    RatFunc v = unary();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        v = v * unary();
      } else if (peek('/')) {
        ++pos_;
        RatFunc d = unary();
        if (is_zero(d)) fail("division by zero");
        v = v / d;
      } else if (starts_factor()) {
        v = v * power();
      } else {
        return v;
      }
    }
  }

  RatFunc unary() {
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    if (peek('^')) {
      ++pos_;
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a non-negative integer");
      const unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (e > 4096) fail("exponent too large");
      RatFunc r(BigRational(1));
      for (unsigned long i = 0; i < e; ++i) r = r * base;
      return r;
    }
    return base;
  }

  RatFunc primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == 't') {
      ++pos_;
      return RatFunc::variable();
    }
    if (c == '(') {
      ++pos_;
      RatFunc v = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RatFunc(BigRational(BigInt(std::string(s_.substr(start, pos_ - start)))));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

long multiplicity(QPoly p, const QPoly& pi) {
  long m = 0;
  for (;;) {
    auto [q, r] = divmod(p, pi);
    if (!r.is_zero()) return m;
    p = std::move(q);
    ++m;
  }
}

}  // namespace

RatFunc parse_ratfunc(std::string_view text) { return ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// Places and divisors

FFPlace FFPlace::finite(const QPoly& pi) {
  if (pi.degree() < 1 || pi.leading() != 1) throw std::invalid_argument("place polynomial must be monic, degree >= 1");
  if (!is_irreducible(pi)) throw std::invalid_argument("place polynomial " + pi.to_string() + " is reducible");
  return FFPlace(pi);
}

std::string FFPlace::name() const { return is_infinity() ? "inf" : pi_.to_string(); }

long ord_at_place(const RatFunc& g, const FFPlace& beta) {
  if (is_zero(g)) throw ZeroInput("order of the zero function");
  if (beta.is_infinity()) return static_cast<long>(g.den().degree()) - g.num().degree();
  return multiplicity(g.num(), beta.poly()) - multiplicity(g.den(), beta.poly());
}

namespace {

void collect_places(const QPoly& p, std::set<FFPlace>& out) {
  if (p.degree() < 1) return;
  for (const auto& [f, e] : factor_poly(p)) out.insert(FFPlace::finite(f));
}

}  // namespace

std::vector<FFPlace> support_places(const RatFunc& g) {
  std::set<FFPlace> s{FFPlace::infinity()};
  collect_places(g.num(), s);
  collect_places(g.den(), s);
  return {s.begin(), s.end()};
}

void QDivisor::add(const FFPlace& place, const BigRational& weight) {
  if (henon::is_zero(weight)) return;
  auto [it, inserted] = w_.emplace(place, weight);
  if (!inserted) {
    it->second += weight;
    if (henon::is_zero(it->second)) w_.erase(it);
  }
}

BigRational QDivisor::weight(const FFPlace& place) const {
  auto it = w_.find(place);
  return it == w_.end() ? BigRational(0) : it->second;
}

BigRational QDivisor::degree() const {
  BigRational d(0);
  for (const auto& [place, w] : w_) d += w * place.degree();
  return d;
}

std::string QDivisor::to_string() const {
  if (w_.empty()) return "0";
  std::string out;
  for (const auto& [place, w] : w_) {
    if (!out.empty()) out += " + ";
    out += henon::to_string(w) + "*(" + place.name() + ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isotriviality and rho

bool is_isotrivial(const FFMap& map) {
  if (!map.a().is_constant()) throw UnsupportedNonConstantA("isotriviality test needs a constant a");
  GeneralHenon<RatFunc> general{map.a(), map.coeffs()};
  general.f.push_back(RatFunc(BigRational(1)));
  const auto normalized = conjugacy_normalize(general, true);
  for (const auto& c : normalized.map.coeffs()) {
    if (!c.is_constant()) return false;
  }
  return true;
}

bool rho_exceeds_one(const FFMap& map, const FFPlace& beta) {
  if (map.degree() != 2) throw DegreeUnsupported("rho is only implemented for quadratic f");
  const RatFunc& b0 = map.coeffs()[0];
  const RatFunc& b1 = map.coeffs()[1];
  const RatFunc disc = b1 * b1 - b0 * 4;
  if (is_zero(disc)) return false;
  return ord_at_place(disc, beta) < 0;
}

// ---------------------------------------------------------------------------
// Height divisors

namespace {

using Exponent = std::optional<BigRational>;

Exponent exponent_at(const RatFunc& g, const FFPlace& beta) {
  if (is_zero(g)) return std::nullopt;
  return BigRational(-ord_at_place(g, beta));
}

bool integral_at(const RatFunc& g, const FFPlace& beta) { return is_zero(g) || ord_at_place(g, beta) >= 0; }

void add_places_of_denominator(const RatFunc& g, std::set<FFPlace>& out) { collect_places(g.den(), out); }

}  // namespace

std::vector<FFPlace> relevant_places(const FFMap& map, const FFPoint& pt) {
  std::set<FFPlace> s{FFPlace::infinity()};
  for (const auto& b : map.coeffs()) add_places_of_denominator(b, s);
  add_places_of_denominator(pt.x, s);
  add_places_of_denominator(pt.y, s);
  collect_places(map.a().num(), s);
  collect_places(map.a().den(), s);
  return {s.begin(), s.end()};
}

HeightDivisors height_divisors(const FFMap& map, const FFPoint& pt, std::size_t cap) {
  HeightDivisors out;
  const unsigned d = map.degree();
  for (const FFPlace& beta : relevant_places(map, pt)) {
    EscapeExponents ee{d, map.is_quadratic_normal_form(), *exponent_at(map.a(), beta), std::nullopt,
                       BigRational(0)};
    bool good = ee.e_a == 0;
    for (unsigned i = 0; i < d; ++i) {
      const Exponent e = exponent_at(map.coeffs()[i], beta);
      good = good && (!e || *e <= 0);
      if (!e) continue;
      BigRational cand = *e / BigRational(static_cast<long>(d - i));
      if (cand > ee.c_exp) ee.c_exp = cand;
    }
    if (ee.quadratic) ee.e_b = exponent_at(map.coeffs()[0], beta);
    auto integral = [&](const FFPoint& q) { return integral_at(q.x, beta) && integral_at(q.y, beta); };
    if (good && integral(pt)) continue;

    for (Direction dir : {Direction::Plus, Direction::Minus}) {
      FFPoint cur = pt;
      for (std::size_t n = 0;; ++n) {
        const Exponent ex = exponent_at(cur.x, beta);
        const Exponent ey = exponent_at(cur.y, beta);
        if (nonarchimedean_escape(ee, dir, ex, ey)) {
          BigRational w = dir == Direction::Plus
                              ? *ey
                              : BigRational(*ex - BigRational(static_cast<long>(d), static_cast<long>(d - 1)) * ee.e_a);
          BigRational dn(1);
          for (std::size_t k = 0; k < n; ++k) dn *= static_cast<long>(d);
          w /= dn;
          if (dir == Direction::Plus) {
            out.plus.add(beta, w);
            out.plus_steps[beta] = n;
          } else {
            out.minus.add(beta, w);
            out.minus_steps[beta] = n;
          }
          break;
        }
        if (n > 0 && cur == pt) break;
        if (n > 0 && good && integral(cur)) break;
        if (n >= cap) {
          throw FFCapExceeded("no escape or return within " + std::to_string(cap) + " steps at place " +
                                  beta.name() + " (" + to_string(dir) + ")",
                              out);
        }
        cur = dir == Direction::Plus ? map.apply(cur) : map.apply_inverse(cur);
      }
    }
  }
  return out;
}

BigRational generic_canonical_height(const FFMap& map, const FFPoint& pt) {
  const HeightDivisors hd = height_divisors(map, pt);
  return hd.plus.degree() + hd.minus.degree();
}

// ---------------------------------------------------------------------------
// Specialization

std::vector<SpecializationRow> specialization_experiment(const FFMap& map, const FFPoint& pt,
                                                         const std::vector<BigRational>& samples,
                                                         const HeightConfig& config) {
  std::vector<SpecializationRow> rows;
  const double nan = std::nan("");
  for (const BigRational& t0 : samples) {
    SpecializationRow row{t0, weil_height(t0), nan, nan, nan, "ok"};
    const auto a = map.a().eval(t0);
    std::vector<BigRational> coeffs;
    bool pole = !a || is_zero(*a);
    for (const auto& b : map.coeffs()) {
      const auto v = b.eval(t0);
      if (!v) pole = true;
      else coeffs.push_back(*v);
    }
    const auto x = pt.x.eval(t0);
    const auto y = pt.y.eval(t0);
    if (pole || !x || !y) {
      row.status = "pole_at_sample";
      rows.push_back(row);
      continue;
    }
    try {
      const CanonicalHeightValue h = canonical_height(QMap(*a, coeffs), QPoint{*x, *y}, config);
      row.hhat = h.total;
      row.error_radius = h.error_radius;
      if (row.h_t0 > 0) {
        row.ratio = h.total / row.h_t0;
      } else {
        row.status = "zero_height_sample";
      }
    } catch (const CapExceeded&) {
      row.status = "cap_exceeded";
    }
    rows.push_back(row);
  }
  return rows;
}

std::string specialization_csv(const std::vector<SpecializationRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "t0,h_t0,hhat,ratio,status\n";
  auto num = [&](double v) {
    if (std::isnan(v)) {
      os << "";
    } else {
      os << v;
    }
  };
  for (const auto& r : rows) {
    os << to_string(r.t0) << ',';
    num(r.h_t0);
    os << ',';
    num(r.hhat);
    os << ',';
    num(r.ratio);
    os << ',' << r.status << '\n';
  }
  return os.str();
}

}  // namespace henon
