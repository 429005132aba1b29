#include "henon/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "henon/errors.hpp"

namespace henon {

QPoly::QPoly(std::vector<BigRational> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly::QPoly(const BigRational& c) {
  if (!henon::is_zero(c)) c_.push_back(c);
}

QPoly QPoly::variable() { return QPoly(std::vector<BigRational>{0, 1}); }

QPoly QPoly::monomial(const BigRational& c, unsigned k) {
  std::vector<BigRational> v(k + 1, BigRational(0));
  v[k] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!c_.empty() && henon::is_zero(c_.back())) c_.pop_back();
}

const BigRational& QPoly::leading() const {
  if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
  return c_.back();
}

QPoly QPoly::monic() const {
  if (c_.empty()) return *this;
  std::vector<BigRational> v = c_;
  const BigRational lead = c_.back();
  for (auto& x : v) x /= lead;
  return QPoly(std::move(v));
}

QPoly QPoly::derivative() const {
  std::vector<BigRational> v;
  for (std::size_t k = 1; k < c_.size(); ++k) v.push_back(c_[k] * static_cast<long>(k));
  return QPoly(std::move(v));
}

BigRational QPoly::operator()(const BigRational& t) const {
  BigRational acc(0);
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
  return acc;
}

QPoly operator+(const QPoly& l, const QPoly& r) {
  std::vector<BigRational> v(std::max(l.c_.size(), r.c_.size()), BigRational(0));
  for (std::size_t k = 0; k < l.c_.size(); ++k) v[k] += l.c_[k];
  for (std::size_t k = 0; k < r.c_.size(); ++k) v[k] += r.c_[k];
  return QPoly(std::move(v));
}

QPoly QPoly::operator-() const {
  std::vector<BigRational> v = c_;
  for (auto& x : v) x = -x;
  return QPoly(std::move(v));
}

QPoly operator-(const QPoly& l, const QPoly& r) { return l + (-r); }

QPoly operator*(const QPoly& l, const QPoly& r) {
  if (l.c_.empty() || r.c_.empty()) return QPoly();
  std::vector<BigRational> v(l.c_.size() + r.c_.size() - 1, BigRational(0));
  for (std::size_t i = 0; i < l.c_.size(); ++i) {
    if (henon::is_zero(l.c_[i])) continue;
    for (std::size_t j = 0; j < r.c_.size(); ++j) v[i + j] += l.c_[i] * r.c_[j];
  }
  return QPoly(std::move(v));
}

bool operator<(const QPoly& l, const QPoly& r) {
  if (l.c_.size() != r.c_.size()) return l.c_.size() < r.c_.size();
  for (std::size_t k = l.c_.size(); k-- > 0;) {
    if (l.c_[k] != r.c_[k]) return l.c_[k] < r.c_[k];
  }
  return false;
}

std::string QPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const BigRational& c = c_[k];
    if (henon::is_zero(c)) continue;
    const bool negative = sgn(c) < 0;
    const BigRational mag = abs(c);
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const bool unit = mag == 1;
    if (k == 0 || !unit) {
      const std::string s = henon::to_string(mag);
      out += (k > 0 && s.find('/') != std::string::npos) ? "(" + s + ")" : s;
    }
    if (k > 0) {
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {QPoly(), a};
  std::vector<BigRational> rem = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  std::vector<BigRational> quo(rem.size() - db, BigRational(0));
  const BigRational lead = bc.back();
  for (std::size_t k = quo.size(); k-- > 0;) {
    const BigRational q = rem[k + db] / lead;
    quo[k] = q;
    if (henon::is_zero(q)) continue;
    for (std::size_t i = 0; i <= db; ++i) rem[k + i] -= q * bc[i];
  }
  rem.resize(db);
  return {QPoly(std::move(quo)), QPoly(std::move(rem))};
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r).monic();
  }
  return a.monic();
}

QPoly pow(const QPoly& p, unsigned k) {
  QPoly r(BigRational(1));
  for (unsigned i = 0; i < k; ++i) r = r * p;
  return r;
}

std::vector<std::pair<QPoly, unsigned>> squarefree_decomposition(const QPoly& f) {
  // Yun's algorithm (characteristic 0).
  std::vector<std::pair<QPoly, unsigned>> out;
  if (f.degree() < 1) return out;
  const QPoly fm = f.monic();
  QPoly a = gcd(fm, fm.derivative());
  QPoly b = divmod(fm, a).first;
  QPoly c = divmod(fm.derivative(), a).first;
  QPoly d = c - b.derivative();
  for (unsigned i = 1; b.degree() >= 1; ++i) {
    QPoly g = gcd(b, d);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
    if (g.degree() >= 1) out.emplace_back(g.monic(), i);
  }
  return out;
}

namespace {

// Integer polynomial proportional to f with content 1 and positive leading coefficient.
std::vector<BigInt> primitive_integer(const QPoly& f) {
  BigInt l = 1;
  for (const auto& c : f.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<BigInt> v;
  BigInt g = 0;
  for (const auto& c : f.coeffs()) {
    BigInt x = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    v.push_back(x);
  }
  if (sgn(f.leading()) < 0) g = -g;
  for (auto& x : v) x /= g;
  return v;
}

QPoly from_integers(const std::vector<BigInt>& v) {
  std::vector<BigRational> c;
  for (const auto& x : v) c.emplace_back(x);
  return QPoly(std::move(c));
}

std::vector<BigInt> positive_divisors(const BigInt& n) {
  std::vector<BigInt> divs{1};
  for (const auto& [p, e] : factor(n)) {
    const std::size_t size = divs.size();
    BigInt pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= static_cast<unsigned long>(p);
      for (std::size_t i = 0; i < size; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

// Peels off the linear factors of a squarefree monic g; returns them and the rest.
std::pair<std::vector<QPoly>, QPoly> split_rational_roots(QPoly g) {
  std::vector<QPoly> linear;
  const QPoly t = QPoly::variable();
  if (is_zero(g.coeff(0)) && g.degree() >= 1) {
    linear.push_back(t);
    g = divmod(g, t).first;
  }
  if (g.degree() < 1) return {linear, g};
  const auto ints = primitive_integer(g);
  const auto num_divs = positive_divisors(ints.front());
  const auto den_divs = positive_divisors(ints.back());
  for (const auto& p : num_divs) {
    for (const auto& q : den_divs) {
      for (int sign : {1, -1}) {
        if (g.degree() < 1) break;
        const BigRational r = make_rational(sign * p, q);
        if (is_zero(g(r))) {
          const QPoly lin = t - QPoly(r);
          linear.push_back(lin);
          g = divmod(g, lin).first;
        }
      }
    }
  }
  return {linear, g};
}

constexpr std::size_t kKroneckerBudget = 2000000;

// A monic factor of degree k of the squarefree, primitive F, if one exists.
std::optional<QPoly> kronecker_factor(const QPoly& f, int k) {
  const auto F = primitive_integer(f);
  const QPoly Fq = from_integers(F);
  std::vector<BigInt> points;
  std::vector<std::vector<BigInt>> divisor_sets;
  std::size_t combos = 1;
  for (long a = 0; static_cast<int>(points.size()) < k + 1; a = a > 0 ? -a : -a + 1) {
    const BigRational value = Fq(BigRational(a));
    if (is_zero(value)) continue;
    points.emplace_back(a);
    divisor_sets.push_back(positive_divisors(value.get_num()));
    // Signs are free except at the first point (factors are taken up to sign).
    combos *= divisor_sets.back().size() * (points.size() == 1 ? 1 : 2);
    if (combos > kKroneckerBudget) throw Error("Kronecker factorisation budget exceeded");
  }
  // Lagrange basis at the chosen points.
  std::vector<QPoly> basis;
  for (int i = 0; i <= k; ++i) {
    QPoly li(BigRational(1));
    for (int j = 0; j <= k; ++j) {
      if (i == j) continue;
      li = li * QPoly(std::vector<BigRational>{BigRational(-points[j]), BigRational(1)});
      li = li * QPoly(BigRational(1) / BigRational(points[i] - points[j]));
    }
    basis.push_back(li);
  }
  std::vector<std::size_t> idx(k + 1, 0);
  std::vector<int> signs(k + 1, 1);
  for (;;) {
    QPoly g;
    for (int i = 0; i <= k; ++i) g = g + basis[i] * QPoly(BigRational(signs[i] * divisor_sets[i][idx[i]]));
    if (g.degree() == k) {
      auto [q, r] = divmod(Fq, g);
      if (r.is_zero()) return g.monic();
    }
    // Odometer over (divisor index, sign) for every point.
    int pos = 0;
    for (; pos <= k; ++pos) {
      if (pos > 0 && signs[pos] == 1) {
        signs[pos] = -1;
        break;
      }
      signs[pos] = 1;
      if (++idx[pos] < divisor_sets[pos].size()) break;
      idx[pos] = 0;
    }
    if (pos > k) return std::nullopt;
  }
}

void factor_squarefree(const QPoly& g, std::vector<QPoly>& out) {
  auto [linear, rest] = split_rational_roots(g);
  for (auto& l : linear) out.push_back(l);
  if (rest.degree() < 1) return;
  if (rest.degree() <= 3) {
    out.push_back(rest.monic());
    return;
  }
  for (int k = 2; k <= rest.degree() / 2; ++k) {
    if (auto h = kronecker_factor(rest, k)) {
      factor_squarefree(*h, out);
      factor_squarefree(divmod(rest, *h).first.monic(), out);
      return;
    }
  }
  out.push_back(rest.monic());
}

}  // namespace

std::vector<std::pair<QPoly, unsigned>> factor_poly(const QPoly& f) {
  std::vector<std::pair<QPoly, unsigned>> out;
  for (const auto& [g, e] : squarefree_decomposition(f)) {
    std::vector<QPoly> parts;
    factor_squarefree(g, parts);
    for (auto& p : parts) out.emplace_back(std::move(p), e);
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  return out;
}

bool is_irreducible(const QPoly& f) {
  if (f.degree() < 1) return false;
  const auto fs = factor_poly(f);
  return fs.size() == 1 && fs.front().second == 1;
}

}  // namespace henon
