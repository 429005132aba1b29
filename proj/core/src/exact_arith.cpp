#include "henon/exact_arith.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "henon/errors.hpp"

namespace henon {

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool parse_integer(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') return false;
  }
  out.set_str(std::string(s.substr(i)), 10);
  if (negative) out = -out;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

BigRational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  BigInt num;
  BigInt den = 1;
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    if (!parse_integer(s, num)) throw ParseError("not a rational: '" + std::string(text) + "'");
  } else {
    std::string_view d = s.substr(slash + 1);
    if (!parse_integer(s.substr(0, slash), num) || d.empty() || d[0] == '-' || d[0] == '+' ||
        !parse_integer(d, den)) {
      throw ParseError("not a rational: '" + std::string(text) + "'");
    }
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  }
  return make_rational(num, den);
}

std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_fraction_string(const BigRational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

QPlace QPlace::finite(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("place index " + std::to_string(p) + " is not prime");
  return QPlace{p};
}

std::string QPlace::name() const {
  return is_archimedean() ? std::string("inf") : std::to_string(prime_);
}

long padic_valuation(const BigInt& n, std::uint64_t p) {
  if (n == 0) throw std::domain_error("valuation of zero integer");
  BigInt rest = abs(n);
  const BigInt prime(static_cast<unsigned long>(p));
  // mpz_remove strips every factor of p in one call.
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), prime.get_mpz_t()));
}

std::optional<long> padic_valuation(const BigRational& q, std::uint64_t p) {
  if (is_zero(q)) return std::nullopt;
  const long vn = padic_valuation(q.get_num(), p);
  if (vn > 0) return vn;
  return -padic_valuation(q.get_den(), p);
}

BigRational abs_at_place(const BigRational& q, const QPlace& v) {
  if (v.is_archimedean()) return abs(q);
  const auto val = padic_valuation(q, v.prime());
  if (!val) return BigRational(0);
  BigInt power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(v.prime()),
                static_cast<unsigned long>(*val < 0 ? -*val : *val));
  return *val <= 0 ? BigRational(power) : BigRational(BigInt(1), power);
}

double log_abs(const BigInt& n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, n.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

double log_abs(const BigRational& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); }

double log_abs_at_place(const BigRational& q, const QPlace& v) {
  if (is_zero(q)) return -std::numeric_limits<double>::infinity();
  if (v.is_archimedean()) return log_abs(q);
  return -static_cast<double>(*padic_valuation(q, v.prime())) *
         std::log(static_cast<double>(v.prime()));
}

BigInt mult_height(const BigRational& q) {
  BigInt n = abs(q.get_num());
  return n > q.get_den() ? n : BigInt(q.get_den());
}

double weil_height(const BigRational& q) { return log_abs(mult_height(q)); }

std::optional<BigInt> integer_sqrt_exact(const BigInt& n) {
  if (n < 1) throw std::domain_error("integer_sqrt_exact expects n >= 1");
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  BigInt s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return s;
}

std::optional<BigRational> rational_root(const BigRational& q, unsigned k) {
  if (k == 0) throw std::domain_error("zeroth root");
  if (k == 1) return q;
  if (sgn(q) < 0 && k % 2 == 0) return std::nullopt;
  BigInt num_root;
  BigInt den_root;
  const BigInt num = abs(q.get_num());
  if (mpz_root(num_root.get_mpz_t(), num.get_mpz_t(), k) == 0) return std::nullopt;
  if (mpz_root(den_root.get_mpz_t(), q.get_den().get_mpz_t(), k) == 0) return std::nullopt;
  if (sgn(q) < 0) num_root = -num_root;
  return make_rational(num_root, den_root);
}

// ---------------------------------------------------------------------------

RationalEnumerator::RationalEnumerator(std::uint64_t max_height, bool square_denominator_only)
    : max_height_(max_height), square_only_(square_denominator_only) {
  if (max_height == 0) throw std::domain_error("enumerate_rationals expects T >= 1");
}

namespace {

bool is_square_u64(std::uint64_t m) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  return r * r == m;
}

}  // namespace

bool RationalEnumerator::advance_denominator() {
  // Moves to the next (H, den) pair that contributes at least one value and
  // fills pending_ with its numerators in ascending order.
  while (height_ <= max_height_) {
    ++den_;
    if (den_ > height_) {
      ++height_;
      den_ = 0;
      continue;
    }
    if (square_only_ && !is_square_u64(den_)) continue;
    pending_.clear();
    cursor_ = 0;
    const auto h = static_cast<std::int64_t>(height_);
    if (den_ == height_) {
      for (std::int64_t n = -h; n <= h; ++n) {
        if (std::gcd(n < 0 ? -n : n, h) == 1) pending_.push_back(n);
      }
    } else if (std::gcd(height_, den_) == 1) {
      pending_.push_back(-h);
      pending_.push_back(h);
    }
    if (!pending_.empty()) return true;
  }
  return false;
}

std::optional<BigRational> RationalEnumerator::next() {
  if (cursor_ >= pending_.size() && !advance_denominator()) return std::nullopt;
  const std::int64_t n = pending_[cursor_++];
  return make_rational(BigInt(static_cast<long>(n)), BigInt(static_cast<unsigned long>(den_)));
}

std::vector<BigRational> enumerate_rationals(std::uint64_t max_height, bool square_denominator_only) {
  RationalEnumerator it(max_height, square_denominator_only);
  std::vector<BigRational> out;
  while (auto q = it.next()) out.push_back(*q);
  return out;
}

}  // namespace henon
