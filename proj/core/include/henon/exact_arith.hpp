#pragma once

// Exact scalar arithmetic over Q: big rationals, places of Q, p-adic
// valuations, Weil heights and height-ordered enumeration of rationals.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace henon {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Builds num/den in lowest terms with a positive denominator. Throws
// std::domain_error when den == 0.
BigRational make_rational(const BigInt& num, const BigInt& den);

// Accepts "n", "n/m" and a leading sign; throws ParseError otherwise.
BigRational parse_rational(std::string_view text);

// "n/m" when den != 1, "n" otherwise.
std::string to_string(const BigRational& q);
// Always "n/m" (checkpoint records).
std::string to_fraction_string(const BigRational& q);

inline bool is_zero(const BigRational& q) { return sgn(q) == 0; }

// ---------------------------------------------------------------------------
// Primes

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

// Throws std::domain_error if n does not fit in 64 bits.
bool is_prime(const BigInt& n);

// Prime factorisation of |n| (n != 0) as ascending (prime, exponent) pairs.
// Trial division, then Pollard rho on 64-bit cofactors. Throws henon::Error
// if a cofactor above 64 bits remains.
std::vector<std::pair<std::uint64_t, unsigned>> factor(const BigInt& n);

// Ascending distinct primes dividing |n|.
std::vector<std::uint64_t> prime_divisors(const BigInt& n);

// ---------------------------------------------------------------------------
// Places of Q

class QPlace {
 public:
  static QPlace archimedean() { return QPlace{0}; }
  // Throws std::invalid_argument unless p is prime.
  static QPlace finite(std::uint64_t p);

  bool is_archimedean() const { return prime_ == 0; }
  std::uint64_t prime() const { return prime_; }
  // [Q_v : Q_v] / [Q : Q]
  static constexpr int local_degree() { return 1; }

  std::string name() const;

  // The archimedean place sorts first, then primes ascending.
  auto operator<=>(const QPlace&) const = default;

 private:
  explicit QPlace(std::uint64_t p) : prime_(p) {}
  std::uint64_t prime_;
};

// v_p(n) for n != 0.
long padic_valuation(const BigInt& n, std::uint64_t p);

// v_p(q); std::nullopt stands for +infinity (q == 0).
std::optional<long> padic_valuation(const BigRational& q, std::uint64_t p);

// |q|_v exactly: the usual absolute value at infinity, p^{-v_p(q)} at p.
BigRational abs_at_place(const BigRational& q, const QPlace& v);

// log|q|_v in double precision; -infinity for q == 0.
double log_abs_at_place(const BigRational& q, const QPlace& v);

// Natural log of |n| accurate to a few ulps for arbitrarily large n (n != 0).
double log_abs(const BigInt& n);
// log|q| for q != 0.
double log_abs(const BigRational& q);

// H(q) = max(|num|, den).
BigInt mult_height(const BigRational& q);
// h(q) = log H(q).
double weil_height(const BigRational& q);

// ---------------------------------------------------------------------------

// s with s^2 = n, or std::nullopt when n is not a perfect square. n >= 1.
std::optional<BigInt> integer_sqrt_exact(const BigInt& n);

// The exact k-th root of q in Q if there is one (k >= 1).
std::optional<BigRational> rational_root(const BigRational& q, unsigned k);

// Streams every reduced n/m with max(|n|, m) <= T exactly once, ordered by
// (H, den, num). With square_denominator_only, m ranges over squares only.
class RationalEnumerator {
 public:
  RationalEnumerator(std::uint64_t max_height, bool square_denominator_only);

  std::optional<BigRational> next();

 private:
  bool advance_denominator();

  std::uint64_t max_height_;
  bool square_only_;
  std::uint64_t height_ = 1;
  std::uint64_t den_ = 0;
  std::vector<std::int64_t> pending_;
  std::size_t cursor_ = 0;
};

std::vector<BigRational> enumerate_rationals(std::uint64_t max_height,
                                             bool square_denominator_only);

}  // namespace henon
