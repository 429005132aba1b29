#pragma once

// Dense univariate polynomials over Q with exact division, gcd and
// factorisation into irreducibles.

#include <string>
#include <utility>
#include <vector>

#include "henon/exact_arith.hpp"

namespace henon {

class QPoly {
 public:
  QPoly() = default;
  // Coefficients lowest degree first; trailing zeros are dropped.
  explicit QPoly(std::vector<BigRational> coeffs);
  QPoly(const BigRational& c);  // NOLINT: constants convert implicitly

  static QPoly variable();
  static QPoly monomial(const BigRational& c, unsigned k);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  BigRational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigRational(0); }
  const BigRational& leading() const;
  const std::vector<BigRational>& coeffs() const { return c_; }

  QPoly monic() const;
  QPoly derivative() const;
  BigRational operator()(const BigRational& t) const;

  friend QPoly operator+(const QPoly& l, const QPoly& r);
  friend QPoly operator-(const QPoly& l, const QPoly& r);
  friend QPoly operator*(const QPoly& l, const QPoly& r);
  QPoly operator-() const;
  friend bool operator==(const QPoly& l, const QPoly& r) { return l.c_ == r.c_; }
  // Degree first, then coefficients from the top; gives places a fixed order.
  friend bool operator<(const QPoly& l, const QPoly& r);

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<BigRational> c_;
};

// Quotient and remainder; throws std::domain_error on division by zero.
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);

// Monic gcd (0 when both inputs are 0).
QPoly gcd(QPoly a, QPoly b);

QPoly pow(const QPoly& p, unsigned k);

// f = c * prod g_i^{e_i} with g_i monic, squarefree and pairwise coprime.
std::vector<std::pair<QPoly, unsigned>> squarefree_decomposition(const QPoly& f);

// Monic irreducible factors over Q with multiplicities, sorted by operator<.
// Uses rational roots, then Kronecker's method; throws henon::Error if the
// Kronecker search exceeds its budget.
std::vector<std::pair<QPoly, unsigned>> factor_poly(const QPoly& f);

bool is_irreducible(const QPoly& f);

}  // namespace henon
