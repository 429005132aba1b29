#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "henon/errors.hpp"
#include "henon/exact_arith.hpp"

namespace henon {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool fits_u64(const BigInt& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const BigInt& n) {
  // mpz_get_ui is 64-bit on LP64 targets.
  static_assert(sizeof(unsigned long) == 8);
  return mpz_get_ui(n.get_mpz_t());
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2;
    u64 y = 2;
    u64 d = 1;
    auto step = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_u64(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_u64(d, primes);
  factor_u64(n / d, primes);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  // This witness set is deterministic for every n < 3.3e24.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 0) return false;
  if (!fits_u64(n)) throw std::domain_error("primality test limited to 64-bit inputs");
  return is_prime(to_u64(n));
}

std::vector<std::pair<std::uint64_t, unsigned>> factor(const BigInt& n) {
  if (n == 0) throw std::domain_error("factor(0)");
  BigInt rest = abs(n);
  std::vector<u64> primes;
  for (u64 p = 2; p < 10000 && rest > 1; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
      primes.push_back(p);
      rest /= static_cast<unsigned long>(p);
    }
  }
  if (rest > 1) {
    if (!fits_u64(rest)) {
      throw Error("cannot factor cofactor " + rest.get_str() + " (exceeds 64 bits)");
    }
    factor_u64(to_u64(rest), primes);
  }
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1U);
    }
  }
  return out;
}

std::vector<std::uint64_t> prime_divisors(const BigInt& n) {
  std::vector<std::uint64_t> out;
  for (const auto& [p, e] : factor(n)) out.push_back(p);
  return out;
}

}  // namespace henon
