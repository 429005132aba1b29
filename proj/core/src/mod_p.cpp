#include "henon/mod_p.hpp"

#include <algorithm>
#include <iterator>

#include "henon/errors.hpp"

namespace henon {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
u64 add_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) + b) % m); }

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

u64 residue(const BigInt& n, u64 p) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
  return r.get_ui();
}

}  // namespace

ModP::ModP(std::int64_t value, std::uint64_t p) : p_(p) {
  if (p == 0) throw std::invalid_argument("ModP modulus must be positive");
  const auto m = static_cast<std::int64_t>(p);
  std::int64_t r = value % m;
  if (r < 0) r += m;
  value_ = static_cast<u64>(r);
}

ModP ModP::inverse() const {
  if (value_ == 0) throw std::domain_error("inverse of zero mod p");
  ModP out;
  out.p_ = p_;
  out.value_ = pow_mod(value_, p_ - 2, p_);
  return out;
}

ModP operator+(const ModP& l, const ModP& r) {
  ModP out;
  out.p_ = l.p_;
  out.value_ = add_mod(l.value_, r.value_, l.p_);
  return out;
}

ModP operator-(const ModP& l, const ModP& r) {
  ModP out;
  out.p_ = l.p_;
  out.value_ = add_mod(l.value_, l.p_ - r.value_, l.p_);
  return out;
}

ModP operator*(const ModP& l, const ModP& r) {
  ModP out;
  out.p_ = l.p_;
  out.value_ = mul_mod(l.value_, r.value_, l.p_);
  return out;
}

FpMap::FpMap(std::uint64_t p, std::uint64_t b) : p_(p), b_(b % p) {
  if (p > (1ULL << 31)) throw std::invalid_argument("FpMap prime too large");
}

FpPoint FpMap::apply(FpPoint q) const {
  return {q.y, (q.x + (q.y * q.y) % p_ + b_) % p_};
}

FpMatrix2 FpMap::jacobian(FpPoint q) const { return {0, 1, 1, (2 * q.y) % p_}; }

std::optional<FpMap> reduce_map(const BigRational& b, std::uint64_t p) {
  if (p < 5 || !is_prime(p)) return std::nullopt;
  const auto v = padic_valuation(b, p);
  if (v && *v < 0) return std::nullopt;
  const u64 num = residue(b.get_num(), p);
  const u64 den = residue(b.get_den(), p);
  return FpMap(p, mul_mod(num, pow_mod(den, p - 2, p), p));
}

FpMatrix2 matrix_multiply(const FpMatrix2& l, const FpMatrix2& r, std::uint64_t p) {
  return {add_mod(mul_mod(l.m11, r.m11, p), mul_mod(l.m12, r.m21, p), p),
          add_mod(mul_mod(l.m11, r.m12, p), mul_mod(l.m12, r.m22, p), p),
          add_mod(mul_mod(l.m21, r.m11, p), mul_mod(l.m22, r.m21, p), p),
          add_mod(mul_mod(l.m21, r.m12, p), mul_mod(l.m22, r.m22, p), p)};
}

FpMatrix2 matrix_power(FpMatrix2 m, std::uint64_t e, std::uint64_t p) {
  FpMatrix2 result{1 % p, 0, 0, 1 % p};
  while (e != 0) {
    if (e & 1U) result = matrix_multiply(result, m, p);
    m = matrix_multiply(m, m, p);
    e >>= 1U;
  }
  return result;
}

std::uint64_t matrix_order(const FpMatrix2& m, std::uint64_t p) {
  const FpMatrix2 reduced{m.m11 % p, m.m12 % p, m.m21 % p, m.m22 % p};
  const u64 det = add_mod(mul_mod(reduced.m11, reduced.m22, p), p - mul_mod(reduced.m12, reduced.m21, p), p);
  if (det == 0) throw SingularMatrix("matrix is singular mod " + std::to_string(p));
  const FpMatrix2 identity{1, 0, 0, 1};
  // Every element order in GL_2(F_p) divides p(p-1)(p+1).
  u64 order = p * (p - 1) * (p + 1);
  std::vector<u64> primes{p};
  for (const auto& [q, e] : factor(BigInt(static_cast<unsigned long>(p - 1)))) primes.push_back(q);
  for (const auto& [q, e] : factor(BigInt(static_cast<unsigned long>(p + 1)))) primes.push_back(q);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (u64 q : primes) {
    while (order % q == 0 && matrix_power(reduced, order / q, p) == identity) order /= q;
  }
  return order;
}

std::vector<CycleData> cycle_decomposition(const FpMap& map) {
  const u64 p = map.prime();
  std::vector<bool> visited(p * p, false);
  std::vector<CycleData> out;
  for (u64 index = 0; index < p * p; ++index) {
    if (visited[index]) continue;
    const FpPoint start{index / p, index % p};
    FpPoint q = start;
    FpMatrix2 lambda{1, 0, 0, 1};
    u64 length = 0;
    do {
      visited[q.x * p + q.y] = true;
      lambda = matrix_multiply(map.jacobian(q), lambda, p);
      q = map.apply(q);
      ++length;
    } while (!(q == start));
    out.push_back({length, start, lambda, matrix_order(lambda, p)});
  }
  return out;
}

const std::set<std::uint64_t>& PeriodSet::allowed() const {
  if (!allowed_) throw std::logic_error("period set is unfiltered");
  return *allowed_;
}

bool PeriodSet::subset_of(const std::set<std::uint64_t>& other) const {
  if (!allowed_) return false;
  return std::includes(other.begin(), other.end(), allowed_->begin(), allowed_->end());
}

PeriodSet PeriodSet::intersect(const PeriodSet& other) const {
  if (!allowed_) return other;
  if (!other.allowed_) return *this;
  std::set<std::uint64_t> out;
  std::set_intersection(allowed_->begin(), allowed_->end(), other.allowed_->begin(), other.allowed_->end(),
                        std::inserter(out, out.end()));
  return PeriodSet::of(std::move(out));
}

PeriodSet period_filter_set(const FpMap& map) {
  std::set<std::uint64_t> periods;
  std::set<std::pair<u64, u64>> seen;
  for (const CycleData& c : cycle_decomposition(map)) {
    if (!seen.emplace(c.length, c.multiplier_order).second) continue;
    for (u64 d = 1; d * d <= c.multiplier_order; ++d) {
      if (c.multiplier_order % d != 0) continue;
      periods.insert(c.length * d);
      periods.insert(c.length * (c.multiplier_order / d));
    }
  }
  return PeriodSet::of(std::move(periods));
}

PeriodSet period_filter_set(const BigRational& b, std::uint64_t p) {
  const auto map = reduce_map(b, p);
  if (!map) return PeriodSet::unfiltered();
  return period_filter_set(*map);
}

PeriodSet intersect_filters(const BigRational& b, const std::vector<std::uint64_t>& primes) {
  PeriodSet acc = PeriodSet::unfiltered();
  for (u64 p : primes) acc = acc.intersect(period_filter_set(b, p));
  return acc;
}

std::vector<std::uint64_t> default_filter_primes(const BigRational& b, std::size_t count) {
  std::vector<std::uint64_t> out;
  for (u64 p = 5; out.size() < count; p += 2) {
    if (is_prime(p) && mpz_divisible_ui_p(b.get_den().get_mpz_t(), static_cast<unsigned long>(p)) == 0) {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace henon
