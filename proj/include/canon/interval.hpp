#pragma once
// Interval arithmetic with exact rational endpoints, plus enclosures for the
// irrational quantities the proof-chain checks need: integer k-th roots, e,
// and natural/binary logarithms of big integers. Endpoints stay exact
// rationals; outward dyadic rounding keeps them small when requested.
// Comparisons follow a fast exact path when both sides are rational and
// otherwise refine precision until decided (or a bit cap yields "undecided").

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <canon/bigint.hpp>

namespace canon {

struct IntervalScalar {
  BigRat lo, hi;  // the represented real lies in [lo, hi]

  static IntervalScalar exact(BigRat v) { return {v, v}; }
  static IntervalScalar of(BigRat l, BigRat h) {
    if (l > h) throw std::invalid_argument("interval: lo > hi");
    return {std::move(l), std::move(h)};
  }

  bool is_exact() const { return lo == hi; }
  BigRat width() const { return hi - lo; }
  bool contains(const BigRat& x) const { return lo <= x && x <= hi; }

  friend IntervalScalar operator+(const IntervalScalar& a, const IntervalScalar& b) {
    return {a.lo + b.lo, a.hi + b.hi};
  }
  friend IntervalScalar operator-(const IntervalScalar& a, const IntervalScalar& b) {
    return {a.lo - b.hi, a.hi - b.lo};
  }
  friend IntervalScalar operator*(const IntervalScalar& a, const IntervalScalar& b) {
    BigRat c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    BigRat lo = c[0], hi = c[0];
    for (int i = 1; i < 4; ++i) {
      if (c[i] < lo) lo = c[i];
      if (c[i] > hi) hi = c[i];
    }
    return {lo, hi};
  }
  IntervalScalar reciprocal() const {
    if (lo <= 0 && hi >= 0) throw std::domain_error("interval: reciprocal across zero");
    return {BigRat(1) / hi, BigRat(1) / lo};
  }
  friend IntervalScalar operator/(const IntervalScalar& a, const IntervalScalar& b) {
    return a * b.reciprocal();
  }

  // x^e for x >= 0 (all uses are nonnegative); monotone so endpointwise
  IntervalScalar pow_ui(std::uint64_t e) const {
    if (lo < 0) throw std::domain_error("interval: pow on negative range");
    auto p = [&](const BigRat& x) {
      BigRat r = 1;
      BigRat base = x;
      std::uint64_t k = e;
      while (k) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
      }
      return r;
    };
    return {p(lo), p(hi)};
  }

  // outward rounding to denominators 2^bits; containment is preserved
  IntervalScalar round_out(unsigned bits) const {
    BigInt scale = BigInt(1) << bits;
    return {BigRat(floor_rat(lo * BigRat(scale)), scale),
            BigRat(ceil_rat(hi * BigRat(scale)), scale)};
  }

  bool certainly_less(const IntervalScalar& o) const { return hi < o.lo; }
  bool certainly_greater(const IntervalScalar& o) const { return lo > o.hi; }
};

// Enclosure of x^(1/k) for rational x >= 0 with ~`bits` fractional bits;
// collapses to a point when x is a perfect k-th power of a rational.
inline IntervalScalar nth_root_interval(const BigRat& x, std::uint64_t k, unsigned bits) {
  if (x < 0) throw std::domain_error("nth_root_interval: negative radicand");
  if (k == 0) throw std::invalid_argument("nth_root_interval: zero degree");
  BigInt p = boost::multiprecision::numerator(x);
  BigInt q = boost::multiprecision::denominator(x);
  BigInt rp, rq;
  if (is_perfect_power(p, k, rp) && is_perfect_power(q, k, rq))
    return IntervalScalar::exact(BigRat(rp, rq));
  // x^(1/k) = (p q^(k-1))^(1/k) / q; bracket the integer root of the scaled
  // radicand between consecutive dyadics
  BigInt n = p * big_pow(q, k - 1);
  BigInt r = nth_root_floor(n << (std::size_t(k) * bits), k);
  BigInt den = (BigInt(1) << bits) * q;
  return IntervalScalar::of(BigRat(r, den), BigRat(r + 1, den));
}

// e by its series: sum_{i<=K} 1/i! with tail < 2/(K+1)!.
inline IntervalScalar e_interval(unsigned bits) {
  BigRat target(BigInt(1), BigInt(1) << (bits + 1));
  BigRat sum = 1;
  BigRat term = 1;  // 1/i!
  std::uint64_t i = 0;
  while (true) {
    ++i;
    term /= BigRat(i);
    sum += term;
    BigRat tail = term * BigRat(2) / BigRat(i + 1);  // 2/(i+1)!
    if (tail < target) return IntervalScalar::of(sum, sum + tail).round_out(bits + 1);
  }
}

// atanh(t) for rational 0 <= t < 1: sum t^(2i+1)/(2i+1), tail bounded by
// t^(2K+3) / ((2K+3)(1 - t^2)).
inline IntervalScalar atanh_interval(const BigRat& t, unsigned bits) {
  if (t < 0 || t >= 1) throw std::domain_error("atanh_interval: need 0 <= t < 1");
  if (t == 0) return IntervalScalar::exact(0);
  BigRat target(BigInt(1), BigInt(1) << (bits + 1));
  BigRat t2 = t * t;
  BigRat one_minus = BigRat(1) - t2;
  BigRat power = t;  // t^(2i+1)
  BigRat sum = 0;
  std::uint64_t i = 0;
  while (true) {
    sum += power / BigRat(2 * i + 1);
    power *= t2;
    ++i;
    BigRat tail = power / (BigRat(2 * i + 1) * one_minus);
    if (tail < target) return IntervalScalar::of(sum, sum + tail).round_out(bits + 1);
  }
}

inline IntervalScalar ln2_interval(unsigned bits) {
  // ln 2 = 2 atanh(1/3)
  IntervalScalar a = atanh_interval(BigRat(1, 3), bits + 2);
  return a + a;
}

// ln n for integer n >= 1: split off the power of two, handle the mantissa
// y in [1,2) via ln y = 2 atanh((y-1)/(y+1)). The mantissa is truncated to
// `bits` bits both ways; ln is monotone so the enclosure stays valid.
inline IntervalScalar ln_interval(const BigInt& n, unsigned bits) {
  if (n < 1) throw std::domain_error("ln_interval: need n >= 1");
  if (n == 1) return IntervalScalar::exact(0);
  const std::size_t top = bit_length(n) - 1;  // 2^top <= n < 2^(top+1)
  BigRat y_lo, y_hi;
  if (top <= bits) {
    y_lo = y_hi = BigRat(n, BigInt(1) << top);
  } else {
    BigInt shifted = n >> (top - bits);
    y_lo = BigRat(shifted, BigInt(1) << bits);
    y_hi = BigRat(shifted + 1, BigInt(1) << bits);
  }
  auto ln_mantissa = [&](const BigRat& y) {
    IntervalScalar a = atanh_interval((y - 1) / (y + 1), bits + 3);
    return a + a;
  };
  IntervalScalar low = ln_mantissa(y_lo), high = ln_mantissa(y_hi);
  IntervalScalar ln2 = ln2_interval(bits + 3);
  BigRat exponent{BigInt(std::uint64_t(top))};
  return IntervalScalar::of(ln2.lo * exponent + low.lo, ln2.hi * exponent + high.hi);
}

inline IntervalScalar log2_interval(const BigInt& n, unsigned bits) {
  return ln_interval(n, bits + 4) / ln2_interval(bits + 4);
}

// coeff * radicand^(1/degree) with coeff, radicand >= 0: the scalar shape of
// every popularity threshold and Kővári–Sós–Turán-style bound here.
// Comparisons against rationals are exact (compare degree-th powers), so a
// threshold test never comes back ambiguous.
struct RootScalar {
  BigRat coeff;
  BigInt radicand;
  std::uint64_t degree = 1;

  static RootScalar rational(BigRat v) {
    if (v < 0) throw std::domain_error("RootScalar: negative value");
    return {std::move(v), 1, 1};
  }

  std::optional<BigRat> exact_value() const {
    BigInt r;
    if (is_perfect_power(radicand, degree, r)) return coeff * BigRat(r);
    return std::nullopt;
  }

  // sign of (this - x)
  int compare(const BigRat& x) const {
    if (coeff < 0) throw std::domain_error("RootScalar: negative coefficient");
    bool self_zero = coeff == 0 || radicand == 0;
    if (x < 0) return self_zero && x == 0 ? 0 : 1;  // value >= 0
    if (x == 0) return self_zero ? 0 : (radicand > 0 && coeff > 0 ? 1 : 0);
    if (self_zero) return -1;
    // value vs x  <=>  coeff^degree * radicand vs x^degree, all exact
    BigRat lhs = big_pow_rat(coeff, degree) * BigRat(radicand);
    BigRat rhs = big_pow_rat(x, degree);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }

  IntervalScalar enclosure(unsigned bits) const {
    if (auto v = exact_value()) return IntervalScalar::exact(*v);
    return IntervalScalar::exact(coeff) * nth_root_interval(BigRat(radicand), degree, bits);
  }

 private:
  static BigRat big_pow_rat(BigRat base, std::uint64_t e) {
    BigRat r = 1;
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }
};

}  // namespace canon
