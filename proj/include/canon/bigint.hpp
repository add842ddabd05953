#pragma once
// Exact integer/rational arithmetic plus the handful of combinatorial
// helpers the rest of the library leans on. Everything here is exact; no
// floating point anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace canon {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_pow(BigInt base, std::uint64_t exp) {
  BigInt r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

inline BigInt binomial(const BigInt& n, std::uint64_t k) {
  if (n < 0) throw std::invalid_argument("binomial: negative n");
  if (BigInt(k) > n) return 0;
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - BigInt(i - 1);
    r /= i;  // exact: r is a binomial coefficient after each step
  }
  return r;
}

// x (x-1) ... (x-k+1); zero when 0 <= x < k.
inline BigRat falling_factorial(const BigRat& x, std::uint64_t k) {
  BigRat r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r *= x - BigRat(i);
  return r;
}

inline std::size_t bit_length(const BigInt& n) {
  if (n == 0) return 0;
  return boost::multiprecision::msb(n) + 1;  // requires n > 0
}

// floor(n^(1/k)) by Newton iteration from above; exact.
inline BigInt nth_root_floor(const BigInt& n, std::uint64_t k) {
  if (n < 0) throw std::invalid_argument("nth_root_floor: negative radicand");
  if (k == 0) throw std::invalid_argument("nth_root_floor: zero degree");
  if (k == 1 || n <= 1) return n;
  BigInt x = BigInt(1) << (bit_length(n) / k + 1);  // strictly above the root
  while (true) {
    BigInt y = ((k - 1) * x + n / big_pow(x, k - 1)) / k;
    if (y >= x) break;
    x = y;
  }
  while (big_pow(x, k) > n) --x;
  while (big_pow(x + 1, k) <= n) ++x;
  return x;
}

inline bool is_perfect_power(const BigInt& n, std::uint64_t k, BigInt& root_out) {
  if (n < 0) return false;
  root_out = nth_root_floor(n, k);
  return big_pow(root_out, k) == n;
}

inline std::uint64_t isqrt_u64(std::uint64_t n) {
  return static_cast<std::uint64_t>(nth_root_floor(BigInt(n), 2));
}

inline BigInt floor_rat(const BigRat& x) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);  // always > 0
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

inline BigInt ceil_rat(const BigRat& x) { return -floor_rat(-x); }

// "p/q" with q omitted when 1. Deterministic, lossless.
inline std::string rational_string(const BigRat& x) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Fixed-point decimal, truncated toward -inf; deterministic.
inline std::string decimal_floor_string(const BigRat& x, unsigned frac_digits) {
  BigInt scale = big_pow(10, frac_digits);
  BigInt scaled = floor_rat(x * BigRat(scale));
  bool neg = scaled < 0;
  BigInt mag = neg ? BigInt(-scaled) : scaled;
  std::string digits = mag.str();
  if (digits.size() <= frac_digits) digits.insert(0, frac_digits + 1 - digits.size(), '0');
  std::string out = digits.substr(0, digits.size() - frac_digits);
  if (frac_digits > 0) out += "." + digits.substr(digits.size() - frac_digits);
  return (neg ? "-" : "") + out;
}

}  // namespace canon
