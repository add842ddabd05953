#include <catch2/catch_amalgamated.hpp>

#include <canon/interval.hpp>

using namespace canon;

namespace {

// decimal rational below/above well-known constants, for containment checks
const BigRat kE_lo = BigRat(BigInt("2718281828459045235360287"), big_pow(10, 24));
const BigRat kE_hi = kE_lo + BigRat(1, big_pow(10, 24));
const BigRat kLn2_lo = BigRat(BigInt("693147180559945309417232"), big_pow(10, 24));
const BigRat kLn2_hi = kLn2_lo + BigRat(1, big_pow(10, 24));

}  // namespace

TEST_CASE("interval arithmetic endpoints", "[interval]") {
  auto a = IntervalScalar::of(BigRat(1), BigRat(2));
  auto b = IntervalScalar::of(BigRat(-3), BigRat(5));
  auto sum = a + b;
  CHECK(sum.lo == BigRat(-2));
  CHECK(sum.hi == BigRat(7));
  auto diff = a - b;
  CHECK(diff.lo == BigRat(-4));
  CHECK(diff.hi == BigRat(5));
  auto prod = a * b;
  CHECK(prod.lo == BigRat(-6));
  CHECK(prod.hi == BigRat(10));
  auto quot = a / IntervalScalar::of(BigRat(2), BigRat(4));
  CHECK(quot.lo == BigRat(1, 4));
  CHECK(quot.hi == BigRat(1));
  CHECK_THROWS_AS(a / b, std::domain_error);  // divisor spans zero
  CHECK_THROWS_AS(IntervalScalar::of(BigRat(2), BigRat(1)), std::invalid_argument);

  auto p = IntervalScalar::of(BigRat(2), BigRat(3)).pow_ui(3);
  CHECK(p.lo == BigRat(8));
  CHECK(p.hi == BigRat(27));
  CHECK(IntervalScalar::exact(BigRat(5)).pow_ui(0).lo == BigRat(1));
}

TEST_CASE("round_out widens outward only", "[interval]") {
  auto x = IntervalScalar::of(BigRat(1, 3), BigRat(2, 3));
  auto r = x.round_out(8);
  CHECK(r.lo <= x.lo);
  CHECK(r.hi >= x.hi);
  CHECK(boost::multiprecision::denominator(r.lo) <= 256);
  CHECK(r.width() <= x.width() + BigRat(2, 256));
}

TEST_CASE("nth_root_interval brackets and collapses on perfect powers", "[interval]") {
  auto r = nth_root_interval(BigRat(4096), 2, 32);
  CHECK(r.is_exact());
  CHECK(r.lo == BigRat(64));

  auto s = nth_root_interval(BigRat(2), 2, 64);
  CHECK_FALSE(s.is_exact());
  CHECK(s.width() <= BigRat(BigInt(1), BigInt(1) << 63));
  // sqrt(2)^2 = 2 inside the squared enclosure
  auto sq = s.pow_ui(2);
  CHECK(sq.lo <= BigRat(2));
  CHECK(sq.hi >= BigRat(2));

  auto q = nth_root_interval(BigRat(27, 8), 3, 40);
  CHECK(q.is_exact());
  CHECK(q.lo == BigRat(3, 2));
}

TEST_CASE("e and ln enclosures contain the constants", "[interval]") {
  for (unsigned bits : {16u, 64u, 128u}) {
    auto e = e_interval(bits);
    CHECK(e.lo <= kE_hi);
    CHECK(e.hi >= kE_lo);
    CHECK(e.width() <= BigRat(BigInt(1), BigInt(1) << (bits - 1)));
    auto l2 = ln2_interval(bits);
    CHECK(l2.lo <= kLn2_hi);
    CHECK(l2.hi >= kLn2_lo);
    CHECK(l2.width() <= BigRat(BigInt(1), BigInt(1) << (bits - 2)));
  }
}

TEST_CASE("ln_interval on integers", "[interval]") {
  CHECK(ln_interval(1, 32).is_exact());
  CHECK(ln_interval(1, 32).lo == BigRat(0));
  // ln 8 = 3 ln 2
  auto l8 = ln_interval(8, 80);
  auto l2 = ln2_interval(84);
  CHECK(l8.lo <= l2.hi * 3);
  CHECK(l8.hi >= l2.lo * 3);
  // a big value: ln(10^40) = 40 ln 10; check against ln 10 computed directly
  BigInt big = big_pow(10, 40);
  auto lbig = ln_interval(big, 96);
  auto l10 = ln_interval(10, 110);
  CHECK(lbig.lo <= l10.hi * 40);
  CHECK(lbig.hi >= l10.lo * 40);
  CHECK(lbig.width() < BigRat(1, BigInt(1) << 64));
  CHECK_THROWS_AS(ln_interval(0, 16), std::domain_error);
}

TEST_CASE("log2_interval is exact-ish on powers of two", "[interval]") {
  auto l = log2_interval(BigInt(1) << 20, 64);
  CHECK(l.contains(BigRat(20)));
  CHECK(l.width() < BigRat(1, BigInt(1) << 32));
  auto l3 = log2_interval(3, 64);
  // log2 3 = 1.584962500721156...
  CHECK(l3.lo >= BigRat(BigInt("1584962500721"), BigInt("1000000000000")));
  CHECK(l3.hi <= BigRat(BigInt("1584962500722"), BigInt("1000000000000")));
}

TEST_CASE("RootScalar comparisons are exact and never ambiguous", "[interval]") {
  // 2 * (2 * 2048^1)^(1/2) = 2*sqrt(4096) = 128 exactly
  RootScalar tau{BigRat(2), BigInt(2) * 2048, 2};
  REQUIRE(tau.exact_value().has_value());
  CHECK(*tau.exact_value() == BigRat(128));
  CHECK(tau.compare(BigRat(128)) == 0);
  CHECK(tau.compare(BigRat(127)) == 1);
  CHECK(tau.compare(BigRat(129)) == -1);

  // irrational: 3 * 2^(1/3)
  RootScalar r{BigRat(3), 2, 3};
  CHECK_FALSE(r.exact_value().has_value());
  // 3 * 2^(1/3) = 3.77976...
  CHECK(r.compare(BigRat(377, 100)) == 1);
  CHECK(r.compare(BigRat(378, 100)) == -1);
  CHECK(r.compare(BigRat(0)) == 1);
  CHECK(r.compare(BigRat(-5)) == 1);
  auto enc = r.enclosure(64);
  CHECK(enc.lo <= BigRat(378, 100));
  CHECK(enc.hi >= BigRat(377, 100));
  CHECK(enc.width() < BigRat(1, BigInt(1) << 32));

  RootScalar zero{BigRat(0), 17, 4};
  CHECK(zero.compare(BigRat(0)) == 0);
  CHECK(zero.compare(BigRat(1, 1000)) == -1);
}
