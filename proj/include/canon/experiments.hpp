#pragma once
// The lower-bound argument as a runnable experiment: exact expected counts of
// canonically colored K_{m,m} copies under uniform random colorings of
// K_{n,n}, a Monte-Carlo estimator cross-checking them, and a search for
// zero-copy colorings certifying ER_B(m) > n for concrete small m, n.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <canon/bigint.hpp>
#include <canon/core.hpp>
#include <canon/errors.hpp>
#include <canon/generators.hpp>
#include <canon/interval.hpp>
#include <canon/oracle.hpp>
#include <canon/parallel.hpp>
#include <canon/rng.hpp>

namespace canon {

struct ExpectationTable {
  std::uint64_t n = 0, m = 0, q = 0;
  BigRat monochromatic, left, right, rainbow;
};

// Exact expectations over a uniform q-coloring: each of the C(n,m)^2 copies
// contributes the probability its m^2 edge colors land in the pattern.
// Falling factorials vanish on their own when q is too small for the
// pattern's distinct colors.
inline ExpectationTable expected_counts_exact(std::uint64_t n, std::uint64_t m, std::uint64_t q) {
  if (m < 1 || n < m || q < 1)
    throw std::invalid_argument("expected_counts_exact: need n >= m >= 1 and q >= 1");
  ExpectationTable t{n, m, q, 0, 0, 0, 0};
  BigInt c = binomial(BigInt(n), m);
  BigRat copies{c * c};
  BigRat cells{big_pow(BigInt(q), m * m)};
  t.monochromatic = copies * BigRat(q) / cells;
  t.left = copies * falling_factorial(BigRat(q), m) / cells;
  t.right = t.left;
  t.rainbow = copies * falling_factorial(BigRat(q), m * m) / cells;
  return t;
}

inline json expectation_table_json(const ExpectationTable& t) {
  return json{{"monochromatic", rational_string(t.monochromatic)},
              {"left", rational_string(t.left)},
              {"right", rational_string(t.right)},
              {"rainbow", rational_string(t.rainbow)}};
}

struct TrialSummary {
  std::uint64_t n = 0, m = 0, q = 0, trials = 0, seed = 0;
  // pattern order: monochromatic, left, right, rainbow
  std::array<BigInt, 4> sum{}, sumsq{};

  BigRat mean(std::size_t i) const { return BigRat(sum.at(i), BigInt(trials)); }
  // unbiased sample variance; zero for a single trial
  BigRat variance(std::size_t i) const {
    if (trials < 2) return BigRat(0);
    return BigRat(BigInt(trials) * sumsq.at(i) - sum.at(i) * sum.at(i),
                  BigInt(trials) * (trials - 1));
  }
  BigRat se2(std::size_t i) const { return variance(i) / BigRat(BigInt(trials)); }
  // |mean - target| <= k standard errors, decided exactly by squaring
  bool within_se(std::size_t i, const BigRat& target, std::uint64_t k) const {
    BigRat d = mean(i) - target;
    return d * d <= BigRat(k * k) * se2(i);
  }
};

inline constexpr std::array<const char*, 4> kPatternKeys{"monochromatic", "left", "right",
                                                         "rainbow"};

// Average oracle pattern counts over `trials` independent uniform_random(q)
// colorings of K_{n,n}. Per-trial seeds come from splitmix over the master
// seed; exact integer accumulation makes the result independent of thread
// scheduling.
inline TrialSummary run_trials(std::uint64_t n, std::uint64_t m, std::uint64_t q,
                               std::uint64_t trials, std::uint64_t seed,
                               const OracleLimits& limits = {}) {
  if (m < 1 || n < m || q < 1)
    throw std::invalid_argument("run_trials: need n >= m >= 1 and q >= 1");
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  BigInt c = binomial(BigInt(n), m);
  BigInt total = BigInt(trials) * c * c;
  if (total > limits.work_cap) throw SizeError("run_trials", total.str(), limits.work_cap);

  TrialSummary out;
  out.n = n;
  out.m = m;
  out.q = q;
  out.trials = trials;
  out.seed = seed;

  constexpr std::uint64_t kChunk = 64;
  struct Accum {
    std::array<BigInt, 4> sum{}, sumsq{};
  };
  std::size_t chunk_count = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
  auto chunks = map_chunks<Accum>(chunk_count, resolve_threads(limits.threads),
                                  [&](std::size_t ci) {
    Accum acc;
    std::uint64_t from = ci * kChunk, to = std::min(trials, from + kChunk);
    for (std::uint64_t t = from; t < to; ++t) {
      ColoringSpec spec;
      spec.family = "uniform_random";
      spec.n1 = n;
      spec.n2 = n;
      spec.seed = splitmix_at(seed, t);
      spec.params = json{{"q", q}};
      auto counts =
          count_canonical_bicliques(instantiate(spec), m, OracleLimits{limits.work_cap, 1});
      const std::uint64_t vals[4] = {counts.monochromatic, counts.left, counts.right,
                                     counts.rainbow};
      for (std::size_t i = 0; i < 4; ++i) {
        acc.sum[i] += vals[i];
        acc.sumsq[i] += BigInt(vals[i]) * vals[i];
      }
    }
    return acc;
  });
  for (const auto& acc : chunks)
    for (std::size_t i = 0; i < 4; ++i) {
      out.sum[i] += acc.sum[i];
      out.sumsq[i] += acc.sumsq[i];
    }
  return out;
}

// {"n","m","q","trials","seed","exact":{rational strings},
//  "empirical":{decimals},"stderr":{decimals}}
inline json experiment_report_json(const TrialSummary& s) {
  auto exact = expected_counts_exact(s.n, s.m, s.q);
  json empirical = json::object(), stderr_ = json::object();
  for (std::size_t i = 0; i < 4; ++i) {
    empirical[kPatternKeys[i]] = decimal_floor_string(s.mean(i), 9);
    BigRat v = s.se2(i);
    if (v == 0)
      stderr_[kPatternKeys[i]] = decimal_floor_string(BigRat(0), 9);
    else {
      auto root = nth_root_interval(v, 2, 96);
      stderr_[kPatternKeys[i]] = decimal_floor_string((root.lo + root.hi) / 2, 9);
    }
  }
  return json{{"n", s.n},         {"m", s.m},       {"q", s.q},
              {"trials", s.trials}, {"seed", s.seed}, {"exact", expectation_table_json(exact)},
              {"empirical", empirical}, {"stderr", stderr_}};
}

// First sampled uniform q-coloring of K_{n,n} with zero canonical K_{m,m}
// copies of any pattern, as a reproducible spec. Such a coloring certifies
// ER_B(m) > n; absence after `attempts` proves nothing.
inline std::optional<ColoringSpec> zero_copy_search(std::uint64_t n, std::uint64_t m,
                                                    std::uint64_t q, std::uint64_t attempts,
                                                    std::uint64_t seed,
                                                    const OracleLimits& limits = {}) {
  if (m < 1 || n < m || q < 1)
    throw std::invalid_argument("zero_copy_search: need n >= m >= 1 and q >= 1");
  if (attempts < 1) throw std::invalid_argument("zero_copy_search: attempts must be >= 1");
  BigInt c = binomial(BigInt(n), m);
  BigInt pairs_big = c * c;
  if (pairs_big > limits.work_cap)
    throw SizeError("zero_copy_search", pairs_big.str(), limits.work_cap);
  std::uint64_t pairs = static_cast<std::uint64_t>(pairs_big);

  std::uint64_t used = 0;
  for (std::uint64_t t = 0; t < attempts; ++t) {
    if (used > limits.work_cap - pairs)
      throw SizeError("zero_copy_search", (BigInt(used) + pairs).str(), limits.work_cap);
    used += pairs;
    ColoringSpec spec;
    spec.family = "uniform_random";
    spec.n1 = n;
    spec.n2 = n;
    spec.seed = splitmix_at(seed, t);
    spec.params = json{{"q", q}};
    auto counts =
        count_canonical_bicliques(instantiate(spec), m, OracleLimits{limits.work_cap, limits.threads});
    if (counts.monochromatic == 0 && counts.left == 0 && counts.right == 0 && counts.rainbow == 0)
      return spec;
  }
  return std::nullopt;
}

}  // namespace canon
