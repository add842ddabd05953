#pragma once
// The upper-bound argument as an executable pipeline: stream right vertices
// looking for a pigeonhole-certified mono/right witness; otherwise sample a
// rainbow core (S1, S2), split S1 by color popularity, and finish either by
// KST extraction from the popular-edge graph (left witness) or by a greedy
// maximal rainbow set (rainbow witness). Every returned witness is verified;
// every unmet guarantee becomes a typed failure, never undefined behavior.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <canon/bigint.hpp>
#include <canon/core.hpp>
#include <canon/errors.hpp>
#include <canon/interval.hpp>
#include <canon/oracle.hpp>
#include <canon/parallel.hpp>
#include <canon/rng.hpp>

namespace canon {

enum class PipelineMode { Strict, BestEffort };
enum class PipelineBranch { Pigeonhole, Case1, Case2, Failure };
enum class FailureReason { PreconditionUnmet, SamplingExhausted, KstExtractionFailed, WorkCap };

inline std::string pipeline_mode_name(PipelineMode m) {
  return m == PipelineMode::Strict ? "strict" : "best_effort";
}

inline std::string pipeline_branch_name(PipelineBranch b) {
  switch (b) {
    case PipelineBranch::Pigeonhole: return "pigeonhole";
    case PipelineBranch::Case1: return "case1";
    case PipelineBranch::Case2: return "case2";
    case PipelineBranch::Failure: return "failure";
  }
  throw std::logic_error("unreachable");
}

inline std::string failure_reason_name(FailureReason r) {
  switch (r) {
    case FailureReason::PreconditionUnmet: return "precondition_unmet";
    case FailureReason::SamplingExhausted: return "sampling_exhausted";
    case FailureReason::KstExtractionFailed: return "kst_extraction_failed";
    case FailureReason::WorkCap: return "work_cap";
  }
  throw std::logic_error("unreachable");
}

// tau = 2 m^(1/m) s^(1-1/m), kept as an exact radical so popularity
// comparisons against integer frequencies never come back ambiguous.
inline RootScalar popularity_threshold_for(std::uint64_t m, std::uint64_t s2_size) {
  if (m < 1 || s2_size < 1)
    throw std::invalid_argument("popularity_threshold_for: m and s2 size must be positive");
  return RootScalar{BigRat(2), BigInt(m) * big_pow(BigInt(s2_size), m - 1), m};
}

struct PipelineParams {
  std::uint64_t m = 2;
  std::uint64_t n1 = 0, n2 = 0;      // host dimensions (must match the source)
  std::uint64_t tuple_len = 0;       // construction: 4m^4 + m
  std::uint64_t s2_target = 0;       // construction: 4^m m^(3m+1)
  RootScalar popularity_threshold;   // construction: 2 m^(1/m) s2_target^(1-1/m)
  std::uint64_t pigeonhole_quota = 0;  // construction: m^2; must be >= (m-1)^2+1
  std::uint64_t max_sampling_retries = 64;
  std::uint64_t seed = 0;
  PipelineMode mode = PipelineMode::BestEffort;
  std::uint64_t work_cap = 1'000'000'000;  // source queries
  int threads = 0;                         // 0 = machine parallelism
};

// The construction's exact parameters; strict mode. Throws SizeError when a
// value does not fit in 64 bits (the decimal is carried in the error), which
// happens for n2 beyond m = 3 — the existence proof's scale, not the
// implementation's.
inline PipelineParams default_params(std::uint64_t m, std::uint64_t seed = 0) {
  if (m < 2) throw std::invalid_argument("default_params: m must be >= 2");
  const BigInt u64_max{std::numeric_limits<std::uint64_t>::max()};
  auto fit = [&](const BigInt& v, const char* what) {
    if (v > u64_max) throw SizeError(what, v.str(), std::numeric_limits<std::uint64_t>::max());
    return static_cast<std::uint64_t>(v);
  };
  PipelineParams p;
  p.m = m;
  p.n1 = fit(25 * big_pow(BigInt(m), 9), "default_params: n1");
  p.n2 = fit(2 * binomial(BigInt(p.n1), m) * m * m, "default_params: n2");
  p.tuple_len = fit(4 * big_pow(BigInt(m), 4) + m, "default_params: tuple_len");
  p.s2_target = fit(big_pow(BigInt(4), m) * big_pow(BigInt(m), 3 * m + 1),
                    "default_params: s2_target");
  p.popularity_threshold = popularity_threshold_for(m, p.s2_target);
  p.pigeonhole_quota = m * m;
  p.seed = seed;
  p.mode = PipelineMode::Strict;
  return p;
}

// Paper parameters clamped to a host of the given size: the tuple stays
// small enough that distinct i.i.d. samples are plausible (birthday regime
// sqrt(n1), floored at 2m so both cases stay reachable), and the rainbow-core
// target never exceeds n2.
inline PipelineParams best_effort_params(std::uint64_t m, std::uint64_t n1, std::uint64_t n2,
                                         std::uint64_t seed = 0) {
  if (m < 2) throw std::invalid_argument("best_effort_params: m must be >= 2");
  auto clamp_u64 = [](const BigInt& v, std::uint64_t cap) {
    return v > BigInt(cap) ? cap : static_cast<std::uint64_t>(v);
  };
  PipelineParams p;
  p.m = m;
  p.n1 = n1;
  p.n2 = n2;
  std::uint64_t birthday = std::max(2 * m, isqrt_u64(n1));
  p.tuple_len = std::min(clamp_u64(4 * big_pow(BigInt(m), 4) + m, birthday), n1);
  p.s2_target = clamp_u64(big_pow(BigInt(4), m) * big_pow(BigInt(m), 3 * m + 1), n2);
  if (p.s2_target > 0)
    p.popularity_threshold = popularity_threshold_for(m, p.s2_target);
  p.pigeonhole_quota = m * m;
  p.seed = seed;
  p.mode = PipelineMode::BestEffort;
  return p;
}

// Row of colors seen from the left when the right endpoint is fixed at b.
inline std::vector<ColorId> induced_coloring(const ColoringSource& src, Vertex b) {
  if (b >= src.n2) throw std::out_of_range("induced_coloring: b out of range");
  std::vector<ColorId> row(src.n1);
  for (Vertex a = 0; a < src.n1; ++a) row[a] = src.query(a, b);
  return row;
}

// The m-set b colors monochromatically, if any: among color classes of the
// induced coloring with >= m members, the one containing the smallest vertex
// wins, and its m smallest members are returned (with the class color).
inline std::optional<std::pair<std::vector<Vertex>, ColorId>> mono_mset_of(
    const ColoringSource& src, Vertex b, std::uint64_t m) {
  if (b >= src.n2) throw std::out_of_range("mono_mset_of: b out of range");
  if (m < 1) throw std::invalid_argument("mono_mset_of: m must be >= 1");
  std::map<ColorId, std::vector<Vertex>> classes;
  for (Vertex a = 0; a < src.n1; ++a) classes[src.query(a, b)].push_back(a);
  const std::vector<Vertex>* best = nullptr;
  ColorId best_color = 0;
  for (const auto& [color, members] : classes)
    if (members.size() >= m && (!best || members.front() < best->front())) {
      best = &members;
      best_color = color;
    }
  if (!best) return std::nullopt;
  return std::make_pair(std::vector<Vertex>(best->begin(), best->begin() + m), best_color);
}

namespace detail {

// First pattern in enum order the grid realizes; grids here always realize
// at least one (they are classified witnesses-to-be).
inline CanonicalPattern priority_pattern(const PatternSet& set) {
  for (CanonicalPattern p : {CanonicalPattern::Monochromatic, CanonicalPattern::LeftColored,
                             CanonicalPattern::RightColored, CanonicalPattern::Rainbow})
    if (set.contains(p)) return p;
  throw std::logic_error("priority_pattern: unclassifiable grid");
}

// Streamed, wave-parallel scan work accounting: fixed wave sizes keep the
// cap behavior identical across thread counts.
struct WorkBudget {
  std::uint64_t cap = 0;
  std::uint64_t used = 0;
  void charge(const char* what, const BigInt& amount) {
    if (BigInt(used) + amount > BigInt(cap))
      throw SizeError(what, (BigInt(used) + amount).str(), cap);
    used += static_cast<std::uint64_t>(amount);
  }
  std::uint64_t remaining() const { return cap - used; }
};

}  // namespace detail

struct PigeonholeHit {
  std::vector<Vertex> mset;
  std::vector<std::pair<Vertex, ColorId>> hits;  // (b, class color), quota many
};

struct PigeonholeScan {
  std::optional<PigeonholeHit> hit;
  std::vector<Vertex> candidates;  // b's with no monochromatic m-set
  std::uint64_t scanned = 0;
  std::uint64_t t_size = 0;        // b's that do color some m-set monochromatically
  std::uint64_t distinct_msets = 0;
};

namespace detail {

inline PigeonholeScan pigeonhole_scan(const ColoringSource& src, std::uint64_t m,
                                      std::uint64_t quota, WorkBudget& budget, int threads) {
  constexpr std::uint64_t kWave = 2048, kChunk = 32;
  PigeonholeScan scan;
  std::map<std::vector<Vertex>, std::vector<std::pair<Vertex, ColorId>>> tally;
  for (Vertex wave_start = 0; wave_start < src.n2 && !scan.hit; wave_start += kWave) {
    std::uint64_t wave = std::min<std::uint64_t>(kWave, src.n2 - wave_start);
    budget.charge("pigeonhole_branch", BigInt(wave) * src.n1);
    std::size_t chunk_count = static_cast<std::size_t>((wave + kChunk - 1) / kChunk);
    auto waved = map_chunks<std::vector<std::optional<std::pair<std::vector<Vertex>, ColorId>>>>(
        chunk_count, resolve_threads(threads), [&](std::size_t c) {
          std::vector<std::optional<std::pair<std::vector<Vertex>, ColorId>>> out;
          Vertex from = wave_start + c * kChunk;
          Vertex to = std::min<Vertex>(from + kChunk, wave_start + wave);
          out.reserve(to - from);
          for (Vertex b = from; b < to; ++b) out.push_back(mono_mset_of(src, b, m));
          return out;
        });
    for (std::size_t c = 0; c < waved.size() && !scan.hit; ++c)
      for (std::size_t i = 0; i < waved[c].size() && !scan.hit; ++i) {
        Vertex b = wave_start + c * kChunk + i;
        ++scan.scanned;
        auto& found = waved[c][i];
        if (!found) {
          scan.candidates.push_back(b);
          continue;
        }
        ++scan.t_size;
        auto& hits = tally[found->first];
        hits.emplace_back(b, found->second);
        if (hits.size() >= quota)
          scan.hit = PigeonholeHit{found->first, hits};
      }
    scan.distinct_msets = tally.size();
  }
  return scan;
}

}  // namespace detail

// Stream b's accumulating monochromatic m-sets; when one m-set collects
// `quota` hits, the canonical pigeonhole on the quota-many class colors
// yields either a constant m-subset (monochromatic witness) or an injective
// one (right-colored witness).
inline std::optional<Witness> pigeonhole_branch(const ColoringSource& src, std::uint64_t m,
                                                std::uint64_t quota,
                                                const OracleLimits& limits = {}) {
  if (m < 1 || quota < (m - 1) * (m - 1) + 1)
    throw std::invalid_argument("pigeonhole_branch: quota must be >= (m-1)^2+1");
  detail::WorkBudget budget{limits.work_cap, 0};
  auto scan = detail::pigeonhole_scan(src, m, quota, budget, limits.threads);
  if (!scan.hit) return std::nullopt;

  std::vector<ColorId> colors;
  for (const auto& [b, color] : scan.hit->hits) colors.push_back(color);
  auto chosen = find_canonical_singleton_set(colors, m);
  if (!chosen) throw std::logic_error("pigeonhole_branch: quota hit without singleton set");

  Witness w;
  w.left = scan.hit->mset;
  for (std::size_t i : chosen->indices) w.right.push_back(scan.hit->hits[i].first);
  w.pattern = chosen->kind == SingletonKind::Constant ? CanonicalPattern::Monochromatic
                                                      : CanonicalPattern::RightColored;
  if (!verify_witness(src, w))
    throw std::logic_error("pigeonhole_branch: witness failed verification");
  return w;
}

struct RainbowCore {
  bool ok = false;
  std::vector<Vertex> s1;  // the sampled tuple, in sampled order (distinct)
  std::vector<Vertex> s2;  // first s2_target rainbow candidates, index order
  std::uint64_t attempts = 0;
  std::uint64_t best_count = 0;
  std::vector<std::uint64_t> rainbow_counts;  // one per attempt
};

namespace detail {

inline RainbowCore sample_rainbow_core_impl(const ColoringSource& src,
                                            const std::vector<Vertex>& candidate_bs,
                                            const PipelineParams& p, WorkBudget& budget) {
  constexpr std::uint64_t kChunk = 256;
  RainbowCore core;
  for (std::uint64_t t = 0; t < p.max_sampling_retries; ++t) {
    ++core.attempts;
    std::vector<Vertex> tuple(p.tuple_len);
    for (std::uint64_t i = 0; i < p.tuple_len; ++i)
      tuple[i] = bounded_uniform(src.n1, [&](std::uint64_t rej) { return prf(p.seed, t, i, rej); });
    std::vector<Vertex> sorted = tuple;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      core.rainbow_counts.push_back(0);  // repeated vertex: rainbow for no b
      continue;
    }

    budget.charge("sample_rainbow_core", BigInt(candidate_bs.size()) * p.tuple_len);
    std::size_t chunk_count = (candidate_bs.size() + kChunk - 1) / kChunk;
    auto chunks = map_chunks<std::vector<Vertex>>(
        chunk_count, resolve_threads(p.threads), [&](std::size_t c) {
          std::vector<Vertex> rainbow;
          std::size_t from = c * kChunk, to = std::min(candidate_bs.size(), from + kChunk);
          std::vector<ColorId> sig(p.tuple_len);
          for (std::size_t k = from; k < to; ++k) {
            Vertex b = candidate_bs[k];
            for (std::uint64_t i = 0; i < p.tuple_len; ++i) sig[i] = src.query(tuple[i], b);
            if (signature_injective(sig)) rainbow.push_back(b);
          }
          return rainbow;
        });
    std::uint64_t count = 0;
    for (const auto& c : chunks) count += c.size();
    core.rainbow_counts.push_back(count);
    core.best_count = std::max(core.best_count, count);
    if (count >= p.s2_target) {
      core.ok = true;
      core.s1 = std::move(tuple);
      core.s2.reserve(p.s2_target);
      for (const auto& c : chunks)
        for (Vertex b : c) {
          if (core.s2.size() == p.s2_target) break;
          core.s2.push_back(b);
        }
      return core;
    }
  }
  return core;
}

}  // namespace detail

// Repeatedly sample a tuple_len tuple i.i.d. uniform from [n1] (with
// repetition; a repeated vertex makes the attempt rainbow for no b) and count
// candidates whose induced coloring is injective on it. Succeeds when the
// count reaches s2_target.
inline RainbowCore sample_rainbow_core(const ColoringSource& src,
                                       const std::vector<Vertex>& candidate_bs,
                                       const PipelineParams& p) {
  if (candidate_bs.empty())
    throw std::invalid_argument("sample_rainbow_core: empty candidate set");
  if (p.tuple_len < 1 || p.s2_target < 1)
    throw std::invalid_argument("sample_rainbow_core: tuple_len and s2_target must be positive");
  detail::WorkBudget budget{p.work_cap, 0};
  return detail::sample_rainbow_core_impl(src, candidate_bs, p, budget);
}

struct PopularitySplit {
  std::vector<std::pair<Vertex, ColorId>> m1;  // (vertex, popular color), S1 order
  std::vector<Vertex> m1_prime;                // S1 order
};

// Tally each S1 vertex's colors over S2; highest frequency wins (ties to the
// smaller color id). Frequency >= tau sends the vertex to M1 with that
// color, else to M1'. The threshold comparison is exact.
inline PopularitySplit popularity_split(const ColoringSource& src, const std::vector<Vertex>& s1,
                                        const std::vector<Vertex>& s2, const RootScalar& tau) {
  if (tau.compare(BigRat(0)) <= 0) throw std::invalid_argument("popularity_split: tau must be > 0");
  PopularitySplit split;
  for (Vertex a : s1) {
    std::map<ColorId, std::uint64_t> freq;
    for (Vertex b : s2) ++freq[src.query(a, b)];
    ColorId best_color = 0;
    std::uint64_t best = 0;
    for (const auto& [color, count] : freq)
      if (count > best) {
        best = count;
        best_color = color;
      }
    if (best > 0 && tau.compare(BigRat(BigInt(best))) <= 0)
      split.m1.emplace_back(a, best_color);
    else
      split.m1_prime.push_back(a);
  }
  return split;
}

// First m-subset of the smaller side (colex order) whose common neighborhood
// on the other side has >= m vertices; returns (left m-set, right m-set)
// with the m smallest common neighbors. Constructive Kővári–Sós–Turán.
template <class Adj>
std::optional<std::pair<std::vector<Vertex>, std::vector<Vertex>>> kst_extract(
    const std::vector<Vertex>& left, const std::vector<Vertex>& right, Adj&& adj,
    std::uint64_t m, const OracleLimits& limits = {}) {
  if (m < 1) throw std::invalid_argument("kst_extract: m must be >= 1");
  if (left.size() < m || right.size() < m) return std::nullopt;
  const bool flip = right.size() < left.size();  // enumerate the smaller side
  const std::vector<Vertex>& small = flip ? right : left;
  const std::vector<Vertex>& big = flip ? left : right;

  BigInt subsets = binomial(BigInt(small.size()), m);
  BigInt mask_work{small.size() * big.size()};
  BigInt total = mask_work + subsets * m;
  if (total > BigInt(limits.work_cap))
    throw SizeError("kst_extract", total.str(), limits.work_cap);

  const std::size_t words = (big.size() + 63) / 64;
  std::vector<std::uint64_t> masks(small.size() * words, 0);
  for (std::size_t i = 0; i < small.size(); ++i)
    for (std::size_t j = 0; j < big.size(); ++j) {
      bool edge = flip ? adj(big[j], small[i]) : adj(small[i], big[j]);
      if (edge) masks[i * words + j / 64] |= std::uint64_t(1) << (j % 64);
    }

  constexpr std::uint64_t kChunk = 256;
  std::uint64_t rank_count = static_cast<std::uint64_t>(subsets);
  std::size_t chunk_count = static_cast<std::size_t>((rank_count + kChunk - 1) / kChunk);
  struct Hit {
    std::vector<Vertex> subset;   // indices into `small`
    std::vector<Vertex> commons;  // indices into `big`, m smallest
  };
  auto found = search_chunks<Hit>(
      chunk_count, resolve_threads(limits.threads),
      limits.work_cap - static_cast<std::uint64_t>(mask_work), "kst_extract",
      [&](std::size_t c) {
        ChunkOutcome<Hit> out;
        std::uint64_t from = c * kChunk, to = std::min(rank_count, from + kChunk);
        std::vector<Vertex> subset = colex::unrank(BigInt(from), m);
        std::vector<std::uint64_t> inter(words);
        for (std::uint64_t r = from; r < to; ++r) {
          out.work += m;
          for (std::size_t w = 0; w < words; ++w) inter[w] = ~std::uint64_t(0);
          for (Vertex i : subset)
            for (std::size_t w = 0; w < words; ++w) inter[w] &= masks[i * words + w];
          std::uint64_t count = 0;
          for (std::size_t w = 0; w < words; ++w)
            count += static_cast<std::uint64_t>(std::popcount(
                w + 1 == words && big.size() % 64
                    ? inter[w] & ((std::uint64_t(1) << (big.size() % 64)) - 1)
                    : inter[w]));
          if (count >= m) {
            Hit hit{subset, {}};
            for (std::size_t w = 0; w < words && hit.commons.size() < m; ++w) {
              std::uint64_t bits = w + 1 == words && big.size() % 64
                                       ? inter[w] & ((std::uint64_t(1) << (big.size() % 64)) - 1)
                                       : inter[w];
              while (bits && hit.commons.size() < m) {
                hit.commons.push_back(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
              }
            }
            out.hit = std::move(hit);
            return out;
          }
          colex::next_subset(subset, small.size());
        }
        return out;
      });
  if (!found) return std::nullopt;

  std::vector<Vertex> small_side, big_side;
  for (Vertex i : found->subset) small_side.push_back(small[i]);
  for (Vertex j : found->commons) big_side.push_back(big[j]);
  if (flip) return std::make_pair(std::move(big_side), std::move(small_side));
  return std::make_pair(std::move(small_side), std::move(big_side));
}

struct Case1Result {
  std::optional<Witness> witness;
  std::uint64_t edges_kept = 0;
};

// Keep only edges colored with their left endpoint's popular color, then
// extract a K_{m,m}. In pipeline runs every b in S2 is rainbow on S1, which
// forces the popular colors apart, so the witness classifies left-colored.
inline Case1Result case1(const ColoringSource& src,
                         const std::vector<std::pair<Vertex, ColorId>>& m1,
                         const std::vector<Vertex>& s2, std::uint64_t m,
                         const OracleLimits& limits = {}) {
  if (m1.size() < m) throw std::invalid_argument("case1: |M1| must be >= m");
  Case1Result result;
  const std::size_t rows = m1.size(), cols = s2.size();
  detail::WorkBudget budget{limits.work_cap, 0};
  budget.charge("case1", BigInt(rows) * cols);
  std::vector<std::uint8_t> kept(rows * cols, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (src.query(m1[i].first, s2[j]) == m1[i].second) {
        kept[i * cols + j] = 1;
        ++result.edges_kept;
      }

  std::vector<Vertex> rows_idx(rows), cols_idx(cols);
  for (std::size_t i = 0; i < rows; ++i) rows_idx[i] = i;
  for (std::size_t j = 0; j < cols; ++j) cols_idx[j] = j;
  auto found = kst_extract(
      rows_idx, cols_idx, [&](Vertex i, Vertex j) { return kept[i * cols + j] != 0; }, m,
      OracleLimits{budget.remaining(), limits.threads});
  if (!found) return result;

  Witness w;
  for (Vertex i : found->first) w.left.push_back(m1[i].first);
  for (Vertex j : found->second) w.right.push_back(s2[j]);
  std::sort(w.left.begin(), w.left.end());
  std::sort(w.right.begin(), w.right.end());
  w.pattern = detail::priority_pattern(classify_grid(restrict_to(src, w.left, w.right)));
  if (!verify_witness(src, w)) throw std::logic_error("case1: witness failed verification");
  result.witness = std::move(w);
  return result;
}

struct Case2Result {
  std::optional<Witness> witness;
  std::vector<Vertex> x;  // the greedy maximal rainbow set
};

// Greedy maximal X <= S2 with M1' x X rainbow: scan S2 in index order, add b
// whenever its column colors are pairwise new. Witness uses the first m of X.
inline Case2Result case2_max_rainbow(const ColoringSource& src,
                                     const std::vector<Vertex>& m1_prime,
                                     const std::vector<Vertex>& s2) {
  if (m1_prime.empty()) throw std::invalid_argument("case2_max_rainbow: empty M1'");
  Case2Result result;
  std::unordered_set<ColorId> used;
  std::vector<ColorId> column(m1_prime.size());
  for (Vertex b : s2) {
    bool fresh = true;
    for (std::size_t i = 0; i < m1_prime.size() && fresh; ++i) {
      column[i] = src.query(m1_prime[i], b);
      if (used.count(column[i])) fresh = false;
      for (std::size_t k = 0; k < i && fresh; ++k)
        if (column[k] == column[i]) fresh = false;
    }
    if (!fresh) continue;
    used.insert(column.begin(), column.end());
    result.x.push_back(b);
  }
  std::uint64_t m = m1_prime.size();
  if (result.x.size() < m) return result;

  Witness w;
  w.left = m1_prime;
  std::sort(w.left.begin(), w.left.end());
  w.right.assign(result.x.begin(), result.x.begin() + m);
  w.pattern = CanonicalPattern::Rainbow;
  if (!verify_witness(src, w)) throw std::logic_error("case2_max_rainbow: witness failed verification");
  result.witness = std::move(w);
  return result;
}

struct PipelineStats {
  std::uint64_t scanned_bs = 0;
  std::uint64_t t_size = 0;
  std::uint64_t distinct_msets = 0;
  std::optional<std::uint64_t> candidates;
  std::optional<std::uint64_t> sampling_attempts;
  std::vector<std::uint64_t> rainbow_counts;
  std::optional<std::string> tau;  // decimal
  std::optional<std::uint64_t> m1_size, m1_prime_size;
  std::optional<std::uint64_t> case1_edges;
  std::optional<std::uint64_t> x_size;
  std::uint64_t work_used = 0;
};

struct PipelineReport {
  PipelineBranch branch = PipelineBranch::Failure;
  std::optional<Witness> witness;
  std::optional<FailureReason> failure_reason;
  PipelineStats stats;
};

inline json pipeline_report_json(const PipelineReport& r) {
  json stats{{"scanned_bs", r.stats.scanned_bs},
             {"t_size", r.stats.t_size},
             {"distinct_msets", r.stats.distinct_msets},
             {"work_used", r.stats.work_used}};
  if (r.stats.candidates) stats["candidates"] = *r.stats.candidates;
  if (r.stats.sampling_attempts) {
    stats["sampling_attempts"] = *r.stats.sampling_attempts;
    stats["rainbow_counts"] = r.stats.rainbow_counts;
  }
  if (r.stats.tau) stats["tau"] = *r.stats.tau;
  if (r.stats.m1_size) stats["m1"] = *r.stats.m1_size;
  if (r.stats.m1_prime_size) stats["m1_prime"] = *r.stats.m1_prime_size;
  if (r.stats.case1_edges) stats["case1_edges"] = *r.stats.case1_edges;
  if (r.stats.x_size) stats["x_size"] = *r.stats.x_size;
  return json{{"branch", pipeline_branch_name(r.branch)},
              {"witness", r.witness ? witness_to_json(*r.witness) : json(nullptr)},
              {"failure_reason",
               r.failure_reason ? json(failure_reason_name(*r.failure_reason)) : json(nullptr)},
              {"stats", stats}};
}

// The full branch structure. Shape errors in the params throw; everything
// the host's scale makes impossible comes back as a typed Failure report.
inline PipelineReport run_pipeline(const ColoringSource& src, const PipelineParams& p) {
  if (p.m < 2) throw std::invalid_argument("run_pipeline: m must be >= 2");
  if (p.n1 != src.n1 || p.n2 != src.n2)
    throw std::invalid_argument("run_pipeline: params sized for a different host");
  if (p.pigeonhole_quota < (p.m - 1) * (p.m - 1) + 1)
    throw std::invalid_argument("run_pipeline: quota must be >= (m-1)^2+1");
  if (p.max_sampling_retries < 1)
    throw std::invalid_argument("run_pipeline: max_sampling_retries must be positive");

  PipelineReport rep;
  detail::WorkBudget budget{p.work_cap, 0};
  auto fail = [&](FailureReason reason) {
    rep.branch = PipelineBranch::Failure;
    rep.failure_reason = reason;
    rep.stats.work_used = budget.used;
    return rep;
  };

  if (src.n1 < p.m || src.n2 < p.m || p.tuple_len < p.m || p.tuple_len > src.n1 ||
      p.s2_target < p.m || p.s2_target > src.n2)
    return fail(FailureReason::PreconditionUnmet);
  if (p.mode == PipelineMode::Strict &&
      (BigInt(p.n1) < 25 * big_pow(BigInt(p.m), 9) ||
       BigInt(p.n2) < 2 * binomial(BigInt(p.n1), p.m) * p.m * p.m))
    return fail(FailureReason::PreconditionUnmet);

  try {
    auto scan = detail::pigeonhole_scan(src, p.m, p.pigeonhole_quota, budget, p.threads);
    rep.stats.scanned_bs = scan.scanned;
    rep.stats.t_size = scan.t_size;
    rep.stats.distinct_msets = scan.distinct_msets;
    if (scan.hit) {
      std::vector<ColorId> colors;
      for (const auto& [b, color] : scan.hit->hits) colors.push_back(color);
      auto chosen = find_canonical_singleton_set(colors, p.m);
      if (!chosen) throw std::logic_error("run_pipeline: quota hit without singleton set");
      Witness w;
      w.left = scan.hit->mset;
      for (std::size_t i : chosen->indices) w.right.push_back(scan.hit->hits[i].first);
      w.pattern = chosen->kind == SingletonKind::Constant ? CanonicalPattern::Monochromatic
                                                          : CanonicalPattern::RightColored;
      if (!verify_witness(src, w))
        throw std::logic_error("run_pipeline: pigeonhole witness failed verification");
      rep.branch = PipelineBranch::Pigeonhole;
      rep.witness = std::move(w);
      rep.stats.work_used = budget.used;
      return rep;
    }

    rep.stats.candidates = scan.candidates.size();
    if (scan.candidates.empty()) return fail(FailureReason::PreconditionUnmet);
    auto core = detail::sample_rainbow_core_impl(src, scan.candidates, p, budget);
    rep.stats.sampling_attempts = core.attempts;
    rep.stats.rainbow_counts = core.rainbow_counts;
    if (!core.ok) return fail(FailureReason::SamplingExhausted);

    const RootScalar& tau = p.popularity_threshold;
    if (auto v = tau.exact_value())
      rep.stats.tau = decimal_floor_string(*v, denominator(*v) == 1 ? 0 : 6);
    else {
      auto enc = tau.enclosure(64);
      rep.stats.tau = decimal_floor_string((enc.lo + enc.hi) / 2, 6);
    }
    budget.charge("popularity_split", BigInt(core.s1.size()) * core.s2.size());
    auto split = popularity_split(src, core.s1, core.s2, tau);
    rep.stats.m1_size = split.m1.size();
    rep.stats.m1_prime_size = split.m1_prime.size();

    std::uint64_t cutoff_4m4 = 4 * p.m * p.m * p.m * p.m;
    std::uint64_t cutoff = p.mode == PipelineMode::Strict
                               ? cutoff_4m4
                               : std::max<std::uint64_t>(p.m, core.s1.size() - p.m);
    if (split.m1.size() >= cutoff) {
      auto m1_used = split.m1;
      if (p.mode == PipelineMode::Strict) m1_used.resize(cutoff_4m4);
      OracleLimits limits{budget.remaining(), p.threads};
      auto c1 = case1(src, m1_used, core.s2, p.m, limits);
      rep.stats.case1_edges = c1.edges_kept;
      if (!c1.witness) return fail(FailureReason::KstExtractionFailed);
      rep.branch = PipelineBranch::Case1;
      rep.witness = std::move(c1.witness);
    } else {
      if (split.m1_prime.size() < p.m) return fail(FailureReason::PreconditionUnmet);
      std::vector<Vertex> m1_prime(split.m1_prime.begin(), split.m1_prime.begin() + p.m);
      budget.charge("case2_max_rainbow", BigInt(core.s2.size()) * p.m);
      auto c2 = case2_max_rainbow(src, m1_prime, core.s2);
      rep.stats.x_size = c2.x.size();
      if (!c2.witness) return fail(FailureReason::PreconditionUnmet);
      rep.branch = PipelineBranch::Case2;
      rep.witness = std::move(c2.witness);
    }
    rep.stats.work_used = budget.used;
    return rep;
  } catch (const SizeError&) {
    return fail(FailureReason::WorkCap);
  }
}

}  // namespace canon
