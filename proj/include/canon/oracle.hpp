#pragma once
// Ground truth by exhaustion: find or count canonical K_{m,m} copies, solve
// the canonical pigeonhole problem on color lists, and certify ER_1(m).
//
// Search order is pinned everywhere: left subsets in colex order, and for
// each left subset the colex-least right subset per pattern. Witnesses tie
// on identical right sets only when m = 1 (all four patterns hold); the
// pattern enum order breaks that tie. Results never depend on thread count.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <canon/bigint.hpp>
#include <canon/core.hpp>
#include <canon/errors.hpp>
#include <canon/parallel.hpp>

namespace canon {

struct OracleLimits {
  std::uint64_t work_cap = 1000000000;  // enumeration-pair budget
  int threads = 0;                      // 0 = machine parallelism
};

struct PatternCounts {
  std::uint64_t monochromatic = 0, left = 0, right = 0, rainbow = 0;

  json to_json() const {
    return json{{"monochromatic", monochromatic}, {"left", left}, {"right", right},
                {"rainbow", rainbow}};
  }
};

namespace colex {

// subsets of {0..n-1} sized m, ordered by their largest differing element
inline std::vector<Vertex> unrank(BigInt rank, std::uint64_t m) {
  std::vector<Vertex> out(m);
  for (std::uint64_t i = m; i >= 1; --i) {
    // largest c with C(c, i) <= rank; c >= i-1
    Vertex lo = Vertex(i - 1), hi = lo;
    while (binomial(BigInt(hi) + 1, i) <= rank) hi = hi * 2 + 1;
    while (lo < hi) {  // binary search on the monotone predicate
      Vertex mid = lo + (hi - lo + 1) / 2;
      if (binomial(BigInt(mid), i) <= rank)
        lo = mid;
      else
        hi = mid - 1;
    }
    out[i - 1] = lo;
    rank -= binomial(BigInt(lo), i);
  }
  return out;
}

// in-place successor; n bounds the universe
inline bool next_subset(std::vector<Vertex>& a, Vertex n) {
  const std::size_t m = a.size();
  for (std::size_t i = 0; i < m; ++i) {
    Vertex ceiling = (i + 1 < m) ? a[i + 1] : n;
    if (a[i] + 1 < ceiling) {
      ++a[i];
      for (std::size_t j = 0; j < i; ++j) a[j] = Vertex(j);
      return true;
    }
  }
  return false;
}

inline bool less(const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
  for (std::size_t i = x.size(); i-- > 0;)
    if (x[i] != y[i]) return x[i] < y[i];
  return false;
}

}  // namespace colex

namespace detail {

struct BCandidate {
  std::vector<Vertex> b_set;
  CanonicalPattern pattern;
};

// (colex B, then pattern enum order) — the global witness order for fixed A
inline bool candidate_less(const BCandidate& x, const BCandidate& y) {
  if (x.b_set != y.b_set) return colex::less(x.b_set, y.b_set);
  return static_cast<unsigned>(x.pattern) < static_cast<unsigned>(y.pattern);
}

inline bool signature_injective(const std::vector<ColorId>& sig) {
  for (std::size_t i = 0; i < sig.size(); ++i)
    for (std::size_t j = i + 1; j < sig.size(); ++j)
      if (sig[i] == sig[j]) return false;
  return true;
}

// colex-first m-subset of `cols` whose color sets are pairwise disjoint
// (columns are internally injective already). Chooses the largest element
// first, scanning positions in ascending order.
inline bool rainbow_dfs(const std::vector<std::vector<ColorId>>& col_colors, std::size_t need,
                        std::size_t limit, std::set<ColorId>& used,
                        std::vector<std::size_t>& picked) {
  if (need == 0) return true;
  for (std::size_t p = need - 1; p < limit; ++p) {
    const auto& cols = col_colors[p];
    bool clash = false;
    for (ColorId c : cols)
      if (used.count(c)) {
        clash = true;
        break;
      }
    if (clash) continue;
    for (ColorId c : cols) used.insert(c);
    picked.push_back(p);
    if (rainbow_dfs(col_colors, need - 1, p, used, picked)) return true;
    picked.pop_back();
    for (ColorId c : cols) used.erase(c);
  }
  return false;
}

// The colex-least valid B for this A per allowed pattern, then the least
// candidate overall.
inline std::optional<BCandidate> best_b_for(const ColoringSource& src,
                                            const std::vector<Vertex>& A, PatternSet allow,
                                            std::uint64_t m) {
  const bool want_mono = allow.contains(CanonicalPattern::Monochromatic);
  const bool want_left = allow.contains(CanonicalPattern::LeftColored);
  const bool want_right = allow.contains(CanonicalPattern::RightColored);
  const bool want_rain = allow.contains(CanonicalPattern::Rainbow);

  std::map<ColorId, std::vector<Vertex>> constant_cols;       // color -> ascending b's
  std::map<std::vector<ColorId>, std::vector<Vertex>> left_groups;  // injective sig -> b's
  std::vector<std::vector<ColorId>> rainbow_sigs;             // column color lists
  std::vector<Vertex> rainbow_cols;

  std::vector<ColorId> sig(m);
  for (Vertex b = 0; b < src.n2; ++b) {
    for (std::uint64_t j = 0; j < m; ++j) sig[j] = src.query(A[j], b);
    bool constant = std::all_of(sig.begin(), sig.end(), [&](ColorId c) { return c == sig[0]; });
    if (constant && (want_mono || want_right)) constant_cols[sig[0]].push_back(b);
    if ((want_left || want_rain) && (m == 1 || !constant) && signature_injective(sig)) {
      if (want_left) left_groups[sig].push_back(b);
      if (want_rain) {
        rainbow_sigs.push_back(sig);
        rainbow_cols.push_back(b);
      }
    }
  }

  std::optional<BCandidate> best;
  auto offer = [&](BCandidate cand) {
    if (!best || candidate_less(cand, *best)) best = std::move(cand);
  };

  if (want_mono)
    for (const auto& [color, bs] : constant_cols)
      if (bs.size() >= m)
        offer({{bs.begin(), bs.begin() + m}, CanonicalPattern::Monochromatic});

  if (want_right && constant_cols.size() >= m) {
    // per color take its least column, then the m least of those: any valid
    // right-colored B can be columnwise exchanged down to exactly this set
    std::vector<Vertex> firsts;
    for (const auto& [color, bs] : constant_cols) firsts.push_back(bs.front());
    std::sort(firsts.begin(), firsts.end());
    offer({{firsts.begin(), firsts.begin() + m}, CanonicalPattern::RightColored});
  }

  if (want_left)
    for (const auto& [s, bs] : left_groups)
      if (bs.size() >= m)
        offer({{bs.begin(), bs.begin() + m}, CanonicalPattern::LeftColored});

  if (want_rain && rainbow_cols.size() >= m) {
    std::set<ColorId> used;
    std::vector<std::size_t> picked;
    if (rainbow_dfs(rainbow_sigs, m, rainbow_sigs.size(), used, picked)) {
      std::vector<Vertex> bs;
      for (std::size_t p : picked) bs.push_back(rainbow_cols[p]);
      std::sort(bs.begin(), bs.end());
      offer({std::move(bs), CanonicalPattern::Rainbow});
    }
  }
  return best;
}

inline void check_find_preconditions(const ColoringSource& src, std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (m > src.n1 || m > src.n2)
    throw std::invalid_argument("m must be <= min(n1, n2)");
}

}  // namespace detail

// Lexicographically first witness by (A, then B) in colex order whose
// pattern is allowed; absent when no allowed pattern occurs. The work cap
// bounds the full enumeration size C(n1,m)*C(n2,m) up front.
inline std::optional<Witness> find_canonical_biclique(const ColoringSource& src, std::uint64_t m,
                                                      PatternSet allow = PatternSet::all(),
                                                      const OracleLimits& limits = {}) {
  detail::check_find_preconditions(src, m);
  if (allow.empty()) return std::nullopt;
  BigInt pairs = binomial(BigInt(src.n1), m) * binomial(BigInt(src.n2), m);
  if (pairs > limits.work_cap)
    throw SizeError("find_canonical_biclique", pairs.str(), limits.work_cap);

  const std::uint64_t a_total = binomial(BigInt(src.n1), m).convert_to<std::uint64_t>();
  const std::uint64_t chunk = 256;  // fixed: reductions must not depend on threads
  const std::size_t chunk_count = std::size_t((a_total + chunk - 1) / chunk);

  auto run_chunk = [&](std::size_t c) -> ChunkOutcome<Witness> {
    std::uint64_t start = std::uint64_t(c) * chunk;
    std::uint64_t end = std::min(a_total, start + chunk);
    std::vector<Vertex> A = colex::unrank(start, m);
    for (std::uint64_t r = start; r < end; ++r) {
      auto cand = detail::best_b_for(src, A, allow, m);
      if (cand) {
        Witness w{A, cand->b_set, cand->pattern};
        return {r - start + 1, std::move(w)};
      }
      if (r + 1 < end) colex::next_subset(A, Vertex(src.n1));
    }
    return {end - start, std::nullopt};
  };

  auto hit = search_chunks<Witness>(chunk_count, resolve_threads(limits.threads),
                                    std::numeric_limits<std::uint64_t>::max(),
                                    "find_canonical_biclique", run_chunk);
  if (hit && !verify_witness(src, *hit))
    throw std::logic_error("find_canonical_biclique: produced witness failed verification");
  return hit;
}

// Exact per-pattern counts over all C(n1,m)*C(n2,m) sub-bicliques; plain
// full enumeration (the declared fallback), parallel over left subsets.
inline PatternCounts count_canonical_bicliques(const ColoringSource& src, std::uint64_t m,
                                               const OracleLimits& limits = {}) {
  detail::check_find_preconditions(src, m);
  BigInt pairs = binomial(BigInt(src.n1), m) * binomial(BigInt(src.n2), m);
  if (pairs > limits.work_cap)
    throw SizeError("count_canonical_bicliques", pairs.str(), limits.work_cap);

  const std::uint64_t a_total = binomial(BigInt(src.n1), m).convert_to<std::uint64_t>();
  const std::uint64_t chunk = 256;
  const std::size_t chunk_count = std::size_t((a_total + chunk - 1) / chunk);

  auto run_chunk = [&](std::size_t c) -> PatternCounts {
    std::uint64_t start = std::uint64_t(c) * chunk;
    std::uint64_t end = std::min(a_total, start + chunk);
    PatternCounts tally;
    std::vector<Vertex> A = colex::unrank(start, m);
    std::vector<ColorId> sigs;  // n2 x m column cache for the current A
    Grid g;
    g.rows = g.cols = m;
    g.colors.resize(m * m);
    for (std::uint64_t r = start; r < end; ++r) {
      sigs.resize(std::size_t(src.n2) * m);
      for (Vertex b = 0; b < src.n2; ++b)
        for (std::uint64_t j = 0; j < m; ++j) sigs[std::size_t(b) * m + j] = src.query(A[j], b);
      std::vector<Vertex> B(m);
      for (std::uint64_t j = 0; j < m; ++j) B[j] = Vertex(j);
      while (true) {
        for (std::uint64_t i = 0; i < m; ++i)
          for (std::uint64_t j = 0; j < m; ++j) g.at(i, j) = sigs[std::size_t(B[j]) * m + i];
        PatternSet got = classify_grid(g);
        tally.monochromatic += got.contains(CanonicalPattern::Monochromatic);
        tally.left += got.contains(CanonicalPattern::LeftColored);
        tally.right += got.contains(CanonicalPattern::RightColored);
        tally.rainbow += got.contains(CanonicalPattern::Rainbow);
        if (!colex::next_subset(B, Vertex(src.n2))) break;
      }
      if (r + 1 < end) colex::next_subset(A, Vertex(src.n1));
    }
    return tally;
  };

  PatternCounts total;
  for (const PatternCounts& part :
       map_chunks<PatternCounts>(chunk_count, resolve_threads(limits.threads), run_chunk)) {
    total.monochromatic += part.monochromatic;
    total.left += part.left;
    total.right += part.right;
    total.rainbow += part.rainbow;
  }
  return total;
}

enum class SingletonKind : unsigned { Constant, Injective };

struct SingletonSet {
  std::vector<std::size_t> indices;  // ascending
  SingletonKind kind = SingletonKind::Constant;
};

// Constant: the m least indices of the earliest-appearing color class with
// >= m members. Injective: the first occurrence of each of the first m
// distinct colors. Constant wins when both exist.
inline std::optional<SingletonSet> find_canonical_singleton_set(
    const std::vector<ColorId>& colors, std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("find_canonical_singleton_set: m must be >= 1");
  std::map<ColorId, std::vector<std::size_t>> classes;
  std::vector<ColorId> appearance;  // colors in first-appearance order
  for (std::size_t i = 0; i < colors.size(); ++i) {
    auto [it, fresh] = classes.try_emplace(colors[i]);
    if (fresh) appearance.push_back(colors[i]);
    it->second.push_back(i);
  }
  for (ColorId c : appearance) {
    const auto& idx = classes[c];
    if (idx.size() >= m)
      return SingletonSet{{idx.begin(), idx.begin() + m}, SingletonKind::Constant};
  }
  if (appearance.size() >= m) {
    std::vector<std::size_t> firsts;
    for (std::uint64_t k = 0; k < m; ++k) firsts.push_back(classes[appearance[k]].front());
    return SingletonSet{std::move(firsts), SingletonKind::Injective};
  }
  return std::nullopt;
}

struct Er1Report {
  std::uint64_t m = 0;
  bool lower_certified = false, upper_certified = false;
  std::string method;

  json to_json() const {
    return json{{"m", m}, {"lower_certified", lower_certified},
                {"upper_certified", upper_certified}, {"method", method}};
  }
};

namespace detail {

// multisets of class sizes with every part <= m-1 and at most m-1 parts;
// returns (count, max total). Enumeration is the certificate, so no closed
// form is used. Node budget keeps adversarial m from wedging the process.
inline void profile_walk(std::uint64_t max_part, std::uint64_t parts_left, std::uint64_t total,
                         std::uint64_t& count, std::uint64_t& best, std::uint64_t& nodes) {
  if (++nodes > 10000000)
    throw SizeError("er1 profile enumeration", ">10000000", 10000000);
  best = std::max(best, total);
  ++count;  // the profile ending here (possibly the empty one)
  if (parts_left == 0) return;
  for (std::uint64_t part = 1; part <= max_part; ++part)
    profile_walk(part, parts_left - 1, total + part, count, best, nodes);
}

// restricted-growth strings enumerate set partitions of [n]: rgs[0] = 0 and
// rgs[i] <= 1 + max(prefix)
template <class Fn>
void for_each_partition(std::size_t n, Fn&& fn) {
  std::vector<ColorId> rgs(n, 0);
  while (true) {
    fn(rgs);
    bool advanced = false;
    for (std::size_t i = n; i-- > 1;) {
      ColorId maxprefix = 0;
      for (std::size_t j = 0; j < i; ++j) maxprefix = std::max(maxprefix, rgs[j]);
      if (rgs[i] <= maxprefix) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), ColorId(0));
        advanced = true;
        break;
      }
    }
    if (!advanced) return;
  }
}

}  // namespace detail

// Certify ER_1(m) = (m-1)^2 + 1 from both sides. The profile bound alone
// certifies the upper direction; for small m the set-partition exhaustion
// re-certifies it point by point.
inline Er1Report er1_verify(std::uint64_t m, std::uint64_t exhaustive_up_to = 4) {
  if (m < 2) throw std::invalid_argument("er1_verify: m must be >= 2");
  Er1Report rep;
  rep.m = m;

  // lower bound side: the extremal coloring has no good m-subset
  std::vector<ColorId> extremal((m - 1) * (m - 1));
  for (std::size_t i = 0; i < extremal.size(); ++i) extremal[i] = ColorId(i / (m - 1));
  rep.lower_certified = !find_canonical_singleton_set(extremal, m).has_value();

  // upper bound side, profile form: any coloring of (m-1)^2 + 1 points with
  // no class of size m and fewer than m classes fits a profile enumerated
  // here; the maximum mass of such profiles is (m-1)^2, one point short
  std::uint64_t profiles = 0, best_total = 0, nodes = 0;
  detail::profile_walk(m - 1, m - 1, 0, profiles, best_total, nodes);
  rep.upper_certified = best_total == (m - 1) * (m - 1) && best_total < (m - 1) * (m - 1) + 1;

  if (m <= exhaustive_up_to) {
    const std::size_t n = std::size_t((m - 1) * (m - 1) + 1);
    std::uint64_t count = 0;
    bool all_have = true;
    detail::for_each_partition(n, [&](const std::vector<ColorId>& rgs) {
      ++count;
      if (!find_canonical_singleton_set(rgs, m)) all_have = false;
    });
    rep.upper_certified = rep.upper_certified && all_have;
    rep.method = "set-partition exhaustion (" + std::to_string(count) + " partitions) + profile bound";
  } else {
    rep.method = "profile bound";
  }
  return rep;
}

}  // namespace canon
