#pragma once
// Independent reference implementations used only by tests. Everything here
// favors the most literal possible reading over speed: classification is the
// four definitions verbatim with quadratic scans, search/count enumerate all
// subset pairs outright. Production code must agree with these on every
// instance small enough to brute-force.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <canon/core.hpp>

namespace canon::ref {

// Literal definitions, pairwise comparisons only.
inline bool is_mono(const Grid& g) {
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j)
      if (g.at(i, j) != g.at(0, 0)) return false;
  return true;
}

inline bool is_left(const Grid& g) {
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j)
      if (g.at(i, j) != g.at(i, 0)) return false;
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t i2 = i + 1; i2 < g.rows; ++i2)
      if (g.at(i, 0) == g.at(i2, 0)) return false;
  return true;
}

inline bool is_right(const Grid& g) {
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j)
      if (g.at(i, j) != g.at(0, j)) return false;
  for (std::size_t j = 0; j < g.cols; ++j)
    for (std::size_t j2 = j + 1; j2 < g.cols; ++j2)
      if (g.at(0, j) == g.at(0, j2)) return false;
  return true;
}

inline bool is_rainbow(const Grid& g) {
  std::size_t n = g.colors.size();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (g.colors[u] == g.colors[v]) return false;
  return true;
}

inline PatternSet classify(const Grid& g) {
  PatternSet out;
  if (is_mono(g)) out.insert(CanonicalPattern::Monochromatic);
  if (is_left(g)) out.insert(CanonicalPattern::LeftColored);
  if (is_right(g)) out.insert(CanonicalPattern::RightColored);
  if (is_rainbow(g)) out.insert(CanonicalPattern::Rainbow);
  return out;
}

// x before y in colex: compare from the largest element down.
inline bool colex_less(const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] != y[i]) return x[i] < y[i];
  }
  return false;
}

// All m-subsets of {0..n-1}, sorted into colex order after the fact.
inline std::vector<std::vector<Vertex>> subsets_colex(Vertex n, std::uint64_t m) {
  std::vector<std::vector<Vertex>> out;
  if (m > n) return out;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + m, true);
  // iterate all combinations via prev_permutation on the mask
  do {
    std::vector<Vertex> s;
    for (Vertex v = 0; v < n; ++v)
      if (mask[v]) s.push_back(v);
    out.push_back(std::move(s));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

// First witness in colex order over (A, then B); for m = 1 every pair
// realizes all four patterns, broken by enum order among allowed.
inline std::optional<Witness> find_first(const ColoringSource& src, std::uint64_t m,
                                         PatternSet allow = PatternSet::all()) {
  auto as = subsets_colex(src.n1, m);
  auto bs = subsets_colex(src.n2, m);
  for (const auto& A : as)
    for (const auto& B : bs) {
      PatternSet got = classify_grid(restrict_to(src, A, B));
      for (CanonicalPattern p : kAllPatterns)
        if (allow.contains(p) && got.contains(p)) return Witness{A, B, p};
    }
  return std::nullopt;
}

struct Counts {
  std::uint64_t mono = 0, left = 0, right = 0, rainbow = 0;
};

inline Counts count_all(const ColoringSource& src, std::uint64_t m) {
  Counts c;
  auto as = subsets_colex(src.n1, m);
  auto bs = subsets_colex(src.n2, m);
  for (const auto& A : as)
    for (const auto& B : bs) {
      PatternSet got = classify_grid(restrict_to(src, A, B));
      c.mono += got.contains(CanonicalPattern::Monochromatic);
      c.left += got.contains(CanonicalPattern::LeftColored);
      c.right += got.contains(CanonicalPattern::RightColored);
      c.rainbow += got.contains(CanonicalPattern::Rainbow);
    }
  return c;
}

// Constant set: the m smallest indices of the earliest-appearing color class
// with >= m members. Injective set: the first occurrence of each of the
// first m distinct colors. Constant preferred. Quadratic scans on purpose.
struct SingletonHit {
  std::vector<std::size_t> indices;
  bool constant = false;
};

inline std::optional<SingletonHit> find_singleton_set(const std::vector<ColorId>& colors,
                                                      std::uint64_t m) {
  const std::size_t n = colors.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool first_of_class = true;
    for (std::size_t j = 0; j < i; ++j)
      if (colors[j] == colors[i]) first_of_class = false;
    if (!first_of_class) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j)
      if (colors[j] == colors[i]) members.push_back(j);
    if (members.size() >= m)
      return SingletonHit{{members.begin(), members.begin() + m}, true};
  }
  std::vector<std::size_t> firsts;
  for (std::size_t i = 0; i < n && firsts.size() < m; ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j)
      if (colors[j] == colors[i]) seen = true;
    if (!seen) firsts.push_back(i);
  }
  if (firsts.size() == m) return SingletonHit{firsts, false};
  return std::nullopt;
}

}  // namespace canon::ref
