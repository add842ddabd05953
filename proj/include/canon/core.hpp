#pragma once
// Domain types for canonical colored bicliques: grids, the four canonical
// patterns of a colored K_{m,m}, pattern classification, and witnesses.
//
// Colors are opaque labels: only equality between them ever carries meaning.
// Where the code orders colors (tie-breaks, group maps) that ordering is
// mechanical determinism, never semantics.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace canon {

using ColorId = std::uint64_t;
using Vertex = std::uint64_t;
using json = nlohmann::json;

// The four unavoidable colorings of K_{m,m}:
//   Monochromatic — one color everywhere;
//   LeftColored   — each left vertex's row is constant, rows pairwise distinct;
//   RightColored  — transpose of LeftColored;
//   Rainbow       — all m*m entries pairwise distinct.
enum class CanonicalPattern : unsigned { Monochromatic = 0, LeftColored, RightColored, Rainbow };

inline constexpr std::array<CanonicalPattern, 4> kAllPatterns = {
    CanonicalPattern::Monochromatic, CanonicalPattern::LeftColored,
    CanonicalPattern::RightColored, CanonicalPattern::Rainbow};

inline const char* pattern_name(CanonicalPattern p) {
  switch (p) {
    case CanonicalPattern::Monochromatic: return "monochromatic";
    case CanonicalPattern::LeftColored: return "left";
    case CanonicalPattern::RightColored: return "right";
    case CanonicalPattern::Rainbow: return "rainbow";
  }
  throw std::invalid_argument("pattern_name: bad enum value");
}

inline std::optional<CanonicalPattern> pattern_from_name(std::string_view s) {
  for (CanonicalPattern p : kAllPatterns)
    if (s == pattern_name(p)) return p;
  return std::nullopt;
}

class PatternSet {
 public:
  PatternSet() = default;
  static PatternSet all() {
    PatternSet s;
    s.bits_ = 0b1111;
    return s;
  }
  static PatternSet of(std::initializer_list<CanonicalPattern> ps) {
    PatternSet s;
    for (auto p : ps) s.insert(p);
    return s;
  }
  void insert(CanonicalPattern p) { bits_ |= 1u << static_cast<unsigned>(p); }
  bool contains(CanonicalPattern p) const { return bits_ & (1u << static_cast<unsigned>(p)); }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const {
    std::size_t n = 0;
    for (auto p : kAllPatterns) n += contains(p);
    return n;
  }
  std::vector<CanonicalPattern> to_list() const {  // enum order
    std::vector<CanonicalPattern> out;
    for (auto p : kAllPatterns)
      if (contains(p)) out.push_back(p);
    return out;
  }
  friend bool operator==(PatternSet a, PatternSet b) = default;

 private:
  unsigned bits_ = 0;
};

// Row-major color matrix.
struct Grid {
  std::size_t rows = 0, cols = 0;
  std::vector<ColorId> colors;  // rows * cols entries

  ColorId at(std::size_t r, std::size_t c) const { return colors[r * cols + c]; }
  ColorId& at(std::size_t r, std::size_t c) { return colors[r * cols + c]; }

  static Grid of(const std::vector<std::vector<ColorId>>& rows_in) {
    Grid g;
    g.rows = rows_in.size();
    g.cols = g.rows ? rows_in[0].size() : 0;
    for (const auto& row : rows_in) {
      if (row.size() != g.cols) throw std::invalid_argument("Grid::of: ragged rows");
      g.colors.insert(g.colors.end(), row.begin(), row.end());
    }
    return g;
  }
};

namespace detail {

inline bool all_entries_equal(const Grid& g) {
  for (ColorId c : g.colors)
    if (c != g.colors[0]) return false;
  return true;
}

// rows constant + the m row-colors pairwise distinct
inline bool rows_constant_distinct(const Grid& g) {
  std::vector<ColorId> row_colors(g.rows);
  for (std::size_t r = 0; r < g.rows; ++r) {
    ColorId c0 = g.at(r, 0);
    for (std::size_t c = 1; c < g.cols; ++c)
      if (g.at(r, c) != c0) return false;
    row_colors[r] = c0;
  }
  std::sort(row_colors.begin(), row_colors.end());
  return std::adjacent_find(row_colors.begin(), row_colors.end()) == row_colors.end();
}

inline Grid transpose(const Grid& g) {
  Grid t;
  t.rows = g.cols;
  t.cols = g.rows;
  t.colors.resize(g.colors.size());
  for (std::size_t r = 0; r < g.rows; ++r)
    for (std::size_t c = 0; c < g.cols; ++c) t.at(c, r) = g.at(r, c);
  return t;
}

inline bool all_entries_distinct(const Grid& g) {
  std::vector<ColorId> v = g.colors;
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

}  // namespace detail

// Which canonical patterns a square grid realizes. For m >= 2 at most one
// pattern can hold; for m = 1 all four hold. Non-square input is a usage
// error, not a classification result.
inline PatternSet classify_grid(const Grid& g) {
  if (g.rows == 0 || g.rows != g.cols)
    throw std::invalid_argument("classify_grid: grid must be square and nonempty");
  PatternSet out;
  if (detail::all_entries_equal(g)) out.insert(CanonicalPattern::Monochromatic);
  if (detail::rows_constant_distinct(g)) out.insert(CanonicalPattern::LeftColored);
  if (detail::rows_constant_distinct(detail::transpose(g))) out.insert(CanonicalPattern::RightColored);
  if (detail::all_entries_distinct(g)) out.insert(CanonicalPattern::Rainbow);
  return out;
}

// One-sided analogue used by the pigeonhole arguments: a color list is
// Constant (all equal), Injective (pairwise distinct), Both (singleton
// list), or Neither.
enum class SingletonClass : unsigned { Constant, Injective, Both, Neither };

inline SingletonClass classify_singletons(const std::vector<ColorId>& colors) {
  if (colors.empty()) throw std::invalid_argument("classify_singletons: empty list");
  bool constant = std::all_of(colors.begin(), colors.end(),
                              [&](ColorId c) { return c == colors[0]; });
  std::vector<ColorId> v = colors;
  std::sort(v.begin(), v.end());
  bool injective = std::adjacent_find(v.begin(), v.end()) == v.end();
  if (constant && injective) return SingletonClass::Both;
  if (constant) return SingletonClass::Constant;
  if (injective) return SingletonClass::Injective;
  return SingletonClass::Neither;
}

// A coloring of the complete bipartite graph K_{n1,n2}, accessed one edge at
// a time. `query` must be pure: same (a, b) -> same color, always.
// `descriptor` round-trips how the coloring arose (a generator spec, or
// "dense" for explicit matrices).
struct ColoringSource {
  Vertex n1 = 0, n2 = 0;
  std::function<ColorId(Vertex, Vertex)> query;
  json descriptor;
};

// Induced grid on A x B. Both lists must hold distinct in-range vertices;
// order is preserved (callers pass sorted lists unless they mean otherwise).
inline Grid restrict_to(const ColoringSource& src, const std::vector<Vertex>& A,
                        const std::vector<Vertex>& B) {
  auto check = [](const std::vector<Vertex>& s, Vertex n, const char* side) {
    std::vector<Vertex> v = s;
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      throw std::invalid_argument(std::string("restrict_to: duplicate vertex on ") + side);
    if (!v.empty() && v.back() >= n)
      throw std::out_of_range(std::string("restrict_to: vertex out of range on ") + side);
  };
  check(A, src.n1, "left");
  check(B, src.n2, "right");
  Grid g;
  g.rows = A.size();
  g.cols = B.size();
  g.colors.resize(g.rows * g.cols);
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j) g.at(i, j) = src.query(A[i], B[j]);
  return g;
}

// A claimed canonical K_{m,m}: sorted vertex sets plus the pattern they
// realize. Checked, never trusted.
struct Witness {
  std::vector<Vertex> left, right;  // strictly increasing, equal size >= 1
  CanonicalPattern pattern = CanonicalPattern::Monochromatic;
};

inline void validate_witness_shape(const Witness& w, Vertex n1, Vertex n2) {
  auto ok = [](const std::vector<Vertex>& v, Vertex n) {
    if (v.empty() || v.back() >= n) return false;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i - 1] >= v[i]) return false;
    return true;
  };
  if (w.left.size() != w.right.size() || !ok(w.left, n1) || !ok(w.right, n2))
    throw std::invalid_argument("witness: sets must be equal-size, sorted, in range");
}

// True iff the witness's own pattern claim holds on the induced grid.
// Shape violations throw; they are usage errors, not refutations.
inline bool verify_witness(const ColoringSource& src, const Witness& w) {
  validate_witness_shape(w, src.n1, src.n2);
  return classify_grid(restrict_to(src, w.left, w.right)).contains(w.pattern);
}

inline json witness_to_json(const Witness& w) {
  return json{{"pattern", pattern_name(w.pattern)}, {"left", w.left}, {"right", w.right}};
}

inline Witness witness_from_json(const json& j) {
  Witness w;
  auto p = pattern_from_name(j.at("pattern").get<std::string>());
  if (!p) throw std::invalid_argument("witness: unknown pattern name");
  w.pattern = *p;
  w.left = j.at("left").get<std::vector<Vertex>>();
  w.right = j.at("right").get<std::vector<Vertex>>();
  return w;
}

}  // namespace canon
