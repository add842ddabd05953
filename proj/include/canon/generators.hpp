#pragma once
// Coloring sources: dense matrices, seeded procedural families, and the
// named adversarial families the search pipeline is exercised against, plus
// file ingest/emit (JSON and CSV).
//
// Every procedural family derives colors in counter mode — a pure hash of
// (seed, a, b) — so queries are random-access, reproducible from the spec
// alone, and indifferent to evaluation order.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <canon/bigint.hpp>
#include <canon/core.hpp>
#include <canon/errors.hpp>
#include <canon/rng.hpp>

namespace canon {

struct ColoringSpec {
  std::string family;
  Vertex n1 = 0, n2 = 0;
  std::uint64_t seed = 0;
  json params = json::object();
};

inline json spec_to_json(const ColoringSpec& s) {
  return json{{"family", s.family}, {"n1", s.n1}, {"n2", s.n2}, {"seed", s.seed},
              {"params", s.params}};
}

inline ColoringSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec: expected a JSON object");
  ColoringSpec s;
  s.family = j.at("family").get<std::string>();
  s.n1 = j.at("n1").get<Vertex>();
  s.n2 = j.at("n2").get<Vertex>();
  s.seed = j.value("seed", std::uint64_t{0});
  s.params = j.value("params", json::object());
  return s;
}

inline ColoringSource source_from_grid(Grid g) {
  ColoringSource src;
  src.n1 = g.rows;
  src.n2 = g.cols;
  auto shared = std::make_shared<Grid>(std::move(g));
  src.query = [shared](Vertex a, Vertex b) { return shared->at(a, b); };
  src.descriptor = "dense";
  return src;
}

namespace detail {

inline void reject_unknown_params(const json& params, std::initializer_list<const char*> allowed,
                                  const std::string& family) {
  for (auto it = params.begin(); it != params.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known)
      throw std::invalid_argument("family " + family + ": unknown param \"" + it.key() + "\"");
  }
}

inline std::uint64_t as_uint(const json& v, const std::string& what) {
  // json int literals land as signed; accept any non-negative integer
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return std::uint64_t(v.get<std::int64_t>());
  throw std::invalid_argument(what + " must be a non-negative integer");
}

inline std::uint64_t uint_param(const json& params, const char* key, std::uint64_t fallback,
                                bool required = false) {
  if (!params.contains(key)) {
    if (required) throw std::invalid_argument(std::string("missing param \"") + key + "\"");
    return fallback;
  }
  return as_uint(params.at(key), std::string("param \"") + key + "\"");
}

// sorted, distinct, in-range position list; fallback = 0..m-1
inline std::vector<Vertex> positions_param(const json& params, const char* key, std::uint64_t m,
                                           Vertex n) {
  std::vector<Vertex> out;
  if (params.contains(key)) {
    const json& v = params.at(key);
    if (!v.is_array() || v.size() != m)
      throw std::invalid_argument(std::string("param \"") + key + "\" must be an array of size m");
    for (const auto& e : v) out.push_back(as_uint(e, "position"));
  } else {
    for (std::uint64_t i = 0; i < m; ++i) out.push_back(i);
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i - 1] >= out[i])
      throw std::invalid_argument(std::string("param \"") + key +
                                  "\" must be strictly increasing");
  if (!out.empty() && out.back() >= n)
    throw std::invalid_argument(std::string("param \"") + key + "\" out of range");
  return out;
}

}  // namespace detail

inline ColoringSource instantiate(const ColoringSpec& spec);

namespace detail {

inline ColoringSource make_planted(const ColoringSpec& spec) {
  reject_unknown_params(spec.params, {"base", "pattern", "m", "left", "right", "color0"},
                        spec.family);
  if (!spec.params.contains("base"))
    throw std::invalid_argument("planted: missing param \"base\"");
  ColoringSpec base_spec = spec_from_json(spec.params.at("base"));
  if (base_spec.n1 != spec.n1 || base_spec.n2 != spec.n2)
    throw std::invalid_argument("planted: base dimensions must match");
  ColoringSource base = instantiate(base_spec);

  if (!spec.params.contains("pattern") || !spec.params.at("pattern").is_string())
    throw std::invalid_argument("planted: missing or non-string \"pattern\"");
  auto pat = pattern_from_name(spec.params.at("pattern").get<std::string>());
  if (!pat) throw std::invalid_argument("planted: unknown \"pattern\"");
  std::uint64_t m = uint_param(spec.params, "m", 0, /*required=*/true);
  if (m < 1 || m > spec.n1 || m > spec.n2)
    throw std::invalid_argument("planted: m must satisfy 1 <= m <= min(n1,n2)");
  std::vector<Vertex> left = positions_param(spec.params, "left", m, spec.n1);
  std::vector<Vertex> right = positions_param(spec.params, "right", m, spec.n2);
  ColorId color0 = uint_param(spec.params, "color0", 1000000000);
  CanonicalPattern p = *pat;

  ColoringSource src;
  src.n1 = spec.n1;
  src.n2 = spec.n2;
  src.descriptor = spec_to_json(spec);
  src.query = [base_q = base.query, left, right, color0, p, m](Vertex a, Vertex b) -> ColorId {
    auto ia = std::lower_bound(left.begin(), left.end(), a);
    auto ib = std::lower_bound(right.begin(), right.end(), b);
    if (ia == left.end() || *ia != a || ib == right.end() || *ib != b) return base_q(a, b);
    std::uint64_t i = std::uint64_t(ia - left.begin());
    std::uint64_t j = std::uint64_t(ib - right.begin());
    switch (p) {
      case CanonicalPattern::Monochromatic: return color0;
      case CanonicalPattern::LeftColored: return color0 + i;
      case CanonicalPattern::RightColored: return color0 + j;
      case CanonicalPattern::Rainbow: return color0 + i * m + j;
    }
    throw std::logic_error("planted: bad pattern");
  };
  return src;
}

}  // namespace detail

// Family registry:
//   monochromatic(c)           constant color c (default 0)
//   left_lexical               color(a,b) = a
//   right_lexical              color(a,b) = b
//   rainbow                    color(a,b) = a*n2 + b, all edges distinct
//   uniform_random(q, seed)    color(a,b) = prf(seed,a,b) mod q
//   block(r, s)                color = pair_encode(a/r, b/s); s defaults to r
//   per_vertex_rainbow(seed, palette, classes)
//       every b colors the left side injectively; palette "disjoint" gives
//       each b its own label space, palette "shared" draws each b's label
//       offset from `classes` (default 4) pooled values so popular colors
//       appear
//   planted(base, pattern, m, left, right, color0)
//       overwrite an m x m sub-grid of `base` with a canonical pattern at
//       the given (default lexicographically first) positions
inline ColoringSource instantiate(const ColoringSpec& spec) {
  if (spec.n1 < 1 || spec.n2 < 1) throw std::invalid_argument("spec: n1, n2 must be >= 1");
  ColoringSource src;
  src.n1 = spec.n1;
  src.n2 = spec.n2;
  src.descriptor = spec_to_json(spec);
  const Vertex n1 = spec.n1, n2 = spec.n2;
  const std::uint64_t seed = spec.seed;

  if (spec.family == "monochromatic") {
    detail::reject_unknown_params(spec.params, {"c"}, spec.family);
    ColorId c = detail::uint_param(spec.params, "c", 0);
    src.query = [c](Vertex, Vertex) { return c; };
  } else if (spec.family == "left_lexical") {
    detail::reject_unknown_params(spec.params, {}, spec.family);
    src.query = [](Vertex a, Vertex) { return ColorId(a); };
  } else if (spec.family == "right_lexical") {
    detail::reject_unknown_params(spec.params, {}, spec.family);
    src.query = [](Vertex, Vertex b) { return ColorId(b); };
  } else if (spec.family == "rainbow") {
    detail::reject_unknown_params(spec.params, {}, spec.family);
    if (n2 != 0 && n1 > std::numeric_limits<Vertex>::max() / n2)
      throw std::overflow_error("rainbow: n1*n2 exceeds the color label space");
    src.query = [n2](Vertex a, Vertex b) { return ColorId(a * n2 + b); };
  } else if (spec.family == "uniform_random") {
    detail::reject_unknown_params(spec.params, {"q"}, spec.family);
    std::uint64_t q = detail::uint_param(spec.params, "q", 0, /*required=*/true);
    if (q < 1) throw std::invalid_argument("uniform_random: q must be >= 1");
    src.query = [seed, q](Vertex a, Vertex b) { return prf(seed, a, b) % q; };
  } else if (spec.family == "block") {
    detail::reject_unknown_params(spec.params, {"r", "s"}, spec.family);
    std::uint64_t r = detail::uint_param(spec.params, "r", 0, /*required=*/true);
    std::uint64_t s = detail::uint_param(spec.params, "s", r);
    if (r < 1 || r > n1) throw std::invalid_argument("block: need 1 <= r <= n1");
    if (s < 1 || s > n2) throw std::invalid_argument("block: need 1 <= s <= n2");
    src.query = [r, s](Vertex a, Vertex b) { return pair_encode(a / r, b / s); };
  } else if (spec.family == "per_vertex_rainbow") {
    detail::reject_unknown_params(spec.params, {"palette", "classes"}, spec.family);
    std::string palette = spec.params.value("palette", std::string{});
    if (palette == "disjoint") {
      if (spec.params.contains("classes"))
        throw std::invalid_argument("per_vertex_rainbow: \"classes\" applies to shared palettes");
      // column b permutes [n1] by a seeded rotation; labels (b, .) never
      // collide across columns
      src.query = [seed, n1](Vertex a, Vertex b) {
        return pair_encode(b, (a + splitmix_at(seed, b)) % n1);
      };
    } else if (palette == "shared") {
      std::uint64_t classes = detail::uint_param(spec.params, "classes", 4);
      if (classes < 1) throw std::invalid_argument("per_vertex_rainbow: classes must be >= 1");
      // column b shifts its labels by one of `classes` pooled offsets, so a
      // fixed left vertex sees each offset with frequency ~ n2/classes
      src.query = [seed, classes](Vertex a, Vertex b) {
        return pair_encode(a, splitmix_at(seed, b) % classes);
      };
    } else {
      throw std::invalid_argument("per_vertex_rainbow: palette must be \"disjoint\" or \"shared\"");
    }
  } else if (spec.family == "planted") {
    return detail::make_planted(spec);
  } else {
    throw std::invalid_argument("unknown family \"" + spec.family + "\"");
  }
  return src;
}

// Dense n1 x n2 grid of the full source. The cap is on cells, checked
// before any work happens.
inline Grid materialize(const ColoringSource& src, std::uint64_t cell_cap = 100000000) {
  BigInt cells = BigInt(src.n1) * src.n2;
  if (cells > cell_cap) throw SizeError("materialize", cells.str(), cell_cap);
  Grid g;
  g.rows = src.n1;
  g.cols = src.n2;
  g.colors.resize(std::size_t(src.n1 * src.n2));
  for (Vertex a = 0; a < src.n1; ++a)
    for (Vertex b = 0; b < src.n2; ++b) g.at(a, b) = src.query(a, b);
  return g;
}

// The extremal singleton coloring: (m-1)^2 points in m-1 classes of size
// m-1, so no color repeats m times and only m-1 distinct colors exist.
inline std::vector<ColorId> er1_extremal(std::uint64_t m) {
  if (m < 2) throw std::invalid_argument("er1_extremal: m must be >= 2");
  std::vector<ColorId> out((m - 1) * (m - 1));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ColorId(i / (m - 1));
  return out;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col_of_offset(const std::string& text,
                                                              std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Grid grid_from_csv(const std::string& text) {
  Grid g;
  std::vector<std::vector<ColorId>> rows;
  std::size_t line_no = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    std::size_t line_start = i;
    std::size_t end = text.find('\n', i);
    if (end == std::string::npos) end = n;
    if (end == line_start) {
      if (end == n - 1 || end == n) break;  // trailing newline only
      throw ParseError("empty line", line_no, 1);
    }
    std::vector<ColorId> row;
    std::size_t p = line_start;
    while (true) {
      std::size_t col = p - line_start + 1;
      if (p >= end) throw ParseError("expected a number", line_no, col);
      ColorId value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + p, text.data() + end, value);
      if (ec == std::errc::result_out_of_range)
        throw ParseError("color does not fit in 64 bits", line_no, col);
      if (ec != std::errc{} || ptr == text.data() + p) {
        const char* what = (p < end && text[p] == '-') ? "negative color" : "expected a number";
        throw ParseError(what, line_no, col);
      }
      row.push_back(value);
      p = std::size_t(ptr - text.data());
      if (p == end) break;
      if (text[p] != ',')
        throw ParseError("expected ',' or end of line", line_no, p - line_start + 1);
      ++p;
    }
    if (!rows.empty() && row.size() != rows[0].size())
      throw ParseError("ragged row: expected " + std::to_string(rows[0].size()) + " columns",
                       line_no, row.size() < rows[0].size() ? end - line_start + 1 : std::size_t(1));
    rows.push_back(std::move(row));
    i = end + 1;
    ++line_no;
  }
  if (rows.empty()) throw ParseError("empty file", 1, 1);
  return Grid::of(rows);
}

inline Grid grid_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col_of_offset(text, e.byte ? e.byte - 1 : 0);
    throw ParseError(e.what(), line, col);
  }
  if (!j.is_object() || !j.contains("n1") || !j.contains("n2") || !j.contains("colors"))
    throw std::invalid_argument("coloring JSON: need keys n1, n2, colors");
  if (!j["n1"].is_number_unsigned() || !j["n2"].is_number_unsigned())
    throw std::invalid_argument("coloring JSON: n1, n2 must be non-negative integers");
  Vertex n1 = j["n1"].get<Vertex>(), n2 = j["n2"].get<Vertex>();
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("coloring JSON: n1, n2 must be >= 1");
  const json& rows = j["colors"];
  if (!rows.is_array() || rows.size() != n1)
    throw std::invalid_argument("coloring JSON: dimension mismatch (rows)");
  Grid g;
  g.rows = n1;
  g.cols = n2;
  g.colors.reserve(std::size_t(n1 * n2));
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n2)
      throw std::invalid_argument("coloring JSON: dimension mismatch (columns)");
    for (const auto& e : row) {
      if (e.is_number_integer() && !e.is_number_unsigned())
        throw std::invalid_argument("coloring JSON: negative color");
      if (!e.is_number_unsigned())
        throw std::invalid_argument("coloring JSON: colors must be integers in [0, 2^64)");
      g.colors.push_back(e.get<ColorId>());
    }
  }
  return g;
}

}  // namespace detail

inline ColoringSource load_coloring(const std::string& path, const std::string& format) {
  if (format != "json" && format != "csv")
    throw std::invalid_argument("load_coloring: format must be json or csv");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  Grid g = format == "json" ? detail::grid_from_json_text(text) : detail::grid_from_csv(text);
  return source_from_grid(std::move(g));
}

inline std::string coloring_text(const ColoringSource& src, const std::string& format,
                                 std::uint64_t cell_cap = 100000000) {
  if (format != "json" && format != "csv")
    throw std::invalid_argument("coloring_text: format must be json or csv");
  Grid g = materialize(src, cell_cap);
  std::ostringstream out;
  if (format == "json") {
    json rows = json::array();
    for (std::size_t r = 0; r < g.rows; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < g.cols; ++c) row.push_back(g.at(r, c));
      rows.push_back(std::move(row));
    }
    json j{{"colors", std::move(rows)}, {"n1", g.rows}, {"n2", g.cols}};
    out << j.dump() << "\n";
  } else {
    for (std::size_t r = 0; r < g.rows; ++r) {
      for (std::size_t c = 0; c < g.cols; ++c) {
        if (c) out << ',';
        out << g.at(r, c);
      }
      out << '\n';
    }
  }
  return out.str();
}

inline void save_coloring(const ColoringSource& src, const std::string& path,
                          const std::string& format, std::uint64_t cell_cap = 100000000) {
  std::string text = coloring_text(src, format, cell_cap);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace canon
