#include <catch2/catch_amalgamated.hpp>
#include <memory>
#include <set>
#include <vector>

#include <canon/core.hpp>

#include "reference.hpp"

using namespace canon;

namespace {

ColoringSource dense(const Grid& g) {
  ColoringSource src;
  src.n1 = g.rows;
  src.n2 = g.cols;
  auto shared = std::make_shared<Grid>(g);
  src.query = [shared](Vertex a, Vertex b) { return shared->at(a, b); };
  src.descriptor = "dense";
  return src;
}

// every base-q grid of shape m x m, for exhaustive cross-checks
template <class Fn>
void for_each_grid(std::size_t m, ColorId q, Fn&& fn) {
  std::size_t cells = m * m;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= q;
  for (std::uint64_t code = 0; code < total; ++code) {
    Grid g;
    g.rows = g.cols = m;
    g.colors.resize(cells);
    std::uint64_t rest = code;
    for (std::size_t i = 0; i < cells; ++i) {
      g.colors[i] = rest % q;
      rest /= q;
    }
    fn(g);
  }
}

}  // namespace

TEST_CASE("pattern names round-trip", "[core]") {
  for (CanonicalPattern p : kAllPatterns) {
    auto back = pattern_from_name(pattern_name(p));
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
  CHECK(pattern_name(CanonicalPattern::Monochromatic) == std::string("monochromatic"));
  CHECK(pattern_name(CanonicalPattern::LeftColored) == std::string("left"));
  CHECK(pattern_name(CanonicalPattern::RightColored) == std::string("right"));
  CHECK(pattern_name(CanonicalPattern::Rainbow) == std::string("rainbow"));
  CHECK_FALSE(pattern_from_name("diagonal").has_value());
}

TEST_CASE("classify_grid on the four canonical shapes", "[core]") {
  auto mono = Grid::of({{7, 7}, {7, 7}});
  CHECK(classify_grid(mono) == PatternSet::of({CanonicalPattern::Monochromatic}));

  auto left = Grid::of({{1, 1}, {2, 2}});
  CHECK(classify_grid(left) == PatternSet::of({CanonicalPattern::LeftColored}));

  auto right = Grid::of({{1, 2}, {1, 2}});
  CHECK(classify_grid(right) == PatternSet::of({CanonicalPattern::RightColored}));

  auto rain = Grid::of({{1, 2}, {3, 4}});
  CHECK(classify_grid(rain) == PatternSet::of({CanonicalPattern::Rainbow}));

  auto none = Grid::of({{1, 1}, {1, 2}});
  CHECK(classify_grid(none).empty());
}

TEST_CASE("m=1 grids realize all four patterns", "[core]") {
  CHECK(classify_grid(Grid::of({{9}})) == PatternSet::all());
}

TEST_CASE("patterns are mutually exclusive for m >= 2 (exhaustive)", "[core][property]") {
  // all 2x2 grids over 4 colors and all 3x3 grids over 2 colors
  for_each_grid(2, 4, [](const Grid& g) {
    CHECK(classify_grid(g).size() <= 1);
    CHECK(classify_grid(g) == ref::classify(g));
  });
  for_each_grid(3, 2, [](const Grid& g) {
    CHECK(classify_grid(g).size() <= 1);
    CHECK(classify_grid(g) == ref::classify(g));
  });
}

TEST_CASE("classification agrees with the literal definitions on 3x3 over 3 colors",
          "[core][property]") {
  // 3^9 = 19683 grids; the reference is the four definitions verbatim
  for_each_grid(3, 3, [](const Grid& g) { CHECK(classify_grid(g) == ref::classify(g)); });
}

TEST_CASE("relabeling colors preserves classification", "[core][property]") {
  // injective relabel x -> 1000 - x on small grids
  for_each_grid(2, 3, [](const Grid& g) {
    Grid h = g;
    for (auto& c : h.colors) c = 1000 - c;
    CHECK(classify_grid(g) == classify_grid(h));
  });
}

TEST_CASE("transpose swaps left and right", "[core][property]") {
  for_each_grid(2, 4, [](const Grid& g) {
    PatternSet a = classify_grid(g);
    PatternSet b = classify_grid(detail::transpose(g));
    CHECK(a.contains(CanonicalPattern::LeftColored) ==
          b.contains(CanonicalPattern::RightColored));
    CHECK(a.contains(CanonicalPattern::RightColored) ==
          b.contains(CanonicalPattern::LeftColored));
    CHECK(a.contains(CanonicalPattern::Monochromatic) ==
          b.contains(CanonicalPattern::Monochromatic));
    CHECK(a.contains(CanonicalPattern::Rainbow) == b.contains(CanonicalPattern::Rainbow));
  });
}

TEST_CASE("classify_grid rejects non-square input", "[core]") {
  Grid g = Grid::of({{1, 2, 3}, {4, 5, 6}});
  CHECK_THROWS_AS(classify_grid(g), std::invalid_argument);
  CHECK_THROWS_AS(classify_grid(Grid{}), std::invalid_argument);
}

TEST_CASE("classify_singletons", "[core]") {
  using S = SingletonClass;
  CHECK(classify_singletons({4, 4, 4}) == S::Constant);
  CHECK(classify_singletons({1, 2, 3}) == S::Injective);
  CHECK(classify_singletons({5}) == S::Both);
  CHECK(classify_singletons({1, 1, 2}) == S::Neither);
  CHECK_THROWS_AS(classify_singletons({}), std::invalid_argument);
}

TEST_CASE("restrict_to picks the induced subgrid", "[core]") {
  auto g = Grid::of({{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
  auto src = dense(g);
  Grid sub = restrict_to(src, {0, 2}, {1, 2});
  CHECK(sub.rows == 2);
  CHECK(sub.cols == 2);
  CHECK(sub.at(0, 0) == 1);
  CHECK(sub.at(0, 1) == 2);
  CHECK(sub.at(1, 0) == 7);
  CHECK(sub.at(1, 1) == 8);

  CHECK_THROWS_AS(restrict_to(src, {0, 0}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(restrict_to(src, {0}, {3}), std::out_of_range);
}

TEST_CASE("verify_witness checks the claim, not just existence", "[core]") {
  // all-one K_{3,3}
  auto src = dense(Grid::of({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
  Witness mono{{0, 1}, {0, 1}, CanonicalPattern::Monochromatic};
  CHECK(verify_witness(src, mono));
  Witness rain{{0, 1}, {0, 1}, CanonicalPattern::Rainbow};
  CHECK_FALSE(verify_witness(src, rain));

  // column-lexical coloring: Delta(a,b) = b
  ColoringSource cols;
  cols.n1 = cols.n2 = 3;
  cols.query = [](Vertex, Vertex b) { return ColorId(b); };
  Witness right{{0, 2}, {0, 2}, CanonicalPattern::RightColored};
  CHECK(verify_witness(cols, right));

  Witness bad{{0, 5}, {0, 1}, CanonicalPattern::Monochromatic};
  CHECK_THROWS_AS(verify_witness(src, bad), std::invalid_argument);
  Witness unsorted{{1, 0}, {0, 1}, CanonicalPattern::Monochromatic};
  CHECK_THROWS_AS(verify_witness(src, unsorted), std::invalid_argument);
}

TEST_CASE("witness json round-trip with alphabetical keys", "[core]") {
  Witness w{{0, 3}, {1, 2}, CanonicalPattern::RightColored};
  json j = witness_to_json(w);
  CHECK(j.dump() == R"({"left":[0,3],"pattern":"right","right":[1,2]})");
  Witness back = witness_from_json(j);
  CHECK(back.left == w.left);
  CHECK(back.right == w.right);
  CHECK(back.pattern == w.pattern);
}
