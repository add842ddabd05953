#include <catch2/catch_amalgamated.hpp>

#include <canon/experiments.hpp>

using namespace canon;

namespace {

// exhaustive average of oracle counts over all q^(n^2) colorings of K_{n,n}
std::array<BigRat, 4> brute_expectations(std::uint64_t n, std::uint64_t m, std::uint64_t q) {
  BigInt total_big = big_pow(BigInt(q), n * n);
  REQUIRE(total_big <= 1000000);
  std::uint64_t total = static_cast<std::uint64_t>(total_big);
  std::array<BigInt, 4> sums{};
  Grid g;
  g.rows = n;
  g.cols = n;
  g.colors.assign(n * n, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t cell = 0; cell < n * n; ++cell) {
      g.colors[cell] = rest % q;
      rest /= q;
    }
    auto counts = count_canonical_bicliques(source_from_grid(g), m);
    sums[0] += counts.monochromatic;
    sums[1] += counts.left;
    sums[2] += counts.right;
    sums[3] += counts.rainbow;
  }
  std::array<BigRat, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = BigRat(sums[i], total_big);
  return out;
}

}  // namespace

TEST_CASE("exact expectations match their closed forms") {
  auto t = expected_counts_exact(4, 2, 3);
  CHECK(t.monochromatic == BigRat(4, 3));  // 36 * 3^(-3)
  CHECK(t.left == BigRat(8, 3));           // 36 * (3*2) * 3^(-4)
  CHECK(t.right == BigRat(8, 3));
  CHECK(t.rainbow == 0);  // q = 3 < m^2 = 4

  auto small = expected_counts_exact(2, 2, 2);
  CHECK(small.monochromatic == BigRat(1, 8));
  CHECK(small.left == BigRat(1, 8));  // 1 * (2*1) * 2^(-4)
  CHECK(small.rainbow == 0);

  // m = 1: every edge is a K_{1,1} realizing all four patterns
  auto unit = expected_counts_exact(3, 1, 5);
  CHECK(unit.monochromatic == BigRat(9));
  CHECK(unit.left == BigRat(9));
  CHECK(unit.right == BigRat(9));
  CHECK(unit.rainbow == BigRat(9));

  CHECK_THROWS_AS(expected_counts_exact(1, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(expected_counts_exact(2, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(expected_counts_exact(2, 2, 0), std::invalid_argument);
}

TEST_CASE("expectation table invariants") {
  for (std::uint64_t n = 1; n <= 6; ++n)
    for (std::uint64_t m = 1; m <= n; ++m)
      for (std::uint64_t q : {1, 2, 3, 4, 9, 16}) {
        auto t = expected_counts_exact(n, m, q);
        CHECK(t.left == t.right);
        if (q < m * m) CHECK(t.rainbow == 0);
        CHECK(t.monochromatic > 0);
      }
  auto j = expectation_table_json(expected_counts_exact(4, 2, 3));
  CHECK(j["monochromatic"] == "4/3");
  CHECK(j["left"] == "8/3");
  CHECK(j["rainbow"] == "0");
}

TEST_CASE("closed forms equal the exhaustive all-colorings average") {
  struct Config {
    std::uint64_t n, m, q;
  };
  const Config configs[] = {{2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {2, 2, 4},
                            {3, 3, 2}, {2, 1, 3}, {3, 2, 3}};
  for (const auto& c : configs) {
    INFO("n=" << c.n << " m=" << c.m << " q=" << c.q);
    auto brute = brute_expectations(c.n, c.m, c.q);
    auto t = expected_counts_exact(c.n, c.m, c.q);
    CHECK(t.monochromatic == brute[0]);
    CHECK(t.left == brute[1]);
    CHECK(t.right == brute[2]);
    CHECK(t.rainbow == brute[3]);
  }
}

TEST_CASE("monte-carlo trials track the exact expectations") {
  auto s = run_trials(4, 2, 3, 2000, 7);
  auto t = expected_counts_exact(4, 2, 3);
  CHECK(s.within_se(0, t.monochromatic, 4));
  CHECK(s.within_se(1, t.left, 4));
  CHECK(s.within_se(2, t.right, 4));
  CHECK(s.mean(3) == 0);  // rainbow impossible at q = 3
  // the symmetry the expectations assert: empirical left vs right
  BigRat d = s.mean(1) - s.mean(2);
  CHECK(d * d <= BigRat(9) * (s.se2(1) + s.se2(2)));

  SECTION("single-color trials are deterministic with zero variance") {
    auto one = run_trials(4, 2, 1, 50, 3);
    BigRat copies{BigInt(36)};
    CHECK(one.mean(0) == copies);
    CHECK(one.variance(0) == 0);
    CHECK(one.mean(1) == 0);  // left needs two distinct row colors
    CHECK(one.within_se(0, copies, 4));
  }
  SECTION("a single trial has zero sample variance by convention") {
    auto single = run_trials(3, 2, 2, 1, 9);
    CHECK(single.variance(0) == 0);
    CHECK(single.se2(0) == 0);
  }
  SECTION("deterministic across reruns and thread counts") {
    auto a = run_trials(4, 2, 3, 500, 11, OracleLimits{1000000000, 1});
    auto b = run_trials(4, 2, 3, 500, 11, OracleLimits{1000000000, 4});
    CHECK(a.sum == b.sum);
    CHECK(a.sumsq == b.sumsq);
    CHECK(experiment_report_json(a).dump() == experiment_report_json(b).dump());
  }
  SECTION("usage and size errors") {
    CHECK_THROWS_AS(run_trials(4, 2, 3, 0, 7), std::invalid_argument);
    CHECK_THROWS_AS(run_trials(1, 2, 3, 10, 7), std::invalid_argument);
    CHECK_THROWS_AS(run_trials(4, 2, 3, 1000, 7, OracleLimits{100, 0}), SizeError);
  }
}

TEST_CASE("experiment report serializes exact and empirical values") {
  auto s = run_trials(4, 2, 3, 200, 21);
  auto j = experiment_report_json(s);
  CHECK(j["n"] == 4);
  CHECK(j["m"] == 2);
  CHECK(j["q"] == 3);
  CHECK(j["trials"] == 200);
  CHECK(j["seed"] == 21);
  CHECK(j["exact"]["monochromatic"] == "4/3");
  CHECK(j["exact"]["left"] == "8/3");
  for (const char* key : kPatternKeys) {
    auto e = j["empirical"][key].get<std::string>();
    auto se = j["stderr"][key].get<std::string>();
    CHECK(e.find('.') != std::string::npos);
    CHECK(e.size() - e.find('.') - 1 == 9);  // nine fixed decimal digits
    CHECK(se.size() - se.find('.') - 1 == 9);
  }
  CHECK(j["stderr"]["rainbow"] == "0.000000000");
  // empirical mean of 200 exact counts reproduces the accumulator
  CHECK(j["empirical"]["monochromatic"].get<std::string>() ==
        decimal_floor_string(s.mean(0), 9));
}

TEST_CASE("zero-copy search certifies ER_B(2) > 2") {
  // the spec'd certificate grid: [[1,2],[2,1]] has no canonical K_{2,2}
  Grid g = Grid::of({{1, 2}, {2, 1}});
  auto counts = count_canonical_bicliques(source_from_grid(g), 2);
  CHECK(counts.monochromatic == 0);
  CHECK(counts.left == 0);
  CHECK(counts.right == 0);
  CHECK(counts.rainbow == 0);

  auto found = zero_copy_search(2, 2, 3, 50, 2024);
  REQUIRE(found.has_value());
  CHECK(found->family == "uniform_random");
  CHECK(found->n1 == 2);
  CHECK(found->n2 == 2);
  CHECK(found->params["q"] == 3);
  // the certificate replays: an independent oracle run counts zero everywhere
  auto replay = count_canonical_bicliques(instantiate(*found), 2);
  CHECK(replay.monochromatic == 0);
  CHECK(replay.left == 0);
  CHECK(replay.right == 0);
  CHECK(replay.rainbow == 0);

  SECTION("deterministic: the same master seed returns the same spec") {
    auto again = zero_copy_search(2, 2, 3, 50, 2024);
    REQUIRE(again.has_value());
    CHECK(again->seed == found->seed);
    CHECK(spec_to_json(*again).dump() == spec_to_json(*found).dump());
  }
  SECTION("a single color can never avoid monochromatic copies") {
    CHECK_FALSE(zero_copy_search(3, 2, 1, 20, 5).has_value());
  }
  SECTION("usage and size errors") {
    CHECK_THROWS_AS(zero_copy_search(2, 2, 3, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(zero_copy_search(1, 2, 3, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(zero_copy_search(10, 2, 3, 1000000, 1, OracleLimits{5000, 0}), SizeError);
  }
}
