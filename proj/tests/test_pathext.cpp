#include "ncdil/pathext.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ncdil;

TEST_CASE("Hoelder constants and grid powers") {
  CHECK(holder_constant(2, 1.0, 3.0) == 3.0);
  CHECK(holder_constant(2, 0.5, 1.0) == doctest::Approx(4.0 / (1.0 - 1.0 / std::sqrt(2.0))));
  CHECK(holder_constant(3, 0.25, 2.0) == doctest::Approx(12.0 / (1.0 - std::pow(3.0, -0.25))));
  CHECK_THROWS_AS(holder_constant(1, 0.5, 1.0), UsageError);
  CHECK_THROWS_AS(holder_constant(2, 0.0, 1.0), UsageError);
  CHECK_THROWS_AS(holder_constant(2, 1.5, 1.0), UsageError);
  CHECK(grid_power(2, 53) == (std::int64_t{1} << 53));
  CHECK_THROWS_AS(grid_power(2, 54), UsageError);
  CHECK(grid_power(10, 15) == 1'000'000'000'000'000);
}

TEST_CASE("extension depth is the first level under eps") {
  CHECK(extension_depth(2, 1.0, 1.0, 0.25) == 2);
  CHECK(extension_depth(2, 1.0, 1.0, 0.3) == 2);
  CHECK(extension_depth(10, 0.5, 1.0, 1e-3) == 6);
  CHECK(extension_depth(2, 1.0, 0.1, 1.0) == 0);
}

TEST_CASE("linear path: exact values and ratios") {
  const auto g = linear_oracle(2.5, 3);
  CHECK(adjacent_ratio(g, 6) == doctest::Approx(2.5));
  CHECK(g.constant() == 2.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    const auto e = extend(g, t, 1e-6);
    CHECK(std::abs(e.point - 2.5 * t) <= 1e-6);
  }
  const auto e = extend(g, 1.0 / 3.0, 1e-9);
  CHECK(e.grid_point);
  CHECK(e.depth == 1);
  CHECK(extend(g, 1.0, 1e-3).point == 2.5);
  CHECK_THROWS_AS(extend(g, 1.5, 1e-3), UsageError);
  CHECK_THROWS_AS(extend(g, 0.5, 0.0), UsageError);
}

TEST_CASE("Faber-Schauder oracle is representation independent") {
  const auto g = faber_schauder_oracle(3, 0.4, 1.0, 0.7, 11);
  for (int n = 0; n < 6; ++n)
    for (std::int64_t j = 0; j <= grid_power(3, n); ++j) CHECK(g.evaluate(j, n) == g.evaluate(3 * j, n + 1));
  CHECK(g.evaluate(0, 4) == 0.0);
  CHECK(g.evaluate(grid_power(3, 4), 4) == doctest::Approx(0.7));
}

TEST_CASE("adjacent ratios stay under C1 and pair ratios under the global constant") {
  for (auto [k, alpha] : {std::pair{2, 0.5}, std::pair{3, 0.3}, std::pair{4, 0.8}}) {
    const auto g = faber_schauder_oracle(k, alpha, 1.0, -0.4, 5);
    CHECK(adjacent_ratio(g, 7) <= g.C1 * (1 + 1e-12));
    const PairAudit a = audit_pair_bound(g, 1000, 77, 8);
    CHECK(a.samples == 1000);
    CHECK(a.violations == 0);
    CHECK(a.max_ratio <= a.constant);
  }
  const auto u = unitary_path_oracle(2, 4, 2, 0.6, 0.8, 3);
  CHECK(adjacent_ratio(u, 6) <= u.C1 * (1 + 1e-12));
  const PairAudit au = audit_pair_bound(u, 300, 9, 10);
  CHECK(au.violations == 0);
  for (const auto& m : u.evaluate(5, 4)) CHECK(unitarity_defect(m) < 1e-12);
}

TEST_CASE("extensions at two tolerances agree within the sum") {
  const auto g = faber_schauder_oracle(2, 0.5, 1.0, 0.3, 21);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_real_distribution<double> logeps(-6, -2);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    const double e1 = std::pow(10.0, logeps(rng));
    const double e2 = std::pow(10.0, logeps(rng));
    const auto a = extend(g, t, e1);
    const auto b = extend(g, t, e2);
    CHECK(std::abs(a.point - b.point) <= e1 + e2);
    // deterministic in (t, eps)
    CHECK(extend(g, t, e1).point == a.point);
  }
}
