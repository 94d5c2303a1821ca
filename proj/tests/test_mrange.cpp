#include "ncdil/errors.hpp"
#include "ncdil/freemodel.hpp"
#include "ncdil/mrange.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ncdil;

namespace {

ComplexVector random_direction(int d, std::mt19937_64& rng, bool real_nonneg = false) {
  std::normal_distribution<double> g;
  ComplexVector c(d);
  for (int i = 0; i < d; ++i) c(i) = real_nonneg ? Complex(std::abs(g(rng)), 0) : Complex(g(rng), g(rng));
  return c / c.norm();
}

}  // namespace

TEST_CASE("support function of simple tuples") {
  const UnitaryTuple one({ComplexMatrix::Ones(1, 1)});
  CHECK(support_function(one, ComplexVector::Ones(1)) == doctest::Approx(1.0));

  // diagonal pair: max over joint eigenvalues of Re sum conj(c_i) z_i
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  ComplexMatrix a = ComplexMatrix::Zero(4, 4), b = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    a(k, k) = std::polar(1.0, ang(rng));
    b(k, k) = std::polar(1.0, ang(rng));
  }
  const UnitaryTuple u({a, b});
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexVector c = random_direction(2, rng);
    double expect = -1e300;
    for (int k = 0; k < 4; ++k)
      expect = std::max(expect, (std::conj(c(0)) * a(k, k) + std::conj(c(1)) * b(k, k)).real());
    CHECK(support_function(u, c) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("support functions are sublinear and stay inside the polydisc") {
  const UnitaryTuple u(haar_tuple(6, 3, 12, 0));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexVector a = random_direction(3, rng);
    const ComplexVector b = random_direction(3, rng);
    CHECK(support_function(u, a + b) <= support_function(u, a) + support_function(u, b) + 1e-12);
    CHECK(support_function(u, a) <= a.lpNorm<1>() + 1e-12);
    CHECK(support_function(u, 2.5 * a) == doctest::Approx(2.5 * support_function(u, a)));
  }
}

TEST_CASE("the anticommuting family supports every direction above 1/sqrt 2") {
  const OperatorFamily f = OperatorFamily::rotation(RationalAngle::make(1, 2), 2);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const SupportBound b = support_bound(f, random_direction(2, rng), 0.05);
    CHECK(b.lower >= 1.0 / std::sqrt(2.0));
    CHECK(b.lower <= b.upper);
  }
}

TEST_CASE("direction nets cover the sphere within their gap") {
  std::mt19937_64 rng(99);
  for (bool orthant : {false, true}) {
    for (int d : {1, 2, 3}) {
      if (!orthant && d == 3) continue;
      const DirectionNet net = make_direction_net(d, 0.25, orthant);
      for (const auto& c : net.directions) CHECK(c.norm() == doctest::Approx(1.0));
      for (int trial = 0; trial < 200; ++trial) {
        const ComplexVector u = random_direction(d, rng, orthant);
        double best = 1e300;
        for (const auto& c : net.directions) best = std::min(best, (u - c).norm());
        CHECK(best <= net.gap + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(make_direction_net(3, 1e-3, false, 1000), ResourceCapError);
  CHECK_THROWS_AS(make_direction_net(2, 0.0, false), UsageError);
}

TEST_CASE("Hausdorff distances between polydiscs") {
  const OperatorFamily u0 = OperatorFamily::commuting(2);
  const CertifiedValue same = hausdorff_level1(u0, u0, 0.1, 0.05);
  CHECK(same.value == 0.0);
  CHECK(same.lower == 0.0);
  // D^d and r D^d are at max-norm distance 1 - r
  const double r = 0.7;
  const OperatorFamily ru0 = OperatorFamily::commuting(2, r);
  const CertifiedValue h = hausdorff_level1(u0, ru0, 0.05, 0.02);
  CHECK(h.contains(1.0 - r, 1e-9));
  CHECK(h.lower >= 1.0 - r - 0.01);
  const CertifiedValue back = hausdorff_level1(ru0, u0, 0.05, 0.02);
  CHECK(back.value == doctest::Approx(h.value).epsilon(1e-12));
  CHECK(back.upper == doctest::Approx(h.upper).epsilon(1e-12));
}

TEST_CASE("metric inequality audit") {
  const auto rows = metric_inequality_audit({{RationalAngle::make(0, 1), RationalAngle::make(1, 2)},
                                             {RationalAngle::make(0, 1), RationalAngle::make(1, 3)},
                                             {RationalAngle::make(2, 7), RationalAngle::make(2, 7)}},
                                            0.05, 0.05);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].bound == doctest::Approx(std::exp(std::numbers::pi / 4) - 1));
  CHECK(rows[1].bound == doctest::Approx(std::exp(std::numbers::pi / 6) - 1));
  for (const auto& r : rows) CHECK(r.passes);
  CHECK(rows[2].level1_lower == 0.0);
  CHECK(rows[2].bound == 0.0);
}

TEST_CASE("l1-ball containment for gauge-invariant families") {
  const L1BallReport disc = l1_ball_containment(OperatorFamily::commuting(1));
  CHECK(disc.delta_verified == doctest::Approx(1.0));
  for (int d : {2, 3}) {
    const L1BallReport c = l1_ball_containment(OperatorFamily::commuting(d), 0.05);
    CHECK(c.delta_verified >= 1.0 / std::sqrt(double(d)) - 1e-3);
    CHECK(c.contains_l1_ball);
    CHECK(c.polydisc_violations == 0);
  }
  const L1BallReport rot = l1_ball_containment(OperatorFamily::rotation(RationalAngle::make(1, 3), 2), 0.05);
  CHECK(rot.delta_verified >= 1.0 / std::sqrt(2.0) - 1e-3);
  CHECK(rot.contains_l1_ball);
}

TEST_CASE("support profiles agree across execution policies") {
  const OperatorFamily f = OperatorFamily::rotation(RationalAngle::make(2, 5), 2);
  const DirectionNet net = make_direction_net(2, 0.5, false);
  const SupportProfile a = support_profile(f, net, 0.1, ExecPolicy::serial);
  const SupportProfile b = support_profile(f, net, 0.1, ExecPolicy::parallel);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.polydisc_violations == 0);
}
