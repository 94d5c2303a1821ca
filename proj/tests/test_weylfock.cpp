#include "ncdil/errors.hpp"
#include "ncdil/weylfock.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ncdil;

namespace {

ThetaMatrix random_theta(int d, double range, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-range, range);
  std::vector<double> e(static_cast<std::size_t>(d * (d - 1) / 2));
  for (double& x : e) x = u(rng);
  return ThetaMatrix::from_radians(d, e);
}

ComplexMatrix column_block(const FockContext& ctx, const std::vector<Index>& idx) {
  ComplexMatrix m = ComplexMatrix::Zero(ctx.size(), static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) m(idx[i], static_cast<Index>(i)) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("Fock basis size and graded ordering") {
  const FockContext ctx(3, 4);
  CHECK(ctx.size() == fock_dimension(3, 4));
  CHECK(fock_dimension(3, 4) == 35);
  CHECK(fock_dimension(4, 10) == 1001);
  for (Index i = 1; i < ctx.size(); ++i) CHECK(ctx.occupation(i - 1) <= ctx.occupation(i));
  CHECK(ctx.index_of({0, 0, 0}) == 0);
  CHECK(ctx.index_of({2, 1, 1}) >= 0);
  CHECK(ctx.index_of({3, 1, 1}) == -1);
  for (Index i = 0; i < ctx.size(); ++i) CHECK(ctx.index_of(ctx.state(i)) == i);
  CHECK(ctx.low_block(2).size() == 10);
  CHECK(ctx.low_block(2, 1).size() == 6);
  CHECK_THROWS_AS(FockContext(4, 40, 1000), ResourceCapError);
}

TEST_CASE("vector systems satisfy their invariants on random inputs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    const ThetaMatrix t = random_theta(d, std::numbers::pi, rng);
    const ThetaMatrix tp = random_theta(d, std::numbers::pi, rng);
    const VectorSystem sys = construct_vectors(t, tp);
    const VectorCheck c = check_vectors(sys);
    CHECK(c.worst() < 1e-10);
    CHECK(c.gram_det > 0);
  }
}

TEST_CASE("equal thetas give empty y parts") {
  const ThetaMatrix t = ThetaMatrix::from_radians(3, {0.3, -0.2, 0.9});
  const VectorSystem sys = construct_vectors(t, t);
  for (const auto& y : sys.y) CHECK(y.norm() < 1e-12);
  const VectorSystem s2 = construct_vectors(ThetaMatrix::zero(2), ThetaMatrix::from_radians(2, {0.8}));
  for (const auto& y : s2.y) CHECK(y.squaredNorm() == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("Weyl matrices: identity, unitarity, inverse, vacuum overlap") {
  const FockContext ctx(2, 12);
  ComplexVector zero = ComplexVector::Zero(2);
  CHECK((weyl_matrix(zero, ctx) - ComplexMatrix::Identity(ctx.size(), ctx.size())).norm() < 1e-14);
  ComplexVector z(2);
  z << Complex(0.3, 0.2), Complex(-0.1, 0.4);
  const ComplexMatrix w = weyl_matrix(z, ctx);
  CHECK(unitarity_defect(w) < 1e-9);
  CHECK((weyl_matrix(-z, ctx) - w.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(w(0, 0) - std::exp(-0.5 * z.squaredNorm())) < 1e-6);
  // coherent state: <n|W(z)|0> = e^{-|z|^2/2} z^n / sqrt(n!) in one mode
  const FockContext one(1, 12);
  ComplexVector a(1);
  a << Complex(0.5, -0.25);
  const ComplexMatrix w1 = weyl_matrix(a, one);
  for (int n = 0; n <= 4; ++n) {
    const Complex expect = std::exp(-0.5 * std::norm(a(0))) * std::pow(a(0), n) / std::sqrt(std::tgamma(n + 1.0));
    CHECK(std::abs(w1(n, 0) - expect) < 1e-6);
  }
}

TEST_CASE("Taylor action agrees with the dense exponential") {
  const FockContext ctx(3, 8);
  ComplexVector z(3);
  z << Complex(0.7, -0.3), Complex(0.2, 0.5), Complex(-0.6, 0.1);
  const auto low = ctx.low_block(4);
  const ComplexMatrix p = column_block(ctx, low);
  CHECK((weyl_apply(z, ctx, p) - weyl_matrix(z, ctx) * p).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("commutation phase and gauge shifts") {
  const FockContext ctx(2, 20);
  ComplexVector y(2), z(2);
  y << Complex(0.4, 0.1), Complex(0.0, -0.3);
  z << Complex(-0.2, 0.5), Complex(0.3, 0.2);
  CHECK(commutation_defect(y, z, ctx) <= 1e-4);
  CHECK(gauge_shift_defect(y, z, ctx) <= 1e-4);
  // linear in the first argument
  CHECK(std::abs(inner(Complex(0, 2) * y, z) - Complex(0, 2) * inner(y, z)) < 1e-15);
  CHECK(std::abs(inner(y, Complex(0, 2) * z) + Complex(0, 2) * inner(y, z)) < 1e-15);
}

TEST_CASE("residuals shrink as the cutoff grows") {
  const VectorSystem sys = construct_vectors(ThetaMatrix::from_radians(2, {0.3}), ThetaMatrix::from_radians(2, {0.5}));
  double prev_comp = 1e300;
  double prev_comm = 1e300;
  for (int cutoff : {6, 8, 10, 12}) {
    CompressionOptions o;
    o.cutoff = cutoff;
    o.commutation_cutoff = cutoff;
    const CompressionReport r = verify_compression(sys, o);
    CHECK(r.max_residual <= 1.1 * prev_comp);
    CHECK(r.commutation_defect <= 1.1 * prev_comm);
    prev_comp = r.max_residual;
    prev_comm = r.commutation_defect;
  }
}

TEST_CASE("compression reproduces the scaled Weyl family") {
  const ThetaMatrix t = ThetaMatrix::zero(2);
  const ThetaMatrix tp = ThetaMatrix::from_radians(2, {0.4});
  const CompressionReport r = verify_compression(construct_vectors(t, tp));
  CHECK(r.scale == doctest::Approx(std::exp(0.1)).epsilon(1e-12));
  CHECK(r.scale_mismatch < 1e-12);
  CHECK(r.max_residual <= 1e-3);
  CHECK(r.commutation_defect <= 1e-4);
  CHECK(r.gauge_defect <= 1e-4);

  const CompressionReport same = verify_compression(construct_vectors(tp, tp));
  CHECK(same.scale == 1.0);
  CHECK(same.max_residual < 1e-12);

  CompressionOptions strict;
  strict.max_residual = 1e-9;
  CHECK_THROWS_AS(verify_compression(construct_vectors(t, tp), strict), CertificateError);
}
