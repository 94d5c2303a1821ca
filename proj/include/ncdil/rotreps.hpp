#pragma once

// Finite-dimensional representations of rational noncommutative tori.
//
// Convention: a tuple U commutes according to Theta when
//     U_l U_k = exp(i theta_{k,l}) U_k U_l     for k < l.

#include "ncdil/matcore.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncdil {

/// theta = 2 pi m / n with gcd(m, n) = 1 and 0 <= m < n.
struct RationalAngle {
  long long m = 0;
  long long n = 1;

  /// Reduces and wraps into [0, n). Throws UsageError for n <= 0.
  static RationalAngle make(long long m, long long n);

  double radians() const;
  Complex unit() const;  // e^{i theta}
  RationalAngle negated() const { return make(-m, n); }
  bool is_zero() const { return m == 0; }
  std::string str() const;  // "m/n"
  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;
};

/// Real antisymmetric d x d matrix, stored as its strict upper triangle.
class ThetaMatrix {
 public:
  ThetaMatrix() = default;
  static ThetaMatrix zero(int d);
  static ThetaMatrix from_radians(int d, const std::vector<double>& upper);
  static ThetaMatrix from_rational(int d, const std::vector<RationalAngle>& upper);
  static ThetaMatrix constant(int d, RationalAngle q);

  int d() const { return d_; }
  double operator()(int k, int l) const;  // antisymmetric, zero diagonal
  Eigen::MatrixXd dense() const;
  double norm() const;  // spectral norm
  bool is_rational() const { return rational_.has_value(); }
  /// Rational entry for k < l; requires is_rational().
  const RationalAngle& rational(int k, int l) const;
  /// True when all entries above the diagonal are equal.
  bool is_constant() const;
  /// Remove the last row and column.
  ThetaMatrix leading(int size) const;
  ThetaMatrix operator-(const ThetaMatrix& other) const;
  ThetaMatrix negated() const;

 private:
  std::size_t slot(int k, int l) const;  // k < l
  int d_ = 0;
  std::vector<double> upper_;
  std::optional<std::vector<RationalAngle>> rational_;
};

/// Angles wrapped into [0, 2 pi).
struct PhasePoint {
  std::vector<double> angles;
  static PhasePoint make(std::vector<double> angles);
  static PhasePoint zeros(std::size_t count) { return PhasePoint{std::vector<double>(count, 0.0)}; }
};

ComplexMatrix clock_matrix(Complex q, Index n);        // diag(q, q^2, ..., q^n); needs |q| = 1
ComplexMatrix clock_matrix(RationalAngle q, Index n);  // exact root-of-unity powers
ComplexMatrix shift_matrix(Index n);                   // ones at (i, i+1) and (n, 1)

/// (alpha X, beta Y) on C^n, n = q.n.
UnitaryTuple irrep_d2(RationalAngle q, const PhasePoint& phases);
/// (alpha X, beta XY, gamma Y) on C^n: the irreducibles of the constant-theta
/// 3-torus.
UnitaryTuple irrep_d3_constant(RationalAngle q, const PhasePoint& phases);

/// Recursive tensor representation: removing the last row and column of Theta,
/// tensoring 2D clock/shift pairs for each theta_{k,d}. Requires rational
/// entries; throws ResourceCapError past cfg.dimension_cap.
UnitaryTuple tensor_rep(const ThetaMatrix& theta, const MatcoreConfig& cfg = {});

/// max_{k<l} ||U_l U_k - e^{i theta_{k,l}} U_k U_l||.
double relation_defect(const UnitaryTuple& u, const ThetaMatrix& theta);

/// A gauge-closed family {(e^{i phi_1} G_1, ..., e^{i phi_d} G_d)} with
/// phi_j in [0, period_j). Periods shorter than 2 pi come from conjugation
/// by X and Y, which shifts phases by multiples of 2 pi / n.
struct IrrepFamily {
  std::vector<ComplexMatrix> generators;
  std::vector<double> period;
  bool symmetry_reduced = false;
};

/// d = 2: both phases reduce to [0, 2 pi/n). d = 3 (constant theta): X- and
/// Y-conjugation shift (beta, gamma) and (alpha, beta) jointly, so alpha and
/// gamma reduce to [0, 2 pi/n) while beta keeps the full circle.
IrrepFamily irrep_family(RationalAngle q, int d, bool reduce = true);

}  // namespace ncdil
