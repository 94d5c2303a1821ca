#pragma once

// Level-1 matrix ranges through support functions.
//
// For a tuple A and a direction c in C^d the level-1 support function is
//     h_A(c) = max_phi Re sum_i conj(c_i) phi(A_i) = lambda_max(Re sum_i conj(c_i) A_i).
// For a family swept over gauge phases the support is the sup over the
// family, bracketed by a phase branch and bound.
//
// Distances between level-1 sets use the max-norm on C^d (the level-1 case
// of max_i ||X_i||); its dual on directions is the l1 norm.

#include "ncdil/certified.hpp"
#include "ncdil/matcore.hpp"
#include "ncdil/rotreps.hpp"
#include "ncdil/torus_max.hpp"

#include <string>
#include <vector>

namespace ncdil {

struct OperatorFamily {
  std::vector<ComplexMatrix> generators;
  std::vector<double> period;    // empty: a single tuple, no phase sweep
  bool gauge_invariant = false;  // support depends only on |c_i|
  std::string descriptor;

  int d() const { return static_cast<int>(generators.size()); }
  bool swept() const { return !period.empty(); }

  static OperatorFamily tuple(const UnitaryTuple& u, std::string descriptor = "tuple");
  /// Universal commuting tuple u0: 1x1 generators swept over the full torus,
  /// scaled by r (r < 1 gives the contracted polydisc).
  static OperatorFamily commuting(int d, double r = 1.0);
  /// Irreducible rotation family (d = 2, or d = 3 with constant theta).
  static OperatorFamily rotation(RationalAngle q, int d);
};

/// lambda_max(Re sum_i conj(c_i) A_i).
double support_function(const UnitaryTuple& a, const ComplexVector& c);

struct SupportBound {
  double lower = 0;
  double upper = 0;
};
SupportBound support_bound(const OperatorFamily& f, const ComplexVector& c, double phase_grid);

/// Points of a cube-face grid of spacing <= resolution, pushed to the unit
/// sphere. Full nets live on S^{2d-1} (real coordinates of C^d); orthant nets
/// on the nonnegative part of S^{d-1}, enough for gauge-invariant families.
/// `gap` bounds the Euclidean distance from any unit direction (of the
/// covered kind) to the net.
struct DirectionNet {
  std::vector<ComplexVector> directions;
  double gap = 0;
  bool orthant = false;
};
DirectionNet make_direction_net(int d, double resolution, bool orthant,
                                std::size_t max_points = 4'000'000);

struct SupportProfile {
  DirectionNet net;
  std::vector<double> lower;
  std::vector<double> upper;
  std::string descriptor;
  std::size_t polydisc_violations = 0;  // upper > ||c||_1 + 1e-9
};

SupportProfile support_profile(const OperatorFamily& f, const DirectionNet& net, double phase_grid,
                               ExecPolicy policy = ExecPolicy::parallel);

struct L1BallReport {
  double delta_verified = 0;   // B_delta(0) (Euclidean) is inside W_1
  double linf_margin = 0;      // min over the net of h(c) - ||c||_inf
  bool contains_l1_ball = false;  // linf_margin >= -tolerance
  double gap = 0;
  std::size_t directions = 0;
  std::size_t polydisc_violations = 0;
};
/// Support lower bounds on direction nets, from spacing 0.2 down to
/// `resolution`, stopping once delta_verified >= 1/sqrt(d) - tolerance.
/// Only attained phase values enter, so phase_grid can stay coarse.
L1BallReport l1_ball_containment(const OperatorFamily& f, double resolution = 1e-2,
                                 double phase_grid = 0.2, double tolerance = 1e-3);
/// Level-1 Hausdorff distance in the max-norm. `value` and `lower` are the
/// net maximum of certified lower bounds of |h_A - h_B| / ||c||_1; `upper`
/// adds the phase-bracket widths and the net modulus 4 sqrt(d) gap.
CertifiedValue hausdorff_level1(const OperatorFamily& a, const OperatorFamily& b, double resolution = 1e-2,
                                double phase_grid = 5e-2);

struct AuditRow {
  RationalAngle theta;
  RationalAngle theta_prime;
  double level1_lower = 0;   // lower estimate of d_mr
  double level1_upper = 0;   // certified upper of the level-1 distance
  double bound = 0;          // exp(|theta - theta'| / 4) - 1
  double margin = 0;         // bound - level1_lower
  bool passes = false;
};
/// d = 2 rotation families; |theta - theta'| is taken modulo 2 pi.
std::vector<AuditRow> metric_inequality_audit(const std::vector<std::pair<RationalAngle, RationalAngle>>& pairs,
                                              double resolution = 1e-2, double phase_grid = 5e-2,
                                              double slack = 1e-6);

}  // namespace ncdil
