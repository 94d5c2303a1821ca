#pragma once

// Dilation constants of noncommutative tori.
//
// For constant theta the constant is c = 2d / ||h|| with
// h = sum_k u_k + u_k^*, and ||h|| is the sup of lambda_max over the
// irreducible family; for general Theta it is 1 / inf ||Re X|| over the
// convex hull of the generators.

#include "ncdil/certified.hpp"
#include "ncdil/matcore.hpp"
#include "ncdil/rotreps.hpp"
#include "ncdil/torus_max.hpp"

#include <vector>

namespace ncdil {

struct DilationConfig {
  double grid_step = 2e-3;
  bool symmetry_reduction = true;
  TorusSearchOptions search;  // grid_step here is ignored; the field above wins
  MatcoreConfig matcore;
};

struct HNormSearch {
  CertifiedValue norm;
  std::vector<double> argmax;  // phases of the lexicographically first maximiser
  ComplexVector top_vector;
  IrrepFamily family;
};

/// ||h_Theta|| for constant theta, d in {2, 3}. Lower bound is the best grid
/// value; upper adds the corner Lipschitz slack 2 * (free phases) * width.
HNormSearch h_norm_search(RationalAngle q, int d, const DilationConfig& cfg = {});
CertifiedValue h_norm_certified(RationalAngle q, int d, double grid_step,
                                const DilationConfig& cfg = {});

/// c = 2d / ||h||. Certified two-sided for d in {2, 3}; other d use the
/// tensor representation and only bound c from above (kind heuristic).
CertifiedValue c_theta_constant(RationalAngle q, int d, const DilationConfig& cfg = {});

/// Largest-denominator continued-fraction convergent of x (a fraction of a
/// full turn) with denominator <= max_denominator.
RationalAngle best_convergent(double turns, long long max_denominator);

struct TransferredConstant {
  RationalAngle convergent;
  double theta = 0;         // requested angle (radians)
  double distance = 0;      // ||Theta - Theta'|| used in the transfer
  CertifiedValue raw;       // at the convergent
  CertifiedValue transferred;
};

/// c_theta for an arbitrary real constant theta: computes the convergent
/// value and widens it by exp(distance / 4) on both sides.
TransferredConstant c_theta_irrational(double theta, int d, long long max_denominator = 200,
                                       const DilationConfig& cfg = {});

struct SimplexSearchConfig {
  int lattice = 8;               // coarse simplex grid spacing 1/lattice
  int refinement_rounds = 6;     // local pattern-search halvings
  double estimate_step = 0.05;   // phase grid for the uncertified estimates
  int dual_iterations = 4000;    // multiplicative-weights rounds for the state bound
};

struct GeneralConstant {
  CertifiedValue c;
  std::vector<double> weights;   // minimising simplex weights
  bool irreducible_family = false;
  std::size_t states = 0;        // states used in the dual bound
};

/// c_Theta = 1 / min_t sup ||Re sum_k t_k u_k||. The upper bound on c comes
/// from convex combinations of vector states (min_k Re phi(u_k) <= alpha for
/// every state phi); the lower bound from the certified phase sup at the best
/// weights, available when an irreducible family covers Theta (d = 2, or
/// d = 3 with constant theta).
GeneralConstant c_theta_general(const ThetaMatrix& theta, const SimplexSearchConfig& search = {},
                                const DilationConfig& cfg = {});

/// prod_{l >= 2} max_{k < l} c_{theta_{k,l}}, using certified upper values of
/// the 2D constants.
double tensor_upper_bound(const ThetaMatrix& theta, const DilationConfig& cfg = {});

struct ClosedFormConstants {
  int d = 1;
  double c_uf = 1;         // d / sqrt(2d - 1)
  double c_f0_lower = 1;   // 2 sqrt(1 - 1/d)
  double c_f0_upper = 1;   // 2 sqrt(1 - 1/(2d))
  double C_d_upper = 1;    // sqrt(2d)
  double C_d_lower_known = 1;
  bool f0_bounds_apply = false;  // bracket proved for d >= 2
  double identity_residual = 0;  // |c_uf * c_f0_upper - sqrt(2d)|
};
ClosedFormConstants closed_form_constants(int d);

struct CommutingDilation {
  UnitaryTuple base;               // irreducible U of the rotation algebra, zero phases
  std::vector<ComplexMatrix> normals;  // commuting unitaries N_k
  ComplexMatrix isometry;          // V with V^* (c N_k) V = U_k
  double scale = 1;                // c
  CertifiedValue h_norm;
  std::vector<double> optimal_phases;
  double state_value = 1;          // phi(u_k), identical for every k
  double commutator_residual = 0;  // max ||N_k N_l - N_l N_k||
  double compression_residual = 0; // max ||V^* (c N_k) V - U_k||
  double isometry_defect = 0;      // ||V^* V - I||
};

/// Commuting normal dilation at scale c = 2d / ||h|| built from a cyclically
/// averaged vector state. Throws CertificateError when the ||h|| certificate
/// is wider than max_certificate_width.
CommutingDilation build_commuting_dilation(RationalAngle q, int d, const DilationConfig& cfg = {},
                                           double max_certificate_width = 0.05);

}  // namespace ncdil
