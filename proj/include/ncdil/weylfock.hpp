#pragma once

// Truncated symmetric Fock space and Weyl unitaries.
//
// Inner products are linear in the first argument: <x, y> = sum_j x_j conj(y_j).
// W(z) = exp(a^+(z) - a(z)) with a^+(z) = sum_j z_j a_j^+ truncated at total
// occupation `cutoff`. On the untruncated space
//     W(y) W(z) = exp(2i Im<y, z>) W(z) W(y).

#include "ncdil/matcore.hpp"
#include "ncdil/rotreps.hpp"

#include <Eigen/SparseCore>

#include <limits>
#include <map>
#include <vector>

namespace ncdil {

using SparseComplex = Eigen::SparseMatrix<Complex>;

/// Multi-indices (n_1, ..., n_m) with sum <= cutoff, ordered by total
/// occupation and lexicographically within one total.
class FockContext {
 public:
  FockContext(int modes, int cutoff, Index size_cap = 200'000);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  Index size() const { return static_cast<Index>(basis_.size()); }
  const std::vector<int>& state(Index i) const { return basis_[static_cast<std::size_t>(i)]; }
  int occupation(Index i) const;
  /// -1 when the multi-index is outside the truncation.
  Index index_of(const std::vector<int>& occ) const;
  /// Indices with total occupation <= max_total (and, when trailing_zero > 0,
  /// zero occupation in the last trailing_zero modes).
  std::vector<Index> low_block(int max_total, int trailing_zero = 0) const;

  /// a^+(z) - a(z), anti-Hermitian.
  SparseComplex generator(const ComplexVector& z) const;

 private:
  int modes_;
  int cutoff_;
  std::vector<std::vector<int>> basis_;
  std::map<std::vector<int>, Index> index_;
};

/// C(cutoff + m, m).
Index fock_dimension(int modes, int cutoff);

struct VectorSystem {
  std::vector<ComplexVector> x;  // in C^d
  std::vector<ComplexVector> y;  // in C^d
  std::vector<ComplexVector> z;  // x_k (+) y_k in C^{2d}
  ThetaMatrix theta;
  ThetaMatrix theta_prime;
};

/// x_k = e_k + (solution of <x_l, xt_k> = (i/2) theta_{k,l}, l < k) and
/// y_k = column k of the Hermitian square root of (1/2)||D|| I + (i/2) D,
/// D = Theta' - Theta.
VectorSystem construct_vectors(const ThetaMatrix& theta, const ThetaMatrix& theta_prime);

struct VectorCheck {
  double x_phase = 0;     // max |2 Im<x_l, x_k> - theta_{k,l}|
  double z_phase = 0;     // max |2 Im<z_l, z_k> - theta'_{k,l}|
  double y_norm = 0;      // max | ||y_k||^2 - ||D|| / 2 |
  double split = 0;       // max ||z_k - (x_k, y_k)||
  double gram_det = 0;    // det of the Gram matrix of x
  double worst() const;   // max of the residuals above
};
VectorCheck check_vectors(const VectorSystem& sys);

Complex inner(const ComplexVector& a, const ComplexVector& b);  // linear in a

/// Dense W(z) by matrix exponential; bounded by the matcore dimension cap.
ComplexMatrix weyl_matrix(const ComplexVector& z, const FockContext& ctx,
                          const MatcoreConfig& cfg = {});
/// W(z) applied to the columns of x (Taylor series with scaling).
ComplexMatrix weyl_apply(const ComplexVector& z, const FockContext& ctx, const ComplexMatrix& x);

/// ||P (W(y)W(z) - e^{2i Im<y,z>} W(z)W(y)) P|| with P the projection on
/// occupation <= cutoff / 2.
double commutation_defect(const ComplexVector& y, const ComplexVector& z, const FockContext& ctx);

/// ||P (W(x)^* W(w) W(x) - e^{2i Im<w,x>} W(w)) P||, the gauge phase shift.
double gauge_shift_defect(const ComplexVector& w, const ComplexVector& x, const FockContext& ctx);

/// Solves 2 Im<x_k, x> = t_k for x, so conjugation by W(x) multiplies W(x_k)
/// by e^{i t_k}.
ComplexVector gauge_vector(const VectorSystem& sys, const std::vector<double>& t);

struct CompressionOptions {
  int cutoff = 10;             // truncation of Gamma(C^{2d})
  int commutation_cutoff = 20; // truncation of Gamma(C^d) for the phase checks
  double max_residual = std::numeric_limits<double>::infinity();
};

struct CompressionReport {
  std::vector<double> residuals;   // per k, operator norm on the low block
  double max_residual = 0;
  std::vector<double> y_scales;    // e^{||y_k||^2 / 2}
  double scale = 1;                // e^{||Theta - Theta'|| / 4}
  double scale_mismatch = 0;       // max |y_scale - scale|
  double commutation_defect = 0;   // compressed family W(x_k) vs Theta, low block
  double gauge_defect = 0;
  int cutoff = 0;
  int commutation_cutoff = 0;
};

/// Compares P W(z_k) P with e^{-||y_k||^2 / 2} W(x_k) on the block of total
/// occupation <= cutoff / 2 with empty last d modes. Throws CertificateError
/// when the residual exceeds options.max_residual.
CompressionReport verify_compression(const VectorSystem& sys, const CompressionOptions& options = {});

}  // namespace ncdil
