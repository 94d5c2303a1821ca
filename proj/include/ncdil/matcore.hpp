#pragma once

// Dense complex linear algebra shared by every other module.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace ncdil {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct MatcoreConfig {
  double hermitian_tol = 1e-12;  // relative to max |A_ij|
  double unitary_tol = 1e-10;    // on ||U*U - I||
  Index dimension_cap = 4096;
};

/// Ordered list of d unitaries of a common size n. Construction validates.
class UnitaryTuple {
 public:
  UnitaryTuple() = default;
  explicit UnitaryTuple(std::vector<ComplexMatrix> matrices, const MatcoreConfig& cfg = {});

  std::size_t size() const { return matrices_.size(); }
  Index dim() const { return matrices_.empty() ? 0 : matrices_.front().rows(); }
  const ComplexMatrix& operator[](std::size_t i) const { return matrices_[i]; }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }

 private:
  std::vector<ComplexMatrix> matrices_;
};

/// max_ij |A_ij - conj(A_ji)| / max_ij |A_ij|  (0 for the zero matrix).
double hermitian_asymmetry(const ComplexMatrix& a);

/// Ascending eigenvalues. Throws NonHermitianError beyond cfg.hermitian_tol.
RealVector hermitian_eigenvalues(const ComplexMatrix& a, const MatcoreConfig& cfg = {});

struct EigenSystem {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns
};
EigenSystem hermitian_eigensystem(const ComplexMatrix& a, const MatcoreConfig& cfg = {});

/// Largest eigenvalue of a Hermitian matrix, no symmetry check (hot path).
double top_eigenvalue_unchecked(const ComplexMatrix& a);
/// Largest eigenvalue and a unit eigenvector, no symmetry check.
double top_eigenpair_unchecked(const ComplexMatrix& a, ComplexVector& vec);

/// max over returned pairs of ||A v - lambda v|| / ||A||.
double eigen_residual(const ComplexMatrix& a, const EigenSystem& sys);

/// Spectral norm sqrt(lambda_max(A*A)); max |eigenvalue| for Hermitian input.
double operator_norm(const ComplexMatrix& a);

/// Kronecker product A (x) B. Throws ResourceCapError when the result would
/// exceed cfg.dimension_cap rows or columns.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, const MatcoreConfig& cfg = {});
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(A) by scaling-and-squaring Pade.
ComplexMatrix matrix_exponential(const ComplexMatrix& a);

/// ||U*U - I|| in operator norm.
double unitarity_defect(const ComplexMatrix& u);

ComplexMatrix hermitian_part(const ComplexMatrix& a);  // (A + A*) / 2

/// Extreme eigenvalues of a Hermitian operator given by its action.
struct LanczosResult {
  double lambda_min = 0;
  double lambda_max = 0;
  int iterations = 0;
  double norm() const { return std::max(std::abs(lambda_min), std::abs(lambda_max)); }
};
using HermitianMatvec = std::function<void(const ComplexVector& in, ComplexVector& out)>;

/// Lanczos with full reorthogonalisation. Ritz values approach the extreme
/// eigenvalues from inside the spectrum. Start vector is drawn from `seed`.
LanczosResult lanczos_extremes(const HermitianMatvec& apply, Index dim, int max_iterations,
                               std::uint64_t seed, double tol = 1e-10);

}  // namespace ncdil
