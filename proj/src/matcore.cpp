#include "ncdil/matcore.hpp"

#include "ncdil/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace ncdil {

UnitaryTuple::UnitaryTuple(std::vector<ComplexMatrix> matrices, const MatcoreConfig& cfg)
    : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw UsageError("unitary tuple must contain at least one matrix");
  const Index n = matrices_.front().rows();
  if (n < 1) throw UsageError("unitary tuple matrices must be at least 1x1");
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const auto& u = matrices_[i];
    if (u.rows() != n || u.cols() != n)
      throw UsageError("unitary tuple member " + std::to_string(i) + " has mismatched size");
    const double defect = unitarity_defect(u);
    if (defect > cfg.unitary_tol)
      throw UsageError("unitary tuple member " + std::to_string(i) +
                       " is not unitary: ||U*U - I|| = " + std::to_string(defect));
  }
}

double hermitian_asymmetry(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

static void require_hermitian(const ComplexMatrix& a, const MatcoreConfig& cfg) {
  if (a.rows() != a.cols()) throw UsageError("Hermitian input must be square");
  const double asym = hermitian_asymmetry(a);
  if (asym > cfg.hermitian_tol) throw NonHermitianError(asym);
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a, const MatcoreConfig& cfg) {
  require_hermitian(a, cfg);
  if (a.rows() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& a, const MatcoreConfig& cfg) {
  require_hermitian(a, cfg);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  return {es.eigenvalues(), es.eigenvectors()};
}

double top_eigenvalue_unchecked(const ComplexMatrix& a) {
  if (a.rows() == 1) return a(0, 0).real();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(a.rows() - 1);
}

double top_eigenpair_unchecked(const ComplexMatrix& a, ComplexVector& vec) {
  if (a.rows() == 1) {
    vec = ComplexVector::Ones(1);
    return a(0, 0).real();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  vec = es.eigenvectors().col(a.rows() - 1);
  return es.eigenvalues()(a.rows() - 1);
}

double eigen_residual(const ComplexMatrix& a, const EigenSystem& sys) {
  const double scale = std::max(operator_norm(a), std::numeric_limits<double>::min());
  double worst = 0;
  for (Index k = 0; k < sys.values.size(); ++k) {
    const ComplexVector r = a * sys.vectors.col(k) - sys.values(k) * sys.vectors.col(k);
    worst = std::max(worst, r.norm() / scale);
  }
  return worst;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == a.cols() && hermitian_asymmetry(a) <= 1e-14) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }
  const ComplexMatrix gram = a.cols() <= a.rows() ? ComplexMatrix(a.adjoint() * a)
                                                  : ComplexMatrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(gram.rows() - 1)));
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, const MatcoreConfig& cfg) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  const Index need = std::max(rows, cols);
  if (need > cfg.dimension_cap)
    throw ResourceCapError("tensor product dimension exceeds cap", static_cast<std::size_t>(need),
                           static_cast<std::size_t>(cfg.dimension_cap));
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw UsageError("matrix exponential needs a square matrix");
  return a.exp();
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return operator_norm(d);
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

LanczosResult lanczos_extremes(const HermitianMatvec& apply, Index dim, int max_iterations,
                               std::uint64_t seed, double tol) {
  LanczosResult res;
  if (dim == 0) return res;
  const int m = static_cast<int>(std::min<Index>(max_iterations, dim));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexVector q(dim);
  for (Index i = 0; i < dim; ++i) q(i) = Complex(normal(rng), normal(rng));
  q.normalize();

  ComplexMatrix basis(dim, m);
  std::vector<double> alpha, beta;
  ComplexVector w(dim);
  double prev_min = 0, prev_max = 0;
  for (int j = 0; j < m; ++j) {
    basis.col(j) = q;
    apply(q, w);
    const double a = q.dot(w).real();
    alpha.push_back(a);
    // full reorthogonalisation, twice for stability
    for (int pass = 0; pass < 2; ++pass) {
      const ComplexVector coeff = basis.leftCols(j + 1).adjoint() * w;
      w -= basis.leftCols(j + 1) * coeff;
    }
    const double b = w.norm();
    const bool last = (j + 1 == m) || b < 1e-13 * std::max(1.0, std::abs(a));
    if ((j + 1) % 8 == 0 || last) {
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(j + 1, j + 1);
      for (int i = 0; i <= j; ++i) {
        tri(i, i) = alpha[i];
        if (i > 0) tri(i, i - 1) = tri(i - 1, i) = beta[i - 1];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri, Eigen::EigenvaluesOnly);
      res.lambda_min = es.eigenvalues()(0);
      res.lambda_max = es.eigenvalues()(j);
      res.iterations = j + 1;
      const double scale = std::max(1.0, res.norm());
      if (last) break;
      if (j > 8 && std::abs(res.lambda_max - prev_max) < tol * scale &&
          std::abs(res.lambda_min - prev_min) < tol * scale)
        break;
      prev_min = res.lambda_min;
      prev_max = res.lambda_max;
    }
    beta.push_back(b);
    q = w / b;
  }
  return res;
}

}  // namespace ncdil
