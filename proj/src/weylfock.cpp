#include "ncdil/weylfock.hpp"

#include "ncdil/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ncdil {

Index fock_dimension(int modes, int cutoff) {
  // C(cutoff + m, m), exact in integer arithmetic
  long double r = 1;
  for (int i = 1; i <= modes; ++i) r = r * (cutoff + i) / i;
  return static_cast<Index>(std::llround(r));
}

namespace {

void enumerate_total(int modes, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == modes - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = 0; a <= total; ++a) {
    cur.push_back(a);
    enumerate_total(modes, total - a, cur, out);
    cur.pop_back();
  }
}

}  // namespace

FockContext::FockContext(int modes, int cutoff, Index size_cap) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1) throw UsageError("Fock space needs at least one mode");
  if (cutoff < 1) throw UsageError("Fock cutoff must be positive");
  const Index dim = fock_dimension(modes, cutoff);
  if (dim > size_cap)
    throw ResourceCapError("Fock truncation exceeds size cap", static_cast<std::size_t>(dim),
                           static_cast<std::size_t>(size_cap));
  basis_.reserve(static_cast<std::size_t>(dim));
  std::vector<int> cur;
  for (int total = 0; total <= cutoff; ++total) enumerate_total(modes, total, cur, basis_);
  for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], static_cast<Index>(i));
}

int FockContext::occupation(Index i) const {
  const auto& s = state(i);
  return std::accumulate(s.begin(), s.end(), 0);
}

Index FockContext::index_of(const std::vector<int>& occ) const {
  const auto it = index_.find(occ);
  return it == index_.end() ? -1 : it->second;
}

std::vector<Index> FockContext::low_block(int max_total, int trailing_zero) const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i) {
    if (occupation(i) > max_total) break;  // graded order
    const auto& s = state(i);
    bool ok = true;
    for (int j = modes_ - trailing_zero; j < modes_; ++j) ok = ok && s[j] == 0;
    if (ok) out.push_back(i);
  }
  return out;
}

SparseComplex FockContext::generator(const ComplexVector& z) const {
  if (z.size() != modes_) throw UsageError("displacement vector length differs from the mode count");
  std::vector<Eigen::Triplet<Complex>> entries;
  std::vector<int> s;
  for (Index i = 0; i < size(); ++i) {
    s = state(i);
    const int total = occupation(i);
    for (int j = 0; j < modes_; ++j) {
      if (total < cutoff_ && z(j) != Complex(0)) {
        ++s[j];
        entries.emplace_back(index_of(s), i, z(j) * std::sqrt(static_cast<double>(s[j])));
        --s[j];
      }
      if (s[j] > 0 && z(j) != Complex(0)) {
        const double amp = std::sqrt(static_cast<double>(s[j]));
        --s[j];
        entries.emplace_back(index_of(s), i, -std::conj(z(j)) * amp);
        ++s[j];
      }
    }
  }
  SparseComplex g(size(), size());
  g.setFromTriplets(entries.begin(), entries.end());
  return g;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
  // Eigen's dot is conjugate-linear in its first argument
  return b.dot(a);
}

VectorSystem construct_vectors(const ThetaMatrix& theta, const ThetaMatrix& theta_prime) {
  const int d = theta.d();
  if (theta_prime.d() != d) throw UsageError("theta matrices differ in dimension");
  VectorSystem sys;
  sys.theta = theta;
  sys.theta_prime = theta_prime;
  for (int k = 0; k < d; ++k) {
    ComplexVector x = ComplexVector::Zero(d);
    x(k) = 1.0;
    // c_l = conj(xt_k[l]); sum_{j <= l} x_l[j] c_j = (i/2) theta_{k,l}
    std::vector<Complex> c(static_cast<std::size_t>(k));
    for (int l = 0; l < k; ++l) {
      Complex rhs = Complex(0, 0.5 * theta(k, l));
      for (int j = 0; j < l; ++j) rhs -= sys.x[l](j) * c[j];
      c[l] = rhs / sys.x[l](l);
    }
    for (int l = 0; l < k; ++l) x(l) = std::conj(c[l]);
    sys.x.push_back(std::move(x));
  }

  const Eigen::MatrixXd diff = theta_prime.dense() - theta.dense();
  const double dn = (theta_prime - theta).norm();
  ComplexMatrix target = ComplexMatrix::Identity(d, d) * (0.5 * dn);
  target += Complex(0, 0.5) * diff.cast<Complex>();
  const EigenSystem es = hermitian_eigensystem(target, MatcoreConfig{1e-10});
  if (es.values.size() > 0 && es.values(0) < -1e-10)
    throw CertificateError("square-root target is not positive semidefinite");
  RealVector roots = es.values.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix y = es.vectors * roots.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  for (int k = 0; k < d; ++k) {
    sys.y.push_back(y.col(k));
    ComplexVector z(2 * d);
    z << sys.x[k], sys.y[k];
    sys.z.push_back(std::move(z));
  }
  return sys;
}

double VectorCheck::worst() const { return std::max({x_phase, z_phase, y_norm, split}); }

VectorCheck check_vectors(const VectorSystem& sys) {
  const int d = sys.theta.d();
  VectorCheck c;
  const double half = 0.5 * (sys.theta_prime - sys.theta).norm();
  ComplexMatrix gram(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      gram(k, l) = inner(sys.x[k], sys.x[l]);
      if (k < l) {
        c.x_phase = std::max(c.x_phase, std::abs(2.0 * inner(sys.x[l], sys.x[k]).imag() - sys.theta(k, l)));
        c.z_phase =
            std::max(c.z_phase, std::abs(2.0 * inner(sys.z[l], sys.z[k]).imag() - sys.theta_prime(k, l)));
      }
    }
    c.y_norm = std::max(c.y_norm, std::abs(sys.y[k].squaredNorm() - half));
    c.split = std::max(c.split, (sys.z[k].head(d) - sys.x[k]).norm() + (sys.z[k].tail(d) - sys.y[k]).norm());
  }
  c.gram_det = std::abs(gram.determinant());
  return c;
}

ComplexMatrix weyl_matrix(const ComplexVector& z, const FockContext& ctx, const MatcoreConfig& cfg) {
  if (ctx.size() > cfg.dimension_cap)
    throw ResourceCapError("dense Weyl matrix exceeds dimension cap", static_cast<std::size_t>(ctx.size()),
                           static_cast<std::size_t>(cfg.dimension_cap));
  return matrix_exponential(ComplexMatrix(ctx.generator(z)));
}

namespace {

ComplexMatrix exp_action(const SparseComplex& g, double norm_bound, ComplexMatrix x) {
  const int steps = std::max(1, static_cast<int>(std::ceil(norm_bound)));
  const double h = 1.0 / steps;
  for (int s = 0; s < steps; ++s) {
    ComplexMatrix sum = x;
    ComplexMatrix term = x;
    const double base = x.norm();
    for (int k = 1; k <= 80; ++k) {
      term = (g * term) * (h / k);
      sum += term;
      if (term.norm() <= 1e-18 * std::max(base, 1e-300)) break;
    }
    x = std::move(sum);
  }
  return x;
}

double generator_bound(const ComplexVector& z, const FockContext& ctx) {
  return 2.0 * z.norm() * std::sqrt(static_cast<double>(ctx.cutoff()));
}

ComplexMatrix columns(const FockContext& ctx, const std::vector<Index>& idx) {
  ComplexMatrix e = ComplexMatrix::Zero(ctx.size(), static_cast<Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) e(idx[c], static_cast<Index>(c)) = 1.0;
  return e;
}

ComplexMatrix rows(const ComplexMatrix& m, const std::vector<Index>& idx) {
  ComplexMatrix out(static_cast<Index>(idx.size()), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Index>(r)) = m.row(idx[r]);
  return out;
}

}  // namespace

ComplexMatrix weyl_apply(const ComplexVector& z, const FockContext& ctx, const ComplexMatrix& x) {
  if (x.rows() != ctx.size()) throw UsageError("vector length differs from the Fock dimension");
  return exp_action(ctx.generator(z), generator_bound(z, ctx), x);
}

double commutation_defect(const ComplexVector& y, const ComplexVector& z, const FockContext& ctx) {
  const auto low = ctx.low_block(ctx.cutoff() / 2);
  const ComplexMatrix p = columns(ctx, low);
  const ComplexMatrix yz = weyl_apply(y, ctx, weyl_apply(z, ctx, p));
  const ComplexMatrix zy = weyl_apply(z, ctx, weyl_apply(y, ctx, p));
  const Complex phase = std::polar(1.0, 2.0 * inner(y, z).imag());
  return operator_norm(rows(yz - phase * zy, low));
}

double gauge_shift_defect(const ComplexVector& w, const ComplexVector& x, const FockContext& ctx) {
  const auto low = ctx.low_block(ctx.cutoff() / 2);
  const ComplexMatrix p = columns(ctx, low);
  const ComplexMatrix lhs = weyl_apply(-x, ctx, weyl_apply(w, ctx, weyl_apply(x, ctx, p)));
  const ComplexMatrix rhs = std::polar(1.0, 2.0 * inner(w, x).imag()) * weyl_apply(w, ctx, p);
  return operator_norm(rows(lhs - rhs, low));
}

ComplexVector gauge_vector(const VectorSystem& sys, const std::vector<double>& t) {
  const Index d = static_cast<Index>(sys.x.size());
  if (static_cast<Index>(t.size()) != d) throw UsageError("one gauge phase per generator expected");
  // <x_k, x> = sum_j x_k[j] conj(x[j]) = i t_k / 2
  ComplexMatrix rows_x(d, d);
  ComplexVector rhs(d);
  for (Index k = 0; k < d; ++k) {
    rows_x.row(k) = sys.x[k].transpose();
    rhs(k) = Complex(0, 0.5 * t[k]);
  }
  const ComplexVector conj_x = rows_x.fullPivLu().solve(rhs);
  return conj_x.conjugate();
}

CompressionReport verify_compression(const VectorSystem& sys, const CompressionOptions& options) {
  const int d = sys.theta.d();
  if (options.cutoff < 2) throw UsageError("compression cutoff must be at least 2");
  CompressionReport rep;
  rep.cutoff = options.cutoff;
  rep.commutation_cutoff = options.commutation_cutoff;
  rep.scale = std::exp((sys.theta - sys.theta_prime).norm() / 4.0);

  const FockContext big(2 * d, options.cutoff);
  const FockContext small(d, options.cutoff);
  const auto big_low = big.low_block(options.cutoff / 2, d);
  std::vector<Index> small_low;
  for (Index i : big_low) {
    std::vector<int> s(big.state(i).begin(), big.state(i).begin() + d);
    small_low.push_back(small.index_of(s));
  }
  const ComplexMatrix pb = columns(big, big_low);
  const ComplexMatrix ps = columns(small, small_low);
  for (int k = 0; k < d; ++k) {
    const double factor = std::exp(-0.5 * sys.y[k].squaredNorm());
    const ComplexMatrix wb = rows(weyl_apply(sys.z[k], big, pb), big_low);
    const ComplexMatrix ws = rows(weyl_apply(sys.x[k], small, ps), small_low);
    const double r = operator_norm(wb - factor * ws);
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
    const double ys = 1.0 / factor;
    rep.y_scales.push_back(ys);
    rep.scale_mismatch = std::max(rep.scale_mismatch, std::abs(ys - rep.scale));
  }

  const FockContext comm(d, options.commutation_cutoff);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l)
      rep.commutation_defect = std::max(rep.commutation_defect, commutation_defect(sys.x[l], sys.x[k], comm));
  std::vector<double> t(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) t[k] = 0.5 + 0.25 * k;
  const ComplexVector g = gauge_vector(sys, t);
  for (int k = 0; k < d; ++k)
    rep.gauge_defect = std::max(rep.gauge_defect, gauge_shift_defect(sys.x[k], g, comm));

  if (rep.max_residual > options.max_residual)
    throw CertificateError("compression residual " + std::to_string(rep.max_residual) +
                           " exceeds the requested tolerance; increase the cutoff");
  return rep;
}

}  // namespace ncdil
