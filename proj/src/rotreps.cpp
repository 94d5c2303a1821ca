#include "ncdil/rotreps.hpp"

#include "ncdil/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace ncdil {

RationalAngle RationalAngle::make(long long m, long long n) {
  if (n <= 0) throw UsageError("rational angle denominator must be positive");
  m %= n;
  if (m < 0) m += n;
  const long long g = std::gcd(m, n);
  if (g > 1) {
    m /= g;
    n /= g;
  }
  if (m == 0) n = 1;
  return RationalAngle{m, n};
}

double RationalAngle::radians() const {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
}

Complex RationalAngle::unit() const { return std::polar(1.0, radians()); }

std::string RationalAngle::str() const { return std::to_string(m) + "/" + std::to_string(n); }

// ---------------------------------------------------------------------------

std::size_t ThetaMatrix::slot(int k, int l) const {
  // row-major strict upper triangle
  return static_cast<std::size_t>(k) * (2 * d_ - k - 1) / 2 + static_cast<std::size_t>(l - k - 1);
}

ThetaMatrix ThetaMatrix::zero(int d) {
  if (d < 1) throw UsageError("theta matrix dimension must be positive");
  ThetaMatrix t;
  t.d_ = d;
  t.upper_.assign(static_cast<std::size_t>(d) * (d - 1) / 2, 0.0);
  t.rational_ = std::vector<RationalAngle>(t.upper_.size(), RationalAngle{0, 1});
  return t;
}

ThetaMatrix ThetaMatrix::from_radians(int d, const std::vector<double>& upper) {
  ThetaMatrix t = zero(d);
  if (upper.size() != t.upper_.size())
    throw UsageError("expected " + std::to_string(t.upper_.size()) + " upper-triangle entries");
  t.upper_ = upper;
  t.rational_.reset();
  return t;
}

ThetaMatrix ThetaMatrix::from_rational(int d, const std::vector<RationalAngle>& upper) {
  ThetaMatrix t = zero(d);
  if (upper.size() != t.upper_.size())
    throw UsageError("expected " + std::to_string(t.upper_.size()) + " upper-triangle entries");
  t.rational_ = upper;
  for (std::size_t i = 0; i < upper.size(); ++i) t.upper_[i] = upper[i].radians();
  return t;
}

ThetaMatrix ThetaMatrix::constant(int d, RationalAngle q) {
  return from_rational(d, std::vector<RationalAngle>(static_cast<std::size_t>(d) * (d - 1) / 2, q));
}

double ThetaMatrix::operator()(int k, int l) const {
  if (k == l) return 0.0;
  if (k < l) return upper_[slot(k, l)];
  return -upper_[slot(l, k)];
}

Eigen::MatrixXd ThetaMatrix::dense() const {
  Eigen::MatrixXd m(d_, d_);
  for (int k = 0; k < d_; ++k)
    for (int l = 0; l < d_; ++l) m(k, l) = (*this)(k, l);
  return m;
}

double ThetaMatrix::norm() const {
  if (d_ < 2) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense());
  return svd.singularValues()(0);
}

const RationalAngle& ThetaMatrix::rational(int k, int l) const {
  if (!rational_) throw UsageError("theta matrix has non-rational entries");
  if (k >= l) throw UsageError("rational entry index must satisfy k < l");
  return (*rational_)[slot(k, l)];
}

bool ThetaMatrix::is_constant() const {
  if (upper_.empty()) return true;
  if (rational_) {
    for (const auto& r : *rational_)
      if (!(r == rational_->front())) return false;
    return true;
  }
  for (double v : upper_)
    if (v != upper_.front()) return false;
  return true;
}

ThetaMatrix ThetaMatrix::leading(int size) const {
  if (size < 1 || size > d_) throw UsageError("invalid leading block size");
  ThetaMatrix t = zero(size);
  for (int k = 0; k < size; ++k)
    for (int l = k + 1; l < size; ++l) {
      t.upper_[t.slot(k, l)] = upper_[slot(k, l)];
      if (rational_) (*t.rational_)[t.slot(k, l)] = (*rational_)[slot(k, l)];
    }
  if (!rational_) t.rational_.reset();
  return t;
}

ThetaMatrix ThetaMatrix::operator-(const ThetaMatrix& other) const {
  if (other.d_ != d_) throw UsageError("theta matrices differ in dimension");
  ThetaMatrix t = *this;
  for (std::size_t i = 0; i < upper_.size(); ++i) t.upper_[i] -= other.upper_[i];
  if (rational_ && other.rational_) {
    for (std::size_t i = 0; i < upper_.size(); ++i) {
      const auto& a = (*rational_)[i];
      const auto& b = (*other.rational_)[i];
      (*t.rational_)[i] = RationalAngle::make(a.m * b.n - b.m * a.n, a.n * b.n);
    }
  } else {
    t.rational_.reset();
  }
  return t;
}

ThetaMatrix ThetaMatrix::negated() const { return zero(d_) - *this; }

PhasePoint PhasePoint::make(std::vector<double> angles) {
  const double two_pi = 2.0 * std::numbers::pi;
  for (double& a : angles) {
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    if (a >= two_pi) a = 0.0;
  }
  return PhasePoint{std::move(angles)};
}

// ---------------------------------------------------------------------------

ComplexMatrix clock_matrix(Complex q, Index n) {
  if (n < 1) throw UsageError("clock matrix size must be positive");
  if (std::abs(std::abs(q) - 1.0) > 1e-12) throw UsageError("clock parameter must lie on the unit circle");
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  const double arg = std::arg(q);
  for (Index j = 0; j < n; ++j) x(j, j) = std::polar(1.0, arg * static_cast<double>(j + 1));
  return x;
}

ComplexMatrix clock_matrix(RationalAngle q, Index n) {
  if (n < 1) throw UsageError("clock matrix size must be positive");
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const long long e = (q.m * static_cast<long long>(j + 1)) % q.n;
    x(j, j) = RationalAngle{e, q.n}.unit();
  }
  return x;
}

ComplexMatrix shift_matrix(Index n) {
  if (n < 1) throw UsageError("shift matrix size must be positive");
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) y(i, i + 1) = 1.0;
  y(n - 1, 0) += 1.0;
  return y;
}

namespace {

void require_phases(const PhasePoint& phases, std::size_t count) {
  if (phases.angles.size() != count)
    throw UsageError("expected " + std::to_string(count) + " phases");
}

}  // namespace

UnitaryTuple irrep_d2(RationalAngle q, const PhasePoint& phases) {
  require_phases(phases, 2);
  const ComplexMatrix x = clock_matrix(q, q.n);
  const ComplexMatrix y = shift_matrix(q.n);
  return UnitaryTuple({std::polar(1.0, phases.angles[0]) * x, std::polar(1.0, phases.angles[1]) * y});
}

UnitaryTuple irrep_d3_constant(RationalAngle q, const PhasePoint& phases) {
  require_phases(phases, 3);
  const ComplexMatrix x = clock_matrix(q, q.n);
  const ComplexMatrix y = shift_matrix(q.n);
  return UnitaryTuple({std::polar(1.0, phases.angles[0]) * x,
                       std::polar(1.0, phases.angles[1]) * (x * y),
                       std::polar(1.0, phases.angles[2]) * y});
}

UnitaryTuple tensor_rep(const ThetaMatrix& theta, const MatcoreConfig& cfg) {
  const int d = theta.d();
  if (!theta.is_rational()) throw UsageError("tensor representation needs rational entries");
  // U^{(1)} = ([1]) on C^1
  std::vector<ComplexMatrix> current{ComplexMatrix::Identity(1, 1)};
  for (int size = 2; size <= d; ++size) {
    const int last = size - 1;
    std::vector<ComplexMatrix> us, vs;
    Index factor_dim = 1;
    for (int k = 0; k < last; ++k) {
      const RationalAngle q = theta.rational(k, last);
      us.push_back(clock_matrix(q, q.n));
      vs.push_back(shift_matrix(q.n));
      factor_dim *= q.n;
    }
    const Index total = current.front().rows() * factor_dim;
    if (total > cfg.dimension_cap)
      throw ResourceCapError("tensor representation dimension exceeds cap",
                             static_cast<std::size_t>(total),
                             static_cast<std::size_t>(cfg.dimension_cap));
    std::vector<ComplexMatrix> next;
    for (int k = 0; k < last; ++k) {
      ComplexMatrix m = current[k];
      for (int s = 0; s < last; ++s)
        m = tensor(m, s == k ? us[s] : ComplexMatrix::Identity(us[s].rows(), us[s].rows()), cfg);
      next.push_back(std::move(m));
    }
    ComplexMatrix ud = ComplexMatrix::Identity(current.front().rows(), current.front().rows());
    for (int s = 0; s < last; ++s) ud = tensor(ud, vs[s], cfg);
    next.push_back(std::move(ud));
    current = std::move(next);
  }
  return UnitaryTuple(std::move(current), cfg);
}

double relation_defect(const UnitaryTuple& u, const ThetaMatrix& theta) {
  if (static_cast<int>(u.size()) != theta.d()) throw UsageError("tuple length differs from theta size");
  double worst = 0;
  for (int k = 0; k < theta.d(); ++k)
    for (int l = k + 1; l < theta.d(); ++l) {
      const Complex phase = std::polar(1.0, theta(k, l));
      const ComplexMatrix r = u[l] * u[k] - phase * (u[k] * u[l]);
      worst = std::max(worst, operator_norm(r));
    }
  return worst;
}

IrrepFamily irrep_family(RationalAngle q, int d, bool reduce) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double step = two_pi / static_cast<double>(q.n);
  IrrepFamily fam;
  fam.symmetry_reduced = reduce && q.n > 1;
  if (d == 2) {
    const auto u = irrep_d2(q, PhasePoint::zeros(2));
    fam.generators = u.matrices();
    fam.period = reduce ? std::vector<double>{step, step} : std::vector<double>{two_pi, two_pi};
  } else if (d == 3) {
    const auto u = irrep_d3_constant(q, PhasePoint::zeros(3));
    fam.generators = u.matrices();
    fam.period = reduce ? std::vector<double>{step, two_pi, step}
                        : std::vector<double>{two_pi, two_pi, two_pi};
  } else {
    throw UsageError("irreducible families are available for d = 2 and constant-theta d = 3");
  }
  return fam;
}

}  // namespace ncdil
