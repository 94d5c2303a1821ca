#include "ncdil/freemodel.hpp"

#include "ncdil/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ncdil {

void SampleConfig::validate() const {
  if (N < 2) throw UsageError("matrix dimension N must be at least 2");
  if (trials < 1) throw UsageError("trials must be at least 1");
  if (d < 1) throw UsageError("d must be positive");
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix haar_unitary(Index n, std::mt19937_64& rng) {
  if (n < 1) throw UsageError("unitary size must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0) q.col(j) *= rjj / a;
  }
  return q;
}

std::vector<ComplexMatrix> haar_tuple(Index n, int d, std::uint64_t seed, std::uint64_t trial) {
  std::mt19937_64 rng(split_seed(seed, trial));
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) out.push_back(haar_unitary(n, rng));
  return out;
}

namespace {

template <class F>
void for_trials(const SampleConfig& cfg, F&& body) {
  if (cfg.policy == ExecPolicy::serial) {
    for (int t = 0; t < cfg.trials; ++t) body(t);
    return;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < cfg.trials; ++t) body(t);
}

SampleStats summarise(std::vector<double> values, double target, const SampleConfig& cfg) {
  SampleStats s;
  s.values = std::move(values);
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(s.values.size());
  s.min = *std::min_element(s.values.begin(), s.values.end());
  s.max = *std::max_element(s.values.begin(), s.values.end());
  s.target = target;
  s.deviation = std::abs(s.mean - target);
  s.N = cfg.N;
  s.trials = cfg.trials;
  s.seed = cfg.seed;
  return s;
}

double hermitian_norm(const ComplexMatrix& h) {
  const RealVector ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace

SampleStats estimate_hf_norm(const SampleConfig& cfg) {
  cfg.validate();
  std::vector<double> values(static_cast<std::size_t>(cfg.trials));
  for_trials(cfg, [&](int t) {
    const auto u = haar_tuple(cfg.N, cfg.d, cfg.seed, static_cast<std::uint64_t>(t));
    ComplexMatrix h = ComplexMatrix::Zero(cfg.N, cfg.N);
    for (const auto& ui : u) h += ui + ui.adjoint();
    values[t] = hermitian_norm(h);
  });
  const double target = cfg.d == 1 ? 2.0 : 2.0 * std::sqrt(2.0 * cfg.d - 1.0);
  return summarise(std::move(values), target, cfg);
}

ComplexMatrix build_T(const UnitaryTuple& v) { return build_T(v.matrices()); }

ComplexMatrix build_T(const std::vector<ComplexMatrix>& v) {
  if (v.empty()) throw UsageError("T_d needs at least one matrix");
  const Index n = v.front().rows();
  ComplexMatrix t = ComplexMatrix::Zero(2 * n, 2 * n);
  t.topRightCorner(n, n) = v[0];
  t.bottomLeftCorner(n, n) = v[0].adjoint();
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].rows() != n || v[i].cols() != n) throw UsageError("T_d inputs must share one size");
    const Index m = t.rows();
    const Index blocks = m / n;
    ComplexMatrix next = ComplexMatrix::Zero(2 * m, 2 * m);
    next.topLeftCorner(m, m) = t;
    next.bottomRightCorner(m, m) = -t.adjoint();
    for (Index b = 0; b < blocks; ++b) {
      next.block(b * n, m + b * n, n, n) = v[i];
      next.block(m + b * n, b * n, n, n) = v[i].adjoint();
    }
    t = std::move(next);
  }
  return t;
}

namespace {

// T_d = sum_i S_i (x) v_i + h.c. with S_i a signed partial permutation on
// C^{2^d}: row r of S_i has at most one entry, at column col[i][r], sign sgn[i][r].
struct TPattern {
  int d = 0;
  Index blocks = 0;
  std::vector<std::vector<Index>> col;
  std::vector<std::vector<double>> sgn;
};

TPattern t_pattern(int d) {
  TPattern p;
  p.d = d;
  p.blocks = Index{1} << d;
  p.col.assign(static_cast<std::size_t>(d), std::vector<Index>(p.blocks, -1));
  p.sgn.assign(static_cast<std::size_t>(d), std::vector<double>(p.blocks, 0.0));
  // level-by-level: after level L (size 2^L), S_i for i < L is diag(1, -1) (x) S_i
  // (block sizes 2^{L-1}) and S_L is the top-right identity block
  for (int level = 1; level <= d; ++level) {
    const Index half = Index{1} << (level - 1);
    for (int i = 0; i < level - 1; ++i) {
      for (Index r = 0; r < half; ++r) {
        const Index c = p.col[i][r];
        const double s = p.sgn[i][r];
        p.col[i][r + half] = c >= 0 ? c + half : -1;
        p.sgn[i][r + half] = -s;
      }
    }
    for (Index r = 0; r < half; ++r) {
      p.col[level - 1][r] = r + half;
      p.sgn[level - 1][r] = 1.0;
    }
  }
  return p;
}

}  // namespace

double T_norm(const std::vector<ComplexMatrix>& v, std::uint64_t seed) {
  const int d = static_cast<int>(v.size());
  if (d < 1) throw UsageError("T_d needs at least one matrix");
  const Index n = v.front().rows();
  const TPattern pat = t_pattern(d);
  const Index dim = pat.blocks * n;
  std::vector<ComplexMatrix> adj;
  for (const auto& vi : v) adj.push_back(vi.adjoint());
  auto apply = [&](const ComplexVector& in, ComplexVector& out) {
    out.setZero(dim);
    Eigen::Map<const ComplexMatrix> x(in.data(), n, pat.blocks);
    Eigen::Map<ComplexMatrix> y(out.data(), n, pat.blocks);
    for (int i = 0; i < d; ++i) {
      const ComplexMatrix vx = v[i] * x;
      const ComplexMatrix ax = adj[i] * x;
      for (Index r = 0; r < pat.blocks; ++r) {
        const Index c = pat.col[i][r];
        if (c < 0) continue;
        const double s = pat.sgn[i][r];
        y.col(r) += s * vx.col(c);   // S_i (x) v_i
        y.col(c) += s * ax.col(r);   // S_i^T (x) v_i^*
      }
    }
  };
  const int iters = static_cast<int>(std::min<Index>(dim, 300));
  return lanczos_extremes(apply, dim, iters, seed, 1e-10).norm();
}

SampleStats estimate_T_norm(const SampleConfig& cfg) {
  cfg.validate();
  std::vector<double> values(static_cast<std::size_t>(cfg.trials));
  for_trials(cfg, [&](int t) {
    const auto u = haar_tuple(cfg.N, cfg.d, cfg.seed, static_cast<std::uint64_t>(t));
    values[t] = T_norm(u, split_seed(cfg.seed, 1000003ULL + static_cast<std::uint64_t>(t)));
  });
  const double target = 2.0 * std::sqrt(static_cast<double>(cfg.d) - 1.0);
  return summarise(std::move(values), cfg.d == 1 ? 1.0 : target, cfg);
}

double arcsine_cdf(double x) {
  if (x <= -2) return 0.0;
  if (x >= 2) return 1.0;
  return 0.5 + std::asin(x / 2.0) / std::numbers::pi;
}

double ks_distance(std::vector<double> samples, double (*cdf)(double)) {
  if (samples.empty()) throw UsageError("no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max({worst, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return worst;
}

ArcsineReport arcsine_check(const SampleConfig& cfg, int twist_samples) {
  cfg.validate();
  if (cfg.d != 2) throw UsageError("the arcsine check uses d = 2");
  const auto u = haar_tuple(cfg.N, 2, cfg.seed, 0);
  const ComplexMatrix& a = u[0];
  const ComplexMatrix& b = u[1];
  ArcsineReport rep;
  rep.N = cfg.N;
  rep.seed = cfg.seed;
  const ComplexMatrix s = a.adjoint() * b + b.adjoint() * a;
  const RealVector ev = hermitian_eigenvalues(s, MatcoreConfig{1e-10});
  rep.ks_distance = ks_distance(std::vector<double>(ev.data(), ev.data() + ev.size()), arcsine_cdf);
  rep.sum_norm = operator_norm(a + b);
  const ComplexMatrix ba = b * a;
  const ComplexMatrix ab = a * b;
  rep.commutator_norm = operator_norm(ba - ab);
  std::mt19937_64 rng(split_seed(cfg.seed, 77));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < twist_samples; ++k) {
    const double t = phase(rng);
    rep.twist_phases.push_back(t);
    rep.twisted_norms.push_back(operator_norm(ba - std::polar(1.0, t) * ab));
  }
  return rep;
}

namespace {

void require_common_square(const std::vector<ComplexMatrix>& a) {
  if (a.empty()) throw UsageError("no coefficients given");
  const Index k = a.front().rows();
  for (const auto& m : a)
    if (m.rows() != k || m.cols() != k) throw UsageError("coefficients must be square of one size");
}

// sum_i b_i (x) u_i + b_i^* (x) u_i^*, scaled by `scale`, as an action on
// vectors laid out as N x k (column a holds the block for basis vector a).
HermitianMatvec free_action(const std::vector<ComplexMatrix>& b, const std::vector<ComplexMatrix>& u,
                            double scale) {
  const Index k = b.front().rows();
  const Index n = u.front().rows();
  return [&b, &u, k, n, scale](const ComplexVector& in, ComplexVector& out) {
    out.setZero(k * n);
    Eigen::Map<const ComplexMatrix> x(in.data(), n, k);
    Eigen::Map<ComplexMatrix> y(out.data(), n, k);
    for (std::size_t i = 0; i < b.size(); ++i) {
      y.noalias() += scale * (u[i] * (x * b[i].transpose()));
      y.noalias() += scale * (u[i].adjoint() * (x * b[i].conjugate()));
    }
  };
}

}  // namespace

double free_side_norm(const std::vector<ComplexMatrix>& b, const std::vector<ComplexMatrix>& u,
                      std::uint64_t seed) {
  require_common_square(b);
  if (u.size() != b.size()) throw UsageError("coefficient and unitary counts differ");
  const Index dim = b.front().rows() * u.front().rows();
  const int iters = static_cast<int>(std::min<Index>(dim, 300));
  return lanczos_extremes(free_action(b, u, 0.5), dim, iters, seed, 1e-10).norm();
}

TorusMaximum commuting_side_norm(const std::vector<ComplexMatrix>& b, double grid) {
  require_common_square(b);
  // sup_z lambda_max already equals sup_z ||.||: z -> -z flips the sign
  TorusProblem problem;
  for (const auto& m : b) problem.terms.push_back(0.5 * m);
  problem.period.assign(b.size(), 2.0 * std::numbers::pi);
  TorusSearchOptions opt;
  opt.grid_step = grid;
  opt.policy = ExecPolicy::serial;
  return maximize_top_eigenvalue(problem, opt);
}

LehnerReport lehner_inequality_check(const std::vector<ComplexMatrix>& a, const SampleConfig& cfg,
                                     double commuting_grid) {
  require_common_square(a);
  cfg.validate();
  if (static_cast<int>(a.size()) != cfg.d) throw UsageError("coefficient count must equal d");
  const double d = cfg.d;
  LehnerReport rep;
  const Index k = a.front().rows();
  ComplexMatrix gram = ComplexMatrix::Zero(k, k);
  for (const auto& m : a) gram += m * m.adjoint() + m.adjoint() * m;
  rep.rhs = std::sqrt(2.0 * d) * std::sqrt(2.0 * d - 1.0) / d * std::sqrt(operator_norm(gram));

  bool zero = true;
  for (const auto& m : a) zero = zero && m.norm() == 0.0;
  rep.trial_lhs.assign(static_cast<std::size_t>(cfg.trials), 0.0);
  if (!zero) {
    for_trials(cfg, [&](int t) {
      const auto u = haar_tuple(cfg.N, cfg.d, cfg.seed, static_cast<std::uint64_t>(t));
      const Index dim = k * cfg.N;
      const int iters = static_cast<int>(std::min<Index>(dim, 300));
      rep.trial_lhs[t] = lanczos_extremes(free_action(a, u, 1.0), dim, iters,
                                          split_seed(cfg.seed, 500009ULL + t), 1e-10)
                             .norm();
    });
    // commuting side: ||sum z_i a_i + h.c.|| is twice the Re-norm with b = a
    const TorusMaximum c = commuting_side_norm(a, commuting_grid);
    rep.commuting_lower = 2.0 * c.lower;
    rep.commuting_upper = 2.0 * c.upper;
  }
  rep.lhs = *std::max_element(rep.trial_lhs.begin(), rep.trial_lhs.end());
  return rep;
}

namespace {

std::vector<ComplexMatrix> pattern_coefficients(int d) {
  const TPattern pat = t_pattern(d);
  std::vector<ComplexMatrix> b;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix s = ComplexMatrix::Zero(pat.blocks, pat.blocks);
    for (Index r = 0; r < pat.blocks; ++r)
      if (pat.col[i][r] >= 0) s(r, pat.col[i][r]) = 2.0 * pat.sgn[i][r];
    b.push_back(std::move(s));
  }
  return b;
}

}  // namespace

Cf0Search cf0_ratio_search(const SampleConfig& cfg, Index coeff_dim, const Cf0Options& opt) {
  cfg.validate();
  if (coeff_dim < 1) throw UsageError("coefficient dimension must be positive");
  const auto u = haar_tuple(cfg.N, cfg.d, cfg.seed, 0);
  Cf0Search out;
  const std::uint64_t lanczos_seed = split_seed(cfg.seed, 31337);
  auto ratio = [&](const std::vector<ComplexMatrix>& b) {
    ++out.evaluations;
    const double commuting = commuting_side_norm(b, opt.commuting_grid).upper;
    if (!(commuting > 0)) return 0.0;
    return free_side_norm(b, u, lanczos_seed) / commuting;
  };

  out.pattern_ratio = ratio(pattern_coefficients(cfg.d));

  std::mt19937_64 rng(split_seed(cfg.seed, 4242));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_tuple = [&](double scale) {
    std::vector<ComplexMatrix> b;
    for (int i = 0; i < cfg.d; ++i) {
      ComplexMatrix m(coeff_dim, coeff_dim);
      for (Index c = 0; c < coeff_dim; ++c)
        for (Index r = 0; r < coeff_dim; ++r) m(r, c) = scale * Complex(normal(rng), normal(rng));
      b.push_back(std::move(m));
    }
    return b;
  };

  double best = 0;
  for (int s = 0; s < opt.random_starts; ++s) {
    auto b = random_tuple(1.0);
    double val = ratio(b);
    double step = opt.step;
    for (int it = 0; it < opt.local_steps; ++it) {
      auto trial = random_tuple(step);
      for (int i = 0; i < cfg.d; ++i) trial[i] += b[i];
      const double v = ratio(trial);
      if (v > val) {
        val = v;
        b = std::move(trial);
      } else {
        step *= 0.7;
      }
    }
    if (val > best) {
      best = val;
      out.best_b = b;
    }
  }
  out.random_best = best;
  const double top = std::max(best, out.pattern_ratio);
  if (out.pattern_ratio >= best) out.best_b = pattern_coefficients(cfg.d);

  CertifiedValue v;
  v.value = top;
  v.lower = -std::numeric_limits<double>::infinity();
  v.error_bound = 0;
  v.kind = BoundKind::heuristic;
  v.method.grid_step = opt.commuting_grid;
  v.method.evaluations = static_cast<std::size_t>(out.evaluations);
  v.method.description = "finite-N free side over certified commuting upper bound";
  out.ratio = v;
  return out;
}

}  // namespace ncdil
