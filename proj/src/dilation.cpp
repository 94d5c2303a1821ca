#include "ncdil/dilation.hpp"

#include "ncdil/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

namespace ncdil {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_d23(int d) {
  if (d != 2 && d != 3) throw UsageError("certified constants are available for d = 2 and d = 3");
}

TorusSearchOptions search_options(const DilationConfig& cfg, double step) {
  TorusSearchOptions opt = cfg.search;
  opt.grid_step = step;
  return opt;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

CertificateMethod method_from(const TorusMaximum& r, bool reduced, std::string description) {
  CertificateMethod m;
  m.grid_step = max_of(r.final_width);
  m.lipschitz = std::accumulate(r.lipschitz.begin(), r.lipschitz.end(), 0.0);
  m.symmetry_reduction = reduced;
  m.evaluations = r.evaluations;
  m.description = std::move(description);
  return m;
}

}  // namespace

HNormSearch h_norm_search(RationalAngle q, int d, const DilationConfig& cfg) {
  require_d23(d);
  if (!(cfg.grid_step > 0)) throw UsageError("grid step must be positive");
  HNormSearch out;
  out.family = irrep_family(q, d, cfg.symmetry_reduction);
  if (q.is_zero()) {
    // commuting case: the 1x1 family at zero phases attains 2d
    out.argmax.assign(static_cast<std::size_t>(d), 0.0);
    out.top_vector = ComplexVector::Ones(1);
    CertificateMethod m;
    m.description = "commuting torus, closed form";
    out.norm = CertifiedValue::exact(2.0 * d, m);
    return out;
  }
  const double step_bound = kTwoPi / static_cast<double>(q.n);
  if (cfg.grid_step > step_bound)
    throw UsageError("grid step exceeds the reduced phase period 2 pi / n");

  TorusProblem problem;
  problem.terms = out.family.generators;
  problem.period = out.family.period;
  const TorusMaximum r = maximize_top_eigenvalue(problem, search_options(cfg, cfg.grid_step));
  out.argmax = r.argmax;
  out.top_vector = r.top_vector;
  auto m = method_from(r, out.family.symmetry_reduced, "phase branch and bound over the irreducible family");
  out.norm = CertifiedValue::two_sided(r.lower, r.lower, r.upper, std::move(m));
  return out;
}

CertifiedValue h_norm_certified(RationalAngle q, int d, double grid_step, const DilationConfig& cfg) {
  DilationConfig c = cfg;
  c.grid_step = grid_step;
  return h_norm_search(q, d, c).norm;
}

namespace {

// ||h|| lower bound from a phase lattice over a (possibly reducible)
// representation; every gauge twist of a representation is again one.
double lattice_top_eigenvalue(const std::vector<ComplexMatrix>& gens, std::size_t budget,
                              std::size_t& evaluations) {
  const std::size_t p = gens.size();
  std::size_t per = 2;
  while (std::pow(static_cast<double>(per + 1), static_cast<double>(p)) <= static_cast<double>(budget)) ++per;
  TorusProblem problem;
  problem.terms = gens;
  problem.period.assign(p, kTwoPi);
  std::vector<std::size_t> idx(p, 0);
  std::vector<double> phi(p, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t j = 0; j < p; ++j) phi[j] = kTwoPi * static_cast<double>(idx[j]) / static_cast<double>(per);
    best = std::max(best, evaluate_top_eigenvalue(problem, phi));
    ++evaluations;
    std::size_t j = 0;
    while (j < p && ++idx[j] == per) idx[j++] = 0;
    if (j == p) break;
  }
  return best;
}

}  // namespace

CertifiedValue c_theta_constant(RationalAngle q, int d, const DilationConfig& cfg) {
  if (d < 1) throw UsageError("d must be positive");
  if (d == 1 || q.is_zero()) {
    CertificateMethod m;
    m.description = d == 1 ? "single unitary" : "commuting torus, closed form";
    return CertifiedValue::exact(1.0, m);
  }
  const double two_d = 2.0 * d;
  if (d == 2 || d == 3) {
    const HNormSearch s = h_norm_search(q, d, cfg);
    const auto& h = s.norm;
    auto m = h.method;
    return CertifiedValue::two_sided(two_d / h.value, two_d / h.upper, two_d / h.lower, m);
  }
  const UnitaryTuple u = tensor_rep(ThetaMatrix::constant(d, q), cfg.matcore);
  std::size_t evals = 0;
  const double h_lower = lattice_top_eigenvalue(u.matrices(), 4096, evals);
  CertifiedValue c;
  c.value = two_d / h_lower;
  c.upper = c.value;
  c.lower = 1.0;
  c.error_bound = 0;
  c.kind = BoundKind::heuristic;
  c.method.evaluations = evals;
  c.method.description = "tensor representation phase lattice; upper bound on c only";
  return c;
}

RationalAngle best_convergent(double turns, long long max_denominator) {
  if (max_denominator < 1) throw UsageError("maximum denominator must be positive");
  double x = turns - std::floor(turns);
  long long h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  RationalAngle best{0, 1};
  for (int it = 0; it < 64; ++it) {
    const double a_real = std::floor(x);
    if (a_real > 1e15) break;
    const long long a = static_cast<long long>(a_real);
    const long long h = a * h_prev + h_prev2;
    const long long k = a * k_prev + k_prev2;
    if (k > max_denominator) break;
    best = RationalAngle::make(h, k);
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = x - a_real;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return best;
}

TransferredConstant c_theta_irrational(double theta, int d, long long max_denominator,
                                       const DilationConfig& cfg) {
  if (!std::isfinite(theta)) throw UsageError("theta must be finite");
  TransferredConstant out;
  out.theta = theta;
  out.convergent = best_convergent(theta / kTwoPi, max_denominator);
  out.raw = c_theta_constant(out.convergent, d, cfg);

  double delta = std::remainder(theta - out.convergent.radians(), kTwoPi);
  delta = std::abs(delta);
  const double pattern = d >= 2 ? ThetaMatrix::from_radians(d, std::vector<double>(static_cast<std::size_t>(d) * (d - 1) / 2, 1.0)).norm() : 0.0;
  out.distance = delta * pattern;

  const double factor = std::exp(out.distance / 4.0);
  CertifiedValue t = out.raw;
  t.lower = std::max(1.0, out.raw.lower / factor);
  t.upper = out.raw.upper * factor;
  t.value = std::clamp(out.raw.value, t.lower, t.upper);
  t.error_bound = std::max(t.value - t.lower, std::isfinite(t.upper) ? t.upper - t.value : 0.0);
  t.method.description += "; transferred from " + out.convergent.str() + " by exp(distance/4)";
  out.transferred = t;
  return out;
}

// ---------------------------------------------------------------------------
// General Theta.

namespace {

struct Representation {
  std::vector<ComplexMatrix> generators;
  std::vector<double> period;
  bool irreducible = false;
};

Representation general_representation(const ThetaMatrix& theta, const DilationConfig& cfg) {
  Representation rep;
  const int d = theta.d();
  if (d == 2) {
    const auto fam = irrep_family(theta.rational(0, 1), 2, cfg.symmetry_reduction);
    rep.generators = fam.generators;
    rep.period = fam.period;
    rep.irreducible = true;
  } else if (d == 3 && theta.is_constant()) {
    const auto fam = irrep_family(theta.rational(0, 1), 3, cfg.symmetry_reduction);
    rep.generators = fam.generators;
    rep.period = fam.period;
    rep.irreducible = true;
  } else {
    rep.generators = tensor_rep(theta, cfg.matcore).matrices();
    rep.period.assign(rep.generators.size(), kTwoPi);
  }
  return rep;
}

struct InnerResult {
  double lower = 0;
  double upper = 0;
  std::vector<double> state;  // Re phi(u_k) for the maximising vector state
  std::size_t evaluations = 0;
  double grid = 0;
  double lipschitz = 0;
};

// sup over phases of lambda_max(Re sum_k t_k e^{i phi_k} G_k).
InnerResult inner_sup(const Representation& rep, const std::vector<double>& t, double step,
                      const DilationConfig& cfg) {
  TorusProblem problem;
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] <= 0) continue;
    active.push_back(k);
    problem.terms.push_back(rep.generators[k] * Complex(t[k] / 2.0, 0.0));
    problem.period.push_back(rep.period[k]);
  }
  const TorusMaximum r = maximize_top_eigenvalue(problem, search_options(cfg, step));
  InnerResult out;
  out.lower = r.lower;
  out.upper = r.upper;
  out.evaluations = r.evaluations;
  out.grid = max_of(r.final_width);
  out.lipschitz = std::accumulate(r.lipschitz.begin(), r.lipschitz.end(), 0.0);
  out.state.assign(t.size(), 0.0);
  const ComplexVector& v = r.top_vector;
  std::vector<bool> is_active(t.size(), false);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const std::size_t k = active[a];
    is_active[k] = true;
    const Complex e = v.dot(rep.generators[k] * v);  // v^* G_k v
    out.state[k] = (std::polar(1.0, r.argmax[a]) * e).real();
  }
  // inactive phases do not move H, so they can be turned to face the state
  for (std::size_t k = 0; k < t.size(); ++k)
    if (!is_active[k]) out.state[k] = std::abs(v.dot(rep.generators[k] * v));
  return out;
}

void compositions(int d, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = total; a >= 0; --a) {
    cur.push_back(a);
    compositions(d, total - a, cur, out);
    cur.pop_back();
  }
}

// max over mixtures lambda of min_k (lambda^T G)_k, by multiplicative weights
// on the k side and best responses on the state side. The returned value is
// evaluated at the averaged mixture, so it is exact for that mixture.
double mixed_state_bound(const std::vector<std::vector<double>>& states, int iterations) {
  if (states.empty()) return -std::numeric_limits<double>::infinity();
  const std::size_t d = states.front().size();
  const std::size_t j_count = states.size();
  std::vector<double> w(d, 1.0 / static_cast<double>(d));
  std::vector<double> counts(j_count, 0.0);
  const double eta = std::sqrt(8.0 * std::log(static_cast<double>(std::max<std::size_t>(d, 2))) /
                               static_cast<double>(iterations));
  for (int it = 0; it < iterations; ++it) {
    std::size_t best_j = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < j_count; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < d; ++k) s += w[k] * states[j][k];
      if (s > best) {
        best = s;
        best_j = j;
      }
    }
    counts[best_j] += 1.0;
    double z = 0;
    for (std::size_t k = 0; k < d; ++k) {
      w[k] *= std::exp(-eta * states[best_j][k]);
      z += w[k];
    }
    for (double& x : w) x /= z;
  }
  double result = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d; ++k) {
    double s = 0;
    for (std::size_t j = 0; j < j_count; ++j) s += counts[j] * states[j][k];
    result = std::min(result, s / static_cast<double>(iterations));
  }
  // the single best state is also a candidate
  for (const auto& g : states) result = std::max(result, *std::min_element(g.begin(), g.end()));
  return result;
}

}  // namespace

GeneralConstant c_theta_general(const ThetaMatrix& theta, const SimplexSearchConfig& search,
                                const DilationConfig& cfg) {
  const int d = theta.d();
  if (d < 1) throw UsageError("theta matrix is empty");
  if (search.lattice < 1 || search.refinement_rounds < 0 || !(search.estimate_step > 0))
    throw UsageError("invalid simplex search parameters");
  GeneralConstant out;
  out.weights.assign(static_cast<std::size_t>(d), 1.0 / d);

  bool zero = true;
  if (theta.is_rational()) {
    for (int k = 0; k < d; ++k)
      for (int l = k + 1; l < d; ++l) zero = zero && theta.rational(k, l).is_zero();
  } else {
    zero = theta.norm() == 0.0;
  }
  if (d == 1 || zero) {
    CertificateMethod m;
    m.description = d == 1 ? "single unitary" : "commuting torus, closed form";
    out.c = CertifiedValue::exact(1.0, m);
    out.irreducible_family = true;
    return out;
  }
  if (!theta.is_rational()) throw UsageError("general theta must have rational entries");

  const Representation rep = general_representation(theta, cfg);
  out.irreducible_family = rep.irreducible;

  std::vector<std::vector<double>> states;
  std::size_t evaluations = 0;
  // Reducible tensor families have degenerate top eigenvalues, so the phase
  // search cannot prune; their estimates only feed the heuristic value.
  const double estimate_step = rep.irreducible ? search.estimate_step : std::max(search.estimate_step, 0.2);
  auto estimate = [&](const std::vector<double>& t) {
    InnerResult r = inner_sup(rep, t, estimate_step, cfg);
    evaluations += r.evaluations;
    states.push_back(r.state);
    return r.lower;
  };

  // coarse simplex lattice
  std::vector<std::vector<int>> lattice;
  std::vector<int> cur;
  compositions(d, search.lattice, cur, lattice);
  std::vector<double> best_t;
  double best_val = std::numeric_limits<double>::infinity();
  for (const auto& a : lattice) {
    std::vector<double> t(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) t[k] = static_cast<double>(a[k]) / search.lattice;
    const double v = estimate(t);
    if (v < best_val) {
      best_val = v;
      best_t = t;
    }
  }

  // pattern search: move mass between pairs of coordinates
  double spacing = 1.0 / (2.0 * search.lattice);
  for (int round = 0; round < search.refinement_rounds; ++round, spacing /= 2.0) {
    for (int moves = 0; moves < 8; ++moves) {
      std::vector<double> step_t;
      double step_val = best_val;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (i == j || best_t[j] < spacing - 1e-15) continue;
          std::vector<double> t = best_t;
          t[i] += spacing;
          t[j] = std::max(0.0, t[j] - spacing);
          const double v = estimate(t);
          if (v < step_val - 1e-12) {
            step_val = v;
            step_t = t;
          }
        }
      if (step_t.empty()) break;
      best_t = std::move(step_t);
      best_val = step_val;
    }
  }
  out.weights = best_t;

  const double alpha_lo = mixed_state_bound(states, search.dual_iterations) - 1e-12;
  const double c_upper = alpha_lo > 0 ? 1.0 / alpha_lo : std::numeric_limits<double>::infinity();

  CertificateMethod m;
  m.symmetry_reduction = rep.irreducible && cfg.symmetry_reduction;
  if (rep.irreducible) {
    const InnerResult fine = inner_sup(rep, best_t, cfg.grid_step, cfg);
    evaluations += fine.evaluations;
    states.push_back(fine.state);
    const double alpha_lo2 = mixed_state_bound(states, search.dual_iterations) - 1e-12;
    const double c_up = alpha_lo2 > 0 ? 1.0 / std::max(alpha_lo, alpha_lo2) : c_upper;
    m.grid_step = fine.grid;
    m.lipschitz = fine.lipschitz;
    m.evaluations = evaluations;
    m.description = "simplex search; phase branch and bound at the best weights; mixed vector states";
    out.c = CertifiedValue::two_sided(1.0 / fine.lower, 1.0 / fine.upper, c_up, m);
  } else {
    m.evaluations = evaluations;
    m.description = "tensor representation with gauge twists; mixed vector states bound c from above";
    CertifiedValue c;
    c.lower = 1.0;
    c.upper = c_upper;
    c.value = std::clamp(1.0 / best_val, 1.0, c_upper);
    c.error_bound = c_upper - c.value;
    c.kind = BoundKind::certified_upper;
    c.method = m;
    out.c = c;
  }
  out.states = states.size();
  return out;
}

double tensor_upper_bound(const ThetaMatrix& theta, const DilationConfig& cfg) {
  const int d = theta.d();
  if (d < 2) return 1.0;
  std::map<std::pair<long long, long long>, double> cache;
  auto upper_2d = [&](int k, int l) {
    if (theta.is_rational()) {
      const RationalAngle q = theta.rational(k, l);
      const auto key = std::make_pair(q.m, q.n);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      const double u = c_theta_constant(q, 2, cfg).upper;
      cache.emplace(key, u);
      return u;
    }
    return c_theta_irrational(theta(k, l), 2, 200, cfg).transferred.upper;
  };
  double product = 1.0;
  for (int l = 1; l < d; ++l) {
    double worst = 1.0;
    for (int k = 0; k < l; ++k) worst = std::max(worst, upper_2d(k, l));
    product *= worst;
  }
  return product;
}

ClosedFormConstants closed_form_constants(int d) {
  if (d < 1) throw UsageError("d must be positive");
  ClosedFormConstants c;
  c.d = d;
  if (d == 1) return c;  // a single unitary: everything is 1
  const double dd = d;
  c.c_uf = dd / std::sqrt(2.0 * dd - 1.0);
  c.c_f0_lower = 2.0 * std::sqrt(1.0 - 1.0 / dd);
  c.c_f0_upper = 2.0 * std::sqrt(1.0 - 1.0 / (2.0 * dd));
  c.C_d_upper = std::sqrt(2.0 * dd);
  c.C_d_lower_known = std::sqrt(dd);
  if (d == 2) c.C_d_lower_known = std::max(c.C_d_lower_known, 1.543);
  if (d == 3) c.C_d_lower_known = std::max(c.C_d_lower_known, 1.858);
  c.f0_bounds_apply = true;
  c.identity_residual = std::abs(c.c_uf * c.c_f0_upper - c.C_d_upper);
  return c;
}

// ---------------------------------------------------------------------------

CommutingDilation build_commuting_dilation(RationalAngle q, int d, const DilationConfig& cfg,
                                           double max_certificate_width) {
  require_d23(d);
  const auto base_u = d == 2 ? irrep_d2(q, PhasePoint::zeros(2)) : irrep_d3_constant(q, PhasePoint::zeros(3));
  CommutingDilation out;
  out.base = base_u;
  const Index n = base_u.dim();

  if (q.is_zero()) {
    out.normals = base_u.matrices();
    out.isometry = ComplexMatrix::Identity(n, n);
    out.scale = 1.0;
    out.h_norm = CertifiedValue::exact(2.0 * d);
    out.optimal_phases.assign(static_cast<std::size_t>(d), 0.0);
    return out;
  }

  // a state on the opposite torus maximising psi(h)
  const HNormSearch s = h_norm_search(q.negated(), d, cfg);
  if (s.norm.width() > max_certificate_width)
    throw CertificateError("norm certificate width " + std::to_string(s.norm.width()) +
                           " exceeds the requested tolerance; use a finer grid");
  out.h_norm = s.norm;
  out.optimal_phases = s.argmax;
  std::vector<ComplexMatrix> pi(static_cast<std::size_t>(d));
  const ComplexVector& xi = s.top_vector;
  for (int k = 0; k < d; ++k) {
    pi[k] = std::polar(1.0, s.argmax[k]) * s.family.generators[k];
    const Complex val = xi.dot(pi[k] * xi);
    if (std::abs(val) > 0) pi[k] *= std::conj(val) / std::abs(val);  // gauge so psi(u_k) >= 0
  }

  // sigma: u_k -> u_{k+1}, u_d -> u_1^*; rho_j = pi o sigma^j
  const Index m = pi.front().rows();
  std::vector<ComplexMatrix> big(static_cast<std::size_t>(d), ComplexMatrix::Zero(d * m, d * m));
  double psi_sum = 0;
  for (int k = 0; k < d; ++k) psi_sum += xi.dot(pi[k] * xi).real();
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      int idx = k;
      bool adjoint = false;
      for (int step = 0; step < j; ++step) {
        if (idx + 1 < d) {
          ++idx;
        } else {
          idx = 0;
          adjoint = !adjoint;
        }
      }
      big[k].block(j * m, j * m, m, m) = adjoint ? ComplexMatrix(pi[idx].adjoint()) : pi[idx];
    }

  ComplexVector stacked(d * m);
  for (int j = 0; j < d; ++j) stacked.segment(j * m, m) = xi / std::sqrt(static_cast<double>(d));

  out.scale = static_cast<double>(d) / psi_sum;
  out.state_value = psi_sum / static_cast<double>(d);
  out.isometry = tensor(ComplexMatrix::Identity(n, n), ComplexMatrix(stacked), cfg.matcore);
  for (int k = 0; k < d; ++k) out.normals.push_back(tensor(base_u[k], big[k], cfg.matcore));

  for (int k = 0; k < d; ++k) {
    const ComplexMatrix comp = out.isometry.adjoint() * (out.scale * out.normals[k]) * out.isometry;
    out.compression_residual = std::max(out.compression_residual, operator_norm(comp - base_u[k]));
    for (int l = k + 1; l < d; ++l) {
      const ComplexMatrix c = out.normals[k] * out.normals[l] - out.normals[l] * out.normals[k];
      out.commutator_residual = std::max(out.commutator_residual, operator_norm(c));
    }
  }
  out.isometry_defect =
      operator_norm(out.isometry.adjoint() * out.isometry - ComplexMatrix::Identity(n, n));
  return out;
}

}  // namespace ncdil
