#include "ncdil/mrange.hpp"

#include "ncdil/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ncdil {

OperatorFamily OperatorFamily::tuple(const UnitaryTuple& u, std::string descriptor) {
  OperatorFamily f;
  f.generators = u.matrices();
  f.descriptor = std::move(descriptor);
  return f;
}

OperatorFamily OperatorFamily::commuting(int d, double r) {
  if (d < 1) throw UsageError("d must be positive");
  OperatorFamily f;
  f.generators.assign(static_cast<std::size_t>(d), ComplexMatrix::Constant(1, 1, Complex(r, 0)));
  f.period.assign(static_cast<std::size_t>(d), 2.0 * std::numbers::pi);
  f.gauge_invariant = true;
  f.descriptor = r == 1.0 ? "u0 d=" + std::to_string(d) : "r*u0 d=" + std::to_string(d) + " r=" + std::to_string(r);
  return f;
}

OperatorFamily OperatorFamily::rotation(RationalAngle q, int d) {
  const IrrepFamily fam = irrep_family(q, d, true);
  OperatorFamily f;
  f.generators = fam.generators;
  f.period = fam.period;
  f.gauge_invariant = true;
  f.descriptor = "rotation theta=2pi*" + q.str() + " d=" + std::to_string(d);
  return f;
}

double support_function(const UnitaryTuple& a, const ComplexVector& c) {
  if (static_cast<std::size_t>(c.size()) != a.size()) throw UsageError("direction length differs from d");
  ComplexMatrix x = ComplexMatrix::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.size(); ++i) x += std::conj(c(static_cast<Index>(i))) * a[i];
  return top_eigenvalue_unchecked(hermitian_part(x));
}

SupportBound support_bound(const OperatorFamily& f, const ComplexVector& c, double phase_grid) {
  if (c.size() != f.d()) throw UsageError("direction length differs from d");
  if (!f.swept()) {
    ComplexMatrix x = ComplexMatrix::Zero(f.generators.front().rows(), f.generators.front().rows());
    for (int i = 0; i < f.d(); ++i) x += std::conj(c(i)) * f.generators[i];
    const double v = top_eigenvalue_unchecked(hermitian_part(x));
    return {v, v};
  }
  TorusProblem problem;
  for (int i = 0; i < f.d(); ++i) {
    if (c(i) == Complex(0)) continue;
    problem.terms.push_back(0.5 * std::conj(c(i)) * f.generators[i]);
    problem.period.push_back(f.period[i]);
  }
  if (problem.terms.empty()) return {0.0, 0.0};
  TorusSearchOptions opt;
  opt.grid_step = phase_grid;
  opt.policy = ExecPolicy::serial;
  const TorusMaximum r = maximize_top_eigenvalue(problem, opt);
  return {r.lower, r.upper};
}

DirectionNet make_direction_net(int d, double resolution, bool orthant, std::size_t max_points) {
  if (d < 1) throw UsageError("d must be positive");
  if (!(resolution > 0)) throw UsageError("net resolution must be positive");
  const int dims = orthant ? d : 2 * d;
  const double lo = orthant ? 0.0 : -1.0;
  const int steps = static_cast<int>(std::ceil((1.0 - lo) / resolution));
  const double spacing = (1.0 - lo) / steps;
  const std::size_t per_face = static_cast<std::size_t>(std::pow(steps + 1.0, dims - 1));
  const std::size_t faces = orthant ? static_cast<std::size_t>(dims) : 2 * static_cast<std::size_t>(dims);
  if (per_face * faces > max_points)
    throw ResourceCapError("direction net exceeds point cap", per_face * faces, max_points);

  DirectionNet net;
  net.orthant = orthant;
  net.gap = spacing * std::sqrt(static_cast<double>(dims - 1)) / 2.0;
  std::vector<double> x(static_cast<std::size_t>(dims));
  std::vector<int> idx(static_cast<std::size_t>(std::max(dims - 1, 0)), 0);
  for (int face = 0; face < dims; ++face) {
    for (int sign = 0; sign < (orthant ? 1 : 2); ++sign) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        for (int j = 0, k = 0; j < dims; ++j) {
          if (j == face) {
            x[j] = sign == 0 ? 1.0 : -1.0;
          } else {
            x[j] = lo + spacing * idx[k++];
          }
        }
        double norm = 0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        ComplexVector c(d);
        for (int i = 0; i < d; ++i)
          c(i) = orthant ? Complex(x[i] / norm, 0.0) : Complex(x[2 * i] / norm, x[2 * i + 1] / norm);
        net.directions.push_back(std::move(c));
        std::size_t j = 0;
        while (j < idx.size() && ++idx[j] > steps) idx[j++] = 0;
        if (j == idx.size()) break;
      }
    }
  }
  return net;
}

SupportProfile support_profile(const OperatorFamily& f, const DirectionNet& net, double phase_grid,
                               ExecPolicy policy) {
  SupportProfile p;
  p.net = net;
  p.descriptor = f.descriptor;
  const std::int64_t count = static_cast<std::int64_t>(net.directions.size());
  p.lower.assign(net.directions.size(), 0.0);
  p.upper.assign(net.directions.size(), 0.0);
  auto body = [&](std::int64_t i) {
    const SupportBound b = support_bound(f, net.directions[i], phase_grid);
    p.lower[i] = b.lower;
    p.upper[i] = b.upper;
  };
  if (policy == ExecPolicy::serial) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) body(i);
  }
  // W_1 of contractions sits in the polydisc, so h(c) <= ||c||_1; only the
  // lower side is attained, the upper side carries grid slack
  for (std::size_t i = 0; i < net.directions.size(); ++i)
    if (p.lower[i] > net.directions[i].lpNorm<1>() + 1e-9) ++p.polydisc_violations;
  return p;
}

L1BallReport l1_ball_containment(const OperatorFamily& f, double resolution, double phase_grid,
                                 double tolerance) {
  const int d = f.d();
  L1BallReport rep;
  if (d == 1 && f.gauge_invariant) {
    // W_1 is a disc: one direction decides the radius
    const SupportBound b = support_bound(f, ComplexVector::Ones(1), phase_grid);
    rep.delta_verified = b.lower;
    rep.linf_margin = b.lower - 1.0;
    rep.contains_l1_ball = rep.linf_margin >= -tolerance;
    rep.directions = 1;
    return rep;
  }
  // Coarse nets first: a net certifies delta at its own gap, so refinement
  // stops once the l1 inradius 1/sqrt(d) is cleared or `resolution` is reached.
  const double sd = std::sqrt(static_cast<double>(d));
  const double target = 1.0 / sd - tolerance;
  for (double r = std::max(resolution, 0.2);; r /= 2.0) {
    const double step = std::max(r, resolution);
    const DirectionNet net = make_direction_net(d, step, f.gauge_invariant);
    const SupportProfile p = support_profile(f, net, phase_grid);
    double min_ratio = std::numeric_limits<double>::infinity();
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.directions.size(); ++i) {
      min_ratio = std::min(min_ratio, p.lower[i]);
      min_margin = std::min(min_margin, p.lower[i] - net.directions[i].cwiseAbs().maxCoeff());
    }
    // h is sqrt(d)-Lipschitz in the Euclidean norm
    rep.delta_verified = min_ratio - sd * net.gap;
    rep.linf_margin = min_margin;
    rep.contains_l1_ball = rep.linf_margin >= -tolerance;
    rep.gap = net.gap;
    rep.directions = net.directions.size();
    rep.polydisc_violations = p.polydisc_violations;
    if (rep.delta_verified >= target || step <= resolution) break;
  }
  return rep;
}

CertifiedValue hausdorff_level1(const OperatorFamily& a, const OperatorFamily& b, double resolution,
                                double phase_grid) {
  if (a.d() != b.d()) throw UsageError("families differ in d");
  const int d = a.d();
  const bool orthant = a.gauge_invariant && b.gauge_invariant;
  const DirectionNet net = make_direction_net(d, resolution, orthant);
  const SupportProfile pa = support_profile(a, net, phase_grid);
  const SupportProfile pb = support_profile(b, net, phase_grid);
  double lower = 0;
  double upper = 0;
  for (std::size_t i = 0; i < net.directions.size(); ++i) {
    const double l1 = net.directions[i].lpNorm<1>();
    const double lo = std::max({pa.lower[i] - pb.upper[i], pb.lower[i] - pa.upper[i], 0.0});
    const double hi = std::max(pa.upper[i] - pb.lower[i], pb.upper[i] - pa.lower[i]);
    lower = std::max(lower, lo / l1);
    upper = std::max(upper, hi / l1);
  }
  // |h_A - h_B| / ||c||_1 moves by at most 4 sqrt(d) per unit of Euclidean distance
  upper += 4.0 * std::sqrt(static_cast<double>(d)) * net.gap;
  CertificateMethod m;
  m.grid_step = phase_grid;
  m.lipschitz = 4.0 * std::sqrt(static_cast<double>(d));
  m.symmetry_reduction = orthant;
  m.evaluations = 2 * net.directions.size();
  m.description = "level-1 support functions on a direction net; max-norm";
  return CertifiedValue::two_sided(lower, lower, upper, m);
}

std::vector<AuditRow> metric_inequality_audit(const std::vector<std::pair<RationalAngle, RationalAngle>>& pairs,
                                              double resolution, double phase_grid, double slack) {
  std::vector<AuditRow> rows;
  for (const auto& [t, tp] : pairs) {
    AuditRow row;
    row.theta = t;
    row.theta_prime = tp;
    const double dist = std::abs(std::remainder(t.radians() - tp.radians(), 2.0 * std::numbers::pi));
    row.bound = std::exp(dist / 4.0) - 1.0;
    if (!(t == tp)) {
      const CertifiedValue h =
          hausdorff_level1(OperatorFamily::rotation(t, 2), OperatorFamily::rotation(tp, 2), resolution, phase_grid);
      row.level1_lower = h.lower;
      row.level1_upper = h.upper;
    }
    row.margin = row.bound - row.level1_lower;
    row.passes = row.level1_lower <= row.bound + slack;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ncdil
