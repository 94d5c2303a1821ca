#include "ncdil/torus_max.hpp"

#include "ncdil/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ncdil {

Index TorusProblem::dim() const {
  if (base.size() > 0) return base.rows();
  return terms.empty() ? 0 : terms.front().rows();
}

ComplexMatrix TorusProblem::assemble(std::span<const double> phi) const {
  const Index n = dim();
  ComplexMatrix h = base.size() > 0 ? base : ComplexMatrix::Zero(n, n);
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const Complex z = std::polar(1.0, phi[j]);
    h.noalias() += z * terms[j];
    h.noalias() += std::conj(z) * terms[j].adjoint();
  }
  return h;
}

double evaluate_top_eigenvalue(const TorusProblem& problem, std::span<const double> phi) {
  return top_eigenvalue_unchecked(problem.assemble(phi));
}

namespace {

struct Layout {
  std::size_t p = 0;
  std::vector<std::uint64_t> roots;  // k_j cells per coordinate at level 0
  std::vector<double> period;

  double width(std::size_t j, int level) const {
    return std::ldexp(period[j] / static_cast<double>(roots[j]), -level);
  }
};

void corner(const Layout& lay, const std::uint64_t* idx, int level, std::vector<double>& phi) {
  for (std::size_t j = 0; j < lay.p; ++j)
    phi[j] = static_cast<double>(idx[j]) * lay.width(j, level);
}

// Corner data for the second-order cell bound: the top eigenpair (lambda_1, v),
// the next eigenvalue, the residual of v, c_j = e^{i phi_j} <v, T_j v> and
// t_j = ||T_j v|| + ||T_j^* v||.
struct CornerData {
  std::size_t stride = 0;
  std::vector<double> store;

  void resize(std::size_t cells) { store.assign(cells * stride, 0.0); }
  double* at(std::size_t c) { return &store[c * stride]; }
  const double* at(std::size_t c) const { return &store[c * stride]; }
};

double evaluate_corner(const TorusProblem& problem, std::span<const double> phi, double* aux) {
  const ComplexMatrix h = problem.assemble(phi);
  const Index n = h.rows();
  const std::size_t p = problem.phases();
  if (n == 1) {
    aux[0] = -std::numeric_limits<double>::infinity();
    aux[1] = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const Complex c = std::polar(1.0, phi[j]) * problem.terms[j](0, 0);
      aux[2 + 3 * j] = c.real();
      aux[3 + 3 * j] = c.imag();
      aux[4 + 3 * j] = 2.0 * std::abs(problem.terms[j](0, 0));
    }
    return h(0, 0).real();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexVector v = es.eigenvectors().col(n - 1);
  const double top = es.eigenvalues()(n - 1);
  aux[0] = es.eigenvalues()(n - 2);
  aux[1] = (h * v - top * v).norm();
  for (std::size_t j = 0; j < p; ++j) {
    const ComplexVector tv = problem.terms[j] * v;
    const Complex c = std::polar(1.0, phi[j]) * v.dot(tv);
    aux[2 + 3 * j] = c.real();
    aux[3 + 3 * j] = c.imag();
    aux[4 + 3 * j] = tv.norm() + (problem.terms[j].adjoint() * v).norm();
  }
  return top;
}

// Evaluates the corners of cells[pending[i]] into values and aux.
void evaluate_cells(const TorusProblem& problem, const Layout& lay, int level,
                    const std::vector<std::uint64_t>& cells,
                    const std::vector<std::size_t>& pending, std::vector<double>& values,
                    CornerData& aux, const TorusSearchOptions& options) {
  const std::int64_t count = static_cast<std::int64_t>(pending.size());
  if (options.policy == ExecPolicy::serial) {
    std::vector<double> phi(lay.p);
    for (std::int64_t i = 0; i < count; ++i) {
      const std::size_t c = pending[i];
      corner(lay, &cells[c * lay.p], level, phi);
      values[c] = evaluate_corner(problem, phi, aux.at(c));
    }
    return;
  }
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<double> phi(lay.p);
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
      const std::size_t c = pending[i];
      corner(lay, &cells[c * lay.p], level, phi);
      values[c] = evaluate_corner(problem, phi, aux.at(c));
    }
  }
}

// max over delta in [0, w] of 2 Re((e^{i delta} - 1) c)
double first_order_rise(Complex c, double w) {
  const double r = std::abs(c);
  if (r == 0) return 0;
  const double psi = std::arg(c);
  const double two_pi = 2.0 * std::acos(-1.0);
  const double next_peak = std::ceil(psi / two_pi) * two_pi;  // first multiple of 2 pi >= psi
  const double top = next_peak <= psi + w ? 1.0 : std::max(std::cos(psi), std::cos(psi + w));
  return 2.0 * r * top - 2.0 * c.real();
}

// Upper bound for lambda_max over the cell with the given corner value.
// Lipschitz: lambda_1 + sum L_j w_j. Second order (when the gap allows): split
// H + E along v and its complement; with e = ||E|| and g the gap,
//     lambda_max(H + E) <= lambda_1 + max <v, E v> + ||E v||^2 / (g - 2e).
double cell_bound(double value, const double* aux, const std::vector<double>& lipschitz,
                  const std::vector<double>& width, double lipschitz_slack) {
  const double first = value + lipschitz_slack;
  const double residual = aux[1];
  double e = residual, ev = residual, rise = 0;
  for (std::size_t j = 0; j < width.size(); ++j) {
    const double s = 2.0 * std::sin(std::min(width[j], std::acos(-1.0)) / 2.0);
    e += lipschitz[j] * s;
    ev += aux[4 + 3 * j] * s;
    rise += first_order_rise(Complex(aux[2 + 3 * j], aux[3 + 3 * j]), width[j]);
  }
  const double gap = value - aux[0] - residual;
  if (!(gap - 2.0 * e > 0)) return first;
  const double second = value + rise + ev * ev / (gap - 2.0 * e);
  return std::min(first, second);
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

TorusMaximum maximize_top_eigenvalue(const TorusProblem& problem,
                                     const TorusSearchOptions& options) {
  if (!(options.grid_step > 0)) throw UsageError("grid step must be positive");
  const std::size_t p = problem.phases();
  if (problem.period.size() != p) throw UsageError("one period per phase term is required");
  const Index n = problem.dim();
  if (n == 0) throw UsageError("empty Hermitian family");

  TorusMaximum out;
  double scale = problem.base.size() > 0 ? operator_norm(problem.base) : 0.0;
  for (const auto& t : problem.terms) {
    if (t.rows() != n || t.cols() != n) throw UsageError("phase terms must share one size");
    out.lipschitz.push_back(2.0 * operator_norm(t));
    scale += out.lipschitz.back();
  }
  const double fp_slack = 64.0 * DBL_EPSILON * static_cast<double>(n) * std::max(scale, 1.0);

  if (p == 0) {
    out.top_vector.resize(n);
    out.lower = top_eigenpair_unchecked(problem.assemble({}), out.top_vector);
    out.upper = out.lower + fp_slack;
    out.evaluations = 1;
    return out;
  }

  Layout lay;
  lay.p = p;
  lay.period = problem.period;
  double min_period = std::numeric_limits<double>::infinity();
  for (double per : problem.period) {
    if (!(per > 0)) throw UsageError("phase periods must be positive");
    min_period = std::min(min_period, per);
  }
  for (double per : problem.period)
    lay.roots.push_back(std::max<std::uint64_t>(1, std::llround(per / min_period)));

  // level 0: every root cell
  std::vector<std::uint64_t> cells;
  std::size_t total = 1;
  for (auto r : lay.roots) total *= r;
  cells.reserve(total * p);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rem = c;
    std::vector<std::uint64_t> idx(p);
    for (std::size_t j = p; j-- > 0;) {
      idx[j] = rem % lay.roots[j];
      rem /= lay.roots[j];
    }
    cells.insert(cells.end(), idx.begin(), idx.end());
  }
  std::vector<double> values(total);
  CornerData aux;
  aux.stride = 2 + 3 * p;
  aux.resize(total);
  std::vector<std::size_t> pending(total);
  for (std::size_t c = 0; c < total; ++c) pending[c] = c;

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_phi;
  std::vector<double> phi(p);
  int level = 0;
  for (;;) {
    evaluate_cells(problem, lay, level, cells, pending, values, aux, options);
    out.evaluations += pending.size();
    const std::size_t live = values.size();

    // order-independent reduction, ties broken lexicographically afterwards
    for (std::size_t c = 0; c < live; ++c) {
      if (values[c] < best) continue;
      corner(lay, &cells[c * p], level, phi);
      if (values[c] > best || lex_less(phi, best_phi)) {
        best = values[c];
        best_phi = phi;
      }
    }

    double slack = 0;
    double max_width = 0;
    std::vector<double> width(p);
    for (std::size_t j = 0; j < p; ++j) {
      width[j] = lay.width(j, level);
      slack += out.lipschitz[j] * width[j];
      max_width = std::max(max_width, width[j]);
    }

    std::vector<double> bound(live);
    std::vector<std::size_t> keep;
    keep.reserve(live);
    for (std::size_t c = 0; c < live; ++c) {
      bound[c] = cell_bound(values[c], aux.at(c), out.lipschitz, width, slack) + fp_slack;
      if (bound[c] >= best) keep.push_back(c);
    }

    if (max_width <= options.grid_step) {
      double upper = best;
      for (std::size_t c : keep) upper = std::max(upper, bound[c]);
      out.lower = best;
      out.upper = upper;
      out.levels = level;
      for (std::size_t j = 0; j < p; ++j) out.final_width.push_back(lay.width(j, level));
      break;
    }

    const std::size_t fan = std::size_t{1} << p;
    const std::size_t next_count = keep.size() * fan;
    if (next_count > options.max_cells)
      throw ResourceCapError("torus search cell count exceeds cap", next_count, options.max_cells);

    std::vector<std::uint64_t> next_cells(next_count * p);
    std::vector<double> next_values(next_count);
    CornerData next_aux;
    next_aux.stride = aux.stride;
    next_aux.resize(next_count);
    pending.clear();
    pending.reserve(next_count - keep.size());
    std::size_t slot = 0;
    for (std::size_t c : keep) {
      for (std::size_t bits = 0; bits < fan; ++bits, ++slot) {
        for (std::size_t j = 0; j < p; ++j)
          next_cells[slot * p + j] = 2 * cells[c * p + j] + ((bits >> j) & 1u);
        if (bits == 0) {
          next_values[slot] = values[c];  // shares the parent's corner
          std::copy_n(aux.at(c), aux.stride, next_aux.at(slot));
        } else {
          pending.push_back(slot);
        }
      }
    }
    cells.swap(next_cells);
    values.swap(next_values);
    aux.store.swap(next_aux.store);
    ++level;
  }

  out.argmax = best_phi;
  out.top_vector.resize(n);
  top_eigenpair_unchecked(problem.assemble(best_phi), out.top_vector);
  return out;
}

}  // namespace ncdil
