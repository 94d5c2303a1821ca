#pragma once

// Certified global maximisation of the top eigenvalue of a Hermitian family
// parameterised by a box of phases,
//
//     H(phi) = B + sum_j ( e^{i phi_j} T_j + e^{-i phi_j} T_j^* ),
//     phi_j in [0, period_j).
//
// Moving phi_j by delta moves H by at most 2 ||T_j|| |delta| in operator
// norm, so lambda_max is Lipschitz with constants L_j = 2 ||T_j||. The search
// is a level-synchronous branch and bound on a dyadic grid of cells,
// evaluated at cell corners: a cell of widths w_j cannot exceed its corner
// value plus sum_j L_j w_j. Where the corner eigenvalue is separated from the
// rest of the spectrum, a second-order bound (first-order rise along the top
// eigenvector plus a Schur-complement correction over the gap) replaces the
// Lipschitz one when smaller. Cells whose bound falls below the best value
// found so far are discarded; the rest are halved until every width is at
// most the requested grid step.
//
// Every evaluated corner of a level is also a corner of the next level, so a
// finer grid step on the same dyadic chain never lowers the certified lower
// bound.

#include "ncdil/matcore.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ncdil {

struct TorusProblem {
  ComplexMatrix base;                // Hermitian offset; empty means zero
  std::vector<ComplexMatrix> terms;  // T_j, all n x n
  std::vector<double> period;        // phase j ranges over [0, period_j)

  Index dim() const;
  std::size_t phases() const { return terms.size(); }
  ComplexMatrix assemble(std::span<const double> phi) const;
};

enum class ExecPolicy { serial, parallel };

struct TorusSearchOptions {
  double grid_step = 2e-3;          // final cell width bound (radians)
  std::size_t max_cells = 20'000'000;
  ExecPolicy policy = ExecPolicy::parallel;
  int threads = 0;                  // 0: OpenMP default
};

struct TorusMaximum {
  double lower = 0;                  // best evaluated lambda_max
  double upper = 0;                  // certified sup
  std::vector<double> argmax;        // lexicographically smallest maximiser found
  ComplexVector top_vector;          // eigenvector of H(argmax)
  std::vector<double> lipschitz;     // L_j
  std::vector<double> final_width;   // w_j at the last level
  std::size_t evaluations = 0;
  int levels = 0;
  double width() const { return upper - lower; }
};

double evaluate_top_eigenvalue(const TorusProblem& problem, std::span<const double> phi);

/// Throws UsageError for a nonpositive grid step or malformed problem and
/// ResourceCapError when the live cell count exceeds options.max_cells.
TorusMaximum maximize_top_eigenvalue(const TorusProblem& problem,
                                     const TorusSearchOptions& options = {});

}  // namespace ncdil
