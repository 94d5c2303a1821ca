#pragma once

#include <cstddef>
#include <limits>
#include <string>

namespace ncdil {

enum class BoundKind { certified_lower, certified_upper, two_sided, heuristic };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& s);

struct CertificateMethod {
  double grid_step = 0;         // final phase-cell width
  double lipschitz = 0;         // sum of per-phase Lipschitz constants
  bool symmetry_reduction = false;
  std::size_t evaluations = 0;
  std::string description;
};

/// A scalar with rigorous bounds: lower <= true value <= upper (either side
/// may be infinite). `value` is the point estimate inside [lower, upper] and
/// error_bound = max(value - lower, upper - value) over the finite sides; for
/// one-sided results it is the gap between the bound and the estimate.
struct CertifiedValue {
  double value = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double error_bound = 0;
  BoundKind kind = BoundKind::two_sided;
  CertificateMethod method;

  static CertifiedValue exact(double v, CertificateMethod method = {});
  static CertifiedValue two_sided(double estimate, double lower, double upper,
                                  CertificateMethod method = {});
  /// Only the lower side is rigorous; value = lower.
  static CertifiedValue lower_bound(double lower, double estimate, CertificateMethod method = {});
  /// Only the upper side is rigorous; value = upper.
  static CertifiedValue upper_bound(double upper, double estimate, CertificateMethod method = {});

  bool contains(double x, double tol = 0) const { return x >= lower - tol && x <= upper + tol; }
  double width() const { return upper - lower; }
};

}  // namespace ncdil
