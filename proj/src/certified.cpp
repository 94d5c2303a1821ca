#include "ncdil/certified.hpp"

#include "ncdil/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ncdil {

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::certified_lower: return "certified_lower";
    case BoundKind::certified_upper: return "certified_upper";
    case BoundKind::two_sided: return "two_sided";
    case BoundKind::heuristic: return "heuristic";
  }
  return "heuristic";
}

BoundKind bound_kind_from_string(const std::string& s) {
  if (s == "certified_lower") return BoundKind::certified_lower;
  if (s == "certified_upper") return BoundKind::certified_upper;
  if (s == "two_sided") return BoundKind::two_sided;
  if (s == "heuristic") return BoundKind::heuristic;
  throw UsageError("unknown bound kind '" + s + "'");
}

CertifiedValue CertifiedValue::exact(double v, CertificateMethod method) {
  return two_sided(v, v, v, std::move(method));
}

CertifiedValue CertifiedValue::two_sided(double estimate, double lower, double upper,
                                         CertificateMethod method) {
  CertifiedValue c;
  c.lower = lower;
  c.upper = upper;
  c.value = std::clamp(estimate, lower, upper);
  c.error_bound = std::max(c.value - lower, upper - c.value);
  c.kind = BoundKind::two_sided;
  c.method = std::move(method);
  return c;
}

CertifiedValue CertifiedValue::lower_bound(double lower, double estimate, CertificateMethod method) {
  CertifiedValue c;
  c.value = lower;
  c.lower = lower;
  c.error_bound = std::max(0.0, estimate - lower);
  c.kind = BoundKind::certified_lower;
  c.method = std::move(method);
  return c;
}

CertifiedValue CertifiedValue::upper_bound(double upper, double estimate, CertificateMethod method) {
  CertifiedValue c;
  c.value = upper;
  c.upper = upper;
  c.error_bound = std::max(0.0, upper - estimate);
  c.kind = BoundKind::certified_upper;
  c.method = std::move(method);
  return c;
}

}  // namespace ncdil
