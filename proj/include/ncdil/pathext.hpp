#pragma once

// Hoelder extension of maps defined on the base-k grid
//     Gamma = union_n Gamma_n,   Gamma_n = { j / k^n : 0 <= j <= k^n }.
//
// If adjacent points of every Gamma_n satisfy d(g(s), g(t)) <= C1 |t - s|^alpha
// then g is globally Hoelder on Gamma with constant holder_constant(k, alpha, C1)
// and extends uniquely to [0, 1]. extend() evaluates the extension by floor
// truncation of the base-k expansion of t.

#include "ncdil/errors.hpp"
#include "ncdil/matcore.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace ncdil {

/// 2 k C1 / (1 - k^{-alpha}) for alpha in (0, 1); C1 for alpha = 1.
double holder_constant(int k, double alpha, double C1);

/// k^n as an exact integer; throws UsageError past 2^53.
std::int64_t grid_power(int k, int n);

/// A map on Gamma into a metric space. evaluate(j, n) is the value at j / k^n
/// and must not depend on the representative (evaluate(j, n) == evaluate(jk, n+1)).
/// Callbacks must be safe to call concurrently if extend runs in parallel.
template <class Point>
struct GridPathOracle {
  int k = 2;
  double alpha = 1.0;
  double C1 = 0.0;
  std::function<Point(std::int64_t j, int n)> evaluate;
  std::function<double(const Point&, const Point&)> metric;

  double constant() const { return holder_constant(k, alpha, C1); }
};

template <class Point>
struct Extension {
  Point point;
  int depth = 0;
  std::int64_t index = 0;   // t_depth = index / k^depth
  bool grid_point = false;  // t itself lies on Gamma_depth
};

/// Smallest depth n with C k^{-n alpha} <= eps.
int extension_depth(int k, double alpha, double C, double eps);

template <class Point>
Extension<Point> extend(const GridPathOracle<Point>& g, double t, double eps) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  if (!(t >= 0.0 && t <= 1.0)) throw UsageError("t must lie in [0, 1]");
  const int depth = extension_depth(g.k, g.alpha, g.constant(), eps);
  for (int n = 0; n <= depth; ++n) {
    const double kn = static_cast<double>(grid_power(g.k, n));
    const double scaled = t * kn;
    const double j = std::floor(scaled);
    if (j == scaled || n == depth) {
      const auto idx = static_cast<std::int64_t>(j);
      return Extension<Point>{g.evaluate(idx, n), n, idx, j == scaled};
    }
  }
  throw UsageError("unreachable extension depth");
}

/// max over adjacent pairs of Gamma_n, n <= max_level, of d / k^{-n alpha}.
template <class Point>
double adjacent_ratio(const GridPathOracle<Point>& g, int max_level) {
  double worst = 0;
  for (int n = 0; n <= max_level; ++n) {
    const std::int64_t kn = grid_power(g.k, n);
    const double step = std::pow(static_cast<double>(g.k), -n * g.alpha);
    Point prev = g.evaluate(0, n);
    for (std::int64_t j = 1; j <= kn; ++j) {
      Point cur = g.evaluate(j, n);
      worst = std::max(worst, g.metric(prev, cur) / step);
      prev = std::move(cur);
    }
  }
  return worst;
}

struct PairAudit {
  double max_ratio = 0;      // max d(g(s), g(t)) / |t - s|^alpha
  double constant = 0;       // holder_constant
  std::size_t samples = 0;
  std::size_t violations = 0;
};

/// Samples grid pairs with levels drawn uniformly from [0, max_level].
template <class Point>
PairAudit audit_pair_bound(const GridPathOracle<Point>& g, std::size_t samples, std::uint64_t seed,
                           int max_level = 12) {
  PairAudit rep;
  rep.constant = g.constant();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, max_level);
  while (rep.samples < samples) {
    const int n1 = level(rng);
    const int n2 = level(rng);
    const std::int64_t k1 = grid_power(g.k, n1);
    const std::int64_t k2 = grid_power(g.k, n2);
    const std::int64_t j1 = std::uniform_int_distribution<std::int64_t>(0, k1)(rng);
    const std::int64_t j2 = std::uniform_int_distribution<std::int64_t>(0, k2)(rng);
    const double s = static_cast<double>(j1) / static_cast<double>(k1);
    const double t = static_cast<double>(j2) / static_cast<double>(k2);
    if (s == t) continue;
    const double ratio = g.metric(g.evaluate(j1, n1), g.evaluate(j2, n2)) / std::pow(std::abs(t - s), g.alpha);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > rep.constant * (1.0 + 1e-12) + 1e-15) ++rep.violations;
    ++rep.samples;
  }
  return rep;
}

// Synthetic oracles ---------------------------------------------------------

/// g(s) = s x on the real line; alpha = 1, C1 = |x|.
GridPathOracle<double> linear_oracle(double x, int k = 2);

/// Real-valued random Faber-Schauder sum: slope b plus trapezoid hats on
/// every level-(n-1) cell with coefficients uniform in [-A k^{-n alpha}, A k^{-n alpha}],
/// drawn from (seed, n, j). alpha in (0, 1); C1 = |b| + A / (1 - k^{alpha-1}).
GridPathOracle<double> faber_schauder_oracle(int k, double alpha, double amplitude, double slope,
                                             std::uint64_t seed);

/// Tuples (exp(i f_1(t) H_1), ..., exp(i f_d(t) H_d)) with Faber-Schauder f_i and
/// Hermitian H_i of unit norm; metric max_i ||U_i - V_i||.
GridPathOracle<std::vector<ComplexMatrix>> unitary_path_oracle(int d, Index dim, int k, double alpha,
                                                               double amplitude, std::uint64_t seed);

}  // namespace ncdil
