#include "ncdil/pathext.hpp"

#include "ncdil/freemodel.hpp"

#include <algorithm>
#include <memory>

namespace ncdil {

double holder_constant(int k, double alpha, double C1) {
  if (k < 2) throw UsageError("grid base k must be at least 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("Hoelder exponent must lie in (0, 1]");
  if (C1 < 0) throw UsageError("C1 must be nonnegative");
  if (alpha == 1.0) return C1;
  return 2.0 * k * C1 / (1.0 - std::pow(static_cast<double>(k), -alpha));
}

std::int64_t grid_power(int k, int n) {
  if (k < 2) throw UsageError("grid base k must be at least 2");
  if (n < 0) throw UsageError("grid level must be nonnegative");
  std::int64_t p = 1;
  for (int i = 0; i < n; ++i) {
    if (p > (std::int64_t{1} << 53) / k) throw UsageError("grid level too deep for exact indices");
    p *= k;
  }
  return p;
}

int extension_depth(int k, double alpha, double C, double eps) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  int n = 0;
  while (C * std::pow(static_cast<double>(k), -n * alpha) > eps) {
    ++n;
    grid_power(k, n);  // throws once indices stop being exact
  }
  return n;
}

GridPathOracle<double> linear_oracle(double x, int k) {
  GridPathOracle<double> g;
  g.k = k;
  g.alpha = 1.0;
  g.C1 = std::abs(x);
  g.evaluate = [x, k](std::int64_t j, int n) {
    return x * (static_cast<double>(j) / static_cast<double>(grid_power(k, n)));
  };
  g.metric = [](const double& a, const double& b) { return std::abs(a - b); };
  return g;
}

namespace {

double coefficient(std::uint64_t seed, int level, std::int64_t cell) {
  const std::uint64_t h = split_seed(split_seed(seed, static_cast<std::uint64_t>(level)),
                                     static_cast<std::uint64_t>(cell));
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;  // uniform in [-1, 1)
}

// value at j / k^n of the Faber-Schauder sum
double faber_schauder_value(int k, double alpha, double amplitude, double slope, std::uint64_t seed,
                            std::int64_t j, int n) {
  const std::int64_t kn = grid_power(k, n);
  // j / kn first: the quotient is correctly rounded, so (jk, kn k) gives the same bits
  double v = slope * (static_cast<double>(j) / static_cast<double>(kn));
  for (int level = 1; level <= n; ++level) {
    const std::int64_t cell_size = grid_power(k, n - level + 1);  // level-(level-1) cell in units of k^-n
    const std::int64_t sub = cell_size / k;
    const std::int64_t cell = std::min(j / cell_size, grid_power(k, level - 1) - 1);
    const std::int64_t r = j - cell * cell_size;
    double hat;
    if (r <= sub) {
      hat = static_cast<double>(r) / static_cast<double>(sub);
    } else if (r >= cell_size - sub) {
      hat = static_cast<double>(cell_size - r) / static_cast<double>(sub);
    } else {
      hat = 1.0;
    }
    if (hat == 0.0) continue;
    const double a = amplitude * std::pow(static_cast<double>(k), -level * alpha) * coefficient(seed, level, cell);
    v += a * hat;
  }
  return v;
}

}  // namespace

GridPathOracle<double> faber_schauder_oracle(int k, double alpha, double amplitude, double slope,
                                             std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("Faber-Schauder oracle needs alpha in (0, 1)");
  GridPathOracle<double> g;
  g.k = k;
  g.alpha = alpha;
  g.C1 = std::abs(slope) + amplitude / (1.0 - std::pow(static_cast<double>(k), alpha - 1.0));
  g.evaluate = [=](std::int64_t j, int n) { return faber_schauder_value(k, alpha, amplitude, slope, seed, j, n); };
  g.metric = [](const double& a, const double& b) { return std::abs(a - b); };
  return g;
}

GridPathOracle<std::vector<ComplexMatrix>> unitary_path_oracle(int d, Index dim, int k, double alpha,
                                                               double amplitude, std::uint64_t seed) {
  if (d < 1 || dim < 1) throw UsageError("unitary path needs d >= 1 and dim >= 1");
  struct Spectral {
    std::vector<ComplexMatrix> vectors;
    std::vector<RealVector> values;
  };
  auto spec = std::make_shared<Spectral>();
  std::mt19937_64 rng(split_seed(seed, 99));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix a(dim, dim);
    for (Index c = 0; c < dim; ++c)
      for (Index r = 0; r < dim; ++r) a(r, c) = Complex(normal(rng), normal(rng));
    ComplexMatrix h = hermitian_part(a);
    h /= operator_norm(h);
    EigenSystem es = hermitian_eigensystem(h);
    spec->vectors.push_back(es.vectors);
    spec->values.push_back(es.values);
  }
  const double slope = 0.5;
  GridPathOracle<std::vector<ComplexMatrix>> g;
  g.k = k;
  g.alpha = alpha;
  // ||e^{iaH} - e^{ibH}|| <= |a - b| for ||H|| = 1
  g.C1 = alpha < 1.0 ? slope + amplitude / (1.0 - std::pow(static_cast<double>(k), alpha - 1.0)) : slope;
  g.evaluate = [=](std::int64_t j, int n) {
    std::vector<ComplexMatrix> out;
    for (int i = 0; i < d; ++i) {
      const double f = alpha < 1.0
                           ? faber_schauder_value(k, alpha, amplitude, slope, split_seed(seed, 1000 + i), j, n)
                           : slope * (static_cast<double>(j) / static_cast<double>(grid_power(k, n)));
      ComplexVector phases(dim);
      for (Index r = 0; r < dim; ++r) phases(r) = std::polar(1.0, f * spec->values[i](r));
      out.push_back(spec->vectors[i] * phases.asDiagonal() * spec->vectors[i].adjoint());
    }
    return out;
  };
  g.metric = [](const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, operator_norm(a[i] - b[i]));
    return worst;
  };
  return g;
}

}  // namespace ncdil
