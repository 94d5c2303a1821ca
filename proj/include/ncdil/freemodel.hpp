#pragma once

// Random-matrix models of free Haar unitaries.
//
// Per-trial random streams come from split_seed(master, trial), so a trial's
// samples do not depend on how trials are scheduled across threads.

#include "ncdil/certified.hpp"
#include "ncdil/matcore.hpp"
#include "ncdil/torus_max.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ncdil {

struct SampleConfig {
  Index N = 500;
  int trials = 1;
  std::uint64_t seed = 1;
  int d = 2;
  ExecPolicy policy = ExecPolicy::parallel;

  void validate() const;  // N >= 2, trials >= 1, d >= 1
};

/// splitmix64 of master ^ golden-ratio multiple of stream.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

/// Complex Ginibre matrix, QR, columns rescaled by the phases of diag(R).
ComplexMatrix haar_unitary(Index n, std::mt19937_64& rng);
/// d independent Haar unitaries drawn from the stream of `trial`.
std::vector<ComplexMatrix> haar_tuple(Index n, int d, std::uint64_t seed, std::uint64_t trial);

struct SampleStats {
  std::vector<double> values;  // one per trial
  double mean = 0;
  double min = 0;
  double max = 0;
  double target = 0;           // limiting value being approached
  double deviation = 0;        // |mean - target|
  Index N = 0;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// ||sum_i U_i + U_i^*|| per trial; target 2 sqrt(2d - 1) (2 for d = 1).
SampleStats estimate_hf_norm(const SampleConfig& cfg);

/// T_1 = (0 v_1; v_1^* 0), T_d = (T_{d-1}  I (x) v_d; I (x) v_d^*  -T_{d-1}),
/// laid out as C^{2^d} (x) H. Size 2^d n.
ComplexMatrix build_T(const UnitaryTuple& v);
ComplexMatrix build_T(const std::vector<ComplexMatrix>& v);

/// ||T_d(v)|| by Lanczos on the structured action sum_i E_i (x) v_i + h.c.
double T_norm(const std::vector<ComplexMatrix>& v, std::uint64_t seed);
/// ||T_d(U)|| for Haar tuples; target 2 sqrt(d - 1).
SampleStats estimate_T_norm(const SampleConfig& cfg);

struct ArcsineReport {
  double ks_distance = 0;               // spectrum of U^*V + V^*U vs arcsine on [-2, 2]
  double sum_norm = 0;                  // ||U + V||
  double commutator_norm = 0;           // ||VU - UV||
  std::vector<double> twist_phases;     // sampled q = e^{i t}
  std::vector<double> twisted_norms;    // ||VU - q UV||
  Index N = 0;
  std::uint64_t seed = 0;
};

/// arcsine CDF F(x) = 1/2 + arcsin(x/2) / pi on [-2, 2].
double arcsine_cdf(double x);
/// One-sample Kolmogorov-Smirnov distance of `samples` against a CDF.
double ks_distance(std::vector<double> samples, double (*cdf)(double));

ArcsineReport arcsine_check(const SampleConfig& cfg, int twist_samples = 4);

struct LehnerReport {
  double lhs = 0;               // max over trials of ||sum a_i (x) U_i + h.c.||
  double rhs = 0;               // sqrt(2d) sqrt(2d-1)/d ||sum a_i a_i^* + a_i^* a_i||^{1/2}
  double commuting_lower = 0;   // sup_z ||sum z_i a_i + h.c.||, certified bracket
  double commuting_upper = 0;
  std::vector<double> trial_lhs;
  double slack() const { return rhs - lhs; }
  bool holds(double allowance) const { return lhs <= rhs + allowance; }
};

LehnerReport lehner_inequality_check(const std::vector<ComplexMatrix>& a, const SampleConfig& cfg,
                                     double commuting_grid = 1e-2);

/// ||Re sum_i b_i (x) U_i|| for a fixed tuple of unitaries.
double free_side_norm(const std::vector<ComplexMatrix>& b, const std::vector<ComplexMatrix>& u,
                      std::uint64_t seed);
/// Certified sup over the torus of ||Re sum_i z_i b_i||.
TorusMaximum commuting_side_norm(const std::vector<ComplexMatrix>& b, double grid = 1e-2);

struct Cf0Search {
  CertifiedValue ratio;            // heuristic lower indicator for c_{f,0}
  double pattern_ratio = 0;        // b_i = 2 E_i, the T_d pattern
  double random_best = 0;          // best over random starts and local moves
  std::vector<ComplexMatrix> best_b;
  int evaluations = 0;
};

struct Cf0Options {
  int random_starts = 6;
  int local_steps = 12;
  double step = 0.3;
  double commuting_grid = 1e-2;
};

/// Maximises free side / commuting side over coefficient tuples. The
/// commuting side uses its certified upper value, the free side one fixed
/// Haar sample (trial 0 of cfg.seed).
Cf0Search cf0_ratio_search(const SampleConfig& cfg, Index coeff_dim, const Cf0Options& opt = {});

}  // namespace ncdil
