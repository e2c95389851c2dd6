#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "svmf/dataset.hpp"
#include "svmf/em.hpp"
#include "svmf/random.hpp"

namespace svmf {

// Planted vMF mixture generator: well separated random means, optional
// sparsification, concentrations set for a target overlap.
struct SimulationConfig {
  int k = 4;
  int d = 100;
  std::size_t n = 1000;
  // Exactly one of these two must be set.
  std::optional<double> overlap_target;
  std::optional<double> base_kappa;
  double sparsity = 0.0;       // fraction of coordinates zeroed in each mean
  std::vector<double> alpha;   // empty means balanced
  double kappa_jitter_sd_frac = 0.025;
  int candidate_multiplier = 20;
  std::size_t calibration_samples = 100000;
  std::uint64_t seed = 0;

  void validate() const;
  Vector proportions() const;
};

struct GroundTruth {
  MixtureParams params;
  std::vector<int> labels;  // 0-based component of each observation
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> support_mask;  // K x d
  double base_kappa = 0.0;
};

struct SimulatedData {
  Dataset data;
  GroundTruth truth;
};

/// Greedy selection of k well separated unit vectors: start from the pair with
/// the smallest inner product, then repeatedly add the candidate whose largest
/// inner product with the selection is smallest. Ties go to the lowest index.
/// Returns candidate row indices in selection order.
std::vector<Index> greedy_max_separation_indices(const Matrix& candidates, int k);
Matrix greedy_max_separation(const Matrix& candidates, int k);

/// Zeroes floor(sparsity * d) random coordinates of every mean and
/// renormalises; redraws (up to 100 times) until all means are nonzero and
/// pairwise distinct. Throws CannotSparsify.
Matrix sparsify_means(const Matrix& means, double sparsity, Rng& rng);

/// kappa'_k = 2 kappa_k / (1 - max_{l != k} <mu_k, mu_l>), capped.
Vector rescale_for_separation(const Matrix& means, const Vector& kappas, double cap = kKappaCap);

/// Bisection (in log kappa) on the crisp-assignment error of the mixture with
/// every component at the base kappa (rescaled, no jitter). Each trial reuses
/// the same random stream. Throws NotBracketed if the target is not reachable
/// for kappa in [0.01, 1e4].
double calibrate_overlap(const Matrix& means, double target, const Vector& alpha, Rng& rng,
                         std::size_t n_samples = 100000);

SimulatedData simulate_mixture(const SimulationConfig& cfg, Rng& rng);
SimulatedData simulate_mixture(const SimulationConfig& cfg);

}  // namespace svmf
