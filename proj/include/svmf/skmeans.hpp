#pragma once

#include <optional>
#include <vector>

#include "svmf/dataset.hpp"
#include "svmf/random.hpp"

namespace svmf {

struct SkResult {
  Matrix prototypes;        // K x d, unit rows
  std::vector<int> labels;  // 0-based
  double coherence = 0.0;   // sum_i <prototype_{label_i}, x_i>
  int n_iters = 0;
  bool converged = false;
};

/// Spherical k-means (Lloyd-Forgy): crisp max-inner-product assignment
/// alternating with normalised cluster resultants, until the labels stop
/// changing. Empty clusters are reseeded with the observation that has the
/// lowest coherence contribution. Without `init`, K distinct random
/// observations seed the prototypes.
SkResult skmeans_fit(const Dataset& x, int k, int max_iters, Rng& rng,
                     const std::optional<Matrix>& init = std::nullopt);

double coherence(const Dataset& x, const Matrix& prototypes, const std::vector<int>& labels);

}  // namespace svmf
