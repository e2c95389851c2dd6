#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svmf/em.hpp"
#include "svmf/random.hpp"
#include "svmf/simulation.hpp"

namespace svmf {

/// Adjusted Rand index of two labelings (labels are arbitrary integers).
/// Returns 1 for identical partitions, including the degenerate cases where
/// the expected and maximal index coincide.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

/// Fraction of exactly zero coordinates among the K x d mean entries.
double sparsity(const Matrix& means);
inline double sparsity(const MixtureParams& p) { return sparsity(p.means); }

/// Bijection est -> truth maximising sum_k <est_k, truth_{match[k]}>
/// (Hungarian algorithm). Both matrices are K x d.
std::vector<int> match_components(const Matrix& estimated, const Matrix& truth);

struct SupportScore {
  double precision = 1.0;
  double recall = 1.0;
  // No coordinate was estimated as zero; precision is reported as 1.
  bool precision_undefined = false;
  // No coordinate is truly zero; recall is reported as 1.
  bool recall_undefined = false;
  std::vector<int> matching;  // estimated component k <-> true component matching[k]
};

/// Precision and recall of the zero pattern of the estimated means (zero is
/// the positive class), after matching estimated to true components.
SupportScore support_precision_recall(const MixtureParams& estimated, const GroundTruth& truth);
SupportScore support_precision_recall(const Matrix& estimated_means, const Matrix& true_means);

/// Misclassification rate of the Bayes (crisp posterior) assignment under the
/// given parameters, on n labelled draws from the mixture itself.
double estimate_overlap(const MixtureParams& truth, std::size_t n_samples, Rng& rng);

}  // namespace svmf
