#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svmf/criteria.hpp"
#include "svmf/path.hpp"

namespace svmf {

/// Best (highest penalised log-likelihood) of n_restarts fits from random
/// initialisations. Restart r uses seed derive_seed(opts.seed, r). Restarts
/// run on up to `threads` workers; the result does not depend on the count.
/// If no restart is usable, returns the last one (carrying its failure status).
FitResult best_of_restarts(const Dataset& x, int k, const FitOptions& opts, int n_restarts,
                           unsigned threads = 1, std::vector<FitStatus>* statuses = nullptr);

struct SelectionOptions {
  std::vector<int> k_candidates;
  int n_restarts = 10;
  Criterion k_criterion{CriterionKind::BIC};
  Criterion beta_criterion{CriterionKind::BIC};
  PathOptions path;
  bool follow_paths = true;
  unsigned threads = 1;

  void validate() const;
};

struct KSelection {
  int k = 0;
  bool ok = false;
  std::string failure;                 // reason the K was skipped
  FitResult dense;
  PathResult path;
  std::map<CriterionKind, double> dense_ic;
  std::map<CriterionKind, std::size_t> best_step;  // argmin over usable path steps
};

struct SelectionReport {
  std::vector<KSelection> per_k;
  std::map<CriterionKind, int> chosen_k;  // argmin of the dense criterion
  int final_k = 0;
  std::size_t final_step = 0;
  bool has_final = false;

  const KSelection* entry(int k) const;
  const FitResult& final_model() const;
};

/// Index of the usable path step minimising the criterion (first on ties).
std::optional<std::size_t> best_path_step(const PathResult& path, CriterionKind kind);

/// For each K: dense fit (best of restarts), path, per-criterion best step.
/// K* minimises the K criterion on the dense fits; the final model is the
/// K* path step chosen by the beta criterion.
SelectionReport select_model(const Dataset& x, const SelectionOptions& opts);

}  // namespace svmf
