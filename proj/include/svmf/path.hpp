#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svmf/criteria.hpp"
#include "svmf/dataset.hpp"
#include "svmf/em.hpp"

namespace svmf {

struct PathOptions {
  int max_steps = 1000;             // total steps, including the dense one
  double epsilon = 1e-8;            // coordinates below this are set to zero
  double min_rel_increase = 0.0;    // beta_p >= beta_{p-1} (1 + this)
  bool stop_at_max_sparsity = false;
  FitOptions fit;                   // beta is overwritten at each step
  double ebic_gamma = 0.5;

  void validate() const;
};

struct PathStep {
  double beta = 0.0;
  FitResult fit;
  double sparsity = 0.0;
  std::map<CriterionKind, double> ic;  // criteria defined for (N, d)
};

enum class PathTermination { MaxSteps, MaxSparsity, EmFailure, NoIncrementAvailable };

std::string to_string(PathTermination t);

struct PathResult {
  std::vector<PathStep> steps;  // the last step may carry a failed fit (EmFailure)
  PathTermination termination = PathTermination::MaxSteps;

  // Steps whose fit is usable (Converged or MaxIters).
  std::vector<std::size_t> usable_steps() const;
};

/// Smallest penalty that zeroes at least one more coordinate in the first
/// M-step started from a fit at beta_prev:
/// beta_prev + min{kappa_k |r_kj| - beta_prev : kappa_k |r_kj| > beta_prev}.
/// `r` holds the resultants of the final E-step at beta_prev.
/// Throws NoIncrementAvailable when no coordinate exceeds beta_prev.
double next_beta(const MixtureParams& params, const Matrix& r, double beta_prev, double min_rel_increase = 0.0);

/// Sets |mu_kj| < epsilon to zero and renormalises each mean.
void zero_small_coordinates(MixtureParams& params, double epsilon);

/// Warm-started path over increasing beta, starting from a dense fit.
PathResult follow_path(const Dataset& x, const PathOptions& opts, const FitResult& initial);

/// IC values of a fit for every criterion defined at (n, d).
std::map<CriterionKind, double> all_criteria(const FitResult& fit, Index n, Index d, double ebic_gamma);

}  // namespace svmf
