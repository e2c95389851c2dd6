#include "svmf/path.hpp"

#include <cmath>
#include <limits>

#include "svmf/metrics.hpp"

namespace svmf {

void PathOptions::validate() const {
  if (max_steps < 1) throw DomainError("path: max_steps must be >= 1");
  if (!(epsilon > 0.0)) throw DomainError("path: epsilon must be > 0");
  if (!(min_rel_increase >= 0.0)) throw DomainError("path: min_rel_increase must be >= 0");
  fit.validate();
}

std::string to_string(PathTermination t) {
  switch (t) {
    case PathTermination::MaxSteps: return "MaxSteps";
    case PathTermination::MaxSparsity: return "MaxSparsity";
    case PathTermination::EmFailure: return "EmFailure";
    case PathTermination::NoIncrementAvailable: return "NoIncrementAvailable";
  }
  return "Unknown";
}

std::vector<std::size_t> PathResult::usable_steps() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (fit_usable(steps[i].fit.status)) out.push_back(i);
  return out;
}

double next_beta(const MixtureParams& params, const Matrix& r, double beta_prev, double min_rel_increase) {
  if (r.rows() != params.n_components() || r.cols() != params.dim())
    throw DimensionMismatch("next_beta: resultant matrix does not match parameters");
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < params.n_components(); ++k) {
    const double kappa = params.kappa(k);
    for (Index j = 0; j < r.cols(); ++j) {
      const double g = kappa * std::abs(r(k, j)) - beta_prev;
      if (g > 0.0) gap = std::min(gap, g);
    }
  }
  if (!std::isfinite(gap)) throw NoIncrementAvailable();
  double beta = beta_prev + gap;
  if (min_rel_increase > 0.0) beta = std::max(beta, beta_prev * (1.0 + min_rel_increase));
  return beta;
}

void zero_small_coordinates(MixtureParams& params, double epsilon) {
  for (Index k = 0; k < params.means.rows(); ++k) {
    auto row = params.means.row(k);
    bool changed = false;
    for (Index j = 0; j < row.size(); ++j)
      if (row[j] != 0.0 && std::abs(row[j]) < epsilon) {
        row[j] = 0.0;
        changed = true;
      }
    if (changed) {
      const double norm = row.norm();
      if (norm > 0.0) row /= norm;
    }
  }
}

std::map<CriterionKind, double> all_criteria(const FitResult& fit, Index n, Index d, double ebic_gamma) {
  std::map<CriterionKind, double> out;
  for (auto kind : kAllCriteria)
    if (auto v = try_information_criterion(fit, n, d, Criterion{kind, ebic_gamma})) out[kind] = *v;
  return out;
}

namespace {

PathStep make_step(const Dataset& x, FitResult fit, double ebic_gamma) {
  PathStep s;
  s.beta = fit.beta;
  s.sparsity = fit.params.means.size() ? sparsity(fit.params) : 0.0;
  if (fit_usable(fit.status)) s.ic = all_criteria(fit, x.rows(), x.cols(), ebic_gamma);
  s.fit = std::move(fit);
  return s;
}

bool at_max_sparsity(const MixtureParams& p) {
  for (Index k = 0; k < p.means.rows(); ++k)
    if ((p.means.row(k).array() != 0.0).count() > 1) return false;
  return true;
}

}  // namespace

PathResult follow_path(const Dataset& x, const PathOptions& opts, const FitResult& initial) {
  opts.validate();
  if (!fit_usable(initial.status)) throw DomainError("follow_path: initial fit is not usable");
  if (initial.beta != 0.0) throw DomainError("follow_path: initial fit must be dense (beta = 0)");

  PathResult path;
  path.steps.push_back(make_step(x, initial, opts.ebic_gamma));
  const int k = initial.params.n_components();

  while (true) {
    const PathStep& last = path.steps.back();
    if (opts.stop_at_max_sparsity && at_max_sparsity(last.fit.params)) {
      path.termination = PathTermination::MaxSparsity;
      break;
    }
    if (static_cast<int>(path.steps.size()) >= opts.max_steps) {
      path.termination = PathTermination::MaxSteps;
      break;
    }
    const Responsibilities resp = e_step(x, last.fit.params, opts.fit.threads);
    const Matrix r = resultants(x, resp.tau, opts.fit.threads);
    double beta = 0.0;
    try {
      beta = next_beta(last.fit.params, r, last.beta, opts.min_rel_increase);
    } catch (const NoIncrementAvailable&) {
      path.termination = PathTermination::NoIncrementAvailable;
      break;
    }

    FitOptions fo = opts.fit;
    fo.beta = beta;
    FitResult fit = fit_em(x, k, fo, last.fit.params);
    if (!fit_usable(fit.status)) {
      path.steps.push_back(make_step(x, std::move(fit), opts.ebic_gamma));
      path.termination = PathTermination::EmFailure;
      break;
    }
    zero_small_coordinates(fit.params, opts.epsilon);
    const Responsibilities after = e_step(x, fit.params, opts.fit.threads);
    fit.log_likelihood = after.log_likelihood;
    fit.penalized_log_likelihood = after.log_likelihood - beta * l1_penalty(fit.params);
    path.steps.push_back(make_step(x, std::move(fit), opts.ebic_gamma));
  }
  return path;
}

}  // namespace svmf
