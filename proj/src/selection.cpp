#include "svmf/selection.hpp"

#include <cmath>
#include <limits>

#include "svmf/parallel.hpp"

namespace svmf {

std::string to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::AIC: return "AIC";
    case CriterionKind::BIC: return "BIC";
    case CriterionKind::RIC: return "RIC";
    case CriterionKind::RICc: return "RICc";
    case CriterionKind::EBIC: return "EBIC";
  }
  return "Unknown";
}

CriterionKind parse_criterion(const std::string& name) {
  for (auto k : kAllCriteria)
    if (to_string(k) == name) return k;
  throw DomainError("unknown criterion '" + name + "' (expected AIC, BIC, RIC, RICc or EBIC)");
}

int count_free_params(const MixtureParams& params) {
  const int k = params.n_components();
  int c = (k - 1) + (params.mode == KappaMode::Shared ? 1 : k);
  for (int j = 0; j < k; ++j) {
    const auto nnz = static_cast<int>((params.means.row(j).array() != 0.0).count());
    c += std::max(1, nnz - 1);
  }
  return c;
}

double criterion_coefficient(const Criterion& c, double n, double d) {
  switch (c.kind) {
    case CriterionKind::AIC: return 2.0;
    case CriterionKind::BIC:
      if (!(n > 0.0)) throw DomainError("BIC needs n > 0");
      return std::log(n);
    case CriterionKind::RIC:
      if (!(d >= 2.0)) throw DomainError("RIC needs d >= 2");
      return 2.0 * std::log(d);
    case CriterionKind::RICc:
      if (!(d >= 3.0)) throw DomainError("RICc needs d >= 3");
      return 2.0 * (std::log(d) + std::log(std::log(d)));
    case CriterionKind::EBIC:
      if (!(n > 0.0) || !(d >= 1.0)) throw DomainError("EBIC needs n > 0 and d >= 1");
      if (!(c.ebic_gamma >= 0.0 && c.ebic_gamma <= 1.0)) throw DomainError("EBIC gamma must lie in [0, 1]");
      return std::log(n) + 2.0 * c.ebic_gamma * std::log(d);
  }
  throw DomainError("unknown criterion");
}

double information_criterion(double log_likelihood, double free_params, double n, double d, const Criterion& c) {
  return criterion_coefficient(c, n, d) * free_params - 2.0 * log_likelihood;
}

double information_criterion(const FitResult& fit, Index n, Index d, const Criterion& c) {
  return information_criterion(fit.log_likelihood, count_free_params(fit.params), static_cast<double>(n),
                               static_cast<double>(d), c);
}

std::optional<double> try_information_criterion(const FitResult& fit, Index n, Index d, const Criterion& c) {
  try {
    return information_criterion(fit, n, d, c);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

FitResult best_of_restarts(const Dataset& x, int k, const FitOptions& opts, int n_restarts, unsigned threads,
                           std::vector<FitStatus>* statuses) {
  if (n_restarts < 1) throw DomainError("restarts must be >= 1");
  std::vector<FitResult> fits(static_cast<std::size_t>(n_restarts));
  parallel_for(fits.size(), threads, [&](std::size_t r) {
    FitOptions o = opts;
    o.seed = derive_seed(opts.seed, r);
    o.threads = 1;
    fits[r] = fit_em(x, k, o);
  });
  if (statuses) {
    statuses->clear();
    for (const auto& f : fits) statuses->push_back(f.status);
  }
  std::size_t best = fits.size();
  for (std::size_t r = 0; r < fits.size(); ++r) {
    if (!fit_usable(fits[r].status)) continue;
    if (best == fits.size() || fits[r].penalized_log_likelihood > fits[best].penalized_log_likelihood) best = r;
  }
  if (best == fits.size()) return fits.back();
  return fits[best];
}

void SelectionOptions::validate() const {
  if (k_candidates.empty()) throw DomainError("selection: empty candidate set for K");
  for (int k : k_candidates)
    if (k < 1) throw DomainError("selection: K candidates must be >= 1");
  if (n_restarts < 1) throw DomainError("selection: restarts must be >= 1");
  path.validate();
}

const KSelection* SelectionReport::entry(int k) const {
  for (const auto& e : per_k)
    if (e.k == k) return &e;
  return nullptr;
}

const FitResult& SelectionReport::final_model() const {
  if (!has_final) throw DomainError("selection produced no usable model");
  const KSelection* e = entry(final_k);
  return e->path.steps.empty() ? e->dense : e->path.steps[final_step].fit;
}

std::optional<std::size_t> best_path_step(const PathResult& path, CriterionKind kind) {
  std::optional<std::size_t> best;
  for (std::size_t i : path.usable_steps()) {
    const auto it = path.steps[i].ic.find(kind);
    if (it == path.steps[i].ic.end()) continue;
    if (!best || it->second < path.steps[*best].ic.at(kind)) best = i;
  }
  return best;
}

SelectionReport select_model(const Dataset& x, const SelectionOptions& opts) {
  opts.validate();
  SelectionReport report;
  report.per_k.resize(opts.k_candidates.size());
  const Index n = x.rows();
  const Index d = x.cols();

  parallel_for(opts.k_candidates.size(), opts.threads, [&](std::size_t i) {
    KSelection& e = report.per_k[i];
    e.k = opts.k_candidates[i];
    if (e.k > n) {
      e.failure = "more components than observations";
      return;
    }
    FitOptions fo = opts.path.fit;
    fo.beta = 0.0;
    fo.threads = 1;
    std::vector<FitStatus> statuses;
    e.dense = best_of_restarts(x, e.k, fo, opts.n_restarts, 1, &statuses);
    if (!fit_usable(e.dense.status)) {
      e.failure = "all restarts failed (last status " + to_string(e.dense.status) + ")";
      return;
    }
    e.ok = true;
    e.dense_ic = all_criteria(e.dense, n, d, opts.path.ebic_gamma);
    if (opts.follow_paths) {
      PathOptions po = opts.path;
      po.fit.threads = 1;
      e.path = follow_path(x, po, e.dense);
      for (auto kind : kAllCriteria)
        if (auto s = best_path_step(e.path, kind)) e.best_step[kind] = *s;
    }
  });

  for (auto kind : kAllCriteria) {
    const KSelection* best = nullptr;
    for (const auto& e : report.per_k) {
      if (!e.ok || !e.dense_ic.count(kind)) continue;
      if (!best || e.dense_ic.at(kind) < best->dense_ic.at(kind)) best = &e;
    }
    if (best) report.chosen_k[kind] = best->k;
  }

  if (auto it = report.chosen_k.find(opts.k_criterion.kind); it != report.chosen_k.end()) {
    report.final_k = it->second;
    const KSelection* e = report.entry(report.final_k);
    if (opts.follow_paths) {
      if (auto s = e->best_step.find(opts.beta_criterion.kind); s != e->best_step.end()) {
        report.final_step = s->second;
        report.has_final = true;
      }
    } else {
      report.has_final = true;
    }
  }
  return report;
}

}  // namespace svmf
