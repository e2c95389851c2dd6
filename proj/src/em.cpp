#include "svmf/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "svmf/parallel.hpp"
#include "svmf/special_functions.hpp"

namespace svmf {

std::string to_string(KappaMode mode) { return mode == KappaMode::Free ? "free" : "shared"; }

KappaMode parse_kappa_mode(const std::string& name) {
  if (name == "free") return KappaMode::Free;
  if (name == "shared") return KappaMode::Shared;
  throw DomainError("unknown kappa mode '" + name + "' (expected free or shared)");
}

std::string to_string(FitStatus status) {
  switch (status) {
    case FitStatus::Converged: return "Converged";
    case FitStatus::MaxIters: return "MaxIters";
    case FitStatus::DegenerateUniform: return "DegenerateUniform";
    case FitStatus::ZeroMean: return "ZeroMean";
    case FitStatus::EmptyComponent: return "EmptyComponent";
    case FitStatus::InitFailure: return "InitFailure";
  }
  return "Unknown";
}

FitStatus parse_fit_status(const std::string& name) {
  for (auto s : {FitStatus::Converged, FitStatus::MaxIters, FitStatus::DegenerateUniform,
                 FitStatus::ZeroMean, FitStatus::EmptyComponent, FitStatus::InitFailure})
    if (to_string(s) == name) return s;
  throw DomainError("unknown fit status '" + name + "'");
}

Vector MixtureParams::component_kappas() const {
  Vector out(n_components());
  for (int k = 0; k < n_components(); ++k) out[k] = kappa(k);
  return out;
}

void MixtureParams::validate(double tol, double kappa_cap) const {
  const int k = n_components();
  if (k < 1) throw DomainError("mixture needs at least one component");
  if (means.rows() != k) throw DomainError("mixture: one mean per component required");
  const Index expected_kappas = mode == KappaMode::Shared ? 1 : k;
  if (kappas.size() != expected_kappas)
    throw DomainError("mixture: expected " + std::to_string(expected_kappas) + " concentration value(s)");
  if ((alpha.array() < 0.0).any()) throw DomainError("mixture: negative proportion");
  if (std::abs(alpha.sum() - 1.0) > tol) throw DomainError("mixture: proportions do not sum to one");
  for (int j = 0; j < k; ++j)
    if (std::abs(means.row(j).norm() - 1.0) > tol)
      throw DomainError("mixture: mean " + std::to_string(j) + " is not unit norm");
  for (Index j = 0; j < kappas.size(); ++j)
    if (!(kappas[j] > 0.0) || kappas[j] > kappa_cap)
      throw DomainError("mixture: concentration out of (0, cap]");
}

void FitOptions::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
  if (max_em_iters < 1 || inner_max_iters < 1) throw DomainError("iteration limits must be >= 1");
  if (!(em_tol > 0.0) || !(inner_tol > 0.0)) throw DomainError("tolerances must be > 0");
  if (!(kappa_cap > 0.0)) throw DomainError("kappa cap must be > 0");
  if (init_attempts < 1) throw DomainError("init_attempts must be >= 1");
}

namespace {

// Concentration from the projected mean resultant length rho. rho >= 1 can
// only arise from rounding on a collapsed component and is capped; rho <= 0
// means the component has drifted to the uniform distribution.
double kappa_from_rho(int d, double rho, double cap, bool refine) {
  if (!(rho > 0.0)) throw EmFailure(FitStatus::DegenerateUniform, "component drifted to the uniform distribution");
  if (rho >= 1.0 - 1e-12) return cap;
  return std::min(invert_bessel_ratio(d, rho, refine), cap);
}

Index n_chunks(Index n) { return (n + kRowChunk - 1) / kRowChunk; }

}  // namespace

MixtureParams init_random(const Dataset& x, int k, KappaMode mode, Rng& rng, double kappa_cap) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (k < 1) throw DomainError("init_random: K must be >= 1");
  if (n < k) throw DomainError("init_random: fewer observations than components");

  // Partial Fisher-Yates: the first k entries are a uniform draw without replacement.
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (int j = 0; j < k; ++j) {
    std::uniform_int_distribution<Index> pick(j, n - 1);
    std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(pick(rng))]);
  }

  MixtureParams p;
  p.mode = mode;
  p.means.resize(k, d);
  for (int j = 0; j < k; ++j) {
    Vector row = x.row(idx[static_cast<std::size_t>(j)]);
    const double norm = row.norm();
    if (!(norm > 0.0)) throw InitFailure("selected observation is zero");
    p.means.row(j) = (row / norm).transpose();
  }

  const Matrix sims = x.project(p.means);
  Matrix tau = Matrix::Zero(n, k);
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    for (Index j = 1; j < k; ++j)
      if (sims(i, j) > sims(i, best)) best = j;
    tau(i, best) = 1.0;
  }
  const Vector counts = tau.colwise().sum().transpose();
  for (int j = 0; j < k; ++j)
    if (counts[j] == 0.0) throw InitFailure("crisp cluster " + std::to_string(j) + " is empty");
  p.alpha = counts / static_cast<double>(n);

  const Matrix r = x.weighted_sum(tau);
  const int dim = static_cast<int>(d);
  auto to_kappa = [&](double rho) {
    if (!(rho > 0.0)) throw InitFailure("degenerate initial resultant");
    if (rho >= 1.0 - 1e-12) return kappa_cap;
    return std::min(invert_bessel_ratio(dim, rho), kappa_cap);
  };
  if (mode == KappaMode::Shared) {
    double proj = 0.0;
    for (int j = 0; j < k; ++j) proj += p.means.row(j).dot(r.row(j));
    p.kappas = Vector::Constant(1, to_kappa(proj / static_cast<double>(n)));
  } else {
    p.kappas.resize(k);
    for (int j = 0; j < k; ++j) p.kappas[j] = to_kappa(p.means.row(j).dot(r.row(j)) / counts[j]);
  }
  return p;
}

Responsibilities e_step(const Dataset& x, const MixtureParams& params, unsigned threads) {
  const Index n = x.rows();
  const int k = params.n_components();
  const int d = static_cast<int>(x.cols());
  if (params.dim() != x.cols()) throw DimensionMismatch("e_step: parameter dimension differs from data");

  Vector kappa(k);
  Vector offset(k);  // log alpha_k + log c_d(kappa_k)
  for (int j = 0; j < k; ++j) {
    kappa[j] = params.kappa(j);
    offset[j] = std::log(params.alpha[j]) + log_vmf_normalizer(d, kappa[j]);
  }

  Responsibilities out;
  out.tau.resize(n, k);
  out.log_marginal.resize(n);
  const Index chunks = n_chunks(n);
  std::vector<double> chunk_ll(static_cast<std::size_t>(chunks), 0.0);

  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    const Index begin = static_cast<Index>(c) * kRowChunk;
    const Index end = std::min(n, begin + kRowChunk);
    Matrix logit = x.project(params.means, begin, end);
    double acc = 0.0;
    for (Index i = 0; i < logit.rows(); ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        logit(i, j) = kappa[j] * logit(i, j) + offset[j];
        mx = std::max(mx, logit(i, j));
      }
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += std::exp(logit(i, j) - mx);
      const double lse = mx + std::log(s);
      for (int j = 0; j < k; ++j) out.tau(begin + i, j) = std::exp(logit(i, j) - lse);
      out.log_marginal[begin + i] = lse;
      acc += lse;
    }
    chunk_ll[c] = acc;
  });
  out.log_likelihood = std::accumulate(chunk_ll.begin(), chunk_ll.end(), 0.0);
  return out;
}

Matrix resultants(const Dataset& x, const Matrix& tau, unsigned threads) {
  const Index n = x.rows();
  const Index chunks = n_chunks(n);
  std::vector<Matrix> partial(static_cast<std::size_t>(chunks));
  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    const Index begin = static_cast<Index>(c) * kRowChunk;
    partial[c] = x.weighted_sum(tau, begin, std::min(n, begin + kRowChunk));
  });
  Matrix r = Matrix::Zero(tau.cols(), x.cols());
  for (const auto& m : partial) r += m;
  return r;
}

Vector soft_threshold_mu(const Vector& r, double kappa, double beta) {
  if (!(kappa > 0.0)) throw DomainError("soft_threshold_mu: kappa must be > 0");
  if (!(beta >= 0.0)) throw DomainError("soft_threshold_mu: beta must be >= 0");
  Vector mu(r.size());
  double sq = 0.0;
  for (Index j = 0; j < r.size(); ++j) {
    const double shrunk = std::max(kappa * std::abs(r[j]) - beta, 0.0);
    mu[j] = r[j] < 0.0 ? -shrunk : shrunk;
    sq += shrunk * shrunk;
  }
  // 2 lambda_k = sqrt(sum_j max(kappa |r_kj| - beta, 0)^2)
  const double two_lambda = std::sqrt(sq);
  if (!(two_lambda > 0.0)) throw EmFailure(FitStatus::ZeroMean, "every coordinate of a mean was thresholded to zero");
  return mu / two_lambda;
}

MStepResult m_step(const Dataset& x, const Responsibilities& resp, const MixtureParams& prev,
                   const FitOptions& opts) {
  const Matrix& tau = resp.tau;
  const Index n = x.rows();
  const int k = static_cast<int>(tau.cols());
  const int d = static_cast<int>(x.cols());
  if (tau.rows() != n) throw DimensionMismatch("m_step: responsibilities do not match data");
  if (prev.n_components() != k || prev.dim() != x.cols())
    throw DimensionMismatch("m_step: previous parameters do not match");

  const Vector weight = tau.colwise().sum().transpose();
  for (int j = 0; j < k; ++j)
    if (!(weight[j] >= 1e-12))
      throw EmFailure(FitStatus::EmptyComponent, "component " + std::to_string(j) + " lost all its weight");

  MStepResult out;
  MixtureParams& p = out.params;
  p.mode = opts.kappa_mode;
  p.alpha = weight / weight.sum();

  const Matrix r = resultants(x, tau, opts.threads);

  // Concentrations are seeded from the previous outer iteration.
  if (p.mode == prev.mode) {
    p.kappas = prev.kappas;
  } else if (p.mode == KappaMode::Shared) {
    p.kappas = Vector::Constant(1, prev.alpha.dot(prev.kappas));
  } else {
    p.kappas = Vector::Constant(k, prev.kappas[0]);
  }
  p.means = prev.means;

  Matrix means(k, d);
  Vector kappas(p.kappas.size());
  for (int it = 1; it <= opts.inner_max_iters; ++it) {
    for (int j = 0; j < k; ++j)
      means.row(j) = soft_threshold_mu(r.row(j).transpose(), p.kappa(j), opts.beta).transpose();

    if (p.mode == KappaMode::Shared) {
      double proj = 0.0;
      for (int j = 0; j < k; ++j) proj += means.row(j).dot(r.row(j));
      kappas[0] = kappa_from_rho(d, proj / static_cast<double>(n), opts.kappa_cap, opts.refine_kappa);
    } else {
      for (int j = 0; j < k; ++j)
        kappas[j] = kappa_from_rho(d, means.row(j).dot(r.row(j)) / weight[j], opts.kappa_cap, opts.refine_kappa);
    }

    const double dmu = (means - p.means).cwiseAbs().maxCoeff();
    const double dkappa = ((kappas - p.kappas).array().abs() / kappas.array()).maxCoeff();
    p.means = means;
    p.kappas = kappas;
    out.inner_iters = it;
    if (std::max(dmu, dkappa) < opts.inner_tol) {
      out.inner_converged = true;
      break;
    }
  }
  return out;
}

double l1_penalty(const MixtureParams& params) { return params.means.cwiseAbs().sum(); }

double penalized_log_likelihood(const Dataset& x, const MixtureParams& params, double beta, unsigned threads) {
  return e_step(x, params, threads).log_likelihood - beta * l1_penalty(params);
}

namespace {

MixtureParams convert_mode(MixtureParams p, KappaMode mode) {
  if (p.mode == mode) return p;
  if (mode == KappaMode::Shared) {
    p.kappas = Vector::Constant(1, p.alpha.dot(p.kappas));
  } else {
    p.kappas = Vector::Constant(p.n_components(), p.kappas[0]);
  }
  p.mode = mode;
  return p;
}

}  // namespace

FitResult fit_em(const Dataset& x, int k, const FitOptions& opts, const std::optional<MixtureParams>& init) {
  opts.validate();
  FitResult res;
  res.beta = opts.beta;
  res.seed = opts.seed;

  if (init) {
    if (init->n_components() != k || init->dim() != x.cols())
      throw DimensionMismatch("fit_em: initial parameters do not match K or d");
    res.params = convert_mode(*init, opts.kappa_mode);
  } else {
    Rng rng(opts.seed);
    bool ok = false;
    for (int attempt = 0; attempt < opts.init_attempts && !ok; ++attempt) {
      try {
        res.params = init_random(x, k, opts.kappa_mode, rng, opts.kappa_cap);
        ok = true;
      } catch (const InitFailure&) {
      }
    }
    if (!ok) {
      res.status = FitStatus::InitFailure;
      res.log_likelihood = res.penalized_log_likelihood = -std::numeric_limits<double>::infinity();
      return res;
    }
  }

  std::optional<MixtureParams> last_good;
  for (int iter = 0;; ++iter) {
    const Responsibilities resp = e_step(x, res.params, opts.threads);
    const double pll = resp.log_likelihood - opts.beta * l1_penalty(res.params);
    if (!std::isfinite(pll)) {
      res.status = FitStatus::DegenerateUniform;
      if (last_good) res.params = *last_good;
      break;
    }
    res.log_likelihood = resp.log_likelihood;
    res.penalized_log_likelihood = pll;
    res.trace.push_back(pll);
    if (res.trace.size() > 1) {
      const double prev = res.trace[res.trace.size() - 2];
      if (std::abs(pll - prev) <= opts.em_tol * std::abs(prev)) {
        res.status = FitStatus::Converged;
        break;
      }
    }
    if (iter >= opts.max_em_iters) {
      res.status = FitStatus::MaxIters;
      break;
    }
    try {
      MixtureParams next = m_step(x, resp, res.params, opts).params;
      last_good = std::move(res.params);
      res.params = std::move(next);
      ++res.n_iters;
    } catch (const EmFailure& e) {
      res.status = e.status();
      break;
    }
  }
  return res;
}

std::vector<int> hard_assign(const Matrix& tau) {
  std::vector<int> labels(static_cast<std::size_t>(tau.rows()));
  for (Index i = 0; i < tau.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < tau.cols(); ++j)
      if (tau(i, j) > tau(i, best)) best = j;
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

}  // namespace svmf
