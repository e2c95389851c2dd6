#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svmf/dataset.hpp"
#include "svmf/error.hpp"
#include "svmf/random.hpp"
#include "svmf/types.hpp"

namespace svmf {

enum class KappaMode { Free, Shared };

std::string to_string(KappaMode mode);
KappaMode parse_kappa_mode(const std::string& name);

// Parameters of a K-component vMF mixture. In shared mode `kappas` holds a
// single value used by every component.
struct MixtureParams {
  Vector alpha;
  Matrix means;  // K x d, unit rows
  Vector kappas;
  KappaMode mode = KappaMode::Free;

  int n_components() const { return static_cast<int>(alpha.size()); }
  Index dim() const { return means.cols(); }
  double kappa(int k) const { return mode == KappaMode::Shared ? kappas[0] : kappas[k]; }
  Vector component_kappas() const;

  // Throws DomainError when a structural invariant is broken.
  void validate(double tol = 1e-10, double kappa_cap = kKappaCap) const;
};

struct Responsibilities {
  Matrix tau;            // N x K posteriors, rows sum to one
  Vector log_marginal;   // log sum_k alpha_k f_k(x_i)
  double log_likelihood = 0.0;
};

enum class FitStatus { Converged, MaxIters, DegenerateUniform, ZeroMean, EmptyComponent, InitFailure };

std::string to_string(FitStatus status);
FitStatus parse_fit_status(const std::string& name);

// A usable model came out of the run (possibly without meeting the tolerance).
inline bool fit_usable(FitStatus s) { return s == FitStatus::Converged || s == FitStatus::MaxIters; }

struct FitOptions {
  double beta = 0.0;
  KappaMode kappa_mode = KappaMode::Free;
  int max_em_iters = 500;
  double em_tol = 1e-6;
  int inner_max_iters = 100;
  double inner_tol = 1e-8;
  double kappa_cap = kKappaCap;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Newton-refine the closed-form kappa; the unrefined value can break EM ascent.
  bool refine_kappa = true;
  // Fresh random draws tried by fit_em when no initial parameters are given.
  int init_attempts = 20;

  void validate() const;
};

struct FitResult {
  MixtureParams params;
  double beta = 0.0;
  double log_likelihood = 0.0;            // observed-data log-likelihood
  double penalized_log_likelihood = 0.0;  // minus beta * sum_k |mu_k|_1
  std::vector<double> trace;              // penalized log-likelihood per E-step
  int n_iters = 0;                        // completed M-steps
  FitStatus status = FitStatus::Converged;
  std::uint64_t seed = 0;
};

// Thrown by the M-step when the update is undefined.
class EmFailure : public Error {
 public:
  EmFailure(FitStatus status, const std::string& what) : Error(to_string(status), what), status_(status) {}
  FitStatus status() const noexcept { return status_; }

 private:
  FitStatus status_;
};

/// Random initialisation: K distinct observations become the means, every
/// observation is crisply assigned to its closest mean, alpha and kappa follow
/// from the crisp clusters. Throws InitFailure on an empty cluster or a
/// degenerate resultant.
MixtureParams init_random(const Dataset& x, int k, KappaMode mode, Rng& rng, double kappa_cap = kKappaCap);

/// Posterior membership probabilities, computed in log space.
Responsibilities e_step(const Dataset& x, const MixtureParams& params, unsigned threads = 1);

/// r_k = sum_i tau_ik x_i, one row per component.
Matrix resultants(const Dataset& x, const Matrix& tau, unsigned threads = 1);

/// Solution of max kappa <mu, r> - beta |mu|_1 over the unit sphere:
/// soft-thresholded coordinates, renormalised. Throws EmFailure(ZeroMean)
/// when no coordinate survives the threshold.
Vector soft_threshold_mu(const Vector& r, double kappa, double beta);

struct MStepResult {
  MixtureParams params;
  int inner_iters = 0;
  bool inner_converged = false;
};

/// Penalised M-step: alpha in closed form, then alternating mean and
/// concentration updates (means first) until the fixed point settles.
/// Concentrations are seeded from `prev`. Throws EmFailure.
MStepResult m_step(const Dataset& x, const Responsibilities& resp, const MixtureParams& prev,
                   const FitOptions& opts);

/// Penalised EM. Never throws on numerical failure: the status records it and
/// `params` holds the last valid parameters.
FitResult fit_em(const Dataset& x, int k, const FitOptions& opts,
                 const std::optional<MixtureParams>& init = std::nullopt);

double l1_penalty(const MixtureParams& params);

/// log-likelihood minus beta * sum_k |mu_k|_1.
double penalized_log_likelihood(const Dataset& x, const MixtureParams& params, double beta,
                                unsigned threads = 1);

/// argmax_k tau_ik, lowest index on ties. Labels are 0-based.
std::vector<int> hard_assign(const Matrix& tau);

// Chunk size used by the data-parallel kernels. Reductions combine chunk
// results in chunk order, so sums are identical for every thread count.
inline constexpr Index kRowChunk = 256;

}  // namespace svmf
