#pragma once

#include <cstddef>
#include <span>

#include "svmf/dataset.hpp"
#include "svmf/random.hpp"
#include "svmf/types.hpp"

namespace svmf {

struct VmfParams {
  Vector mu;           // unit directional mean
  double kappa = 0.0;  // concentration, in [0, kKappaCap]

  int dim() const { return static_cast<int>(mu.size()); }
  void validate() const;
};

/// log f(x | mu, kappa) = log c_d(kappa) + kappa <mu, x>.
double log_density(const Vector& x, const VmfParams& p);

struct VmfFit {
  VmfParams params;
  double mean_resultant_length = 0.0;
  // Set when rbar >= 1 - 1e-12: all weight sits on one direction and kappa
  // was clamped to the cap.
  bool degenerate_concentration = false;
};

/// Weighted maximum-likelihood fit: mu is the normalised weighted resultant,
/// kappa comes from invert_bessel_ratio at rbar = |resultant| / sum(weights).
/// Throws ZeroResultant when the resultant norm is below 1e-12.
VmfFit mle_fit(const Dataset& x, std::span<const double> weights, double kappa_cap = kKappaCap,
               bool refine = false);

// Draws from vMF(mu, kappa). The rejection constants depend only on (d, kappa)
// and are computed once per sampler.
class VmfSampler {
 public:
  explicit VmfSampler(VmfParams params);

  Vector draw(Rng& rng) const;
  void draw_into(Rng& rng, Eigen::Ref<Vector> out) const;
  const VmfParams& params() const { return params_; }

 private:
  double draw_cosine(Rng& rng) const;

  VmfParams params_;
  double b_ = 0.0;
  double x0_ = 0.0;
  double c_ = 0.0;
};

/// n i.i.d. rows from vMF(p). kappa = 0 gives the uniform distribution.
Matrix sample(const VmfParams& p, std::size_t n, Rng& rng);

/// A single uniform draw on S^{d-1}.
Vector sample_uniform_sphere(int d, Rng& rng);

}  // namespace svmf
