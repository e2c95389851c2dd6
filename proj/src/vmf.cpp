#include "svmf/vmf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svmf/error.hpp"
#include "svmf/special_functions.hpp"

namespace svmf {

void VmfParams::validate() const {
  if (mu.size() < 2) throw DomainError("vMF mean must have dimension >= 2");
  if (std::abs(mu.norm() - 1.0) > 1e-10) throw DomainError("vMF mean is not unit norm");
  if (!(kappa >= 0.0) || kappa > kKappaCap)
    throw DomainError("vMF kappa out of [0, cap]: " + std::to_string(kappa));
}

double log_density(const Vector& x, const VmfParams& p) {
  if (x.size() != p.mu.size())
    throw DimensionMismatch("log_density: observation has dimension " + std::to_string(x.size()) +
                            ", mean has " + std::to_string(p.mu.size()));
  if (std::abs(x.norm() - 1.0) > 1e-6) throw DomainError("log_density: observation is not unit norm");
  return log_vmf_normalizer(p.dim(), p.kappa) + p.kappa * p.mu.dot(x);
}

VmfFit mle_fit(const Dataset& x, std::span<const double> weights, double kappa_cap, bool refine) {
  if (static_cast<Index>(weights.size()) != x.rows())
    throw DimensionMismatch("mle_fit: one weight per observation required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("mle_fit: weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("mle_fit: weights must have a positive sum");

  Matrix w(x.rows(), 1);
  for (Index i = 0; i < x.rows(); ++i) w(i, 0) = weights[static_cast<std::size_t>(i)];
  const Vector resultant = x.weighted_sum(w).row(0).transpose();
  const double norm = resultant.norm();
  if (norm < 1e-12) throw ZeroResultant();

  VmfFit fit;
  fit.params.mu = resultant / norm;
  const double rbar = std::min(norm / total, 1.0);
  fit.mean_resultant_length = rbar;
  if (rbar >= 1.0 - 1e-12) {
    fit.degenerate_concentration = true;
    fit.params.kappa = kappa_cap;
  } else {
    fit.params.kappa = std::min(invert_bessel_ratio(static_cast<int>(x.cols()), rbar, refine), kappa_cap);
  }
  return fit;
}

Vector sample_uniform_sphere(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector v(d);
  double norm = 0.0;
  do {
    for (int j = 0; j < d; ++j) v[j] = normal(rng);
    norm = v.norm();
  } while (norm < 1e-300);
  return v / norm;
}

// Wood (1994): the cosine t = <mu, x> is drawn by rejection from a
// transformed Beta((d-1)/2, (d-1)/2) proposal.
VmfSampler::VmfSampler(VmfParams params) : params_(std::move(params)) {
  params_.validate();
  const double m1 = params_.dim() - 1.0;
  const double k = params_.kappa;
  b_ = m1 / (2.0 * k + std::sqrt(4.0 * k * k + m1 * m1));
  x0_ = (1.0 - b_) / (1.0 + b_);
  c_ = k * x0_ + m1 * std::log1p(-x0_ * x0_);
}

double VmfSampler::draw_cosine(Rng& rng) const {
  const double m1 = params_.dim() - 1.0;
  const double k = params_.kappa;
  std::gamma_distribution<double> ga(0.5 * m1, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    const double g1 = ga(rng);
    const double g2 = ga(rng);
    const double z = g1 / (g1 + g2);
    const double w = (1.0 - (1.0 + b_) * z) / (1.0 - (1.0 - b_) * z);
    const double u = unif(rng);
    if (k * w + m1 * std::log1p(-x0_ * w) - c_ >= std::log(u)) return w;
  }
}

void VmfSampler::draw_into(Rng& rng, Eigen::Ref<Vector> out) const {
  const int d = params_.dim();
  const Vector& mu = params_.mu;
  const double t = std::clamp(draw_cosine(rng), -1.0, 1.0);
  std::normal_distribution<double> normal;
  Vector v(d);
  double norm = 0.0;
  do {
    for (int j = 0; j < d; ++j) v[j] = normal(rng);
    v -= v.dot(mu) * mu;
    norm = v.norm();
  } while (norm < 1e-12);
  out = t * mu + std::sqrt(std::max(0.0, 1.0 - t * t)) * (v / norm);
  out /= out.norm();
}

Vector VmfSampler::draw(Rng& rng) const {
  Vector x(params_.dim());
  draw_into(rng, x);
  return x;
}

Matrix sample(const VmfParams& p, std::size_t n, Rng& rng) {
  if (n < 1) throw DomainError("sample: n must be >= 1");
  const VmfSampler sampler(p);
  Matrix out(static_cast<Index>(n), p.dim());
  Vector x(p.dim());
  for (Index i = 0; i < out.rows(); ++i) {
    sampler.draw_into(rng, x);
    out.row(i) = x.transpose();
  }
  return out;
}

}  // namespace svmf
