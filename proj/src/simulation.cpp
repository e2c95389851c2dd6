#include "svmf/simulation.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "svmf/error.hpp"
#include "svmf/metrics.hpp"
#include "svmf/vmf.hpp"

namespace svmf {

void SimulationConfig::validate() const {
  if (k < 1) throw DomainError("simulation: K must be >= 1");
  if (d < 2) throw DomainError("simulation: d must be >= 2");
  if (n < 1) throw DomainError("simulation: N must be >= 1");
  if (overlap_target.has_value() == base_kappa.has_value())
    throw DomainError("simulation: give exactly one of overlap target and base kappa");
  if (overlap_target && !(*overlap_target > 0.0 && *overlap_target < 0.5))
    throw DomainError("simulation: overlap target must lie in (0, 0.5)");
  if (base_kappa && !(*base_kappa > 0.0 && std::isfinite(*base_kappa)))
    throw DomainError("simulation: base kappa must be positive");
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw DomainError("simulation: sparsity must lie in [0, 1)");
  if (!alpha.empty()) {
    if (static_cast<int>(alpha.size()) != k) throw DomainError("simulation: alpha needs K entries");
    double s = 0.0;
    for (double a : alpha) {
      if (!(a >= 0.0)) throw DomainError("simulation: alpha entries must be nonnegative");
      s += a;
    }
    if (std::abs(s - 1.0) > 1e-10) throw DomainError("simulation: alpha must sum to one");
  }
  if (!(kappa_jitter_sd_frac >= 0.0)) throw DomainError("simulation: jitter must be >= 0");
  if (candidate_multiplier < 1) throw DomainError("simulation: candidate multiplier must be >= 1");
  if (calibration_samples < 1) throw DomainError("simulation: calibration samples must be >= 1");
}

Vector SimulationConfig::proportions() const {
  if (alpha.empty()) return Vector::Constant(k, 1.0 / k);
  return Eigen::Map<const Vector>(alpha.data(), static_cast<Index>(alpha.size()));
}

std::vector<Index> greedy_max_separation_indices(const Matrix& candidates, int k) {
  const Index m = candidates.rows();
  if (k < 1) throw DomainError("greedy_max_separation: K must be >= 1");
  if (m < k) throw DomainError("greedy_max_separation: fewer candidates than requested vectors");
  if (k == 1) return {0};

  const Matrix gram = candidates * candidates.transpose();
  Index bi = 0;
  Index bj = 1;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      if (gram(i, j) < gram(bi, bj)) {
        bi = i;
        bj = j;
      }
  std::vector<Index> chosen{bi, bj};
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  used[static_cast<std::size_t>(bi)] = used[static_cast<std::size_t>(bj)] = true;
  // worst[c] = largest inner product of candidate c with the current selection
  Vector worst(m);
  for (Index c = 0; c < m; ++c) worst[c] = std::max(gram(c, bi), gram(c, bj));

  while (static_cast<int>(chosen.size()) < k) {
    Index best = -1;
    for (Index c = 0; c < m; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      if (best < 0 || worst[c] < worst[best]) best = c;
    }
    chosen.push_back(best);
    used[static_cast<std::size_t>(best)] = true;
    for (Index c = 0; c < m; ++c) worst[c] = std::max(worst[c], gram(c, best));
  }
  return chosen;
}

Matrix greedy_max_separation(const Matrix& candidates, int k) {
  const auto idx = greedy_max_separation_indices(candidates, k);
  Matrix out(k, candidates.cols());
  for (int j = 0; j < k; ++j) out.row(j) = candidates.row(idx[static_cast<std::size_t>(j)]);
  return out;
}

Matrix sparsify_means(const Matrix& means, double sparsity, Rng& rng) {
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw DomainError("sparsify_means: sparsity must lie in [0, 1)");
  const Index k = means.rows();
  const Index d = means.cols();
  const auto zeroed = static_cast<Index>(std::floor(sparsity * static_cast<double>(d) + 1e-9));
  if (zeroed >= d) throw CannotSparsify("sparsity " + std::to_string(sparsity) + " would zero every coordinate");

  constexpr int kMaxAttempts = 100;
  std::vector<Index> coords(static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Matrix out = means;
    bool ok = true;
    for (Index r = 0; r < k && ok; ++r) {
      std::iota(coords.begin(), coords.end(), Index{0});
      for (Index j = 0; j < zeroed; ++j) {
        std::uniform_int_distribution<Index> pick(j, d - 1);
        std::swap(coords[static_cast<std::size_t>(j)], coords[static_cast<std::size_t>(pick(rng))]);
        out(r, coords[static_cast<std::size_t>(j)]) = 0.0;
      }
      const double norm = out.row(r).norm();
      if (!(norm > 0.0)) {
        ok = false;
        break;
      }
      out.row(r) /= norm;
    }
    for (Index a = 0; a < k && ok; ++a)
      for (Index b = a + 1; b < k && ok; ++b)
        if (out.row(a) == out.row(b)) ok = false;
    if (ok) return out;
  }
  throw CannotSparsify("could not obtain nonzero, pairwise distinct means after " +
                       std::to_string(kMaxAttempts) + " attempts");
}

Vector rescale_for_separation(const Matrix& means, const Vector& kappas, double cap) {
  const Index k = means.rows();
  Vector out(k);
  const Matrix gram = means * means.transpose();
  for (Index j = 0; j < k; ++j) {
    // A single component has no neighbour; it is treated as orthogonal to one.
    double c = k > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
    for (Index l = 0; l < k; ++l)
      if (l != j) c = std::max(c, gram(j, l));
    const double denom = 1.0 - c;
    out[j] = denom > 0.0 ? std::min(2.0 * kappas[j] / denom, cap) : cap;
  }
  return out;
}

namespace {

MixtureParams planted_params(const Matrix& means, const Vector& kappas, const Vector& alpha) {
  MixtureParams p;
  p.alpha = alpha;
  p.means = means;
  p.kappas = rescale_for_separation(means, kappas);
  p.mode = KappaMode::Free;
  return p;
}

}  // namespace

double calibrate_overlap(const Matrix& means, double target, const Vector& alpha, Rng& rng,
                         std::size_t n_samples) {
  if (!(target > 0.0 && target < 0.5)) throw DomainError("calibrate_overlap: target must lie in (0, 0.5)");
  const std::uint64_t stream = rng();
  auto error_at = [&](double kappa) {
    Rng local(stream);
    return estimate_overlap(planted_params(means, Vector::Constant(means.rows(), kappa), alpha), n_samples, local);
  };
  double lo = 0.01;
  double hi = 1e4;
  const double e_lo = error_at(lo);
  const double e_hi = error_at(hi);
  if (!(e_lo >= target && e_hi <= target))
    throw NotBracketed("overlap " + std::to_string(target) + " not reachable: error is " + std::to_string(e_lo) +
                       " at kappa=0.01 and " + std::to_string(e_hi) + " at kappa=1e4");
  double mid = std::sqrt(lo * hi);
  for (int step = 0; step < 40; ++step) {
    mid = std::sqrt(lo * hi);
    const double e = error_at(mid);
    if (std::abs(e - target) < 0.1 * target) return mid;
    if (e > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

SimulatedData simulate_mixture(const SimulationConfig& cfg, Rng& rng) {
  cfg.validate();
  const Vector alpha = cfg.proportions();
  const int k = cfg.k;
  const int d = cfg.d;

  Matrix candidates(static_cast<Index>(cfg.candidate_multiplier) * k, d);
  for (Index i = 0; i < candidates.rows(); ++i) candidates.row(i) = sample_uniform_sphere(d, rng).transpose();
  Matrix means = greedy_max_separation(candidates, k);
  means = sparsify_means(means, cfg.sparsity, rng);

  const double base = cfg.base_kappa ? *cfg.base_kappa
                                     : calibrate_overlap(means, *cfg.overlap_target, alpha, rng,
                                                         cfg.calibration_samples);

  Vector kappas(k);
  std::normal_distribution<double> jitter(base, cfg.kappa_jitter_sd_frac * base);
  for (int j = 0; j < k; ++j) {
    if (cfg.kappa_jitter_sd_frac == 0.0) {
      kappas[j] = base;
      continue;
    }
    do {
      kappas[j] = jitter(rng);
    } while (!(kappas[j] > 0.0));
  }

  SimulatedData out;
  GroundTruth& gt = out.truth;
  gt.params = planted_params(means, kappas, alpha);
  gt.base_kappa = base;
  gt.support_mask = (means.array() != 0.0).cast<int>();

  std::vector<VmfSampler> samplers;
  samplers.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    samplers.emplace_back(VmfParams{gt.params.means.row(j).transpose(), gt.params.kappas[j]});

  std::discrete_distribution<int> component(alpha.data(), alpha.data() + alpha.size());
  Matrix x(static_cast<Index>(cfg.n), d);
  Vector row(d);
  gt.labels.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const int z = component(rng);
    gt.labels[i] = z;
    samplers[static_cast<std::size_t>(z)].draw_into(rng, row);
    x.row(static_cast<Index>(i)) = row.transpose();
  }
  out.data = Dataset(std::move(x));
  out.data.normalize_rows();
  return out;
}

SimulatedData simulate_mixture(const SimulationConfig& cfg) {
  Rng rng(cfg.seed);
  return simulate_mixture(cfg, rng);
}

}  // namespace svmf
