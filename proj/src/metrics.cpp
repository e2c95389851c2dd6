#include "svmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "svmf/error.hpp"
#include "svmf/special_functions.hpp"
#include "svmf/vmf.hpp"

namespace svmf {

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DimensionMismatch("adjusted_rand_index: label sequences differ in length");
  if (a.empty()) throw DomainError("adjusted_rand_index: empty labelings");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> row_sum;
  std::map<int, double> col_sum;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    row_sum[a[i]] += 1.0;
    col_sum[b[i]] += 1.0;
  }
  auto pairs = [](double n) { return 0.5 * n * (n - 1.0); };
  double index = 0.0;
  for (const auto& [key, n] : joint) index += pairs(n);
  double sum_a = 0.0;
  for (const auto& [key, n] : row_sum) sum_a += pairs(n);
  double sum_b = 0.0;
  for (const auto& [key, n] : col_sum) sum_b += pairs(n);
  const double total = pairs(static_cast<double>(a.size()));
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double sparsity(const Matrix& means) {
  if (means.size() == 0) return 0.0;
  return static_cast<double>((means.array() == 0.0).count()) / static_cast<double>(means.size());
}

// Hungarian algorithm (shortest augmenting paths with potentials) on the
// cost matrix -<est_i, truth_j>.
std::vector<int> match_components(const Matrix& estimated, const Matrix& truth) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols())
    throw DimensionMismatch("match_components: K or d mismatch");
  const int n = static_cast<int>(estimated.rows());
  const Matrix cost = -(estimated * truth.transpose());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
  return match;
}

SupportScore support_precision_recall(const Matrix& estimated_means, const Matrix& true_means) {
  if (estimated_means.rows() != true_means.rows())
    throw DimensionMismatch("support_precision_recall: estimated K " + std::to_string(estimated_means.rows()) +
                            " differs from true K " + std::to_string(true_means.rows()));
  if (estimated_means.cols() != true_means.cols())
    throw DimensionMismatch("support_precision_recall: dimension mismatch");
  SupportScore s;
  s.matching = match_components(estimated_means, true_means);
  double est_zero = 0.0;
  double true_zero = 0.0;
  double both = 0.0;
  for (Index k = 0; k < estimated_means.rows(); ++k) {
    const Index t = s.matching[static_cast<std::size_t>(k)];
    for (Index j = 0; j < estimated_means.cols(); ++j) {
      const bool e = estimated_means(k, j) == 0.0;
      const bool g = true_means(t, j) == 0.0;
      est_zero += e;
      true_zero += g;
      both += e && g;
    }
  }
  if (est_zero == 0.0) {
    s.precision = 1.0;
    s.precision_undefined = true;
  } else {
    s.precision = both / est_zero;
  }
  if (true_zero == 0.0) {
    s.recall = 1.0;
    s.recall_undefined = true;
  } else {
    s.recall = both / true_zero;
  }
  return s;
}

SupportScore support_precision_recall(const MixtureParams& estimated, const GroundTruth& truth) {
  return support_precision_recall(estimated.means, truth.params.means);
}

double estimate_overlap(const MixtureParams& truth, std::size_t n_samples, Rng& rng) {
  if (n_samples < 1) throw DomainError("estimate_overlap: n_samples must be >= 1");
  const int k = truth.n_components();
  const int d = static_cast<int>(truth.dim());
  std::vector<VmfSampler> samplers;
  samplers.reserve(static_cast<std::size_t>(k));
  Vector offset(k);
  Vector kappa(k);
  for (int j = 0; j < k; ++j) {
    kappa[j] = truth.kappa(j);
    samplers.emplace_back(VmfParams{truth.means.row(j).transpose(), kappa[j]});
    offset[j] = std::log(truth.alpha[j]) + log_vmf_normalizer(d, kappa[j]);
  }
  std::discrete_distribution<int> component(truth.alpha.data(), truth.alpha.data() + k);
  Vector x(d);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int z = component(rng);
    samplers[static_cast<std::size_t>(z)].draw_into(rng, x);
    const Vector score = (truth.means * x).cwiseProduct(kappa) + offset;
    Index best = 0;
    for (Index j = 1; j < k; ++j)
      if (score[j] > score[best]) best = j;
    errors += best != z;
  }
  return static_cast<double>(errors) / static_cast<double>(n_samples);
}

}  // namespace svmf
