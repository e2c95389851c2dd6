#include "svmf/skmeans.hpp"

#include <numeric>
#include <string>

#include "svmf/error.hpp"

namespace svmf {

double coherence(const Dataset& x, const Matrix& prototypes, const std::vector<int>& labels) {
  const Matrix sims = x.project(prototypes);
  double c = 0.0;
  for (Index i = 0; i < sims.rows(); ++i) c += sims(i, labels[static_cast<std::size_t>(i)]);
  return c;
}

SkResult skmeans_fit(const Dataset& x, int k, int max_iters, Rng& rng, const std::optional<Matrix>& init) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (k < 1) throw DomainError("skmeans: K must be >= 1");
  if (n < k) throw DomainError("skmeans: fewer observations than clusters");
  if (max_iters < 1) throw DomainError("skmeans: max_iters must be >= 1");

  SkResult res;
  if (init) {
    if (init->rows() != k || init->cols() != d) throw DimensionMismatch("skmeans: initial prototypes have wrong shape");
    res.prototypes = *init;
    for (Index j = 0; j < k; ++j) res.prototypes.row(j).normalize();
  } else {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    res.prototypes.resize(k, d);
    for (int j = 0; j < k; ++j) {
      std::uniform_int_distribution<Index> pick(j, n - 1);
      std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(pick(rng))]);
      res.prototypes.row(j) = x.row(idx[static_cast<std::size_t>(j)]).normalized().transpose();
    }
  }

  res.labels.assign(static_cast<std::size_t>(n), -1);
  for (int it = 1; it <= max_iters; ++it) {
    const Matrix sims = x.project(res.prototypes);
    bool changed = false;
    std::vector<double> contribution(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      for (Index j = 1; j < k; ++j)
        if (sims(i, j) > sims(i, best)) best = j;
      const auto label = static_cast<int>(best);
      if (res.labels[static_cast<std::size_t>(i)] != label) changed = true;
      res.labels[static_cast<std::size_t>(i)] = label;
      contribution[static_cast<std::size_t>(i)] = sims(i, best);
    }
    res.n_iters = it;
    if (!changed) {
      res.converged = true;
      break;
    }

    // Farthest-point repair of empty clusters.
    std::vector<int> size(static_cast<std::size_t>(k), 0);
    for (int l : res.labels) ++size[static_cast<std::size_t>(l)];
    for (int j = 0; j < k; ++j) {
      if (size[static_cast<std::size_t>(j)] > 0) continue;
      Index worst = -1;
      for (Index i = 0; i < n; ++i) {
        const int l = res.labels[static_cast<std::size_t>(i)];
        if (size[static_cast<std::size_t>(l)] <= 1) continue;
        if (worst < 0 || contribution[static_cast<std::size_t>(i)] < contribution[static_cast<std::size_t>(worst)])
          worst = i;
      }
      if (worst < 0) break;
      --size[static_cast<std::size_t>(res.labels[static_cast<std::size_t>(worst)])];
      res.labels[static_cast<std::size_t>(worst)] = j;
      contribution[static_cast<std::size_t>(worst)] = 1.0;
      ++size[static_cast<std::size_t>(j)];
    }

    Matrix onehot = Matrix::Zero(n, k);
    for (Index i = 0; i < n; ++i) onehot(i, res.labels[static_cast<std::size_t>(i)]) = 1.0;
    const Matrix r = x.weighted_sum(onehot);
    for (int j = 0; j < k; ++j) {
      const double norm = r.row(j).norm();
      if (norm > 0.0) res.prototypes.row(j) = r.row(j) / norm;
    }
  }
  res.coherence = coherence(x, res.prototypes, res.labels);
  return res;
}

}  // namespace svmf
