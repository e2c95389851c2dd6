#include <cmath>

#include "doctest.h"
#include "svmf/error.hpp"
#include "svmf/metrics.hpp"
#include "svmf/path.hpp"
#include "svmf/selection.hpp"
#include "svmf/simulation.hpp"

using namespace svmf;

namespace {
SimulatedData reference_data(std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.k = 4;
  cfg.d = 10;
  cfg.n = 500;
  cfg.base_kappa = 5.37;
  cfg.seed = seed;
  return simulate_mixture(cfg);
}
}  // namespace

TEST_CASE("next_beta examples") {
  MixtureParams p;
  p.alpha = Vector::Ones(1);
  p.means = Matrix(1, 3);
  p.means << 1, 0, 0;
  p.kappas = Vector::Constant(1, 2.0);
  Matrix r(1, 3);
  r << 0.3, 0.1, 0.0;
  CHECK(next_beta(p, r, 0.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(next_beta(p, r, 0.2) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(next_beta(p, r, 0.6), NoIncrementAvailable);
  CHECK_THROWS_AS(next_beta(p, Matrix::Zero(1, 3), 0.0), NoIncrementAvailable);
  // the minimum relative increase lifts a tiny gap
  Matrix close(1, 3);
  close << 0.3, 0.50001, 0.0;
  CHECK(next_beta(p, close, 1.0, 1e-3) == doctest::Approx(1.001).epsilon(1e-15));
  CHECK(next_beta(p, close, 1.0, 0.0) == doctest::Approx(1.00002).epsilon(1e-12));

  MixtureParams s = p;
  s.alpha = Vector::Constant(2, 0.5);
  s.means = Matrix::Identity(2, 3);
  s.kappas = Vector::Constant(1, 3.0);
  s.mode = KappaMode::Shared;
  Matrix r2(2, 3);
  r2 << 0.5, -0.2, 0.0, 0.1, 0.9, -0.05;
  CHECK(next_beta(s, r2, 0.0) == doctest::Approx(0.15).epsilon(1e-14));
}

TEST_CASE("zero_small_coordinates") {
  MixtureParams p;
  p.alpha = Vector::Ones(1);
  p.means = Matrix(1, 3);
  p.means << 1e-9, -0.6, 0.8;
  p.kappas = Vector::Ones(1);
  zero_small_coordinates(p, 1e-8);
  CHECK(p.means(0, 0) == 0.0);
  CHECK(std::abs(p.means.row(0).norm() - 1.0) < 1e-15);
}

TEST_CASE("first-step sparsification guarantee") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const SimulatedData s = reference_data(seed);
    FitOptions opts;
    opts.seed = seed;
    const FitResult f = best_of_restarts(s.data, 4, opts, 5);
    REQUIRE(fit_usable(f.status));
    const Responsibilities resp = e_step(s.data, f.params);
    const Matrix r = resultants(s.data, resp.tau);
    const double b = next_beta(f.params, r, 0.0);
    const long nnz = (f.params.means.array() != 0.0).count();
    FitOptions at = opts;
    at.beta = b;
    at.inner_max_iters = 1;
    CHECK((m_step(s.data, resp, f.params, at).params.means.array() != 0.0).count() < nnz);
    at.beta = 0.99 * b;
    CHECK((m_step(s.data, resp, f.params, at).params.means.array() != 0.0).count() == nnz);
  }
}

TEST_CASE("follow_path invariants") {
  const SimulatedData s = reference_data(1);
  PathOptions po;
  po.min_rel_increase = 1e-3;
  po.fit.seed = 1;
  const FitResult dense = best_of_restarts(s.data, 4, po.fit, 10);
  const PathResult path = follow_path(s.data, po, dense);
  REQUIRE(path.steps.size() >= 2);
  CHECK(path.steps[0].beta == 0.0);
  CHECK(path.steps[0].fit.params.means == dense.params.means);
  CHECK(path.steps[0].fit.params.kappas == dense.params.kappas);
  CHECK(path.steps[0].fit.log_likelihood == dense.log_likelihood);
  for (std::size_t p = 1; p < path.steps.size(); ++p) {
    CHECK(path.steps[p].beta > path.steps[p - 1].beta);
    if (p >= 2) CHECK(path.steps[p].beta >= path.steps[p - 1].beta * (1 + 1e-3) * (1 - 1e-15));
  }
  for (std::size_t p : path.usable_steps()) {
    path.steps[p].fit.params.validate();
    CHECK(path.steps[p].ic.count(CriterionKind::BIC) == 1);
  }
  if (path.termination == PathTermination::EmFailure) CHECK_FALSE(fit_usable(path.steps.back().fit.status));
}

TEST_CASE("path stops at the step budget and at maximal sparsity") {
  const SimulatedData s = reference_data(2);
  PathOptions po;
  po.fit.seed = 2;
  const FitResult dense = best_of_restarts(s.data, 4, po.fit, 5);
  po.max_steps = 3;
  const PathResult short_path = follow_path(s.data, po, dense);
  CHECK(short_path.steps.size() <= 3);
  if (short_path.termination == PathTermination::MaxSteps) CHECK(short_path.steps.size() == 3);

  PathOptions one;
  one.stop_at_max_sparsity = true;
  Matrix x(6, 3);
  x << 1, 0, 0, 0.99, 0.1411, 0, 0.98, 0, 0.199, 0.995, 0.0999, 0, 1, 0, 0, 0.999, 0, 0.0447;
  Dataset ds(x);
  ds.normalize_rows();
  const FitResult f = fit_em(ds, 1, one.fit);
  const PathResult sp = follow_path(ds, one, f);
  CHECK((sp.termination == PathTermination::MaxSparsity || sp.termination == PathTermination::EmFailure ||
         sp.termination == PathTermination::NoIncrementAvailable));
  if (sp.termination == PathTermination::MaxSparsity)
    CHECK((sp.steps.back().fit.params.means.array() != 0.0).count() == 1);
}

TEST_CASE("follow_path rejects bad starting fits") {
  const SimulatedData s = reference_data(3);
  FitResult f = fit_em(s.data, 2, FitOptions{});
  PathOptions po;
  f.beta = 0.5;
  CHECK_THROWS_AS(follow_path(s.data, po, f), DomainError);
  f.beta = 0.0;
  f.status = FitStatus::ZeroMean;
  CHECK_THROWS_AS(follow_path(s.data, po, f), DomainError);
  po.max_steps = 0;
  CHECK_THROWS_AS(po.validate(), DomainError);
}
