// Acceptance suite. `acceptance N` runs criterion N, `acceptance` runs all.
// Each criterion prints one PASS/FAIL line with the measured quantities.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bessel_oracle.hpp"
#include "misc_oracles.hpp"
#include "movmf_oracle.hpp"
#include "svmf/cli.hpp"
#include "svmf/criteria.hpp"
#include "svmf/em.hpp"
#include "svmf/metrics.hpp"
#include "svmf/path.hpp"
#include "svmf/selection.hpp"
#include "svmf/simulation.hpp"
#include "svmf/skmeans.hpp"
#include "svmf/special_functions.hpp"
#include "svmf/viz.hpp"
#include "svmf/vmf.hpp"

using namespace svmf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SimulatedData simulate(int k, int d, std::size_t n, double base_kappa, double sparsity, std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.k = k;
  cfg.d = d;
  cfg.n = n;
  cfg.base_kappa = base_kappa;
  cfg.sparsity = sparsity;
  cfg.seed = seed;
  return simulate_mixture(cfg);
}

MixtureParams draw_init(const Dataset& x, int k, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 50; ++attempt) {
    try {
      return init_random(x, k, KappaMode::Free, rng);
    } catch (const InitFailure&) {
    }
  }
  throw std::runtime_error("no initialisation succeeded");
}

// 1. beta = 0 fit against an independent plain movMF EM.
Outcome criterion1() {
  double worst_alpha = 0, worst_mu = 0, worst_kappa = 0, worst_ll = 0;
  int n_cases = 0, iter_mismatch = 0, not_converged = 0;
  for (int d : {5, 10})
    for (int k : {2, 3})
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SimulatedData s = simulate(k, d, 300, 2.0 * d, 0.0, 100 + seed);
        const MixtureParams init = draw_init(s.data, k, seed);
        FitOptions opts;
        opts.em_tol = 1e-10;
        opts.max_em_iters = 5000;
        const FitResult f = fit_em(s.data, k, opts, init);
        oracle::MovMF o{init.alpha, init.means, init.kappas};
        const auto ref = oracle::movmf_em(s.data.to_dense(), o, opts.em_tol, opts.max_em_iters);
        ++n_cases;
        if (f.status != FitStatus::Converged || !ref.converged) ++not_converged;
        if (f.n_iters != ref.iterations) ++iter_mismatch;
        worst_alpha = std::max(worst_alpha, (f.params.alpha - ref.params.alpha).cwiseAbs().maxCoeff());
        worst_mu = std::max(worst_mu, (f.params.means - ref.params.means).cwiseAbs().maxCoeff());
        worst_kappa = std::max(worst_kappa, ((f.params.kappas - ref.params.kappa).array().abs() /
                                             ref.params.kappa.array()).maxCoeff());
        worst_ll = std::max(worst_ll, std::abs(f.log_likelihood - ref.loglik) / std::abs(ref.loglik));
      }
  const bool pass = n_cases == 20 && not_converged == 0 && worst_alpha <= 1e-6 && worst_mu <= 1e-6 &&
                    worst_kappa <= 1e-6 && worst_ll <= 1e-8;
  return {pass, std::to_string(n_cases) + " datasets, max |d alpha|=" + fmt("%.1e", worst_alpha) +
                    ", max |d mu|=" + fmt("%.1e", worst_mu) + ", max rel d kappa=" + fmt("%.1e", worst_kappa) +
                    ", max rel d logL=" + fmt("%.1e", worst_ll) + ", iteration-count mismatches=" +
                    std::to_string(iter_mismatch)};
}

// 2. soft_threshold_mu against a projected proximal-gradient maximiser.
Outcome criterion2() {
  Rng rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> g;
  double worst_obj = 0, worst_coord = 0;
  int done = 0;
  while (done < 100) {
    const int d = 2 + static_cast<int>(u(rng) * 49);
    Vector r(d);
    for (int j = 0; j < d; ++j) r[j] = g(rng) * (u(rng) < 0.3 ? 0.1 : 1.0);
    const double kappa = std::pow(10.0, -1 + 3 * u(rng));
    const double beta = u(rng) * kappa * r.cwiseAbs().maxCoeff();
    if (!(kappa * r.cwiseAbs().maxCoeff() > beta)) continue;
    const Vector mu = soft_threshold_mu(r, kappa, beta);
    const Vector ref = oracle::sphere_prox_gradient(r, kappa, beta);
    const double scale = std::max(1.0, std::abs(oracle::sphere_objective(ref, r, kappa, beta)));
    worst_obj = std::max(worst_obj, std::abs(oracle::sphere_objective(mu, r, kappa, beta) -
                                             oracle::sphere_objective(ref, r, kappa, beta)) / scale);
    worst_coord = std::max(worst_coord, (mu - ref).cwiseAbs().maxCoeff());
    ++done;
  }
  return {worst_obj <= 1e-6 && worst_coord <= 1e-4,
          "100 instances, max objective gap=" + fmt("%.1e", worst_obj) + ", max coordinate gap=" + fmt("%.1e", worst_coord)};
}

// 3. Monotone traces and M-step invariants.
Outcome criterion3() {
  int fits = 0, converged = 0, trace_violations = 0, invariant_violations = 0;
  double worst_drop = 0.0;
  for (std::uint64_t seed = 0; fits < 50; ++seed) {
    const SimulatedData s = simulate(3, 10, 300, 10.0, 0.2, 300 + seed);
    FitOptions base;
    base.seed = seed;
    const FitResult dense = best_of_restarts(s.data, 3, base, 3);
    if (!fit_usable(dense.status)) continue;
    const Matrix r = resultants(s.data, e_step(s.data, dense.params).tau);
    const double beta1 = next_beta(dense.params, r, 0.0);
    for (double beta : {0.0, 0.5 * beta1, beta1}) {
      if (fits >= 50) break;
      FitOptions opts = base;
      opts.beta = beta;
      opts.seed = derive_seed(seed, static_cast<std::uint64_t>(fits));
      opts.kappa_mode = fits % 4 == 3 ? KappaMode::Shared : KappaMode::Free;
      const FitResult f = fit_em(s.data, 3, opts);
      ++fits;
      if (f.status == FitStatus::Converged) {
        ++converged;
        for (std::size_t i = 1; i < f.trace.size(); ++i) {
          const double drop = (f.trace[i - 1] - f.trace[i]) / std::abs(f.trace[i - 1]);
          worst_drop = std::max(worst_drop, drop);
          if (drop > 1e-8) ++trace_violations;
        }
      }
      // Replay the same run step by step and check every M-step output.
      Rng rng(opts.seed);
      MixtureParams p;
      bool ok = false;
      for (int a = 0; a < opts.init_attempts && !ok; ++a) {
        try {
          p = init_random(s.data, 3, opts.kappa_mode, rng);
          ok = true;
        } catch (const InitFailure&) {
        }
      }
      for (int it = 0; ok && it < f.n_iters; ++it) {
        try {
          p = m_step(s.data, e_step(s.data, p), p, opts).params;
        } catch (const EmFailure&) {
          break;
        }
        bool good = std::abs(p.alpha.sum() - 1.0) <= 1e-10;
        for (Index k = 0; k < 3; ++k) good = good && std::abs(p.means.row(k).norm() - 1.0) <= 1e-10;
        if (opts.kappa_mode == KappaMode::Shared) good = good && p.kappas.size() == 1;
        if (!good) ++invariant_violations;
      }
    }
  }
  return {trace_violations == 0 && invariant_violations == 0 && converged > 0,
          std::to_string(fits) + " fits (" + std::to_string(converged) + " converged), trace violations=" +
              std::to_string(trace_violations) + " (largest relative drop " + fmt("%.1e", worst_drop) +
              "), M-step invariant violations=" + std::to_string(invariant_violations)};
}

// 4. First-step sparsification at next_beta, none at 0.99 next_beta.
Outcome criterion4() {
  int fits = 0, fail_at = 0, fail_below = 0;
  for (std::uint64_t seed = 0; fits < 20; ++seed) {
    const SimulatedData s = simulate(2 + static_cast<int>(seed % 3), 8 + 4 * static_cast<int>(seed % 2), 300, 8.0, 0.0,
                                     400 + seed);
    const int k = s.truth.params.n_components();
    FitOptions opts;
    opts.seed = seed;
    const FitResult f = fit_em(s.data, k, opts);
    if (f.status != FitStatus::Converged) continue;
    ++fits;
    const Responsibilities resp = e_step(s.data, f.params);
    const Matrix r = resultants(s.data, resp.tau);
    const double b = next_beta(f.params, r, 0.0);
    FitOptions one = opts;
    one.inner_max_iters = 1;
    auto newly_zero = [&](double beta) {
      one.beta = beta;
      const Matrix m = m_step(s.data, resp, f.params, one).params.means;
      long count = 0;
      for (Index i = 0; i < m.size(); ++i)
        if (f.params.means.data()[i] != 0.0 && m.data()[i] == 0.0) ++count;
      return count;
    };
    if (newly_zero(b) < 1) ++fail_at;
    if (newly_zero(0.99 * b) != 0) ++fail_below;
  }
  return {fail_at == 0 && fail_below == 0,
          std::to_string(fits) + " converged fits; no new zero at next_beta in " + std::to_string(fail_at) +
              ", new zeros at 0.99 next_beta in " + std::to_string(fail_below)};
}

// 5. Reference path: step count, sparsity trend, BIC dip, warm vs cold restarts.
Outcome criterion5() {
  const SimulatedData s = simulate(4, 10, 500, 5.37, 0.0, 1);
  PathOptions po;
  po.min_rel_increase = 1e-3;
  po.fit.seed = 1;
  // Objective-based stopping pins parameters to about sqrt(tol); tighten for the 1e-6 comparison.
  po.fit.em_tol = 1e-14;
  po.fit.inner_tol = 1e-12;
  po.fit.max_em_iters = 5000;
  const FitResult dense = best_of_restarts(s.data, 4, po.fit, 10);
  if (!fit_usable(dense.status)) return {false, "dense fit failed"};
  const PathResult path = follow_path(s.data, po, dense);
  const auto usable = path.usable_steps();
  const std::size_t n_steps = path.steps.size();

  int pairs = 0, increasing = 0;
  for (std::size_t i = 1; i < usable.size(); ++i) {
    ++pairs;
    if (path.steps[usable[i]].sparsity >= path.steps[usable[i - 1]].sparsity) ++increasing;
  }
  const double frac = pairs ? static_cast<double>(increasing) / pairs : 0.0;

  const double dense_bic = path.steps[0].ic.at(CriterionKind::BIC);
  double min_bic = dense_bic;
  for (std::size_t i : usable) min_bic = std::min(min_bic, path.steps[i].ic.at(CriterionKind::BIC));

  double worst = 0.0;
  for (std::size_t i : usable) {
    if (i == 0) continue;
    FitOptions fo = po.fit;
    fo.beta = path.steps[i].beta;
    FitResult cold = fit_em(s.data, 4, fo, dense.params);
    if (!fit_usable(cold.status)) {
      worst = INFINITY;
      continue;
    }
    zero_small_coordinates(cold.params, po.epsilon);
    const MixtureParams& warm = path.steps[i].fit.params;
    worst = std::max(worst, (cold.params.means - warm.means).cwiseAbs().maxCoeff());
    worst = std::max(worst, (cold.params.alpha - warm.alpha).cwiseAbs().maxCoeff());
    worst = std::max(worst, ((cold.params.kappas - warm.kappas).array().abs() / warm.kappas.array()).maxCoeff());
  }
  const bool pass = n_steps >= 5 && n_steps <= 40 && frac >= 0.95 && min_bic < dense_bic && worst <= 1e-6;
  return {pass, std::to_string(n_steps) + " steps (" + to_string(path.termination) + "), sparsity non-decreasing in " +
                    fmt("%.0f%%", 100 * frac) + " of pairs, min BIC " + fmt("%.2f", min_bic) + " vs dense " +
                    fmt("%.2f", dense_bic) + ", warm/cold max difference " + fmt("%.1e", worst)};
}

// 6. Overlap of the d = 100, K = 4 reference construction.
Outcome criterion6() {
  double mean_1734 = 0.0, mean_1509 = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (double base : {17.34, 15.09}) {
      const SimulatedData s = simulate(4, 100, 1, base, 0.0, 600 + seed);
      Rng rng(derive_seed(600 + seed, 1));
      const double e = estimate_overlap(s.truth.params, 100000, rng);
      (base == 17.34 ? mean_1734 : mean_1509) += e / 5;
    }
  }
  const bool pass = mean_1734 >= 0.015 && mean_1734 <= 0.035 && mean_1509 >= 0.035 && mean_1509 <= 0.065;
  return {pass, "kappa=17.34: " + fmt("%.2f%%", 100 * mean_1734) + " (want 1.5-3.5%), kappa=15.09: " +
                    fmt("%.2f%%", 100 * mean_1509) + " (want 3.5-6.5%)"};
}

SimulatedData criterion7_data(std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.k = 3;
  cfg.d = 20;
  cfg.n = 500;
  cfg.overlap_target = 0.025;
  cfg.sparsity = 0.1;
  cfg.seed = 700 + seed;
  return simulate_mixture(cfg);
}

// 7. K selection on planted K* = 3.
Outcome criterion7() {
  int bic_hits = 0, aic_ge = 0;
  std::string bic_ks, aic_ks;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SimulatedData s = criterion7_data(seed);
    SelectionOptions so;
    so.k_candidates = {1, 2, 3, 4, 5, 6};
    so.n_restarts = 10;
    so.follow_paths = false;
    so.path.fit.seed = seed;
    const SelectionReport rep = select_model(s.data, so);
    const int kb = rep.chosen_k.at(CriterionKind::BIC);
    const int ka = rep.chosen_k.at(CriterionKind::AIC);
    bic_hits += kb == 3;
    aic_ge += ka >= 3;
    bic_ks += std::to_string(kb);
    aic_ks += std::to_string(ka);
  }
  return {bic_hits >= 14 && aic_ge >= 18, "BIC picked K=3 in " + std::to_string(bic_hits) + "/20 (" + bic_ks +
                                              "), AIC picked K>=3 in " + std::to_string(aic_ge) + "/20 (" + aic_ks + ")"};
}

// 8. Recovery quality on the criterion 7 datasets.
Outcome criterion8() {
  double ari_em = 0.0, ari_sk = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SimulatedData s = criterion7_data(seed);
    FitOptions fo;
    fo.seed = seed;
    const FitResult f = best_of_restarts(s.data, 3, fo, 10);
    ari_em += adjusted_rand_index(hard_assign(e_step(s.data, f.params).tau), s.truth.labels) / 20;
    std::optional<SkResult> best;
    for (std::uint64_t r = 0; r < 10; ++r) {
      Rng rng(derive_seed(seed, r));
      SkResult sk = skmeans_fit(s.data, 3, 100, rng);
      if (!best || sk.coherence > best->coherence) best = std::move(sk);
    }
    ari_sk += adjusted_rand_index(best->labels, s.truth.labels) / 20;
  }
  return {ari_em >= 0.8 && std::abs(ari_em - ari_sk) <= 0.1,
          "mean ARI dense vMF=" + fmt("%.3f", ari_em) + ", spherical k-means=" + fmt("%.3f", ari_sk)};
}

// 9. Special functions against arbitrary precision.
Outcome criterion9() {
  double worst_ratio = 0.0;
  int points = 0;
  for (int d : {2, 3, 5, 10, 31, 100, 500, 1000, 5000, 10000})
    for (int i = 0; i < 20; ++i) {
      const double kappa = std::pow(10.0, -3.0 + 9.0 * i / 19.0);
      const double want = oracle::bessel_ratio(d, kappa);
      worst_ratio = std::max(worst_ratio, std::abs(bessel_ratio(d, kappa) - want) / want);
      ++points;
    }
  double worst_trip = 0.0;
  for (int d : {2, 3, 10, 100, 1000, 10000})
    for (double r = 0.01; r < 0.99; r += 0.0098)
      worst_trip = std::max(worst_trip, std::abs(bessel_ratio(d, invert_bessel_ratio(d, r, true)) - r));
  double worst_cont = 0.0;
  for (int d : {2, 3, 10, 100, 1000, 10000, 100000})
    worst_cont = std::max(worst_cont, std::abs(log_vmf_normalizer(d, 1e-8) - log_vmf_normalizer(d, 0.0)));
  return {points == 200 && worst_ratio <= 1e-10 && worst_trip <= 1e-8 && worst_cont <= 1e-6,
          std::to_string(points) + "-point grid max rel error=" + fmt("%.1e", worst_ratio) + ", inverse round trip=" +
              fmt("%.1e", worst_trip) + ", normaliser jump at 0=" + fmt("%.1e", worst_cont)};
}

// 10. Table 1 coefficients by direct arithmetic.
Outcome criterion10() {
  Rng rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0, bad = 0;
  for (auto kind : kAllCriteria)
    for (int t = 0; t < 10; ++t) {
      const double n = t == 0 ? std::exp(2.0) : std::floor(10 + 5000 * u(rng));
      const double d = std::floor(3 + 1000 * u(rng));
      const double c = std::floor(1 + 200 * u(rng));
      const double ll = -1e4 * u(rng);
      const double gamma = 0.5;
      double phi = 0;
      switch (kind) {
        case CriterionKind::AIC: phi = 2; break;
        case CriterionKind::BIC: phi = std::log(n); break;
        case CriterionKind::RIC: phi = 2 * std::log(d); break;
        case CriterionKind::RICc: phi = 2 * (std::log(d) + std::log(std::log(d))); break;
        case CriterionKind::EBIC: phi = std::log(n) + 2 * gamma * std::log(d); break;
      }
      const double want = phi * c - 2 * ll;
      const double got = information_criterion(ll, c, n, d, {kind, gamma});
      ++checked;
      if (std::abs(got - want) > 1e-12 * std::abs(want)) ++bad;
    }
  const double n = std::exp(2.0);
  const double aic = information_criterion(-321.5, 17, n, 40, {CriterionKind::AIC});
  const double bic = information_criterion(-321.5, 17, n, 40, {CriterionKind::BIC});
  const bool coincide = std::abs(aic - bic) <= 1e-12 * std::abs(aic);
  return {bad == 0 && coincide, std::to_string(checked) + " tuples, mismatches=" + std::to_string(bad) +
                                    ", BIC-AIC at n=e^2: " + fmt("%.1e", bic - aic)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 11. Determinism of CLI outputs; e_step across thread counts.
Outcome criterion11() {
  const fs::path dir = fs::temp_directory_path() / "svmf_acceptance_11";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path old = fs::current_path();
  fs::current_path(dir);
  const std::vector<std::vector<std::string>> cmds = {
      {"simulate", "--d", "10", "--k", "4", "--n", "500", "--base-kappa", "5.37", "--seed", "3"},
      {"fit", "--data", "data.csv", "--k", "4", "--restarts", "10", "--threads", "2", "--seed", "3"},
      {"path", "--data", "data.csv", "--k", "4", "--min-rel-increase", "1e-3", "--threads", "2", "--seed", "3"}};
  const std::vector<std::string> files = {"data.csv", "truth.json", "model.json", "model.trace.csv", "path.json", "path.csv"};
  std::vector<std::string> first;
  int mismatches = 0, failures = 0;
  for (int rep = 0; rep < 2; ++rep) {
    std::ostringstream o, e;
    for (const auto& c : cmds)
      if (cli::run(c, o, e) != 0) ++failures;
    for (std::size_t i = 0; i < files.size(); ++i) {
      const std::string content = slurp(files[i]);
      if (rep == 0) {
        first.push_back(content);
      } else if (content != first[i] || content.empty()) {
        ++mismatches;
      }
    }
  }
  fs::current_path(old);

  const SimulatedData s = simulate(5, 50, 5000, 20.0, 0.2, 11);
  Rng rng(11);
  const MixtureParams p = init_random(s.data, 5, KappaMode::Free, rng);
  const Responsibilities a = e_step(s.data, p, 1);
  double worst = 0.0;
  for (unsigned t : {2u, 3u, 4u, 7u}) {
    const Responsibilities b = e_step(s.data, p, t);
    worst = std::max(worst, std::abs(a.log_likelihood - b.log_likelihood) / std::abs(a.log_likelihood));
    worst = std::max(worst, (a.tau - b.tau).cwiseAbs().maxCoeff());
  }
  return {failures == 0 && mismatches == 0 && worst <= 1e-10,
          std::to_string(files.size()) + " output files compared over two runs, differing=" + std::to_string(mismatches) +
              ", command failures=" + std::to_string(failures) + ", e_step max deviation across 1-7 threads=" +
              fmt("%.1e", worst)};
}

// 12. Dimension ordering against the literal comparator; image determinism.
Outcome criterion12() {
  Rng rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  int mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    const int k = 1 + t % 6;
    const int d = 2 + static_cast<int>(u(rng) * 60);
    MixtureParams p;
    p.means = Matrix::Zero(k, d);
    for (int r = 0; r < k; ++r) {
      do {
        for (int j = 0; j < d; ++j)
          p.means(r, j) = u(rng) < 0.6 ? 0.0 : (u(rng) < 0.5 ? -1.0 : 1.0) * std::ceil(u(rng) * 4) / 4;
      } while (p.means.row(r).norm() == 0.0);
      p.means.row(r).normalize();
    }
    p.alpha = Vector(k);
    for (int r = 0; r < k; ++r) p.alpha[r] = 1.0 + std::floor(u(rng) * 3);
    p.alpha /= p.alpha.sum();
    p.kappas = Vector::Ones(k);
    const auto o = order_dimensions(p);
    const auto ref = oracle::brute_force_dim_order(p.means, order_components(p.alpha), 1e-8);
    if (std::vector<Index>(ref.begin(), ref.end()) != o.perm) ++mismatches;
  }
  const SimulatedData s = simulate(4, 40, 200, 20.0, 0.3, 12);
  const auto dims = order_dimensions(s.truth.params);
  const auto comp = order_components(s.truth.params.alpha);
  const std::vector<Index> rows(comp.begin(), comp.end());
  const fs::path a = fs::temp_directory_path() / "svmf_acc12_a.ppm";
  const fs::path b = fs::temp_directory_path() / "svmf_acc12_b.ppm";
  render_pixel_map(s.truth.params.means, dims, rows, a);
  render_pixel_map(s.truth.params.means, dims, rows, b);
  const bool same = slurp(a) == slurp(b) && !slurp(a).empty();
  return {mismatches == 0 && same, "50 parameter sets, ordering mismatches=" + std::to_string(mismatches) +
                                       ", PPM byte-identical: " + (same ? "yes" : "no")};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"oracle equivalence at beta=0", criterion1},
    {"soft-threshold correctness", criterion2},
    {"monotonicity suite", criterion3},
    {"first-step sparsification", criterion4},
    {"reference path reproduction", criterion5},
    {"overlap anchor", criterion6},
    {"model selection trend", criterion7},
    {"recovery quality", criterion8},
    {"special functions", criterion9},
    {"information criteria", criterion10},
    {"determinism", criterion11},
    {"visualization", criterion12},
};

bool run_one(std::size_t i) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = kCriteria[i].second();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << kCriteria[i].first << "): " << o.detail
            << " [" << fmt("%.1f", secs) << " s]" << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  bool ok = true;
  if (argc > 1) {
    for (int a = 1; a < argc; ++a) {
      const int c = std::atoi(argv[a]);
      if (c < 1 || c > static_cast<int>(kCriteria.size())) {
        std::cerr << "unknown criterion " << argv[a] << "\n";
        return 2;
      }
      ok = run_one(static_cast<std::size_t>(c - 1)) && ok;
    }
  } else {
    for (std::size_t i = 0; i < kCriteria.size(); ++i) ok = run_one(i) && ok;
  }
  return ok ? 0 : 1;
}
