#include "svmf/serialize.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "svmf/error.hpp"
#include "svmf/metrics.hpp"

namespace svmf {
namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_from(const Json& j) {
  if (j.is_null()) return -std::numeric_limits<double>::infinity();
  return j.get<double>();
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

Json ic_to_json(const std::map<CriterionKind, double>& ic) {
  Json o = Json::object();
  for (const auto& [k, v] : ic) o[to_string(k)] = number(v);
  return o;
}

}  // namespace

Json means_to_json(const Matrix& means) {
  Json out = Json::array();
  for (Index k = 0; k < means.rows(); ++k) {
    Json row = Json::array();
    for (Index j = 0; j < means.cols(); ++j)
      if (means(k, j) != 0.0) row.push_back(Json::array({j, means(k, j)}));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix means_from_json(const Json& j, Index d) {
  Matrix m = Matrix::Zero(static_cast<Index>(j.size()), d);
  for (std::size_t k = 0; k < j.size(); ++k)
    for (const auto& pair : j[k]) {
      const auto idx = pair.at(0).get<Index>();
      if (idx < 0 || idx >= d) throw DomainError("model: coordinate index out of range");
      m(static_cast<Index>(k), idx) = pair.at(1).get<double>();
    }
  return m;
}

Json params_to_json(const MixtureParams& p) {
  Json j;
  j["K"] = p.n_components();
  j["d"] = p.dim();
  j["kappa_mode"] = to_string(p.mode);
  j["alpha"] = vector_to_json(p.alpha);
  if (p.mode == KappaMode::Shared) {
    j["kappa"] = p.kappas[0];
  } else {
    j["kappa"] = vector_to_json(p.kappas);
  }
  j["means"] = means_to_json(p.means);
  return j;
}

MixtureParams params_from_json(const Json& j) {
  MixtureParams p;
  const int k = j.at("K").get<int>();
  const auto d = j.at("d").get<Index>();
  p.mode = parse_kappa_mode(j.at("kappa_mode").get<std::string>());
  p.alpha = vector_from_json(j.at("alpha"));
  const Json& kj = j.at("kappa");
  p.kappas = kj.is_array() ? vector_from_json(kj) : Vector::Constant(1, kj.get<double>());
  p.means = means_from_json(j.at("means"), d);
  if (p.alpha.size() != k || p.means.rows() != k) throw DomainError("model: component count mismatch");
  return p;
}

Json model_to_json(const FitResult& fit) {
  Json j;
  j["format"] = "svmf-model";
  j["version"] = kVersion;
  const Json params = params_to_json(fit.params);
  for (const auto& [key, value] : params.items()) j[key] = value;
  j["beta"] = fit.beta;
  j["log_likelihood"] = number(fit.log_likelihood);
  j["penalized_log_likelihood"] = number(fit.penalized_log_likelihood);
  j["status"] = to_string(fit.status);
  j["n_iters"] = fit.n_iters;
  j["seed"] = fit.seed;
  return j;
}

FitResult model_from_json(const Json& j) {
  FitResult fit;
  fit.params = params_from_json(j);
  fit.beta = j.at("beta").get<double>();
  fit.log_likelihood = number_from(j.at("log_likelihood"));
  fit.penalized_log_likelihood = number_from(j.at("penalized_log_likelihood"));
  fit.status = parse_fit_status(j.at("status").get<std::string>());
  fit.n_iters = j.at("n_iters").get<int>();
  fit.seed = j.at("seed").get<std::uint64_t>();
  return fit;
}

Json truth_to_json(const GroundTruth& truth, const SimulationConfig& cfg) {
  Json j;
  j["format"] = "svmf-ground-truth";
  j["version"] = kVersion;
  j["K"] = truth.params.n_components();
  j["d"] = truth.params.dim();
  j["N"] = truth.labels.size();
  j["alpha"] = vector_to_json(truth.params.alpha);
  j["kappa"] = vector_to_json(truth.params.kappas);
  j["base_kappa"] = truth.base_kappa;
  j["mu"] = means_to_json(truth.params.means);
  j["labels"] = truth.labels;
  j["seed"] = cfg.seed;
  Json c;
  c["K"] = cfg.k;
  c["d"] = cfg.d;
  c["N"] = cfg.n;
  c["overlap_target"] = cfg.overlap_target ? Json(*cfg.overlap_target) : Json(nullptr);
  c["base_kappa"] = cfg.base_kappa ? Json(*cfg.base_kappa) : Json(nullptr);
  c["sparsity"] = cfg.sparsity;
  c["alpha"] = cfg.alpha.empty() ? Json("balanced") : Json(cfg.alpha);
  c["kappa_jitter_sd_frac"] = cfg.kappa_jitter_sd_frac;
  c["candidate_multiplier"] = cfg.candidate_multiplier;
  c["calibration_samples"] = cfg.calibration_samples;
  j["config"] = std::move(c);
  return j;
}

GroundTruth truth_from_json(const Json& j) {
  GroundTruth gt;
  const auto d = j.at("d").get<Index>();
  gt.params.mode = KappaMode::Free;
  gt.params.alpha = vector_from_json(j.at("alpha"));
  gt.params.kappas = vector_from_json(j.at("kappa"));
  gt.params.means = means_from_json(j.at("mu"), d);
  gt.labels = j.at("labels").get<std::vector<int>>();
  gt.base_kappa = j.value("base_kappa", 0.0);
  gt.support_mask = (gt.params.means.array() != 0.0).cast<int>();
  return gt;
}

Json path_to_json(const PathResult& path) {
  Json j;
  j["format"] = "svmf-path";
  j["version"] = kVersion;
  j["termination"] = to_string(path.termination);
  Json steps = Json::array();
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const PathStep& s = path.steps[i];
    Json o;
    o["step"] = i;
    o["beta"] = s.beta;
    o["sparsity"] = s.sparsity;
    o["log_likelihood"] = number(s.fit.log_likelihood);
    o["penalized_log_likelihood"] = number(s.fit.penalized_log_likelihood);
    o["free_params"] = s.fit.params.means.size() ? count_free_params(s.fit.params) : 0;
    o["ic"] = ic_to_json(s.ic);
    o["status"] = to_string(s.fit.status);
    o["n_iters"] = s.fit.n_iters;
    steps.push_back(std::move(o));
  }
  j["steps"] = std::move(steps);
  return j;
}

std::string path_csv(const PathResult& path) {
  std::ostringstream os;
  os << "step,beta,sparsity,log_likelihood,penalized_log_likelihood,free_params,status,n_iters";
  for (auto k : kAllCriteria) os << ',' << to_string(k);
  os << '\n';
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const PathStep& s = path.steps[i];
    os << i << ',' << fmt(s.beta) << ',' << fmt(s.sparsity) << ',' << fmt(s.fit.log_likelihood) << ','
       << fmt(s.fit.penalized_log_likelihood) << ','
       << (s.fit.params.means.size() ? count_free_params(s.fit.params) : 0) << ',' << to_string(s.fit.status)
       << ',' << s.fit.n_iters;
    for (auto k : kAllCriteria) {
      os << ',';
      if (auto it = s.ic.find(k); it != s.ic.end()) os << fmt(it->second);
    }
    os << '\n';
  }
  return os.str();
}

Json selection_to_json(const SelectionReport& report, const SelectionOptions& opts) {
  Json j;
  j["format"] = "svmf-selection";
  j["version"] = kVersion;
  j["k_criterion"] = to_string(opts.k_criterion.kind);
  j["beta_criterion"] = to_string(opts.beta_criterion.kind);
  Json chosen = Json::object();
  for (const auto& [k, v] : report.chosen_k) chosen[to_string(k)] = v;
  j["chosen_k"] = std::move(chosen);
  Json per_k = Json::array();
  for (const auto& e : report.per_k) {
    Json o;
    o["K"] = e.k;
    o["ok"] = e.ok;
    if (!e.ok) {
      o["failure"] = e.failure;
      per_k.push_back(std::move(o));
      continue;
    }
    o["dense_ic"] = ic_to_json(e.dense_ic);
    o["dense_model"] = model_to_json(e.dense);
    Json best = Json::object();
    for (const auto& [k, s] : e.best_step) {
      Json b;
      b["step"] = s;
      b["beta"] = e.path.steps[s].beta;
      b["value"] = e.path.steps[s].ic.at(k);
      b["sparsity"] = e.path.steps[s].sparsity;
      best[to_string(k)] = std::move(b);
    }
    o["best_step"] = std::move(best);
    Json sparse_models = Json::object();
    for (const auto& [k, s] : e.best_step) sparse_models[to_string(k)] = model_to_json(e.path.steps[s].fit);
    o["sparse_models"] = std::move(sparse_models);
    o["path"] = path_to_json(e.path);
    per_k.push_back(std::move(o));
  }
  j["per_k"] = std::move(per_k);
  if (report.has_final) {
    Json f;
    f["K"] = report.final_k;
    f["step"] = report.final_step;
    f["model"] = model_to_json(report.final_model());
    j["final"] = std::move(f);
  } else {
    j["final"] = nullptr;
  }
  return j;
}

std::string selection_ic_csv(const SelectionReport& report) {
  std::ostringstream os;
  os << "K";
  for (auto k : kAllCriteria) os << ',' << to_string(k);
  os << '\n';
  for (const auto& e : report.per_k) {
    os << e.k;
    for (auto k : kAllCriteria) {
      os << ',';
      if (auto it = e.dense_ic.find(k); it != e.dense_ic.end()) os << fmt(it->second);
    }
    os << '\n';
  }
  return os.str();
}

Json skmeans_to_json(const SkResult& res) {
  Json j;
  j["format"] = "svmf-skmeans";
  j["version"] = kVersion;
  j["K"] = res.prototypes.rows();
  j["d"] = res.prototypes.cols();
  j["prototypes"] = means_to_json(res.prototypes);
  j["labels"] = res.labels;
  j["coherence"] = res.coherence;
  j["n_iters"] = res.n_iters;
  j["converged"] = res.converged;
  return j;
}

std::string trace_csv(const FitResult& fit) {
  std::ostringstream os;
  os << "iteration,penalized_log_likelihood\n";
  for (std::size_t i = 0; i < fit.trace.size(); ++i) os << i << ',' << fmt(fit.trace[i]) << '\n';
  return os.str();
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace svmf
