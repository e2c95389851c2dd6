#include "svmf/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "svmf/criteria.hpp"
#include "svmf/dataset.hpp"
#include "svmf/em.hpp"
#include "svmf/error.hpp"
#include "svmf/metrics.hpp"
#include "svmf/path.hpp"
#include "svmf/selection.hpp"
#include "svmf/serialize.hpp"
#include "svmf/simulation.hpp"
#include "svmf/skmeans.hpp"
#include "svmf/viz.hpp"

namespace svmf::cli {
namespace {

// Bad flags, bad config files, invalid option values.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

// A computation that ran but produced nothing usable.
class RunFailure : public Error {
 public:
  RunFailure(const std::string& kind, const std::string& what, Json details = Json::object())
      : Error(kind, what), details_(std::move(details)) {}
  const Json& details() const { return details_; }

 private:
  Json details_;
};

enum class Type { Int, UInt, Double, OptDouble, String, Bool, DoubleList };

struct OptSpec {
  std::string key;
  Type type;
  std::string def;  // empty string: unset
  std::string help;
};

// Option tables. Keys double as flag names (--key) and config-file keys.
const std::vector<OptSpec> kCommon = {
    {"seed", Type::UInt, "0", "master random seed"},
    {"threads", Type::Int, "1", "worker threads"},
};

const std::vector<OptSpec> kData = {
    {"data", Type::String, "", "input matrix"},
    {"format", Type::String, "dense-csv", "dense-csv | sparse-triplet"},
};

const std::vector<OptSpec> kFit = {
    {"beta", Type::Double, "0", "l1 penalty on the means"},
    {"restarts", Type::Int, "10", "random initialisations"},
    {"kappa-mode", Type::String, "free", "free | shared"},
    {"max-iters", Type::Int, "500", "EM iterations"},
    {"tol", Type::Double, "1e-6", "relative change of the penalized log-likelihood"},
    {"inner-max-iters", Type::Int, "100", "M-step fixed point iterations"},
    {"inner-tol", Type::Double, "1e-8", "M-step fixed point tolerance"},
    {"kappa-cap", Type::Double, "1e6", "upper bound on concentrations"},
    {"closed-form-kappa", Type::Bool, "false", "skip Newton refinement of the closed-form kappa"},
    {"init-attempts", Type::Int, "20", "random draws per restart before giving up"},
};

const std::vector<OptSpec> kPath = {
    {"max-steps", Type::Int, "1000", "path steps including the dense fit"},
    {"epsilon", Type::Double, "1e-8", "coordinates below this are zeroed"},
    {"min-rel-increase", Type::Double, "0", "minimum relative increase of beta"},
    {"stop-at-max-sparsity", Type::Bool, "false", "stop once every mean has one nonzero"},
    {"ebic-gamma", Type::Double, "0.5", "EBIC gamma"},
};

std::vector<OptSpec> concat(std::initializer_list<std::vector<OptSpec>> parts) {
  std::vector<OptSpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

struct Command {
  std::string name;
  std::string help;
  std::vector<OptSpec> opts;
};

std::vector<Command> commands() {
  return {
      {"simulate", "draw a planted vMF mixture",
       concat({kCommon,
               {{"k", Type::Int, "4", "components"},
                {"d", Type::Int, "100", "dimension"},
                {"n", Type::Int, "1000", "observations"},
                {"overlap", Type::OptDouble, "", "target Bayes error (calibrates kappa)"},
                {"base-kappa", Type::OptDouble, "", "base concentration"},
                {"sparsity", Type::Double, "0", "fraction of zeroed coordinates per mean"},
                {"alpha", Type::DoubleList, "", "comma separated proportions (default balanced)"},
                {"jitter", Type::Double, "0.025", "kappa jitter sd as a fraction of kappa"},
                {"candidate-multiplier", Type::Int, "20", "random candidates per mean"},
                {"calibration-samples", Type::Int, "100000", "draws per overlap estimate"},
                {"format", Type::String, "dense-csv", "dense-csv | sparse-triplet"},
                {"out-data", Type::String, "data.csv", "dataset output"},
                {"out-truth", Type::String, "truth.json", "ground truth output"}}})},
      {"fit", "penalized EM at one beta",
       concat({kCommon, kData, {{"k", Type::Int, "", "components"}}, kFit,
               {{"out", Type::String, "model.json", "model output"},
                {"trace", Type::String, "", "trace CSV (default: <out stem>.trace.csv)"}}})},
      {"path", "regularization path from a dense fit",
       concat({kCommon, kData, {{"k", Type::Int, "", "components"}}, kFit, kPath,
               {{"init", Type::String, "", "starting model (default: best of restarts)"},
                {"out", Type::String, "path.json", "path output"},
                {"csv", Type::String, "", "path CSV (default: <out stem>.csv)"}}})},
      {"select", "choose K and beta by information criteria",
       concat({kCommon, kData,
               {{"k-min", Type::Int, "1", "smallest K"},
                {"k-max", Type::Int, "8", "largest K"},
                {"k-criterion", Type::String, "BIC", "AIC | BIC | RIC | RICc | EBIC"},
                {"beta-criterion", Type::String, "BIC", "AIC | BIC | RIC | RICc | EBIC"},
                {"no-path", Type::Bool, "false", "dense fits only"}},
               kFit, kPath,
               {{"out", Type::String, "selection.json", "report output"},
                {"ic-csv", Type::String, "", "dense criteria per K (default: <out stem>.ic.csv)"},
                {"model", Type::String, "", "final model output (optional)"}}})},
      {"skmeans", "spherical k-means baseline",
       concat({kCommon, kData,
               {{"k", Type::Int, "", "clusters"},
                {"max-iters", Type::Int, "100", "Lloyd iterations"},
                {"restarts", Type::Int, "1", "random initialisations, best coherence kept"},
                {"out", Type::String, "skmeans.json", "result output"}}})},
      {"viz", "pixel map of means or data",
       concat({{{"model", Type::String, "", "model, selection report or skmeans result"},
                {"data", Type::String, "", "input matrix (mode data)"},
                {"format", Type::String, "dense-csv", "dense-csv | sparse-triplet"},
                {"mode", Type::String, "means", "means | data"},
                {"scale", Type::Int, "1", "integer upscaling"},
                {"epsilon", Type::Double, "1e-8", "support threshold"},
                {"threads", Type::Int, "1", "worker threads"},
                {"out", Type::String, "map.ppm", "image output"},
                {"ordering-csv", Type::String, "", "ordering output (default: <out stem>.ordering.csv)"}}})},
      {"metrics", "compare a model with the ground truth",
       concat({{{"truth", Type::String, "", "ground truth JSON"},
                {"model", Type::String, "", "model, selection report or skmeans result"},
                {"data", Type::String, "", "input matrix, when the model carries no labels"},
                {"format", Type::String, "dense-csv", "dense-csv | sparse-triplet"},
                {"threads", Type::Int, "1", "worker threads"},
                {"out", Type::String, "", "output (default: stdout)"}}})},
  };
}

std::string normalize_key(std::string k) {
  for (char& c : k)
    if (c == '_') c = '-';
  return k;
}

// key=value lines ('#' comments) or a flat JSON object.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  std::map<std::string, std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file " + path + ": " + e.what());
    }
    for (auto& [k, v] : j.items()) {
      if (v.is_string()) {
        out[normalize_key(k)] = v.get<std::string>();
      } else if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + e.dump();
        out[normalize_key(k)] = s;
      } else if (v.is_null()) {
        out[normalize_key(k)] = "";
      } else {
        out[normalize_key(k)] = v.dump();
      }
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto l = s.find_first_not_of(" \t\r");
      const auto r = s.find_last_not_of(" \t\r");
      return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
    };
    out[normalize_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
  }
  return out;
}

template <class T>
bool parse_number(const std::string& s, T& v) {
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, v);
  return ec == std::errc() && ptr == last;
}

// Resolved options of one invocation.
class Config {
 public:
  Config(std::string command, const std::vector<OptSpec>& specs) : command_(std::move(command)) {
    for (const auto& s : specs) specs_[s.key] = s;
  }

  void set(const std::string& key, const std::string& value) {
    const auto it = specs_.find(key);
    if (it == specs_.end()) throw ConfigError("unknown option '" + key + "' for " + command_);
    check(it->second, value);
    values_[key] = value;
  }

  bool has(const std::string& key) const { return !raw(key).empty(); }

  std::string str(const std::string& key) const { return raw(key); }

  std::string required(const std::string& key) const {
    if (!has(key)) throw ConfigError("--" + key + " is required for " + command_);
    return raw(key);
  }

  long long integer(const std::string& key) const {
    long long v = 0;
    parse_number(required(key), v);
    return v;
  }

  std::uint64_t uinteger(const std::string& key) const {
    std::uint64_t v = 0;
    parse_number(required(key), v);
    return v;
  }

  double real(const std::string& key) const {
    double v = 0;
    parse_number(required(key), v);
    return v;
  }

  std::optional<double> opt_real(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return real(key);
  }

  bool flag(const std::string& key) const { return raw(key) == "true"; }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(raw(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0;
      parse_number(item, v);
      out.push_back(v);
    }
    return out;
  }

  // Typed JSON image of every option, in table order.
  Json to_json(const std::vector<OptSpec>& order) const {
    Json j;
    j["command"] = command_;
    Json o;
    for (const auto& s : order) {
      const std::string v = raw(s.key);
      if (v.empty() && s.type != Type::String) {
        o[s.key] = nullptr;
        continue;
      }
      switch (s.type) {
        case Type::Int: o[s.key] = integer(s.key); break;
        case Type::UInt: o[s.key] = uinteger(s.key); break;
        case Type::Double:
        case Type::OptDouble: o[s.key] = real(s.key); break;
        case Type::Bool: o[s.key] = flag(s.key); break;
        case Type::DoubleList: o[s.key] = list(s.key); break;
        case Type::String: o[s.key] = v; break;
      }
    }
    j["options"] = std::move(o);
    return j;
  }

 private:
  std::string raw(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    if (auto it = specs_.find(key); it != specs_.end()) return it->second.def;
    throw std::logic_error("option table has no '" + key + "'");
  }

  static void check(const OptSpec& s, const std::string& v) {
    if (v.empty()) return;
    bool ok = true;
    switch (s.type) {
      case Type::Int: {
        long long x = 0;
        ok = parse_number(v, x);
        break;
      }
      case Type::UInt: {
        std::uint64_t x = 0;
        ok = parse_number(v, x);
        break;
      }
      case Type::Double:
      case Type::OptDouble: {
        double x = 0;
        ok = parse_number(v, x) && std::isfinite(x);
        break;
      }
      case Type::Bool: ok = v == "true" || v == "false"; break;
      case Type::DoubleList: {
        std::stringstream ss(v);
        std::string item;
        while (ok && std::getline(ss, item, ',')) {
          double x = 0;
          ok = parse_number(item, x) && std::isfinite(x);
        }
        break;
      }
      case Type::String: break;
    }
    if (!ok) throw ConfigError("invalid value '" + v + "' for --" + s.key);
  }

  std::string command_;
  std::map<std::string, OptSpec> specs_;
  std::map<std::string, std::string> values_;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// FNV-1a of the compact config dump.
std::string config_hash(const Json& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : cfg.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

struct Run {
  Config cfg;
  Json config_json;
  std::string hash;
  std::ostream& out;

  Json stamp() const {
    Json j;
    j["version"] = kVersion;
    j["config_hash"] = hash;
    j["config"] = config_json;
    return j;
  }

  // One-line form for CSV comments and image headers.
  std::string stamp_line() const { return std::string(kVersion) + " config_hash=" + hash + " config=" + config_json.dump(); }

  void write(const std::string& path, Json j) const {
    j["run"] = stamp();
    write_json(path, j);
  }

  void write_csv(const std::string& path, const std::string& body) const {
    write_text(path, "# " + stamp_line() + "\n" + body);
  }
};

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int threads_of(const Config& c) {
  const auto t = c.integer("threads");
  if (t < 1) throw ConfigError("--threads must be at least 1");
  return static_cast<int>(t);
}

Dataset load_data(const Config& c) {
  MatrixFormat fmt;
  try {
    fmt = parse_matrix_format(c.str("format"));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return load_matrix(c.required("data"), fmt, true);
}

template <class F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

FitOptions fit_options(const Config& c) {
  return as_config_error([&] {
    FitOptions o;
    o.beta = c.real("beta");
    o.kappa_mode = parse_kappa_mode(c.str("kappa-mode"));
    o.max_em_iters = static_cast<int>(c.integer("max-iters"));
    o.em_tol = c.real("tol");
    o.inner_max_iters = static_cast<int>(c.integer("inner-max-iters"));
    o.inner_tol = c.real("inner-tol");
    o.kappa_cap = c.real("kappa-cap");
    o.refine_kappa = !c.flag("closed-form-kappa");
    o.init_attempts = static_cast<int>(c.integer("init-attempts"));
    o.seed = c.uinteger("seed");
    o.threads = static_cast<unsigned>(threads_of(c));
    o.validate();
    return o;
  });
}

PathOptions path_options(const Config& c) {
  return as_config_error([&] {
    PathOptions o;
    o.fit = fit_options(c);
    o.max_steps = static_cast<int>(c.integer("max-steps"));
    o.epsilon = c.real("epsilon");
    o.min_rel_increase = c.real("min-rel-increase");
    o.stop_at_max_sparsity = c.flag("stop-at-max-sparsity");
    o.ebic_gamma = c.real("ebic-gamma");
    o.validate();
    return o;
  });
}

int positive_k(const Config& c) {
  const auto k = c.integer("k");
  if (k < 1) throw ConfigError("--k must be at least 1");
  return static_cast<int>(k);
}

Json statuses_json(const std::vector<FitStatus>& st) {
  Json a = Json::array();
  for (auto s : st) a.push_back(to_string(s));
  return a;
}

// Model-like inputs: a model, the final model of a selection report, or a
// spherical k-means result. Labels are returned when the file carries them.
struct LoadedModel {
  MixtureParams params;
  std::optional<std::vector<int>> labels;
};

LoadedModel load_model(const std::string& path) {
  const Json j = read_json(path);
  const std::string format = j.value("format", "svmf-model");
  LoadedModel m;
  if (format == "svmf-selection") {
    if (j.at("final").is_null()) throw RunFailure("NoModel", path + " has no final model");
    m.params = params_from_json(j.at("final").at("model"));
  } else if (format == "svmf-skmeans") {
    const auto d = j.at("d").get<Index>();
    m.params.means = means_from_json(j.at("prototypes"), d);
    const auto labels = j.at("labels").get<std::vector<int>>();
    const auto k = m.params.means.rows();
    m.params.alpha = Vector::Zero(k);
    for (int l : labels) m.params.alpha[l] += 1.0;
    m.params.alpha /= static_cast<double>(labels.size());
    m.params.kappas = Vector::Zero(k);
    m.labels = labels;
    return m;
  } else if (format == "svmf-model") {
    m.params = params_from_json(j);
  } else {
    throw ConfigError(path + ": unsupported format '" + format + "'");
  }
  if (j.contains("labels")) m.labels = j.at("labels").get<std::vector<int>>();
  return m;
}

std::vector<int> labels_for(const LoadedModel& m, const Config& c, Index n_expected) {
  if (m.labels) return *m.labels;
  if (!c.has("data")) throw ConfigError("the model carries no labels; pass --data");
  const Dataset x = load_data(c);
  if (x.cols() != m.params.dim()) throw DimensionMismatch("data and model dimensions differ");
  if (n_expected >= 0 && x.rows() != n_expected) throw DimensionMismatch("data and truth sizes differ");
  return hard_assign(e_step(x, m.params, static_cast<unsigned>(threads_of(c))).tau);
}

// --- subcommands ----------------------------------------------------------

int cmd_simulate(const Run& r) {
  const Config& c = r.cfg;
  SimulationConfig sc;
  MatrixFormat fmt;
  as_config_error([&] {
    sc.k = static_cast<int>(c.integer("k"));
    sc.d = static_cast<int>(c.integer("d"));
    const auto n = c.integer("n");
    if (n < 1) throw ConfigError("--n must be positive");
    sc.n = static_cast<std::size_t>(n);
    sc.overlap_target = c.opt_real("overlap");
    sc.base_kappa = c.opt_real("base-kappa");
    sc.sparsity = c.real("sparsity");
    sc.alpha = c.list("alpha");
    sc.kappa_jitter_sd_frac = c.real("jitter");
    sc.candidate_multiplier = static_cast<int>(c.integer("candidate-multiplier"));
    const auto cs = c.integer("calibration-samples");
    if (cs < 1) throw ConfigError("--calibration-samples must be positive");
    sc.calibration_samples = static_cast<std::size_t>(cs);
    sc.seed = c.uinteger("seed");
    fmt = parse_matrix_format(c.str("format"));
    sc.validate();
    return 0;
  });
  const SimulatedData sim = simulate_mixture(sc);
  save_matrix(sim.data, c.str("out-data"), fmt, r.stamp_line());
  r.write(c.str("out-truth"), truth_to_json(sim.truth, sc));
  return kOk;
}

int cmd_fit(const Run& r) {
  const Config& c = r.cfg;
  const FitOptions opts = fit_options(c);
  const int k = positive_k(c);
  const auto restarts = c.integer("restarts");
  if (restarts < 1) throw ConfigError("--restarts must be at least 1");
  const Dataset x = load_data(c);
  std::vector<FitStatus> statuses;
  const FitResult fit =
      best_of_restarts(x, k, opts, static_cast<int>(restarts), opts.threads, &statuses);
  Json restart_info;
  restart_info["statuses"] = statuses_json(statuses);
  if (!fit_usable(fit.status)) {
    std::string list;
    for (auto s : statuses) list += (list.empty() ? "" : ",") + to_string(s);
    throw RunFailure(to_string(fit.status), "all restarts failed: " + list, restart_info);
  }
  Json j = model_to_json(fit);
  j["labels"] = hard_assign(e_step(x, fit.params, opts.threads).tau);
  j["restarts"] = std::move(restart_info);
  r.write(c.str("out"), j);
  const std::string trace = c.has("trace") ? c.str("trace") : sibling(c.str("out"), ".trace.csv");
  r.write_csv(trace, trace_csv(fit));
  return kOk;
}

int cmd_path(const Run& r) {
  const Config& c = r.cfg;
  const PathOptions opts = path_options(c);
  const Dataset x = load_data(c);
  FitResult initial;
  if (c.has("init")) {
    initial = model_from_json(read_json(c.str("init")));
    if (initial.params.dim() != x.cols()) throw DimensionMismatch("initial model and data dimensions differ");
  } else {
    const int k = positive_k(c);
    const auto restarts = c.integer("restarts");
    if (restarts < 1) throw ConfigError("--restarts must be at least 1");
    std::vector<FitStatus> statuses;
    initial = best_of_restarts(x, k, opts.fit, static_cast<int>(restarts), opts.fit.threads, &statuses);
    if (!fit_usable(initial.status)) {
      Json d;
      d["statuses"] = statuses_json(statuses);
      throw RunFailure(to_string(initial.status), "no usable starting fit", d);
    }
  }
  const PathResult path = follow_path(x, opts, initial);
  r.write(c.str("out"), path_to_json(path));
  r.write_csv(c.has("csv") ? c.str("csv") : sibling(c.str("out"), ".csv"), path_csv(path));
  return kOk;
}

int cmd_select(const Run& r) {
  const Config& c = r.cfg;
  SelectionOptions so;
  as_config_error([&] {
    so.path = path_options(c);
    const auto lo = c.integer("k-min");
    const auto hi = c.integer("k-max");
    if (lo < 1 || hi < lo) throw ConfigError("need 1 <= k-min <= k-max");
    for (auto k = lo; k <= hi; ++k) so.k_candidates.push_back(static_cast<int>(k));
    so.n_restarts = static_cast<int>(c.integer("restarts"));
    so.k_criterion = {parse_criterion(c.str("k-criterion")), so.path.ebic_gamma};
    so.beta_criterion = {parse_criterion(c.str("beta-criterion")), so.path.ebic_gamma};
    so.follow_paths = !c.flag("no-path");
    so.threads = so.path.fit.threads;
    so.validate();
    return 0;
  });
  const Dataset x = load_data(c);
  const SelectionReport report = select_model(x, so);
  r.write(c.str("out"), selection_to_json(report, so));
  r.write_csv(c.has("ic-csv") ? c.str("ic-csv") : sibling(c.str("out"), ".ic.csv"), selection_ic_csv(report));
  if (!report.has_final) throw RunFailure("NoModel", "no candidate K produced a usable model");
  if (c.has("model")) {
    Json m = model_to_json(report.final_model());
    m["labels"] = hard_assign(e_step(x, report.final_model().params, so.threads).tau);
    r.write(c.str("model"), m);
  }
  return kOk;
}

int cmd_skmeans(const Run& r) {
  const Config& c = r.cfg;
  const int k = positive_k(c);
  const auto max_iters = c.integer("max-iters");
  const auto restarts = c.integer("restarts");
  if (max_iters < 1 || restarts < 1) throw ConfigError("--max-iters and --restarts must be positive");
  const std::uint64_t seed = c.uinteger("seed");
  threads_of(c);
  const Dataset x = load_data(c);
  if (k > x.rows()) throw ConfigError("--k exceeds the number of observations");
  std::optional<SkResult> best;
  for (long long s = 0; s < restarts; ++s) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(s));
    SkResult res = skmeans_fit(x, k, static_cast<int>(max_iters), rng);
    if (!best || res.coherence > best->coherence) best = std::move(res);
  }
  r.write(c.str("out"), skmeans_to_json(*best));
  return kOk;
}

int cmd_viz(const Run& r) {
  const Config& c = r.cfg;
  PixelMapOptions po;
  const std::string mode = c.str("mode");
  if (mode == "means") {
    po.mode = PixelMode::Means;
  } else if (mode == "data") {
    po.mode = PixelMode::Data;
  } else {
    throw ConfigError("--mode must be means or data");
  }
  po.scale = static_cast<int>(c.integer("scale"));
  if (po.scale < 1) throw ConfigError("--scale must be at least 1");
  const double eps = c.real("epsilon");
  const LoadedModel m = load_model(c.required("model"));
  const DimensionOrdering dims = order_dimensions(m.params, eps);
  const std::vector<int> comp = order_components(m.params.alpha);
  po.comment = r.stamp_line();
  if (po.mode == PixelMode::Means) {
    std::vector<Index> rows(comp.begin(), comp.end());
    render_pixel_map(m.params.means, dims, rows, c.str("out"), po);
  } else {
    const Dataset x = load_data(c);
    if (x.cols() != m.params.dim()) throw DimensionMismatch("data and model dimensions differ");
    std::vector<int> labels = m.labels ? *m.labels
                                       : hard_assign(e_step(x, m.params, static_cast<unsigned>(threads_of(c))).tau);
    if (static_cast<Index>(labels.size()) != x.rows()) throw DimensionMismatch("labels and data sizes differ");
    const std::vector<Index> rows = order_observations(labels, comp);
    render_pixel_map(x.to_dense(), dims, rows, c.str("out"), po);
  }
  const std::string csv = c.has("ordering-csv") ? c.str("ordering-csv") : sibling(c.str("out"), ".ordering.csv");
  r.write_csv(csv, ordering_csv(m.params, dims, eps));
  return kOk;
}

int cmd_metrics(const Run& r) {
  const Config& c = r.cfg;
  const GroundTruth truth = truth_from_json(read_json(c.required("truth")));
  const LoadedModel m = load_model(c.required("model"));
  if (m.params.dim() != truth.params.dim()) throw DimensionMismatch("model and truth dimensions differ");
  const std::vector<int> labels = labels_for(m, c, static_cast<Index>(truth.labels.size()));
  if (labels.size() != truth.labels.size()) throw DimensionMismatch("model and truth label counts differ");
  Json j;
  j["format"] = "svmf-metrics";
  j["K_model"] = m.params.n_components();
  j["K_truth"] = truth.params.n_components();
  j["ari"] = adjusted_rand_index(labels, truth.labels);
  j["sparsity_model"] = sparsity(m.params);
  j["sparsity_truth"] = sparsity(truth.params);
  if (m.params.n_components() == truth.params.n_components()) {
    const SupportScore s = support_precision_recall(m.params, truth);
    j["zero_precision"] = s.precision;
    j["zero_recall"] = s.recall;
    j["precision_undefined"] = s.precision_undefined;
    j["recall_undefined"] = s.recall_undefined;
    j["matching"] = s.matching;
  } else {
    j["zero_precision"] = nullptr;
    j["zero_recall"] = nullptr;
  }
  j["run"] = r.stamp();
  if (c.has("out")) {
    write_json(c.str("out"), j);
  } else {
    r.out << j.dump(2) << '\n';
  }
  return kOk;
}

int dispatch(const std::string& name, const Run& r) {
  if (name == "simulate") return cmd_simulate(r);
  if (name == "fit") return cmd_fit(r);
  if (name == "path") return cmd_path(r);
  if (name == "select") return cmd_select(r);
  if (name == "skmeans") return cmd_skmeans(r);
  if (name == "viz") return cmd_viz(r);
  return cmd_metrics(r);
}

int report(std::ostream& err, const std::string& kind, const std::string& message, int code,
           const Json& details = Json::object()) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  if (!details.empty()) j["details"] = details;
  err << j.dump() << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse von Mises-Fisher mixtures"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const std::vector<Command> cmds = commands();
  struct Bound {
    CLI::App* sub;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> opts;
    std::string config_path;
  };
  std::vector<Bound> bound(cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    Bound& b = bound[i];
    b.sub = app.add_subcommand(cmds[i].name, cmds[i].help);
    b.sub->add_option("--config", b.config_path, "key=value or JSON config file");
    for (const auto& s : cmds[i].opts) {
      const std::string help = s.help + (s.def.empty() ? "" : " [" + s.def + "]");
      if (s.type == Type::Bool) {
        b.opts[s.key] = b.sub->add_flag("--" + s.key, b.flags[s.key], help);
      } else {
        b.opts[s.key] = b.sub->add_option("--" + s.key, b.values[s.key], help);
      }
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "UsageError", e.what(), kUsage);
  }

  std::size_t which = 0;
  while (!bound[which].sub->parsed()) ++which;
  const Command& cmd = cmds[which];
  Bound& b = bound[which];

  try {
    Config cfg(cmd.name, cmd.opts);
    // Precedence: defaults < config file < flags.
    if (!b.config_path.empty())
      for (const auto& [k, v] : read_config_file(b.config_path)) cfg.set(k, v);
    for (const auto& s : cmd.opts) {
      if (b.opts[s.key]->count() == 0) continue;
      cfg.set(s.key, s.type == Type::Bool ? (b.flags[s.key] ? "true" : "false") : b.values[s.key]);
    }
    Json cj = cfg.to_json(cmd.opts);
    const std::string hash = config_hash(cj);
    Run r{std::move(cfg), std::move(cj), hash, out};
    return dispatch(cmd.name, r);
  } catch (const ConfigError& e) {
    return report(err, e.kind(), e.what(), kUsage);
  } catch (const RunFailure& e) {
    return report(err, e.kind(), e.what(), kFailure, e.details());
  } catch (const EmFailure& e) {
    return report(err, e.kind(), e.what(), kFailure);
  } catch (const Error& e) {
    return report(err, e.kind(), e.what(), kFailure);
  } catch (const std::exception& e) {
    return report(err, "InternalError", e.what(), kFailure);
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace svmf::cli
