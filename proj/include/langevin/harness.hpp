// Copyright 2026 The langevin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LANGEVIN_HARNESS_HPP_
#define LANGEVIN_HARNESS_HPP_

// Bayesian logistic regression benchmark: configuration, prox-MALA
// reference values with an on-disk cache, the (sampler, tau, batch,
// replication) grid, table/plot output and the qualitative invariants.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "langevin/bounds.hpp"
#include "langevin/config.hpp"
#include "langevin/data.hpp"
#include "langevin/model.hpp"
#include "langevin/oracles.hpp"
#include "langevin/samplers.hpp"
#include "langevin/schedules.hpp"
#include "langevin/svg.hpp"

namespace langevin {

// ---------------------------------------------------------------------------
// Small utilities.

/// Writes to a temporary sibling of `path`, then renames over it.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(counter++) + "_" +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

/// Runs fn(0..n-1) on `threads` workers. Results must be written to
/// per-index slots; the first exception is rethrown after all workers join.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short form for labels and messages.
inline std::string short_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Integers 1 = g_1 < ... < g_m = n, roughly log-spaced, m <= count.
inline std::vector<std::size_t> log_grid(std::size_t n, std::size_t count) {
  std::set<std::size_t> g;
  if (n == 0) return {};
  g.insert(n);
  if (count < 2) return {n};
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    g.insert(std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), t))),
                                     1, n));
  }
  return {g.begin(), g.end()};
}

// ---------------------------------------------------------------------------
// Configuration.

struct Prior {
  std::string name = "p12";
  double a1 = 0.9;
  double a2 = 0.1;
};

/// "p1" (a1 = 1, a2 = 0), "p12" (a1 = 0.9, a2 = 0.1) or "custom".
inline Prior make_prior(const std::string& name, double a1 = 0.0, double a2 = 0.0) {
  if (name == "p1") return {"p1", 1.0, 0.0};
  if (name == "p12") return {"p12", 0.9, 0.1};
  if (name == "custom") {
    if (!(a1 >= 0.0) || !(a2 >= 0.0)) throw ConfigError("custom prior needs a1 >= 0 and a2 >= 0");
    return {"custom", a1, a2};
  }
  throw ConfigError("unknown prior '" + name + "' (expected p1, p12 or custom)");
}

/// "N", "N/<k>" (floor, at least 1) or a literal batch size.
inline std::size_t resolve_batch(const std::string& spec, std::size_t N) {
  if (spec == "N") return N;
  std::size_t value = 0;
  if (spec.rfind("N/", 0) == 0) {
    const std::string den = spec.substr(2);
    std::size_t k = 0;
    auto [p, ec] = std::from_chars(den.data(), den.data() + den.size(), k);
    if (ec != std::errc() || p != den.data() + den.size() || k == 0)
      throw ConfigError("bad batch spec '" + spec + "'");
    value = std::max<std::size_t>(N / k, 1);
  } else {
    auto [p, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), value);
    if (ec != std::errc() || p != spec.data() + spec.size() || value == 0)
      throw ConfigError("bad batch spec '" + spec + "'");
  }
  if (value > N) throw ConfigError("batch '" + spec + "' exceeds N = " + std::to_string(N));
  return value;
}

struct ReferenceOptions {
  std::size_t budget = 1'000'000;
  std::uint64_t seed = 7;
  std::uint64_t stream = 0;
  double target_acceptance = 0.5;
  double tolerance = 0.05;
  /// Empty disables the cache.
  std::string cache_dir;
};

struct ExperimentConfig {
  std::optional<std::string> dataset_path;
  IngestOptions ingest;
  SyntheticSpec synthetic;
  Prior prior;
  std::vector<SamplerKind> samplers{SamplerKind::SPGLD};
  std::vector<double> taus{0.01, 0.1, 1.0};
  std::vector<std::string> batches{"N", "N/10", "N/100"};
  std::size_t replications = 20;
  std::size_t iterations = 100'000;
  std::size_t burn_in = 0;
  std::uint64_t seed = 1;
  std::size_t checkpoints = 40;
  /// "zero" or "map".
  std::string start = "zero";
  std::size_t threads = 0;
  ReferenceOptions reference;

  void validate() const {
    if (samplers.empty()) throw ConfigError("at least one sampler is required");
    for (SamplerKind k : samplers)
      if (k == SamplerKind::ProxMALA) throw ConfigError("prox-MALA is the reference sampler, not a benchmark cell");
    if (taus.empty()) throw ConfigError("at least one tau is required");
    for (double t : taus)
      if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("tau must be finite and > 0");
    if (batches.empty()) throw ConfigError("at least one batch size is required");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (start != "zero" && start != "map") throw ConfigError("start must be 'zero' or 'map'");
    if (reference.budget < 100'000) throw ConfigError("reference budget must be >= 100000");
  }

  static ExperimentConfig from_config(const Config& c) {
    ExperimentConfig e;
    if (c.has("dataset.path")) e.dataset_path = c.string("dataset.path");
    e.ingest.add_intercept = c.boolean("dataset.add_intercept", e.ingest.add_intercept);
    e.ingest.standardize = c.boolean("dataset.standardize", e.ingest.standardize);
    e.ingest.label_column = c.string("dataset.label_column", e.ingest.label_column);
    auto count = [&](const std::string& key, std::size_t fallback) {
      const double v = c.number(key, static_cast<double>(fallback));
      if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError("config key '" + key + "' must be a non-negative integer");
      return static_cast<std::size_t>(v);
    };
    e.synthetic.rows = count("dataset.synthetic.rows", e.synthetic.rows);
    e.synthetic.cols = count("dataset.synthetic.cols", e.synthetic.cols);
    e.synthetic.seed = count("dataset.synthetic.seed", e.synthetic.seed);
    e.synthetic.coef_scale = c.number("dataset.synthetic.coef_scale", e.synthetic.coef_scale);
    e.synthetic.standardize = e.ingest.standardize;
    e.prior = make_prior(c.string("prior.name", e.prior.name), c.number("prior.a1", 0.0), c.number("prior.a2", 0.0));
    if (c.has("samplers")) {
      e.samplers.clear();
      for (const auto& s : c.strings("samplers")) e.samplers.push_back(sampler_from_string(s));
    }
    e.taus = c.numbers("tau", e.taus);
    e.batches = c.strings("batches", e.batches);
    e.replications = count("replications", e.replications);
    e.iterations = count("iterations", e.iterations);
    e.burn_in = count("burn_in", e.burn_in);
    e.seed = count("seed", e.seed);
    e.checkpoints = count("checkpoints", e.checkpoints);
    e.start = c.string("start", e.start);
    e.threads = count("threads", e.threads);
    e.reference.budget = count("reference.budget", e.reference.budget);
    e.reference.seed = count("reference.seed", e.reference.seed);
    e.reference.cache_dir = c.string("reference.cache_dir", e.reference.cache_dir);
    e.validate();
    return e;
  }
};

/// Step plan from keys under `prefix`: kind (constant | poly | piecewise),
/// gamma1, alpha, switch_step, gamma2, weights (gamma | constant | poly),
/// lambda (constant weight, defaults to gamma1) and burn_in.
inline StepPlan plan_from_config(const Config& c, const std::string& prefix = "schedule") {
  auto key = [&](const char* k) { return prefix + "." + k; };
  const std::string kind = c.string(key("kind"), "constant");
  const double g1 = c.number(key("gamma1"));
  StepPlan plan;
  if (kind == "constant") {
    plan.gamma = Sequence::constant(g1);
  } else if (kind == "poly") {
    plan.gamma = Sequence::poly(g1, c.number(key("alpha")));
  } else if (kind == "piecewise") {
    const double sw = c.number(key("switch_step"));
    if (!(sw >= 0.0) || sw != std::floor(sw)) throw ConfigError("'" + key("switch_step") + "' must be an integer >= 0");
    plan.gamma = Sequence::piecewise(g1, static_cast<std::size_t>(sw), c.number(key("gamma2")));
  } else {
    throw ConfigError("'" + key("kind") + "' must be constant, poly or piecewise, got '" + kind + "'");
  }
  const std::string weights = c.string(key("weights"), kind == "poly" ? "poly" : "gamma");
  if (weights == "constant") {
    plan.lambda = Sequence::constant(c.number(key("lambda"), g1));
  } else if (weights == "poly") {
    plan.lambda = Sequence::poly(g1, c.number(key("alpha")), 1.0);
  } else if (weights != "gamma") {
    throw ConfigError("'" + key("weights") + "' must be gamma, constant or poly, got '" + weights + "'");
  }
  const double b = c.number(key("burn_in"), 0.0);
  if (!(b >= 0.0) || b != std::floor(b)) throw ConfigError("'" + key("burn_in") + "' must be an integer >= 0");
  plan.burn_in = static_cast<std::size_t>(b);
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return plan;
}

/// Problem constants from keys under `prefix`; unknown keys are rejected.
inline ProblemConstants constants_from_config(const Config& c, const std::string& prefix = "constants") {
  ProblemConstants pc;
  const std::string head = prefix + ".";
  for (const auto& [k, v] : c.values()) {
    if (k.compare(0, head.size(), head) != 0) continue;
    const std::string name = k.substr(head.size());
    if (name == "heuristic") {
      pc.heuristic = c.boolean(k, false);
      continue;
    }
    try {
      pc.set(name, c.number(k));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config key '" + k + "': " + e.what());
    }
  }
  return pc;
}

inline Dataset load_dataset(const ExperimentConfig& cfg) {
  return cfg.dataset_path ? ingest_dataset(*cfg.dataset_path, cfg.ingest) : make_synthetic_logistic(cfg.synthetic);
}

inline std::shared_ptr<const LogisticModel> make_model(const Dataset& ds, const Prior& prior) {
  return std::make_shared<const LogisticModel>(ds.X, ds.y, prior.a1, prior.a2);
}

/// I1(b) = b_1 and I2(b) = |b|^2 / d.
inline std::vector<Functional> benchmark_functionals(std::size_t d) {
  const double inv_d = 1.0 / static_cast<double>(d);
  return {{"I1", [](const Vector& b) { return b(0); }},
          {"I2", [inv_d](const Vector& b) { return inv_d * b.squaredNorm(); }}};
}

// ---------------------------------------------------------------------------
// Reference values.

struct ReferenceRun {
  std::string fingerprint;
  std::string prior;
  double a1 = 0.0, a2 = 0.0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  double acceptance = 0.0;
  std::size_t tuning_attempts = 0;
  std::size_t batches = 0;  // batch-means batches
  std::vector<std::string> names;
  std::vector<double> estimates;
  std::vector<double> std_errors;
  std::string timestamp;
  bool from_cache = false;

  std::size_t index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw std::out_of_range("reference has no functional '" + name + "'");
  }
  double value(const std::string& name) const { return estimates[index(name)]; }
  double se(const std::string& name) const { return std_errors[index(name)]; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["fingerprint"] = fingerprint;
    j["prior"] = prior;
    j["a1"] = a1;
    j["a2"] = a2;
    j["budget"] = budget;
    j["seed"] = seed;
    j["sampler"] = "prox-mala";
    j["gamma"] = gamma;
    j["acceptance"] = acceptance;
    j["tuning_attempts"] = tuning_attempts;
    j["batch_means_batches"] = batches;
    j["timestamp"] = timestamp;
    for (std::size_t i = 0; i < names.size(); ++i)
      j["functionals"][names[i]] = {{"estimate", estimates[i]}, {"std_error", std_errors[i]}};
    return j;
  }
  static ReferenceRun from_json(const nlohmann::json& j) {
    ReferenceRun r;
    r.fingerprint = j.at("fingerprint").get<std::string>();
    r.prior = j.at("prior").get<std::string>();
    r.a1 = j.at("a1").get<double>();
    r.a2 = j.at("a2").get<double>();
    r.budget = j.at("budget").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.gamma = j.at("gamma").get<double>();
    r.acceptance = j.at("acceptance").get<double>();
    r.tuning_attempts = j.at("tuning_attempts").get<std::size_t>();
    r.batches = j.at("batch_means_batches").get<std::size_t>();
    r.timestamp = j.at("timestamp").get<std::string>();
    for (auto it = j.at("functionals").begin(); it != j.at("functionals").end(); ++it) {
      r.names.push_back(it.key());
      r.estimates.push_back(it.value().at("estimate").get<double>());
      r.std_errors.push_back(it.value().at("std_error").get<double>());
    }
    return r;
  }
};

/// Batch-means estimator with b = floor(sqrt(n)) batches of size floor(n / b);
/// trailing samples enter the mean only.
class BatchMeans {
 public:
  explicit BatchMeans(std::size_t n) : n_(n) {
    if (n < 4) throw std::invalid_argument("BatchMeans: need at least 4 samples");
    b_ = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    size_ = n / b_;
  }
  void add(double v) {
    total_.add(v);
    if (seen_ < b_ * size_) {
      cur_.add(v);
      if (++in_batch_ == size_) {
        means_.push_back(cur_.value() / static_cast<double>(size_));
        cur_ = {};
        in_batch_ = 0;
      }
    }
    ++seen_;
  }
  std::size_t batches() const { return b_; }
  double mean() const { return total_.value() / static_cast<double>(seen_); }
  double std_error() const {
    double m = 0.0;
    for (double v : means_) m += v;
    m /= static_cast<double>(means_.size());
    double ss = 0.0;
    for (double v : means_) ss += (v - m) * (v - m);
    const double var_bm = static_cast<double>(size_) * ss / static_cast<double>(means_.size() - 1);
    return std::sqrt(var_bm / static_cast<double>(b_ * size_));
  }

 private:
  std::size_t n_, b_ = 0, size_ = 0, seen_ = 0, in_batch_ = 0;
  detail::Compensated total_, cur_;
  std::vector<double> means_;
};

/// Tunes prox-MALA to the target acceptance (the tuning phase doubles as
/// burn-in), then averages `budget` iterates with batch-means errors.
inline ReferenceRun prox_mala_reference(const CompositePotential& p, const std::vector<Functional>& functionals,
                                        const Vector& x0, const ReferenceOptions& opt) {
  if (opt.budget < 4) throw std::invalid_argument("prox_mala_reference: budget too small");
  ChainState s(x0, RngStream(opt.seed, opt.stream));
  const double gamma0 = 0.5 / std::max(p.u1.L, 1e-12);
  const MalaTuning tuning = tune_prox_mala(p, s, gamma0, opt.target_acceptance, opt.tolerance);
  reset_mala_cache(s);
  s.mala_accepted = s.mala_proposed = 0;
  std::vector<BatchMeans> bm(functionals.size(), BatchMeans(opt.budget));
  for (std::size_t k = 0; k < opt.budget; ++k) {
    prox_mala_step(p, s, tuning.gamma);
    if (!s.x.allFinite()) throw ChainDiverged(k + 1, "prox-mala");
    for (std::size_t j = 0; j < functionals.size(); ++j) bm[j].add(functionals[j].f(s.x));
  }
  ReferenceRun r;
  r.budget = opt.budget;
  r.seed = opt.seed;
  r.gamma = tuning.gamma;
  r.acceptance = static_cast<double>(s.mala_accepted) / static_cast<double>(s.mala_proposed);
  r.tuning_attempts = tuning.attempts;
  r.batches = bm.empty() ? 0 : bm.front().batches();
  for (std::size_t j = 0; j < functionals.size(); ++j) {
    r.names.push_back(functionals[j].name);
    r.estimates.push_back(bm[j].mean());
    r.std_errors.push_back(bm[j].std_error());
  }
  r.timestamp = utc_timestamp();
  return r;
}

inline std::filesystem::path reference_cache_path(const std::string& dir, const std::string& fingerprint,
                                                  const Prior& prior, const ReferenceOptions& opt) {
  std::ostringstream name;
  name << "reference_" << fingerprint << "_" << prior.name << "_" << hex64(fnv1a(format_double(prior.a1) + ":" +
                                                                            format_double(prior.a2)))
       << "_" << opt.budget << "_" << opt.seed << "_" << opt.stream << ".json";
  return std::filesystem::path(dir) / name.str();
}

/// Cached prox-MALA reference for the logistic posterior of (ds, prior),
/// started at the posterior mode. Calls are serialized.
inline ReferenceRun reference_run(const Dataset& ds, const Prior& prior, const ReferenceOptions& opt) {
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  if (opt.budget < 100'000) throw std::invalid_argument("reference_run: budget must be >= 100000");
  const std::string fp = hex64(ds.fingerprint);
  std::optional<std::filesystem::path> path;
  if (!opt.cache_dir.empty()) {
    path = reference_cache_path(opt.cache_dir, fp, prior, opt);
    if (std::filesystem::exists(*path)) {
      std::ifstream in(*path);
      try {
        ReferenceRun r = ReferenceRun::from_json(nlohmann::json::parse(in));
        if (r.fingerprint == fp && r.prior == prior.name && r.a1 == prior.a1 && r.a2 == prior.a2) {
          r.from_cache = true;
          return r;
        }
      } catch (const nlohmann::json::exception&) {
        // Unreadable cache entries are recomputed and overwritten.
      }
    }
  }
  auto model = make_model(ds, prior);
  const CompositePotential p = make_logistic_posterior(model);
  const Vector x0 = find_minimizer(p, Vector::Zero(static_cast<Eigen::Index>(p.dim())), 1e-8).x;
  ReferenceRun r = prox_mala_reference(p, benchmark_functionals(p.dim()), x0, opt);
  r.fingerprint = fp;
  r.prior = prior.name;
  r.a1 = prior.a1;
  r.a2 = prior.a2;
  if (path) write_file_atomic(*path, r.to_json().dump(2) + "\n");
  return r;
}

// ---------------------------------------------------------------------------
// Experiment grid.

struct CellKey {
  SamplerKind sampler = SamplerKind::SPGLD;
  double tau = 0.0;
  double gamma = 0.0;
  std::string batch_label;
  std::size_t batch = 0;
};

struct ErrorStat {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

struct CellResult {
  CellKey key;
  std::vector<std::size_t> n;  // averaged iterates at each checkpoint
  std::vector<double> passes;  // effective passes at each checkpoint
  /// errors[functional][replication][checkpoint]; NaN for failed replications.
  std::vector<std::vector<std::vector<double>>> errors;
  std::vector<std::string> failures;  // "" for successful replications

  std::size_t ok() const {
    return static_cast<std::size_t>(std::count(failures.begin(), failures.end(), std::string()));
  }
  /// Mean absolute error across successful replications and its standard error.
  ErrorStat stat(std::size_t f, std::size_t cp) const {
    ErrorStat s;
    double sum = 0.0, sq = 0.0;
    for (const auto& rep : errors[f]) {
      const double v = rep[cp];
      if (!std::isfinite(v)) continue;
      sum += v;
      ++s.count;
    }
    if (s.count == 0) return {std::nan(""), std::nan(""), 0};
    s.mean = sum / static_cast<double>(s.count);
    for (const auto& rep : errors[f])
      if (std::isfinite(rep[cp])) sq += (rep[cp] - s.mean) * (rep[cp] - s.mean);
    s.se = s.count > 1 ? std::sqrt(sq / static_cast<double>(s.count - 1) / static_cast<double>(s.count)) : 0.0;
    return s;
  }
  std::size_t checkpoint_at_or_after(std::size_t n_min) const {
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i] >= n_min) return i;
    return n.size() - 1;
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  ReferenceRun reference;
  LogisticConstants constants;
  std::size_t rows = 0, dim = 0;
  std::vector<std::string> functionals;
  std::vector<CellResult> cells;

  const CellResult& cell(SamplerKind s, double tau, const std::string& batch) const {
    for (const auto& c : cells)
      if (c.key.sampler == s && c.key.tau == tau && c.key.batch_label == batch) return c;
    throw std::out_of_range(std::string("no cell for ") + to_string(s) + " tau=" + format_double(tau) +
                            " batch=" + batch);
  }
  std::size_t functional_index(const std::string& name) const {
    for (std::size_t i = 0; i < functionals.size(); ++i)
      if (functionals[i] == name) return i;
    throw std::out_of_range("unknown functional '" + name + "'");
  }
};

/// Checkpoint counts for batch b: a log grid in n, plus the counts matching
/// every full-batch checkpoint in effective passes.
inline std::vector<std::size_t> cell_checkpoints(std::size_t iterations, std::size_t count, std::size_t b,
                                                 std::size_t N) {
  const auto base = log_grid(iterations, count);
  std::set<std::size_t> g(base.begin(), base.end());
  if (b < N)
    for (std::size_t v : base) {
      const auto k = static_cast<std::size_t>(
          std::ceil(static_cast<double>(v) * static_cast<double>(N) / static_cast<double>(b) - 1e-9));
      if (k <= iterations) g.insert(k);
    }
  return {g.begin(), g.end()};
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const Dataset& ds, const ReferenceRun& ref) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  res.reference = ref;
  auto model = make_model(ds, cfg.prior);
  const CompositePotential p = make_logistic_posterior(model);
  res.constants = logistic_constants(*model);
  res.rows = model->rows();
  res.dim = model->dim();
  const auto functionals = benchmark_functionals(res.dim);
  for (const auto& f : functionals) res.functionals.push_back(f.name);
  std::vector<double> truth;
  for (const auto& f : functionals) truth.push_back(ref.value(f.name));

  const Vector x0 = cfg.start == "map"
                        ? find_minimizer(p, Vector::Zero(static_cast<Eigen::Index>(res.dim)), 1e-8).x
                        : Vector::Zero(static_cast<Eigen::Index>(res.dim));

  for (SamplerKind s : cfg.samplers)
    for (double tau : cfg.taus)
      for (const auto& label : cfg.batches) {
        CellResult c;
        c.key = {s, tau, tau / (res.constants.L + res.constants.m), label, resolve_batch(label, res.rows)};
        c.n = cell_checkpoints(cfg.iterations, cfg.checkpoints, c.key.batch, res.rows);
        c.passes.resize(c.n.size());
        for (std::size_t i = 0; i < c.n.size(); ++i)
          c.passes[i] = static_cast<double>(cfg.burn_in + c.n[i]) * static_cast<double>(c.key.batch) /
                        static_cast<double>(res.rows);
        c.errors.assign(functionals.size(),
                        std::vector<std::vector<double>>(cfg.replications,
                                                         std::vector<double>(c.n.size(), std::nan(""))));
        c.failures.assign(cfg.replications, "");
        res.cells.push_back(std::move(c));
      }

  std::vector<StochasticGradient> oracles(res.cells.size());
  for (std::size_t i = 0; i < res.cells.size(); ++i) {
    const auto& k = res.cells[i].key;
    if (k.sampler == SamplerKind::ULA) continue;
    const OracleMode mode = k.sampler == SamplerKind::SSGLD ? OracleMode::FullSubgradient : OracleMode::SmoothPart;
    oracles[i] = as_stochastic(std::make_shared<const MinibatchOracle<LogisticModel>>(model, k.batch, mode));
  }

  const std::size_t R = cfg.replications;
  parallel_for(res.cells.size() * R, cfg.threads, [&](std::size_t task) {
    CellResult& c = res.cells[task / R];
    const std::size_t rep = task % R;
    try {
      if (c.key.sampler == SamplerKind::ULA && c.key.batch != res.rows)
        throw std::invalid_argument("ULA uses the full gradient; minibatch cells are not defined");
      RunConfig rc;
      rc.kind = c.key.sampler;
      rc.plan = StepPlan::constant(c.key.gamma, cfg.burn_in);
      rc.iterations = cfg.iterations;
      rc.seed = cfg.seed;
      rc.stream = rep;
      rc.x0 = x0;
      rc.functionals = functionals;
      rc.checkpoints = c.n;
      const RunResult rr = run_chain(rc, p, c.key.sampler == SamplerKind::ULA ? nullptr : &oracles[task / R]);
      for (std::size_t cp = 0; cp < rr.checkpoints.size(); ++cp)
        for (std::size_t f = 0; f < functionals.size(); ++f)
          c.errors[f][rep][cp] = std::abs(rr.checkpoints[cp].estimates[f] - truth[f]);
    } catch (const std::exception& e) {
      c.failures[rep] = e.what();
      for (auto& per_f : c.errors) std::fill(per_f[rep].begin(), per_f[rep].end(), std::nan(""));
    }
  });
  return res;
}

// ---------------------------------------------------------------------------
// Qualitative invariants.

struct InvariantCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Smaller step, smaller bias: final err(tau_small) <= final err(tau_large) + 2 SE,
/// SE combining both cells' standard errors.
inline InvariantCheck check_final_bias_ordering(const ExperimentResult& r, SamplerKind s, const std::string& batch,
                                                const std::string& functional, double tau_small, double tau_large) {
  const std::size_t f = r.functional_index(functional);
  const CellResult& a = r.cell(s, tau_small, batch);
  const CellResult& b = r.cell(s, tau_large, batch);
  const std::size_t last = a.n.size() - 1;
  const ErrorStat ea = a.stat(f, last), eb = b.stat(f, b.n.size() - 1);
  const double se = std::hypot(ea.se, eb.se);
  InvariantCheck out;
  out.name = std::string("final-bias-ordering ") + to_string(s) + " batch=" + batch + " " + functional;
  out.pass = ea.mean <= eb.mean + 2.0 * se && a.ok() == a.failures.size() && b.ok() == b.failures.size();
  std::ostringstream d;
  d << "n=" << a.n[last] << ": err(tau=" << tau_small << ")=" << ea.mean << " vs err(tau=" << tau_large
    << ")=" << eb.mean << " (2SE=" << 2 * se << ")";
  out.detail = d.str();
  return out;
}

/// Larger step, faster start: at the first checkpoint with n >= early_n,
/// err(tau_large) <= err(tau_small) + 2 SE.
inline InvariantCheck check_early_speed_ordering(const ExperimentResult& r, SamplerKind s, const std::string& batch,
                                                 const std::string& functional, double tau_small, double tau_large,
                                                 std::size_t early_n) {
  const std::size_t f = r.functional_index(functional);
  const CellResult& a = r.cell(s, tau_small, batch);
  const CellResult& b = r.cell(s, tau_large, batch);
  const std::size_t ia = a.checkpoint_at_or_after(early_n), ib = b.checkpoint_at_or_after(early_n);
  const ErrorStat ea = a.stat(f, ia), eb = b.stat(f, ib);
  const double se = std::hypot(ea.se, eb.se);
  InvariantCheck out;
  out.name = std::string("early-speed-ordering ") + to_string(s) + " batch=" + batch + " " + functional;
  out.pass = eb.mean <= ea.mean + 2.0 * se && a.ok() == a.failures.size() && b.ok() == b.failures.size();
  std::ostringstream d;
  d << "n=" << a.n[ia] << ": err(tau=" << tau_large << ")=" << eb.mean << " vs err(tau=" << tau_small
    << ")=" << ea.mean << " (2SE=" << 2 * se << ")";
  out.detail = d.str();
  return out;
}

/// For every level taken from the full-batch curve, the minibatch curve
/// (lowered by 2 SE) reaches it at no more effective passes than the full
/// batch does. Levels are restricted to full-batch checkpoints inside the
/// minibatch's pass range.
inline InvariantCheck check_pass_advantage(const ExperimentResult& r, SamplerKind s, double tau,
                                           const std::string& small_batch, const std::string& full_batch,
                                           const std::string& functional) {
  const std::size_t f = r.functional_index(functional);
  const CellResult& mb = r.cell(s, tau, small_batch);
  const CellResult& fb = r.cell(s, tau, full_batch);
  InvariantCheck out;
  out.name = std::string("pass-advantage ") + to_string(s) + " tau=" + short_double(tau) + " " + small_batch +
             " vs " + full_batch + " " + functional;
  std::vector<ErrorStat> ms(mb.n.size()), fs(fb.n.size());
  for (std::size_t i = 0; i < mb.n.size(); ++i) ms[i] = mb.stat(f, i);
  for (std::size_t i = 0; i < fb.n.size(); ++i) fs[i] = fb.stat(f, i);
  const double max_pass = mb.passes.back() * (1.0 + 1e-9);
  std::size_t levels = 0, violations = 0;
  std::ostringstream d;
  for (std::size_t j = 0; j < fb.n.size() && fb.passes[j] <= max_pass; ++j) {
    const double level = fs[j].mean;
    std::size_t hit_full = j;
    for (std::size_t i = 0; i <= j; ++i)
      if (fs[i].mean <= level) {
        hit_full = i;
        break;
      }
    const double p_full = fb.passes[hit_full];
    bool hit = false;
    for (std::size_t i = 0; i < mb.n.size() && mb.passes[i] <= p_full * (1.0 + 1e-9) + 1.0 / r.rows; ++i)
      if (ms[i].mean - 2.0 * std::hypot(ms[i].se, fs[hit_full].se) <= level) {
        hit = true;
        break;
      }
    ++levels;
    if (!hit) {
      if (violations == 0)
        d << "first violation: level " << level << " reached by " << full_batch << " at " << p_full
          << " passes; ";
      ++violations;
    }
  }
  out.pass = levels > 0 && violations == 0 && mb.ok() == mb.failures.size() && fb.ok() == fb.failures.size();
  d << levels << " levels checked, " << violations << " violations";
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// Output.

/// Every ordering and pass-advantage check the configured grid supports:
/// extreme taus compared on each batch size, and each smaller batch compared
/// against the full batch at every tau.
inline std::vector<InvariantCheck> standard_invariants(const ExperimentResult& r, std::size_t early_n = 1000) {
  std::vector<InvariantCheck> out;
  const auto& cfg = r.config;
  const double lo = *std::min_element(cfg.taus.begin(), cfg.taus.end());
  const double hi = *std::max_element(cfg.taus.begin(), cfg.taus.end());
  const bool has_full = std::find(cfg.batches.begin(), cfg.batches.end(), "N") != cfg.batches.end();
  for (SamplerKind s : cfg.samplers) {
    if (s == SamplerKind::ULA) continue;
    for (const std::string& f : r.functionals) {
      if (lo < hi)
        for (const std::string& b : cfg.batches) {
          out.push_back(check_final_bias_ordering(r, s, b, f, lo, hi));
          out.push_back(check_early_speed_ordering(r, s, b, f, lo, hi, early_n));
        }
      if (has_full)
        for (double tau : cfg.taus)
          for (const std::string& b : cfg.batches)
            if (b != "N") out.push_back(check_pass_advantage(r, s, tau, b, "N", f));
    }
  }
  return out;
}

inline std::string cell_label(const CellKey& k) {
  return std::string(to_string(k.sampler)) + " tau=" + short_double(k.tau) + " batch=" + k.batch_label;
}

/// Long-format aggregated table (mean absolute error across replications).
inline std::string error_table_csv(const ExperimentResult& r) {
  std::ostringstream o;
  o << "sampler,tau,gamma,batch,batch_size,functional,n,iteration,effective_passes,mean_abs_error,std_error,"
       "replications_ok\n";
  for (const auto& c : r.cells)
    for (std::size_t f = 0; f < r.functionals.size(); ++f)
      for (std::size_t i = 0; i < c.n.size(); ++i) {
        const ErrorStat s = c.stat(f, i);
        o << to_string(c.key.sampler) << ',' << format_double(c.key.tau) << ',' << format_double(c.key.gamma)
          << ',' << c.key.batch_label << ',' << c.key.batch << ',' << r.functionals[f] << ',' << c.n[i] << ','
          << r.config.burn_in + c.n[i] << ',' << format_double(c.passes[i]) << ',' << format_double(s.mean)
          << ',' << format_double(s.se) << ',' << s.count << '\n';
      }
  return o.str();
}

/// Per-replication errors at the last checkpoint (box-plot data).
inline std::string final_errors_csv(const ExperimentResult& r) {
  std::ostringstream o;
  o << "sampler,tau,batch,functional,replication,abs_error,status\n";
  for (const auto& c : r.cells)
    for (std::size_t f = 0; f < r.functionals.size(); ++f)
      for (std::size_t rep = 0; rep < c.failures.size(); ++rep)
        o << to_string(c.key.sampler) << ',' << format_double(c.key.tau) << ',' << c.key.batch_label << ','
          << r.functionals[f] << ',' << rep << ',' << format_double(c.errors[f][rep].back()) << ','
          << (c.failures[rep].empty() ? "ok" : "diverged") << '\n';
  return o.str();
}

inline nlohmann::json experiment_summary(const ExperimentResult& r, const std::vector<InvariantCheck>& checks = {}) {
  nlohmann::json j;
  j["effective_passes_definition"] = "iterations * batch_size / N";
  j["rows"] = r.rows;
  j["dim"] = r.dim;
  j["prior"] = {{"name", r.config.prior.name}, {"a1", r.config.prior.a1}, {"a2", r.config.prior.a2}};
  j["constants"] = {{"m", r.constants.m}, {"L", r.constants.L}, {"M2", r.constants.M2}};
  j["iterations"] = r.config.iterations;
  j["burn_in"] = r.config.burn_in;
  j["replications"] = r.config.replications;
  j["seed"] = r.config.seed;
  j["start"] = r.config.start;
  j["reference"] = r.reference.to_json();
  for (const auto& c : r.cells) {
    nlohmann::json cj;
    cj["sampler"] = to_string(c.key.sampler);
    cj["tau"] = c.key.tau;
    cj["gamma"] = c.key.gamma;
    cj["batch"] = c.key.batch_label;
    cj["batch_size"] = c.key.batch;
    cj["replications_ok"] = c.ok();
    for (std::size_t rep = 0; rep < c.failures.size(); ++rep)
      if (!c.failures[rep].empty()) cj["failures"].push_back({{"replication", rep}, {"error", c.failures[rep]}});
    for (std::size_t f = 0; f < r.functionals.size(); ++f) {
      const ErrorStat s = c.stat(f, c.n.size() - 1);
      cj["final"][r.functionals[f]] = {{"mean_abs_error", s.mean}, {"std_error", s.se}};
    }
    j["cells"].push_back(cj);
  }
  for (const auto& ch : checks) j["invariants"].push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
  return j;
}

/// Writes errors.csv, final_errors.csv, summary.json and SVG plots to dir.
inline void write_experiment(const std::filesystem::path& dir, const ExperimentResult& r,
                             const std::vector<InvariantCheck>& checks = {}) {
  write_file_atomic(dir / "errors.csv", error_table_csv(r));
  write_file_atomic(dir / "final_errors.csv", final_errors_csv(r));
  write_file_atomic(dir / "summary.json", experiment_summary(r, checks).dump(2) + "\n");
  for (std::size_t f = 0; f < r.functionals.size(); ++f) {
    std::vector<svg::Series> by_iter, by_pass;
    std::vector<svg::Box> boxes;
    for (const auto& c : r.cells) {
      svg::Series si{cell_label(c.key), {}, {}}, sp = si;
      for (std::size_t i = 0; i < c.n.size(); ++i) {
        const double e = c.stat(f, i).mean;
        si.x.push_back(static_cast<double>(r.config.burn_in + c.n[i]));
        si.y.push_back(e);
        sp.x.push_back(c.passes[i]);
        sp.y.push_back(e);
      }
      by_iter.push_back(std::move(si));
      by_pass.push_back(std::move(sp));
      svg::Box b{std::string(to_string(c.key.sampler)) + " " + short_double(c.key.tau) + " " + c.key.batch_label, {}};
      for (const auto& rep : c.errors[f]) b.values.push_back(rep.back());
      boxes.push_back(std::move(b));
    }
    const std::string fn = r.functionals[f];
    write_file_atomic(dir / ("error_vs_iteration_" + fn + ".svg"),
                      svg::line_plot({"Mean absolute error of " + fn, "iteration", "error"}, by_iter));
    write_file_atomic(dir / ("error_vs_passes_" + fn + ".svg"),
                      svg::line_plot({"Mean absolute error of " + fn, "effective passes", "error"}, by_pass));
    svg::Axes box_axes{"Final absolute error of " + fn, "", "error"};
    box_axes.width = std::max(640, 70 * static_cast<int>(boxes.size()));
    write_file_atomic(dir / ("final_box_" + fn + ".svg"), svg::box_plot(box_axes, boxes));
  }
}

}  // namespace langevin

#endif  // LANGEVIN_HARNESS_HPP_
