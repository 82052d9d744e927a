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

// langevin: validate, tune, bound, sample and benchmark subcommands.

#include <langevin/analytics.hpp>
#include <langevin/bounds.hpp>
#include <langevin/config.hpp>
#include <langevin/harness.hpp>
#include <langevin/samplers.hpp>
#include <langevin/validate.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace langevin;
namespace fs = std::filesystem;
using nlohmann::json;

json config_json(const Config& c) {
  json j = json::object();
  for (const auto& [k, v] : c.values()) std::visit([&](const auto& x) { j[k] = x; }, v);
  return j;
}

// `--set key=value`. Keys without a dot go under `bare_section` when given.
void apply_overrides(Config& c, const std::vector<std::string>& sets, const std::string& bare_section) {
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
    std::string key = s.substr(0, eq);
    if (!bare_section.empty() && key.find('.') == std::string::npos) key = bare_section + "." + key;
    const std::string raw = s.substr(eq + 1);
    try {
      const Config one = Config::parse_toml("v = " + raw);
      if (one.has("v")) c.set(key, one.values().at("v"));
    } catch (const ConfigError&) {
      c.set(key, raw);  // bare word
    }
  }
}

Config load_config(const std::string& path, const std::vector<std::string>& sets,
                   const std::string& bare_section = "") {
  Config c = path.empty() ? Config{} : Config::load(path);
  apply_overrides(c, sets, bare_section);
  return c;
}

class JsonLines {
 public:
  explicit JsonLines(const std::string& out_dir, const std::string& name) {
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
    path_ = fs::path(out_dir) / name;
  }
  void emit(const json& j) {
    const std::string line = j.dump();
    std::cout << line << "\n";
    buffer_ += line + "\n";
  }
  void flush() const {
    if (!path_.empty()) write_file_atomic(path_, buffer_);
  }

 private:
  fs::path path_;
  std::string buffer_;
};

json constants_json(const ProblemConstants& c) {
  json j = json::object();
  for (const auto& n : ProblemConstants::names())
    if (c.field(n)) j[n] = *c.field(n);
  j["heuristic"] = c.heuristic;
  return j;
}

json plan_json(const StepPlan& p) {
  auto seq = [](const Sequence& s) {
    switch (s.kind) {
      case Sequence::Kind::Constant:
        return json{{"kind", "constant"}, {"value", s.c}};
      case Sequence::Kind::Poly:
        return json{{"kind", "poly"}, {"c", s.c}, {"alpha", s.alpha}, {"offset", s.offset}};
      case Sequence::Kind::Piecewise:
        return json{{"kind", "piecewise"}, {"first", s.c}, {"switch_step", s.switch_step}, {"second", s.c2}};
    }
    return json{};
  };
  return {{"gamma", seq(p.gamma)}, {"lambda", p.lambda ? seq(*p.lambda) : json("gamma")}, {"burn_in", p.burn_in}};
}

std::vector<double> read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open variance series '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = detail::split_csv_line(line);
    if (cells.empty() || detail::trim(cells.back()).empty()) continue;
    const std::string cell(detail::trim(cells.back()));
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw ConfigError("variance series line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
    }
  }
  if (out.empty()) throw ConfigError("variance series '" + path + "' is empty");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& out_dir) {
  JsonLines out(out_dir, "validate.jsonl");
  bool all = true;
  for (const auto& r : validation::gaussian_suite()) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    out.emit(r.to_json());
    all = all && r.pass;
  }
  out.flush();
  std::cerr << (all ? "validation passed" : "validation FAILED") << "\n";
  return all ? 0 : 1;
}

int cmd_tune(const std::string& rule, const std::vector<double>& eps, const std::string& config,
             const std::vector<std::string>& sets, const std::string& out_dir) {
  const Config cfg = load_config(config, sets, "constants");
  const ProblemConstants c = constants_from_config(cfg);
  JsonLines out(out_dir, "tune.jsonl");
  for (double e : eps) {
    json j = tune(rule, c, e).to_json();
    j["inputs"]["eps"] = e;
    j["constants"] = constants_json(c);
    out.emit(j);
  }
  out.flush();
  return 0;
}

int cmd_bound(const std::string& theorem, std::vector<std::size_t> horizons, const std::string& config,
              const std::vector<std::string>& sets, const std::string& variance, const std::string& out_dir) {
  const Config cfg = load_config(config, sets, "constants");
  const ProblemConstants c = constants_from_config(cfg);
  JsonLines out(out_dir, "bound.jsonl");
  if (theorem == "moment-bound") {
    json j = moment_bound_report(c).to_json();
    j["constants"] = constants_json(c);
    out.emit(j);
    out.flush();
    return 0;
  }
  const StepPlan plan = plan_from_config(cfg);
  if (horizons.empty())
    for (double h : cfg.numbers("horizon")) horizons.push_back(static_cast<std::size_t>(h));
  if (horizons.empty()) throw ConfigError("bound needs --horizon or a 'horizon' config key");
  std::optional<std::vector<double>> ups;
  if (!variance.empty()) ups = read_series(variance);
  for (std::size_t n : horizons) {
    json j = bound_rhs(theorem, c, plan, n, ups).to_json();
    j["constants"] = constants_json(c);
    j["schedule"] = plan_json(plan);
    if (ups) j["inputs"]["variance_series"] = variance;
    out.emit(j);
  }
  out.flush();
  return 0;
}

// ---------------------------------------------------------------------------
// sample

struct Target {
  std::string kind;
  CompositePotential p;
  std::shared_ptr<const LogisticModel> model;
  json exact = json::object();
  json info = json::object();
};

Target make_target(const Config& c) {
  Target t;
  t.kind = c.string("target.kind", "gaussian");
  if (t.kind == "gaussian") {
    std::vector<double> h = c.numbers("target.precision");
    if (h.empty()) h.assign(static_cast<std::size_t>(c.number("target.dim", 1.0)), c.number("target.h", 1.0));
    Vector diag = Eigen::Map<const Vector>(h.data(), static_cast<Eigen::Index>(h.size()));
    const double a1 = c.number("target.a1", 0.0);
    const std::size_t d = h.size();
    std::optional<NonSmoothTerm> u2;
    if (a1 > 0.0) u2 = make_laplace_term(d, a1);
    t.p = make_composite(make_quadratic(Matrix(diag.asDiagonal())), u2, std::nullopt, Vector(Vector::Zero(diag.size())));
    if (a1 == 0.0) t.exact = {{"I1", 0.0}, {"I2", diag.cwiseInverse().mean()}};
  } else if (t.kind == "laplace") {
    const std::size_t d = static_cast<std::size_t>(c.number("target.dim", 1.0));
    const double a1 = c.number("target.a1", 1.0);
    t.p = make_composite(make_flat(d), make_laplace_term(d, a1), a1 * std::sqrt(static_cast<double>(d)),
                         Vector(Vector::Zero(static_cast<Eigen::Index>(d))));
    t.exact = {{"I1", 0.0}, {"I2", 2.0 / (a1 * a1)}};
  } else if (t.kind == "logistic") {
    const ExperimentConfig e = ExperimentConfig::from_config(c);
    const Dataset ds = load_dataset(e);
    t.model = make_model(ds, e.prior);
    t.p = make_logistic_posterior(t.model);
    const auto lc = logistic_constants(*t.model);
    t.info = {{"rows", t.model->rows()}, {"dim", t.model->dim()}, {"m", lc.m}, {"L", lc.L}, {"M2", lc.M2},
              {"prior", e.prior.name}, {"fingerprint", hex64(ds.fingerprint)}};
  } else {
    throw ConfigError("target.kind must be gaussian, laplace or logistic, got '" + t.kind + "'");
  }
  return t;
}

int cmd_sample(const std::string& config, const std::vector<std::string>& sets, std::string out_dir) {
  const Config cfg = load_config(config, sets);
  if (out_dir.empty()) out_dir = cfg.string("out", "");
  if (out_dir.empty()) throw ConfigError("sample needs --out or an 'out' config key");
  const Target t = make_target(cfg);
  const SamplerKind kind = sampler_from_string(cfg.string("sampler", "spgld"));
  const std::size_t d = t.p.dim();

  RunConfig rc;
  rc.kind = kind;
  rc.iterations = static_cast<std::size_t>(cfg.number("iterations", 10000));
  rc.seed = static_cast<std::uint64_t>(cfg.number("seed", 1));
  rc.trace_stride = static_cast<std::size_t>(cfg.number("trace_stride", 0));
  rc.functionals = benchmark_functionals(d);
  rc.checkpoints = log_grid(rc.iterations, static_cast<std::size_t>(cfg.number("checkpoints", 40)));
  const std::string start = cfg.string("start", "zero");
  rc.x0 = Vector::Zero(static_cast<Eigen::Index>(d));
  if (start == "map") rc.x0 = find_minimizer(t.p, rc.x0, 1e-8).x;
  else if (start != "zero") throw ConfigError("start must be 'zero' or 'map'");

  json meta = {{"target", t.kind}, {"sampler", to_string(kind)}, {"seed", rc.seed}, {"iterations", rc.iterations},
               {"start", start}, {"effective_passes", "iterations x batch / N"}};
  if (!t.info.empty()) meta["dataset"] = t.info;

  if (cfg.has("schedule.gamma1")) {
    rc.plan = plan_from_config(cfg);
  } else if (cfg.has("tau") && t.model) {
    const auto lc = logistic_constants(*t.model);
    rc.plan = StepPlan::constant(cfg.number("tau") / (lc.L + lc.m), static_cast<std::size_t>(cfg.number("burn_in", 0)));
  } else if (kind != SamplerKind::ProxMALA) {
    throw ConfigError("sample needs [schedule] gamma1 (or tau for the logistic target)");
  }
  if (kind == SamplerKind::ProxMALA && cfg.boolean("mala.tune", !cfg.has("schedule.gamma1"))) {
    ChainState s(rc.x0, RngStream(rc.seed, 1'000'000));
    const MalaTuning tuned = tune_prox_mala(t.p, s, cfg.number("mala.gamma0", 0.1));
    rc.plan = StepPlan::constant(tuned.gamma, rc.plan.burn_in);
    rc.x0 = s.x;
    meta["mala_tuning"] = {{"gamma", tuned.gamma}, {"acceptance", tuned.acceptance}, {"attempts", tuned.attempts}};
  }

  StochasticGradient oracle;
  const StochasticGradient* op = nullptr;
  if (kind == SamplerKind::SSGLD || kind == SamplerKind::SPGLD) {
    const OracleMode mode = kind == SamplerKind::SSGLD ? OracleMode::FullSubgradient : OracleMode::SmoothPart;
    if (t.model) {
      const std::size_t b = resolve_batch(cfg.string("batch", "N"), t.model->rows());
      oracle = as_stochastic(std::make_shared<const MinibatchOracle<LogisticModel>>(t.model, b, mode));
      meta["batch"] = b;
    } else {
      oracle = mode == OracleMode::FullSubgradient ? exact_subgradient_oracle(t.p) : exact_smooth_oracle(t.p);
      const double sigma = cfg.number("oracle.noise", 0.0);
      if (sigma > 0.0) oracle = with_additive_noise(oracle, sigma);
      meta["oracle_noise"] = sigma;
    }
    op = &oracle;
  }
  meta["schedule"] = plan_json(rc.plan);

  const RunResult r = run_chain(rc, t.p, op);

  json est = json::object();
  for (const auto& e : r.estimates) est[e.functional] = e.estimate;
  meta["estimates"] = est;
  if (!t.exact.empty()) meta["exact"] = t.exact;
  meta["weight_total"] = r.weight_total;
  meta["effective_passes_total"] = r.state.effective_passes;
  meta["admissible"] = r.admissible;
  if (kind == SamplerKind::ProxMALA) meta["acceptance_rate"] = r.acceptance_rate;
  meta["config"] = config_json(cfg);

  const fs::path dir(out_dir);
  write_file_atomic(dir / "estimates.json", meta.dump(2) + "\n");
  std::ostringstream cp;
  cp << "n,k,effective_passes";
  for (const auto& f : rc.functionals) cp << ',' << f.name;
  cp << '\n';
  for (const auto& c : r.checkpoints) {
    cp << c.n << ',' << c.k << ',' << format_double(c.effective_passes);
    for (double v : c.estimates) cp << ',' << format_double(v);
    cp << '\n';
  }
  write_file_atomic(dir / "checkpoints.csv", cp.str());
  if (rc.trace_stride > 0) {
    std::ostringstream tr;
    tr << "k,weight";
    for (std::size_t i = 0; i < d; ++i) tr << ",x" << i + 1;
    tr << '\n';
    for (const auto& row : r.trace) {
      tr << row.k << ',' << format_double(row.weight);
      for (Eigen::Index i = 0; i < row.x.size(); ++i) tr << ',' << format_double(row.x(i));
      tr << '\n';
    }
    write_file_atomic(dir / "trace.csv", tr.str());
  }
  std::cout << json{{"estimates", est}, {"exact", t.exact}, {"out", out_dir}}.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark

int cmd_benchmark(const std::string& config, const std::vector<std::string>& sets, std::string out_dir,
                  std::optional<std::size_t> threads, const std::string& cache_dir) {
  const Config cfg = load_config(config, sets);
  if (out_dir.empty()) out_dir = cfg.string("out", "");
  if (out_dir.empty()) throw ConfigError("benchmark needs --out or an 'out' config key");
  ExperimentConfig e = ExperimentConfig::from_config(cfg);
  if (threads) e.threads = *threads;
  if (!cache_dir.empty()) e.reference.cache_dir = cache_dir;
  const Dataset ds = load_dataset(e);
  std::cerr << "dataset: N=" << ds.X.rows() << " d=" << ds.X.cols() << " fingerprint " << hex64(ds.fingerprint)
            << "\n";
  const ReferenceRun ref = reference_run(ds, e.prior, e.reference);
  std::cerr << "reference (" << (ref.from_cache ? "cached" : "computed") << "): ";
  for (std::size_t i = 0; i < ref.names.size(); ++i)
    std::cerr << ref.names[i] << "=" << ref.estimates[i] << " (SE " << ref.std_errors[i] << ") ";
  std::cerr << "acceptance " << ref.acceptance << "\n";
  const ExperimentResult res = run_experiment(e, ds, ref);
  const auto checks = standard_invariants(res);
  write_experiment(out_dir, res, checks);
  write_file_atomic(fs::path(out_dir) / "reference.json", ref.to_json().dump(2) + "\n");
  std::size_t failed_cells = 0;
  for (const auto& c : res.cells) failed_cells += c.ok() < c.failures.size();
  std::size_t passed = 0;
  for (const auto& ch : checks) {
    std::cerr << (ch.pass ? "pass " : "fail ") << ch.name << ": " << ch.detail << "\n";
    passed += ch.pass;
  }
  std::cout << json{{"out", out_dir},
                    {"cells", res.cells.size()},
                    {"cells_with_failures", failed_cells},
                    {"invariants_passed", passed},
                    {"invariants_total", checks.size()}}
                   .dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Langevin samplers for composite potentials: verification, tuning, bounds and benchmarks"};
  app.require_subcommand(1);

  std::string out_dir, config, rule, theorem, variance, cache_dir;
  std::vector<std::string> sets;
  std::vector<double> eps;
  std::vector<std::size_t> horizons;
  std::size_t threads = 0;

  auto* validate = app.add_subcommand("validate", "Run the Gaussian verification suite");
  validate->add_option("--out", out_dir, "Directory for validate.jsonl");

  auto* tune_cmd = app.add_subcommand("tune", "Step size and iteration count for a target accuracy");
  tune_cmd->add_option("--rule", rule, "Tuning rule")->required()->check(CLI::IsMember(tuning_rules()));
  tune_cmd->add_option("--eps", eps, "Target accuracy (repeatable)")->required()->check(CLI::PositiveNumber);
  tune_cmd->add_option("--config", config, "Config file with a [constants] section");
  tune_cmd->add_option("--set", sets, "Override: name=value (constants) or section.key=value");
  tune_cmd->add_option("--out", out_dir, "Directory for tune.jsonl");

  std::vector<std::string> theorems = bound_theorems();
  theorems.push_back("moment-bound");
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate a convergence bound for a step plan");
  bound_cmd->add_option("--theorem", theorem, "Bound to evaluate")->required()->check(CLI::IsMember(theorems));
  bound_cmd->add_option("--horizon", horizons, "Averaged iterates n (repeatable)");
  bound_cmd->add_option("--config", config, "Config file with [constants] and [schedule] sections");
  bound_cmd->add_option("--set", sets, "Override: name=value (constants) or section.key=value");
  bound_cmd->add_option("--variance", variance, "CSV of per-iterate oracle variances (last column)")
      ->check(CLI::ExistingFile);
  bound_cmd->add_option("--out", out_dir, "Directory for bound.jsonl");

  auto* sample = app.add_subcommand("sample", "Run one chain and write estimates, checkpoints and trace");
  sample->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  sample->add_option("--set", sets, "Override: key=value, dotted keys address sections");
  sample->add_option("--out", out_dir, "Output directory");

  auto* bench = app.add_subcommand("benchmark", "Logistic regression benchmark grid");
  bench->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--set", sets, "Override: key=value, dotted keys address sections");
  bench->add_option("--out", out_dir, "Output directory");
  auto* threads_opt = bench->add_option("--threads", threads, "Worker threads (0 = all cores)");
  bench->add_option("--cache-dir", cache_dir, "Reference cache directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*validate) return cmd_validate(out_dir);
    if (*tune_cmd) return cmd_tune(rule, eps, config, sets, out_dir);
    if (*bound_cmd) return cmd_bound(theorem, horizons, config, sets, variance, out_dir);
    if (*sample) return cmd_sample(config, sets, out_dir);
    if (*bench)
      return cmd_benchmark(config, sets, out_dir,
                           threads_opt->count() ? std::optional<std::size_t>(threads) : std::nullopt, cache_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
