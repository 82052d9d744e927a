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

#include <langevin/harness.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace langevin {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("langevin_harness_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.synthetic.rows = 40;
  c.synthetic.cols = 3;
  c.samplers = {SamplerKind::SSGLD, SamplerKind::SPGLD};
  c.taus = {0.1, 1.0};
  c.batches = {"N", "N/10"};
  c.replications = 3;
  c.iterations = 2000;
  c.checkpoints = 8;
  c.threads = 1;
  return c;
}

ReferenceRun fake_reference() {
  ReferenceRun r;
  r.names = {"I1", "I2"};
  r.estimates = {0.1, 0.2};
  r.std_errors = {0.0, 0.0};
  return r;
}

TEST(Utilities, LogGridIsSortedUniqueAndEndsAtN) {
  const auto g = log_grid(100000, 40);
  EXPECT_EQ(g.front(), 1u);
  EXPECT_EQ(g.back(), 100000u);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(std::adjacent_find(g.begin(), g.end()), g.end());
  EXPECT_EQ(log_grid(5, 1), std::vector<std::size_t>{5});
  EXPECT_TRUE(log_grid(0, 3).empty());
}

TEST(Utilities, FormatAndBatchSpecs) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(hex64(255), "00000000000000ff");
  EXPECT_EQ(resolve_batch("N", 270), 270u);
  EXPECT_EQ(resolve_batch("N/10", 270), 27u);
  EXPECT_EQ(resolve_batch("N/100", 270), 2u);
  EXPECT_EQ(resolve_batch("N/1000", 270), 1u);
  EXPECT_EQ(resolve_batch("5", 270), 5u);
  EXPECT_THROW(resolve_batch("N/0", 270), ConfigError);
  EXPECT_THROW(resolve_batch("300", 270), ConfigError);
  EXPECT_THROW(resolve_batch("half", 270), ConfigError);
}

TEST(Utilities, Priors) {
  EXPECT_EQ(make_prior("p1").a1, 1.0);
  EXPECT_EQ(make_prior("p1").a2, 0.0);
  EXPECT_EQ(make_prior("p12").a1, 0.9);
  EXPECT_EQ(make_prior("p12").a2, 0.1);
  EXPECT_EQ(make_prior("custom", 0.3, 0.4).a2, 0.4);
  EXPECT_THROW(make_prior("flat"), ConfigError);
  EXPECT_THROW(make_prior("custom", -1, 0), ConfigError);
}

TEST(Utilities, ParallelForCoversEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
  EXPECT_THROW(parallel_for(10, 2, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(BatchMeans, IidSamplesGiveClassicalError) {
  RngStream rng(3, 0);
  const std::size_t n = 250000;
  BatchMeans bm(n);
  for (std::size_t i = 0; i < n; ++i) bm.add(rng.normal());
  EXPECT_EQ(bm.batches(), 500u);
  EXPECT_NEAR(bm.std_error(), 1.0 / std::sqrt(double(n)), 0.1 / std::sqrt(double(n)));
  EXPECT_NEAR(bm.mean(), 0.0, 4.0 / std::sqrt(double(n)));
  EXPECT_THROW(BatchMeans(3), std::invalid_argument);
}

TEST(Reference, QuadraticTargetAndErrorScaling) {
  Matrix H = Matrix::Zero(2, 2);
  H.diagonal() << 1.0, 3.0;
  const auto p = make_composite(make_quadratic(H));
  const auto f = benchmark_functionals(2);
  const double exact_i2 = (1.0 + 1.0 / 3.0) / 2.0;
  ReferenceOptions opt;
  opt.budget = 100000;
  const ReferenceRun small = prox_mala_reference(p, f, Vector::Zero(2), opt);
  EXPECT_NEAR(small.value("I2"), exact_i2, 3 * small.se("I2"));
  EXPECT_NEAR(small.value("I1"), 0.0, 3 * small.se("I1"));
  EXPECT_NEAR(small.acceptance, 0.5, 0.05);
  opt.budget = 400000;
  const ReferenceRun large = prox_mala_reference(p, f, Vector::Zero(2), opt);
  EXPECT_NEAR(large.value("I2"), exact_i2, 3 * large.se("I2"));
  const double ratio = small.se("I2") / large.se("I2");
  EXPECT_GT(ratio, 1.6);
  EXPECT_LT(ratio, 2.5);
}

TEST(Reference, CachedOnSecondCall) {
  SyntheticSpec spec;
  spec.rows = 30;
  spec.cols = 2;
  const Dataset ds = make_synthetic_logistic(spec);
  ReferenceOptions opt;
  opt.budget = 100000;
  opt.cache_dir = scratch_dir("cache").string();
  const ReferenceRun a = reference_run(ds, make_prior("p12"), opt);
  EXPECT_FALSE(a.from_cache);
  const ReferenceRun b = reference_run(ds, make_prior("p12"), opt);
  EXPECT_TRUE(b.from_cache);
  EXPECT_EQ(a.estimates, b.estimates);
  EXPECT_EQ(a.std_errors, b.std_errors);
  EXPECT_EQ(b.fingerprint, hex64(ds.fingerprint));
  // A different prior is a different cache entry.
  EXPECT_FALSE(reference_run(ds, make_prior("p1"), opt).from_cache);
  const auto round = ReferenceRun::from_json(a.to_json());
  EXPECT_EQ(round.estimates, a.estimates);
  EXPECT_EQ(round.gamma, a.gamma);
  opt.budget = 1000;
  EXPECT_THROW(reference_run(ds, make_prior("p12"), opt), std::invalid_argument);
}

TEST(Experiment, DeterministicAcrossRunsAndThreadCounts) {
  ExperimentConfig c = tiny_config();
  const Dataset ds = load_dataset(c);
  const auto a = run_experiment(c, ds, fake_reference());
  const auto b = run_experiment(c, ds, fake_reference());
  c.threads = 3;
  const auto t = run_experiment(c, ds, fake_reference());
  EXPECT_EQ(error_table_csv(a), error_table_csv(b));
  EXPECT_EQ(error_table_csv(a), error_table_csv(t));
  EXPECT_EQ(final_errors_csv(a), final_errors_csv(t));
  c.seed = 2;
  EXPECT_NE(error_table_csv(run_experiment(c, ds, fake_reference())), error_table_csv(a));
}

TEST(Experiment, SpgldEqualsSsgldWithoutNonSmoothPrior) {
  ExperimentConfig c = tiny_config();
  c.prior = make_prior("custom", 0.0, 0.5);
  const Dataset ds = load_dataset(c);
  const auto r = run_experiment(c, ds, fake_reference());
  for (double tau : c.taus)
    for (const auto& b : c.batches) {
      const auto& x = r.cell(SamplerKind::SSGLD, tau, b);
      const auto& y = r.cell(SamplerKind::SPGLD, tau, b);
      EXPECT_EQ(x.errors, y.errors) << "tau=" << tau << " batch=" << b;
    }
}

TEST(Experiment, CellLayoutAndPassAccounting) {
  ExperimentConfig c = tiny_config();
  c.samplers = {SamplerKind::ULA, SamplerKind::SPGLD};
  const Dataset ds = load_dataset(c);
  const auto r = run_experiment(c, ds, fake_reference());
  EXPECT_EQ(r.cells.size(), 8u);
  const auto& mb = r.cell(SamplerKind::SPGLD, 0.1, "N/10");
  EXPECT_EQ(mb.key.batch, 4u);
  EXPECT_NEAR(mb.key.gamma, 0.1 / (r.constants.L + r.constants.m), 1e-15);
  for (std::size_t i = 0; i < mb.n.size(); ++i) EXPECT_DOUBLE_EQ(mb.passes[i], mb.n[i] * 4.0 / 40.0);
  // Every full-batch pass count is matched by a minibatch checkpoint when in range.
  const auto& fb = r.cell(SamplerKind::SPGLD, 0.1, "N");
  for (double p : fb.passes) {
    if (p > mb.passes.back()) continue;
    EXPECT_NE(std::find(mb.passes.begin(), mb.passes.end(), p), mb.passes.end()) << p;
  }
  EXPECT_EQ(mb.ok(), 3u);
  // ULA is defined only with the full gradient.
  const auto& ula_mb = r.cell(SamplerKind::ULA, 0.1, "N/10");
  EXPECT_EQ(ula_mb.ok(), 0u);
  EXPECT_TRUE(std::isnan(ula_mb.stat(0, 0).mean));
  // ULA also needs a smooth posterior: fails under the l1 prior, runs under a ridge prior.
  EXPECT_EQ(r.cell(SamplerKind::ULA, 0.1, "N").ok(), 0u);
  c.prior = make_prior("custom", 0.0, 0.5);
  const auto smooth = run_experiment(c, ds, fake_reference());
  EXPECT_EQ(smooth.cell(SamplerKind::ULA, 0.1, "N").ok(), 3u);
  EXPECT_EQ(smooth.cell(SamplerKind::ULA, 0.1, "N/10").ok(), 0u);
  EXPECT_THROW(r.cell(SamplerKind::SSGLD, 0.1, "N"), std::out_of_range);
}

// Hand-built results exercise the invariant checks directly.
ExperimentResult synthetic_result(const std::vector<std::vector<double>>& curves_small_tau,
                                  const std::vector<std::vector<double>>& curves_large_tau) {
  ExperimentResult r;
  r.rows = 100;
  r.functionals = {"I1"};
  auto make = [&](double tau, const std::string& label, std::size_t batch, const std::vector<std::vector<double>>& reps) {
    CellResult c;
    c.key = {SamplerKind::SPGLD, tau, tau, label, batch};
    for (std::size_t i = 0; i < reps[0].size(); ++i) {
      c.n.push_back(i + 1);
      c.passes.push_back(double(i + 1) * double(batch) / 100.0);
    }
    c.errors = {reps};
    c.failures.assign(reps.size(), "");
    return c;
  };
  r.cells.push_back(make(0.01, "N", 100, curves_small_tau));
  r.cells.push_back(make(1.0, "N", 100, curves_large_tau));
  return r;
}

TEST(Invariants, FinalAndEarlyOrdering) {
  // Small tau: slow start, low floor. Large tau: fast start, high floor.
  const auto r = synthetic_result({{1.0, 0.5, 0.1}, {1.0, 0.5, 0.1}}, {{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}});
  EXPECT_TRUE(check_final_bias_ordering(r, SamplerKind::SPGLD, "N", "I1", 0.01, 1.0).pass);
  EXPECT_FALSE(check_final_bias_ordering(r, SamplerKind::SPGLD, "N", "I1", 1.0, 0.01).pass);
  EXPECT_TRUE(check_early_speed_ordering(r, SamplerKind::SPGLD, "N", "I1", 0.01, 1.0, 1).pass);
  EXPECT_FALSE(check_early_speed_ordering(r, SamplerKind::SPGLD, "N", "I1", 1.0, 0.01, 1).pass);
  // Spread across replications widens the 2 SE allowance.
  const auto noisy = synthetic_result({{1, 1, 0.0}, {1, 1, 0.5}}, {{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}});
  EXPECT_TRUE(check_final_bias_ordering(noisy, SamplerKind::SPGLD, "N", "I1", 0.01, 1.0).pass);
}

TEST(Invariants, PassAdvantage) {
  ExperimentResult r;
  r.rows = 10;
  r.functionals = {"I1"};
  auto make = [](const std::string& label, std::size_t batch, std::vector<double> curve) {
    CellResult c;
    c.key = {SamplerKind::SPGLD, 0.1, 0.1, label, batch};
    for (std::size_t i = 0; i < curve.size(); ++i) {
      c.n.push_back(i + 1);
      c.passes.push_back(double(i + 1) * double(batch) / 10.0);
    }
    c.errors = {{curve, curve}};
    c.failures = {"", ""};
    return c;
  };
  // Full batch: one pass per step. Minibatch of 1: ten steps per pass.
  r.cells.push_back(make("N", 10, {0.8, 0.4, 0.2}));
  std::vector<double> fast(30), slow(30);
  for (std::size_t i = 0; i < 30; ++i) fast[i] = 0.8 / (1 + double(i)), slow[i] = 0.9;
  r.cells.push_back(make("1", 1, fast));
  EXPECT_TRUE(check_pass_advantage(r, SamplerKind::SPGLD, 0.1, "1", "N", "I1").pass);
  r.cells.back() = make("1", 1, slow);
  const auto fail = check_pass_advantage(r, SamplerKind::SPGLD, 0.1, "1", "N", "I1");
  EXPECT_FALSE(fail.pass);
  EXPECT_NE(fail.detail.find("violation"), std::string::npos);
}

TEST(Invariants, StandardSetCoversTheGrid) {
  const ExperimentConfig c = tiny_config();
  const auto r = run_experiment(c, load_dataset(c), fake_reference());
  const auto checks = standard_invariants(r, 10);
  // Per sampler and functional: 2 batches x 2 orderings, plus 2 taus x 1 minibatch.
  EXPECT_EQ(checks.size(), 2u * 2u * (4u + 2u));
  for (const auto& ch : checks) {
    EXPECT_FALSE(ch.name.empty());
    EXPECT_EQ(ch.name.find("0.10000"), std::string::npos) << ch.name;
  }
}

TEST(Output, WritesTablesSummaryAndPlots) {
  const ExperimentConfig c = tiny_config();
  const auto r = run_experiment(c, load_dataset(c), fake_reference());
  const fs::path dir = scratch_dir("out");
  write_experiment(dir, r, {{"demo", true, "ok"}});
  for (const char* f : {"errors.csv", "final_errors.csv", "summary.json", "error_vs_iteration_I1.svg",
                        "error_vs_passes_I2.svg", "final_box_I1.svg"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  std::ifstream in(dir / "summary.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["effective_passes_definition"], "iterations * batch_size / N");
  EXPECT_EQ(j["cells"].size(), 8u);
  EXPECT_EQ(j["invariants"][0]["pass"], true);
  const std::string csv = error_table_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "sampler,tau,gamma,batch,batch_size,functional,n,iteration,effective_passes,mean_abs_error,std_error,"
            "replications_ok");
}

TEST(Config, ExperimentFromToml) {
  const auto cfg = Config::parse_toml(R"(
samplers = ["ssgld", "spgld"]
tau = [0.5]
batches = ["N", "N/5"]
replications = 4
iterations = 1000
start = "map"
[prior]
name = "p1"
[dataset.synthetic]
rows = 50
cols = 4
[reference]
budget = 200000
seed = 9
)");
  const auto e = ExperimentConfig::from_config(cfg);
  EXPECT_EQ(e.samplers.size(), 2u);
  EXPECT_EQ(e.taus, std::vector<double>{0.5});
  EXPECT_EQ(e.prior.a1, 1.0);
  EXPECT_EQ(e.synthetic.rows, 50u);
  EXPECT_EQ(e.reference.budget, 200000u);
  EXPECT_EQ(e.reference.seed, 9u);
  EXPECT_EQ(e.start, "map");
  EXPECT_THROW(ExperimentConfig::from_config(Config::parse_toml("samplers = [\"prox-mala\"]")), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_config(Config::parse_toml("replications = 2.5")), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_config(Config::parse_toml("start = \"random\"")), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_config(Config::parse_toml("[reference]\nbudget = 10")), ConfigError);
}

TEST(Experiment, UlaErrorShrinksWithStepOnQuadraticPosterior) {
  // One replication, full batch, d = 1, h = 1: the ULA bias in E[x^2] is gamma / (2 - gamma).
  const auto p = make_composite(make_quadratic(Matrix::Identity(1, 1)));
  auto error = [&](double gamma) {
    RunConfig cfg;
    cfg.plan = StepPlan::constant(gamma, static_cast<std::size_t>(20.0 / gamma));
    cfg.iterations = static_cast<std::size_t>(2e4 / gamma);
    cfg.seed = 5;
    cfg.x0 = Vector::Zero(1);
    cfg.functionals = {{"x2", [](const Vector& x) { return x(0) * x(0); }}};
    return std::abs(run_ula(p, cfg).estimates[0].estimate - 1.0);
  };
  const double coarse = error(0.2), fine = error(0.05);
  EXPECT_NEAR(coarse, 0.2 / 1.8, 0.03);
  EXPECT_NEAR(fine, 0.05 / 1.95, 0.03);
  EXPECT_LT(fine, coarse);
}

TEST(Config, StepPlanFromToml) {
  const auto poly = plan_from_config(Config::parse_toml("[schedule]\nkind = \"poly\"\ngamma1 = 0.1\nalpha = 0.5\n"));
  EXPECT_DOUBLE_EQ(poly.gamma_at(4), 0.05);
  EXPECT_DOUBLE_EQ(poly.lambda_at(3), 0.05);
  const auto pw = plan_from_config(Config::parse_toml(
      "[schedule]\nkind = \"piecewise\"\ngamma1 = 0.2\nswitch_step = 10\ngamma2 = 0.01\nburn_in = 5\n"));
  EXPECT_DOUBLE_EQ(pw.gamma_at(10), 0.2);
  EXPECT_DOUBLE_EQ(pw.gamma_at(11), 0.01);
  EXPECT_DOUBLE_EQ(pw.lambda_at(11), 0.01);
  EXPECT_EQ(pw.burn_in, 5u);
  const auto cw = plan_from_config(
      Config::parse_toml("[schedule]\nkind = \"constant\"\ngamma1 = 0.3\nweights = \"constant\"\nlambda = 2\n"));
  EXPECT_DOUBLE_EQ(cw.gamma_at(7), 0.3);
  EXPECT_DOUBLE_EQ(cw.lambda_at(7), 2.0);
  EXPECT_THROW(plan_from_config(Config::parse_toml("[schedule]\nkind = \"exp\"\ngamma1 = 1\n")), ConfigError);
  EXPECT_THROW(plan_from_config(Config::parse_toml("[schedule]\nkind = \"poly\"\ngamma1 = 1\n")), ConfigError);
  EXPECT_THROW(plan_from_config(Config::parse_toml("[schedule]\ngamma1 = -1\n")), ConfigError);
  EXPECT_THROW(plan_from_config(Config::parse_toml("[schedule]\ngamma1 = 1\nburn_in = 1.5\n")), ConfigError);
}

TEST(Config, ConstantsFromToml) {
  const auto c = constants_from_config(Config::parse_toml("[constants]\nd = 3\nL = 2\nM = 1\nheuristic = true\n"));
  EXPECT_EQ(c.d, 3.0);
  EXPECT_EQ(c.L, 2.0);
  EXPECT_EQ(c.M, 1.0);
  EXPECT_FALSE(c.m.has_value());
  EXPECT_TRUE(c.heuristic);
  EXPECT_THROW(constants_from_config(Config::parse_toml("[constants]\nLip = 1\n")), ConfigError);
  EXPECT_THROW(constants_from_config(Config::parse_toml("[constants]\nL = -1\n")), ConfigError);
}

}  // namespace
}  // namespace langevin
