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

#ifndef LANGEVIN_SAMPLERS_HPP_
#define LANGEVIN_SAMPLERS_HPP_

// ULA, SSGLD, SPGLD and a prox-MALA reference chain, plus a driver that
// forms weighted ergodic averages over the iterates after burn-in.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "langevin/model.hpp"
#include "langevin/oracles.hpp"
#include "langevin/rng.hpp"
#include "langevin/schedules.hpp"

namespace langevin {

enum class SamplerKind { ULA, SSGLD, SPGLD, ProxMALA };

inline const char* to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::ULA: return "ula";
    case SamplerKind::SSGLD: return "ssgld";
    case SamplerKind::SPGLD: return "spgld";
    case SamplerKind::ProxMALA: return "prox-mala";
  }
  return "?";
}

inline SamplerKind sampler_from_string(const std::string& s) {
  if (s == "ula") return SamplerKind::ULA;
  if (s == "ssgld") return SamplerKind::SSGLD;
  if (s == "spgld") return SamplerKind::SPGLD;
  if (s == "prox-mala" || s == "proxmala") return SamplerKind::ProxMALA;
  throw std::invalid_argument("unknown sampler '" + s + "' (expected ula, ssgld, spgld, prox-mala)");
}

class ChainDiverged : public std::runtime_error {
 public:
  ChainDiverged(std::size_t k, const std::string& sampler)
      : std::runtime_error(sampler + " chain produced a non-finite state at iteration " + std::to_string(k)),
        iteration(k) {}
  std::size_t iteration;
};

struct ChainState {
  std::size_t k = 0;
  Vector x;
  RngStream rng;
  OracleWorkspace ws;
  double effective_passes = 0.0;

  // Scratch buffers.
  Vector g, y;
  // prox-MALA cache: U(x) and the proposal mean at x.
  bool mala_cached = false;
  double mala_u = 0.0;
  Vector mala_mean;
  std::size_t mala_accepted = 0;
  std::size_t mala_proposed = 0;

  ChainState() = default;
  ChainState(Vector x0, RngStream r) : x(std::move(x0)), rng(r) {}
};

namespace detail {
inline void add_noise(ChainState& s, double gamma) {
  const double sd = std::sqrt(2.0 * gamma);
  for (Eigen::Index i = 0; i < s.x.size(); ++i) s.x(i) += sd * s.rng.normal();
}
inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite and > 0");
}
}  // namespace detail

/// x' = x - gamma grad U(x) + sqrt(2 gamma) G.
inline void ula_step(const CompositePotential& p, ChainState& s, double gamma) {
  if (p.u2) throw std::invalid_argument("ula_step: potential has a non-smooth part");
  detail::require_positive(gamma, "ula_step: gamma");
  if (p.u1.L > 0.0 && gamma > (1.0 / p.u1.L) * (1.0 + 1e-12))
    throw std::invalid_argument("ula_step: gamma = " + std::to_string(gamma) + " exceeds 1/L = " +
                                std::to_string(1.0 / p.u1.L));
  check_dim("ula_step", p.dim(), s.x.size());
  s.g.resize(s.x.size());
  p.u1.grad(s.x, s.g);
  s.x.noalias() -= gamma * s.g;
  detail::add_noise(s, gamma);
  s.effective_passes += 1.0;
  ++s.k;
}

/// x' = x - gamma_drift Theta(x, Z) + sqrt(2 gamma_noise) G.
inline void ssgld_step(const StochasticGradient& oracle, ChainState& s, double gamma_drift, double gamma_noise) {
  detail::require_positive(gamma_drift, "ssgld_step: drift step");
  detail::require_positive(gamma_noise, "ssgld_step: noise step");
  check_dim("ssgld_step", oracle.dim, s.x.size());
  s.g.resize(s.x.size());
  oracle.draw(s.x, s.rng, s.ws, s.g);
  s.x.noalias() -= gamma_drift * s.g;
  detail::add_noise(s, gamma_noise);
  s.effective_passes += oracle.pass_fraction;
  ++s.k;
}

/// y = prox_{gamma_prox U2}(x); x' = y - gamma_grad Theta1(y, Z) + sqrt(2 gamma_grad) G.
/// Without U2 the prox is the identity.
inline void spgld_step(const CompositePotential& p, const StochasticGradient& oracle, ChainState& s,
                       double gamma_prox, double gamma_grad) {
  detail::require_positive(gamma_prox, "spgld_step: prox step");
  detail::require_positive(gamma_grad, "spgld_step: gradient step");
  check_dim("spgld_step", p.dim(), s.x.size());
  if (p.u2) {
    p.u2->prox(gamma_prox, s.x, s.y);
    s.x.swap(s.y);
  }
  s.g.resize(s.x.size());
  oracle.draw(s.x, s.rng, s.ws, s.g);
  s.x.noalias() -= gamma_grad * s.g;
  detail::add_noise(s, gamma_grad);
  s.effective_passes += oracle.pass_fraction;
  ++s.k;
}

/// Proposal mean prox_{gamma U2}(x) - gamma grad U1(prox_{gamma U2}(x)).
inline Vector prox_mala_mean(const CompositePotential& p, const Vector& x, double gamma) {
  Vector y = p.u2 ? p.u2->proximal(gamma, x) : x;
  Vector g(y.size());
  p.u1.grad(y, g);
  y.noalias() -= gamma * g;
  return y;
}

/// log of the Metropolis-Hastings ratio for a move x -> xp with proposal
/// N(prox_mala_mean(x), 2 gamma I).
inline double prox_mala_log_ratio(double u_x, const Vector& x, const Vector& mean_x, double u_xp,
                                  const Vector& xp, const Vector& mean_xp, double gamma) {
  const double fwd = (xp - mean_x).squaredNorm();
  const double bwd = (x - mean_xp).squaredNorm();
  return (u_x - u_xp) + (fwd - bwd) / (4.0 * gamma);
}

inline double prox_mala_log_accept(const CompositePotential& p, const Vector& x, const Vector& xp, double gamma) {
  const double r = prox_mala_log_ratio(p.value(x), x, prox_mala_mean(p, x, gamma), p.value(xp), xp,
                                       prox_mala_mean(p, xp, gamma), gamma);
  return std::min(0.0, r);
}

/// One prox-MALA transition. Returns true when the proposal is accepted.
inline bool prox_mala_step(const CompositePotential& p, ChainState& s, double gamma) {
  detail::require_positive(gamma, "prox_mala_step: gamma");
  check_dim("prox_mala_step", p.dim(), s.x.size());
  if (!s.mala_cached) {
    s.mala_u = p.value(s.x);
    s.mala_mean = prox_mala_mean(p, s.x, gamma);
    s.mala_cached = true;
  }
  const double sd = std::sqrt(2.0 * gamma);
  s.y.resize(s.x.size());
  for (Eigen::Index i = 0; i < s.x.size(); ++i) s.y(i) = s.mala_mean(i) + sd * s.rng.normal();
  const double u_y = p.value(s.y);
  Vector mean_y = prox_mala_mean(p, s.y, gamma);
  const double log_r = prox_mala_log_ratio(s.mala_u, s.x, s.mala_mean, u_y, s.y, mean_y, gamma);
  const double u = s.rng.uniform();
  const bool accept = std::isfinite(log_r) && (log_r >= 0.0 || std::log(u) < log_r);
  if (accept) {
    s.x.swap(s.y);
    s.mala_u = u_y;
    s.mala_mean.swap(mean_y);
    ++s.mala_accepted;
  }
  ++s.mala_proposed;
  s.effective_passes += 1.0;
  ++s.k;
  return accept;
}

/// Drops the prox-MALA cache (call after changing gamma).
inline void reset_mala_cache(ChainState& s) { s.mala_cached = false; }

class TuningFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MalaTuning {
  double gamma = 0.0;
  double acceptance = 0.0;  // measured on the final fixed-gamma window
  std::size_t attempts = 0;
};

/// Robbins-Monro adaptation of log gamma toward a target acceptance rate,
/// followed by a fixed-gamma verification window. The chain state is
/// advanced in place.
inline MalaTuning tune_prox_mala(const CompositePotential& p, ChainState& s, double gamma0,
                                 double target = 0.5, double tolerance = 0.05,
                                 std::size_t adapt_steps = 20'000, std::size_t check_steps = 10'000,
                                 std::size_t max_attempts = 5) {
  detail::require_positive(gamma0, "tune_prox_mala: gamma0");
  double log_gamma = std::log(gamma0);
  MalaTuning out;
  for (out.attempts = 1; out.attempts <= max_attempts; ++out.attempts) {
    for (std::size_t t = 1; t <= adapt_steps; ++t) {
      reset_mala_cache(s);
      const bool acc = prox_mala_step(p, s, std::exp(log_gamma));
      log_gamma += 2.0 * ((acc ? 1.0 : 0.0) - target) / std::pow(static_cast<double>(t) + 10.0, 0.6);
      log_gamma = std::clamp(log_gamma, -60.0, 10.0);
    }
    const double gamma = std::exp(log_gamma);
    reset_mala_cache(s);
    std::size_t accepted = 0;
    for (std::size_t t = 0; t < check_steps; ++t) accepted += prox_mala_step(p, s, gamma) ? 1 : 0;
    out.gamma = gamma;
    out.acceptance = static_cast<double>(accepted) / static_cast<double>(check_steps);
    if (std::abs(out.acceptance - target) <= tolerance) return out;
    adapt_steps *= 2;
  }
  throw TuningFailure("prox-MALA tuning did not reach acceptance " + std::to_string(target) + " +/- " +
                      std::to_string(tolerance) + " (last " + std::to_string(out.acceptance) + ")");
}

// ---------------------------------------------------------------------------
// Chain driver.

struct Functional {
  std::string name;
  std::function<double(const Vector&)> f;
};

struct RunConfig {
  SamplerKind kind = SamplerKind::ULA;
  /// Burn-in is taken from plan.burn_in.
  StepPlan plan;
  std::size_t iterations = 1;  // n, iterates averaged after burn-in
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  Vector x0;
  std::vector<Functional> functionals;
  /// 0 disables the trace; otherwise X_k is stored when k % stride == 0.
  std::size_t trace_stride = 0;
  /// Post-burn-in counts at which running estimates are snapshotted.
  std::vector<std::size_t> checkpoints;
};

struct Estimate {
  std::string functional;
  double estimate = 0.0;
  double weight_total = 0.0;
  double effective_passes = 0.0;
};

struct Checkpoint {
  std::size_t n = 0;  // averaged iterates so far
  std::size_t k = 0;  // chain iteration
  double effective_passes = 0.0;
  std::vector<double> estimates;  // one per functional
};

struct TraceRow {
  std::size_t k = 0;
  double weight = 0.0;  // lambda_k after burn-in, 0 during burn-in
  Vector x;
};

struct RunResult {
  ChainState state;
  std::vector<Estimate> estimates;
  std::vector<Checkpoint> checkpoints;
  std::vector<TraceRow> trace;
  double weight_total = 0.0;
  bool admissible = true;
  double acceptance_rate = 0.0;  // prox-MALA only
};

namespace detail {
struct Compensated {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};
}  // namespace detail

/// Runs burn-in plus `iterations` steps and returns Lambda^{-1} sum lambda_k f(X_k)
/// over k = N+1..N+n for each registered functional.
inline RunResult run_chain(const RunConfig& cfg, const CompositePotential& p,
                           const StochasticGradient* oracle = nullptr) {
  if (cfg.iterations == 0) throw std::invalid_argument("run_chain: iterations must be >= 1");
  cfg.plan.validate();
  check_dim("run_chain x0", p.dim(), cfg.x0.size());
  if ((cfg.kind == SamplerKind::SSGLD || cfg.kind == SamplerKind::SPGLD) && oracle == nullptr)
    throw std::invalid_argument(std::string("run_chain: ") + to_string(cfg.kind) + " needs a gradient oracle");
  if (cfg.kind == SamplerKind::ULA && p.u2)
    throw std::invalid_argument("run_chain: ULA requires a smooth potential");

  RunResult r;
  const std::size_t N = cfg.plan.burn_in;
  const std::size_t total = N + cfg.iterations;
  const Variant variant = cfg.kind == SamplerKind::ULA ? Variant::ULA : Variant::SGLD;
  if (cfg.kind != SamplerKind::ProxMALA) r.admissible = check_admissible(cfg.plan, p.u1.m, variant, total);

  ChainState& s = r.state;
  s = ChainState(cfg.x0, RngStream(cfg.seed, cfg.stream));
  const std::size_t nf = cfg.functionals.size();
  std::vector<detail::Compensated> acc(nf);
  detail::Compensated weight;
  std::vector<std::size_t> checkpoints = cfg.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  std::size_t next_cp = 0;

  for (std::size_t k = 1; k <= total; ++k) {
    switch (cfg.kind) {
      case SamplerKind::ULA:
        ula_step(p, s, cfg.plan.gamma_at(k));
        break;
      case SamplerKind::SSGLD:
        ssgld_step(*oracle, s, cfg.plan.gamma_at(k), cfg.plan.gamma_at(k + 1));
        break;
      case SamplerKind::SPGLD:
        spgld_step(p, *oracle, s, cfg.plan.gamma_at(k), cfg.plan.gamma_at(k + 1));
        break;
      case SamplerKind::ProxMALA: {
        const double g = cfg.plan.gamma_at(k);
        if (k > 1 && g != cfg.plan.gamma_at(k - 1)) reset_mala_cache(s);
        prox_mala_step(p, s, g);
        break;
      }
    }
    if (!s.x.allFinite()) throw ChainDiverged(k, to_string(cfg.kind));
    const bool averaged = k > N;
    const double lam = averaged ? cfg.plan.lambda_at(k) : 0.0;
    if (averaged) {
      weight.add(lam);
      for (std::size_t j = 0; j < nf; ++j) acc[j].add(lam * cfg.functionals[j].f(s.x));
    }
    if (cfg.trace_stride > 0 && k % cfg.trace_stride == 0) r.trace.push_back({k, lam, s.x});
    const std::size_t n_avg = averaged ? k - N : 0;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= n_avg) {
      if (checkpoints[next_cp] == n_avg) {
        Checkpoint cp{n_avg, k, s.effective_passes, std::vector<double>(nf)};
        for (std::size_t j = 0; j < nf; ++j) cp.estimates[j] = acc[j].value() / weight.value();
        r.checkpoints.push_back(std::move(cp));
      }
      ++next_cp;
    }
  }
  r.weight_total = weight.value();
  for (std::size_t j = 0; j < nf; ++j)
    r.estimates.push_back({cfg.functionals[j].name, acc[j].value() / r.weight_total, r.weight_total,
                           s.effective_passes});
  if (s.mala_proposed > 0)
    r.acceptance_rate = static_cast<double>(s.mala_accepted) / static_cast<double>(s.mala_proposed);
  return r;
}

inline RunResult run_ula(const CompositePotential& p, RunConfig cfg) {
  cfg.kind = SamplerKind::ULA;
  return run_chain(cfg, p);
}
inline RunResult run_ssgld(const CompositePotential& p, const StochasticGradient& oracle, RunConfig cfg) {
  cfg.kind = SamplerKind::SSGLD;
  return run_chain(cfg, p, &oracle);
}
inline RunResult run_spgld(const CompositePotential& p, const StochasticGradient& oracle, RunConfig cfg) {
  cfg.kind = SamplerKind::SPGLD;
  return run_chain(cfg, p, &oracle);
}
inline RunResult run_prox_mala(const CompositePotential& p, RunConfig cfg) {
  cfg.kind = SamplerKind::ProxMALA;
  return run_chain(cfg, p);
}

}  // namespace langevin

#endif  // LANGEVIN_SAMPLERS_HPP_
