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

#ifndef LANGEVIN_BOUNDS_HPP_
#define LANGEVIN_BOUNDS_HPP_

// Non-asymptotic bound evaluation and step-size / iteration-count tuning
// rules for ULA, SSGLD and SPGLD.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "langevin/schedules.hpp"

namespace langevin {

/// Problem constants. Absent fields are unknown; rules that need them fail
/// with InsufficientConstants.
struct ProblemConstants {
  std::optional<double> d;
  std::optional<double> m;             // strong convexity of U (or U1)
  std::optional<double> L;             // gradient Lipschitz constant of U (or U1)
  std::optional<double> M;             // Lipschitz constant of U
  std::optional<double> M2;            // Lipschitz constant of U2
  std::optional<double> D2;            // uniform oracle variance bound
  std::optional<double> L_tilde;       // oracle cocoercivity constant
  std::optional<double> m1_tilde;      // strong cocoercivity pair (m1, L1)
  std::optional<double> L1_tilde;
  std::optional<double> upsilon_star;  // oracle variance at the minimizer
  std::optional<double> W0sq;          // squared W2 distance of the start to pi
  std::optional<double> eta;           // linear growth U(x) - U(x*) >= eta |x - x*| outside a ball
  std::optional<double> M_eta;         // radius of that ball
  std::optional<double> R0;            // E|X - x*|^2 under the start
  /// Set when a constant (typically M) was supplied without a proof that it holds.
  bool heuristic = false;

  static const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"d",  "m",            "L",    "M",   "M2",    "D2", "L_tilde", "m1_tilde",
                                            "L1_tilde", "upsilon_star", "W0sq", "eta", "M_eta", "R0"};
    return n;
  }
  std::optional<double>& field(const std::string& name);
  const std::optional<double>& field(const std::string& name) const {
    return const_cast<ProblemConstants*>(this)->field(name);
  }
  void set(const std::string& name, double v) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("constant '" + name + "' must be finite and >= 0");
    field(name) = v;
  }
};

inline std::optional<double>& ProblemConstants::field(const std::string& name) {
  if (name == "d") return d;
  if (name == "m") return m;
  if (name == "L") return L;
  if (name == "M") return M;
  if (name == "M2") return M2;
  if (name == "D2") return D2;
  if (name == "L_tilde") return L_tilde;
  if (name == "m1_tilde") return m1_tilde;
  if (name == "L1_tilde") return L1_tilde;
  if (name == "upsilon_star") return upsilon_star;
  if (name == "W0sq") return W0sq;
  if (name == "eta") return eta;
  if (name == "M_eta") return M_eta;
  if (name == "R0") return R0;
  throw std::invalid_argument("unknown constant '" + name + "'");
}

class InsufficientConstants : public std::invalid_argument {
 public:
  InsufficientConstants(const std::string& rule, const std::string& symbol)
      : std::invalid_argument("insufficient constants for '" + rule + "': missing " + symbol), symbol(symbol) {}
  std::string symbol;
};

struct BoundReport {
  std::string kind;  // "tune", "bound" or "moment"
  std::string rule;
  std::map<std::string, double> inputs;
  std::map<std::string, double> outputs;
  std::map<std::string, bool> flags;
  std::vector<std::string> warnings;
  bool heuristic = false;

  double out(const std::string& key) const {
    auto it = outputs.find(key);
    if (it == outputs.end()) throw std::out_of_range("BoundReport '" + rule + "' has no output '" + key + "'");
    return it->second;
  }
  bool valid() const {
    return std::all_of(flags.begin(), flags.end(), [](const auto& kv) { return kv.second; });
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["rule"] = rule;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["flags"] = flags;
    j["warnings"] = warnings;
    j["heuristic"] = heuristic;
    j["valid"] = valid();
    return j;
  }
};

/// ceil(x), except that values within 1e-9 (relative) of an integer round to it.
inline double ceil_guarded(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return r;
  return std::ceil(x);
}

namespace detail {

class Need {
 public:
  Need(const ProblemConstants& c, std::string rule, BoundReport& report)
      : c_(c), rule_(std::move(rule)), report_(report) {}
  double operator()(const char* symbol) const {
    const auto& v = c_.field(symbol);
    if (!v) throw InsufficientConstants(rule_, symbol);
    report_.inputs[symbol] = *v;
    return *v;
  }
  std::optional<double> maybe(const char* symbol) const {
    const auto& v = c_.field(symbol);
    if (v) report_.inputs[symbol] = *v;
    return v;
  }

 private:
  const ProblemConstants& c_;
  std::string rule_;
  BoundReport& report_;
};

inline void require_positive(const std::string& rule, const char* symbol, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("'" + rule + "' requires " + symbol + " > 0");
}

}  // namespace detail

/// Upper bound on the second moment of pi about x*: min of d/m (m > 0) and
/// 2 d (1 + d) / eta^2 + M_eta^2 (when the growth constants are known).
inline BoundReport moment_bound_report(const ProblemConstants& c) {
  BoundReport r;
  r.kind = "moment";
  r.rule = "moment-bound";
  detail::Need need(c, r.rule, r);
  const double d = need("d");
  std::optional<double> best;
  if (auto m = need.maybe("m"); m && *m > 0.0) {
    r.outputs["strongly_convex"] = d / *m;
    best = d / *m;
  }
  if (auto eta = need.maybe("eta"); eta && *eta > 0.0) {
    const double me = c.M_eta.value_or(0.0);
    r.inputs["M_eta"] = me;
    const double v = 2.0 * d * (1.0 + d) / (*eta * *eta) + me * me;
    r.outputs["growth"] = v;
    best = best ? std::min(*best, v) : v;
  }
  if (!best) throw InsufficientConstants(r.rule, "m > 0 or eta");
  r.outputs["value"] = *best;
  r.heuristic = c.heuristic;
  return r;
}

inline double moment_bound(const ProblemConstants& c) { return moment_bound_report(c).out("value"); }

// ---------------------------------------------------------------------------
// Tuning rules.

inline const std::vector<std::string>& tuning_rules() {
  static const std::vector<std::string> r{"ula-convex",      "ula-strconv-w2",   "ula-strconv-kl",
                                          "ssgld-uniformD",  "ssgld-coco",       "spgld-uniformD",
                                          "spgld-coco",      "spgld-strconv-uniformD", "spgld-strconv-w2",
                                          "spgld-strconv-kl"};
  return r;
}

namespace detail {

struct DeltaTerms {
  double m_tilde, gamma_cap, D1, D2, gamma;
};

// Step size of the strongly convex SPGLD rule: Delta_1, Delta_2 evaluated at
// the largest admissible step, which bounds them for every smaller step.
inline DeltaTerms spgld_delta_gamma(const Need& need, double eps) {
  const double d = need("d"), m = need("m"), L = need("L"), M2 = need("M2");
  const double m1 = need("m1_tilde"), L1 = need("L1_tilde"), ups = need("upsilon_star");
  require_positive("spgld-strconv", "m", m);
  require_positive("spgld-strconv", "m1_tilde", m1);
  require_positive("spgld-strconv", "L", L);
  require_positive("spgld-strconv", "L1_tilde", L1);
  DeltaTerms t{};
  t.m_tilde = std::min(m, m1);
  t.gamma_cap = std::min(1.0 / L, 1.0 / (2.0 * L1));
  const double c = 2.0 * L1 * (1.0 + t.gamma_cap * L) / t.m_tilde;
  t.D1 = 2.0 * (L * d + M2 * M2) / m + c * d;
  t.D2 = c * ups;
  t.gamma = std::min({eps / (4.0 * t.D1), t.D2 > 0.0 ? std::sqrt(eps / (4.0 * t.D2)) : std::numeric_limits<double>::infinity(),
                      1.0 / L, 1.0 / (2.0 * L1)});
  return t;
}

// Step size of the cocoercive SPGLD rule.
inline double spgld_coco_gamma(const Need& need, double eps) {
  const double d = need("d"), L = need("L"), M2 = need("M2"), Lt = need("L_tilde"), ups = need("upsilon_star");
  require_positive("spgld-coco", "L", L);
  require_positive("spgld-coco", "L_tilde", Lt);
  const double root = ups > 0.0 ? std::sqrt(eps / (8.0 * Lt * ups)) : std::numeric_limits<double>::infinity();
  return std::min({eps / (4.0 * M2 * M2 + 4.0 * L * d + 8.0 * Lt * d), root, 1.0 / L, 1.0 / (2.0 * Lt)});
}

}  // namespace detail

/// Step size gamma and iteration counts that guarantee accuracy eps. The
/// largest admissible gamma and smallest n are returned.
inline BoundReport tune(const std::string& rule, const ProblemConstants& c, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("tune: eps must be finite and > 0");
  BoundReport r;
  r.kind = "tune";
  r.rule = rule;
  r.inputs["eps"] = eps;
  r.heuristic = c.heuristic;
  detail::Need need(c, rule, r);

  if (rule == "ula-convex") {
    const double d = need("d"), L = need("L"), W0 = need("W0sq");
    detail::require_positive(rule, "L", L);
    const double g = std::min(eps / (2.0 * L * d), 1.0 / L);
    r.outputs["gamma"] = g;
    r.outputs["n"] = ceil_guarded(W0 / (g * eps));
  } else if (rule == "ula-strconv-w2") {
    const double d = need("d"), L = need("L"), m = need("m"), W0 = need("W0sq");
    detail::require_positive(rule, "m", m);
    const double g = std::min(m * eps / (4.0 * L * d), 1.0 / L);
    r.outputs["gamma"] = g;
    r.outputs["n"] = std::max(0.0, ceil_guarded(std::log(2.0 * W0 / eps) / (g * m)));
  } else if (rule == "ula-strconv-kl") {
    const double d = need("d"), L = need("L"), m = need("m"), W0 = need("W0sq");
    detail::require_positive(rule, "m", m);
    const double g = std::min(m * eps / (4.0 * L * d), 1.0 / L);
    const double gt = std::min(eps / (2.0 * L * d), 1.0 / L);
    r.outputs["gamma"] = g;
    r.outputs["N"] = std::max(0.0, ceil_guarded(std::log(2.0 * W0 / eps) / (g * m)));
    r.outputs["gamma_tilde"] = gt;
    r.outputs["n"] = ceil_guarded(1.0 / gt);
  } else if (rule == "ssgld-uniformD") {
    const double M = need("M"), D2 = need("D2"), W0 = need("W0sq");
    if (!(M * M + D2 > 0.0)) throw std::invalid_argument("'" + rule + "' requires M^2 + D^2 > 0");
    const double g = eps / (M * M + D2);
    r.outputs["gamma"] = g;
    r.outputs["n"] = ceil_guarded(W0 / (g * eps));
  } else if (rule == "ssgld-coco") {
    const double d = need("d"), M = need("M"), Lt = need("L_tilde"), ups = need("upsilon_star");
    const double W0 = need("W0sq"), R = need("R0");
    detail::require_positive(rule, "L_tilde", Lt);
    const double root = ups > 0.0 ? std::sqrt(eps / (4.0 * Lt * ups)) : std::numeric_limits<double>::infinity();
    const double g = std::min({eps / (2.0 * M * M + 4.0 * Lt * d), root, 1.0 / (2.0 * Lt)});
    r.outputs["gamma"] = g;
    r.outputs["n"] = 2.0 * std::max(ceil_guarded(W0 / (g * eps)), ceil_guarded(Lt * R / eps));
  } else if (rule == "spgld-uniformD") {
    const double d = need("d"), L = need("L"), M2 = need("M2"), D2 = need("D2"), W0 = need("W0sq");
    detail::require_positive(rule, "L", L);
    const double g = std::min(eps / (2.0 * (L * d + M2 * M2 + D2)), 1.0 / L);
    r.outputs["gamma"] = g;
    r.outputs["n"] = ceil_guarded(W0 / (g * eps));
  } else if (rule == "spgld-coco") {
    const double W0 = need("W0sq"), R = need("R0");
    const double g = detail::spgld_coco_gamma(need, eps);
    const double Lt = *c.L_tilde;
    r.outputs["gamma"] = g;
    r.outputs["n"] = 2.0 * std::max(ceil_guarded(W0 / (g * eps)), ceil_guarded(2.0 * Lt * R / eps));
  } else if (rule == "spgld-strconv-uniformD") {
    const double d = need("d"), L = need("L"), m = need("m"), M2 = need("M2"), D2 = need("D2"), W0 = need("W0sq");
    detail::require_positive(rule, "m", m);
    detail::require_positive(rule, "L", L);
    const double g = std::min(m * eps / (4.0 * (L * d + D2 + M2 * M2)), 1.0 / L);
    r.outputs["gamma"] = g;
    r.outputs["n"] = std::max(0.0, ceil_guarded(std::log(2.0 * W0 / eps) / (g * m)));
  } else if (rule == "spgld-strconv-w2") {
    const double W0 = need("W0sq"), R = need("R0");
    const auto t = detail::spgld_delta_gamma(need, eps);
    const double L = *c.L, L1 = *c.L1_tilde, m = *c.m;
    const double D3 = t.gamma * L1 * (1.0 + t.gamma * L) * R;
    r.outputs["gamma"] = t.gamma;
    r.outputs["m_tilde"] = t.m_tilde;
    r.outputs["Delta1"] = t.D1;
    r.outputs["Delta2"] = t.D2;
    r.outputs["Delta3"] = D3;
    const double n1 = std::max(0.0, ceil_guarded(std::log(4.0 * W0 / eps) / (t.gamma * m)));
    const double n2 = D3 > 0.0 ? std::max(0.0, ceil_guarded(std::log(4.0 * D3 / eps) / (t.gamma * t.m_tilde))) : 0.0;
    r.outputs["n"] = std::max(n1, n2);
  } else if (rule == "spgld-strconv-kl") {
    const double W0 = need("W0sq"), R = need("R0");
    need("L_tilde");
    const auto t = detail::spgld_delta_gamma(need, eps);
    const double L = *c.L, L1 = *c.L1_tilde, m = *c.m, Lt = *c.L_tilde;
    const double D3 = t.gamma * L1 * (1.0 + t.gamma * L) * R;
    r.outputs["gamma"] = t.gamma;
    r.outputs["m_tilde"] = t.m_tilde;
    r.outputs["Delta1"] = t.D1;
    r.outputs["Delta2"] = t.D2;
    r.outputs["Delta3"] = D3;
    const double n1 = std::max(0.0, ceil_guarded(std::log(4.0 * W0 / eps) / (t.gamma * m)));
    const double n2 = D3 > 0.0 ? std::max(0.0, ceil_guarded(std::log(4.0 * D3 / eps) / (t.gamma * t.m_tilde))) : 0.0;
    r.outputs["N"] = std::max(n1, n2);
    const double gt = detail::spgld_coco_gamma(need, eps);
    r.outputs["gamma_tilde"] = gt;
    // Second moment after burn-in: E|X - x*|^2 <= 2 W2^2(., pi) + 2 int |x - x*|^2 dpi.
    const double RN = 2.0 * eps + 2.0 * moment_bound(c);
    r.outputs["R_N"] = RN;
    r.outputs["n"] = 2.0 * std::max(ceil_guarded(1.0 / gt), ceil_guarded(2.0 * Lt * RN / eps));
  } else {
    throw std::invalid_argument("unknown tuning rule '" + rule + "'");
  }
  for (const auto& [k, v] : r.outputs)
    if (!std::isfinite(v)) r.warnings.push_back("output '" + k + "' is not finite");
  r.flags["finite"] = r.warnings.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Theorem right-hand sides.

inline const std::vector<std::string>& bound_theorems() {
  static const std::vector<std::string> t{"ula-avg-kl", "ula-w2", "ula-bias", "ssgld-kl", "spgld-kl", "spgld-w2",
                                          "ula-rate"};
  return t;
}

/// bound_k = prod_{i<=k}(1 - m gamma_i) W0^2 + 2 L d sum_j gamma_j^2 prod_{j<i<=k}(1 - m gamma_i),
/// for k = 0..horizon.
inline std::vector<double> ula_w2_bound_series(double m, double L, double d, double W0sq, const StepPlan& plan,
                                               std::size_t horizon) {
  std::vector<double> b(horizon + 1);
  b[0] = W0sq;
  for (std::size_t k = 1; k <= horizon; ++k) {
    const double g = plan.gamma_at(k);
    b[k] = (1.0 - m * g) * b[k - 1] + 2.0 * L * d * g * g;
  }
  return b;
}

namespace detail {
inline double variance_at(const std::optional<std::vector<double>>& ups, std::optional<double> D2, std::size_t i,
                          const std::string& rule) {
  if (ups) {
    if (i >= ups->size()) throw std::invalid_argument("'" + rule + "': variance series shorter than the horizon");
    return (*ups)[i];
  }
  if (!D2) throw InsufficientConstants(rule, "D2 or a variance series");
  return *D2;
}
}  // namespace detail

/// Right-hand side of a convergence theorem for the plan over n = horizon
/// averaged iterates after plan.burn_in. W0sq is the squared W2 distance of
/// the law at the start of averaging (after the initial prox for SPGLD, after
/// the initial subgradient step for SSGLD). `upsilon` holds per-iterate
/// oracle variances for k = N+1..N+n; without it the uniform bound D2 is used.
inline BoundReport bound_rhs(const std::string& theorem, const ProblemConstants& c, const StepPlan& plan,
                             std::size_t horizon, const std::optional<std::vector<double>>& upsilon = std::nullopt) {
  plan.validate();
  BoundReport r;
  r.kind = "bound";
  r.rule = theorem;
  r.heuristic = c.heuristic;
  detail::Need need(c, theorem, r);
  const std::size_t N = plan.burn_in;
  const std::size_t n = horizon;
  r.inputs["burn_in"] = static_cast<double>(N);
  r.inputs["horizon"] = static_cast<double>(n);
  r.inputs["gamma_1"] = plan.gamma_at(1);
  auto Lambda = [&] { return cumulative(plan, N, n).Lambda; };
  auto flag_admissible = [&](Variant v, double m) {
    const bool ok = check_admissible(plan, m, v, N + n);
    r.flags["admissible"] = ok;
    if (!ok) r.warnings.push_back("step plan violates the theorem's step/weight condition");
  };

  if (theorem == "ula-avg-kl" || theorem == "ula-rate") {
    if (n == 0) throw std::invalid_argument("bound_rhs: horizon must be >= 1");
    const double d = need("d"), L = need("L"), W = need("W0sq");
    const double m = need.maybe("m").value_or(0.0);
    flag_admissible(Variant::ULA, m);
    r.flags["gamma_1<=1/L"] = plan.gamma_at(1) <= (1.0 / L) * (1.0 + 1e-12);
    const double Lam = Lambda();
    const double g1 = plan.gamma_at(N + 1);
    double s = 0.0;
    for (std::size_t k = N + 1; k <= N + n; ++k) s += plan.gamma_at(k) * plan.lambda_at(k);
    const double init = plan.lambda_at(N + 1) * (1.0 - m * g1) * W / (2.0 * g1 * Lam);
    const double noise = L * d * s / Lam;
    r.outputs["init_term"] = init;
    r.outputs["discretization_term"] = noise;
    r.outputs["kl_bound"] = init + noise;
    r.outputs["Lambda"] = Lam;
    if (theorem == "ula-rate") {
      if (plan.gamma.kind != Sequence::Kind::Poly)
        throw std::invalid_argument("'ula-rate' needs a polynomial step plan");
      const double a = plan.gamma.alpha;
      const double nn = static_cast<double>(n);
      const double env = std::abs(a - 0.5) < 1e-12 ? (std::log(nn) + 1.0) / std::sqrt(nn)
                                                   : std::max(std::pow(nn, a - 1.0), std::pow(nn, -a));
      r.outputs["rate_envelope"] = env;
      r.outputs["bound_over_envelope"] = (init + noise) / env;
    }
  } else if (theorem == "ula-w2") {
    const double d = need("d"), L = need("L"), m = need("m"), W = need("W0sq");
    r.flags["gamma_1<=1/L"] = plan.gamma_at(1) <= (1.0 / L) * (1.0 + 1e-12);
    r.flags["m>0"] = m > 0.0;
    const auto b = ula_w2_bound_series(m, L, d, W, plan, n);
    r.outputs["w2sq_bound"] = b.back();
  } else if (theorem == "ula-bias") {
    const double d = need("d"), L = need("L");
    const double g = plan.gamma_at(1);
    if (plan.gamma.kind != Sequence::Kind::Constant) r.warnings.push_back("bias bound uses gamma_1 of a non-constant plan");
    r.flags["gamma<=1/L"] = g <= (1.0 / L) * (1.0 + 1e-12);
    r.outputs["kl_bound"] = L * d * g;
    r.outputs["tv_bound"] = std::min(1.0, std::sqrt(2.0 * L * d * g));
    if (auto m = need.maybe("m"); m && *m > 0.0) r.outputs["w2sq_bound"] = 2.0 * L * d * g / *m;
  } else if (theorem == "ssgld-kl") {
    if (n == 0) throw std::invalid_argument("bound_rhs: horizon must be >= 1");
    const double M = need("M"), W = need("W0sq");
    flag_admissible(Variant::SGLD, 0.0);
    const double Lam = Lambda();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = N + 1 + i;
      s += plan.gamma_at(k + 1) * plan.lambda_at(k) * (M * M + detail::variance_at(upsilon, need.maybe("D2"), i, theorem));
    }
    const double init = plan.lambda_at(N + 1) * W / (2.0 * plan.gamma_at(N + 2) * Lam);
    r.outputs["init_term"] = init;
    r.outputs["noise_term"] = s / (2.0 * Lam);
    r.outputs["kl_bound"] = init + s / (2.0 * Lam);
  } else if (theorem == "spgld-kl") {
    if (n == 0) throw std::invalid_argument("bound_rhs: horizon must be >= 1");
    const double d = need("d"), L = need("L"), M2 = need("M2"), W = need("W0sq");
    flag_admissible(Variant::SGLD, 0.0);
    r.flags["gamma_1<=1/L"] = plan.gamma_at(1) <= (1.0 / L) * (1.0 + 1e-12);
    const double Lam = Lambda();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = N + 1 + i;
      const double g = plan.gamma_at(k + 1);
      const double v = detail::variance_at(upsilon, need.maybe("D2"), i, theorem);
      s += plan.lambda_at(k) * g * (2.0 * L * d + (1.0 + g * L) * v + 2.0 * M2 * M2);
    }
    const double init = plan.lambda_at(N + 1) * W / (2.0 * plan.gamma_at(N + 2) * Lam);
    r.outputs["init_term"] = init;
    r.outputs["noise_term"] = s / (2.0 * Lam);
    r.outputs["kl_bound"] = init + s / (2.0 * Lam);
  } else if (theorem == "spgld-w2") {
    const double d = need("d"), L = need("L"), m = need("m"), M2 = need("M2"), W = need("W0sq");
    r.flags["m>0"] = m > 0.0;
    r.flags["gamma_1<=1/L"] = plan.gamma_at(1) <= (1.0 / L) * (1.0 + 1e-12);
    double b = W;
    for (std::size_t k = 1; k <= n; ++k) {
      const double g = plan.gamma_at(k + 1);
      const double v = detail::variance_at(upsilon, need.maybe("D2"), k - 1, theorem);
      b = (1.0 - m * g) * b + g * g * (2.0 * L * d + (1.0 + g * L) * v + 2.0 * M2 * M2);
    }
    r.outputs["w2sq_bound"] = b;
  } else {
    throw std::invalid_argument("unknown theorem '" + theorem + "'");
  }
  if (upsilon) r.inputs["variance_series_length"] = static_cast<double>(upsilon->size());
  return r;
}

}  // namespace langevin

#endif  // LANGEVIN_BOUNDS_HPP_
