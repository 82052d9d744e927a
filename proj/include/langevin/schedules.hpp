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

#ifndef LANGEVIN_SCHEDULES_HPP_
#define LANGEVIN_SCHEDULES_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace langevin {

/// Positive sequence indexed by k >= 1.
struct Sequence {
  enum class Kind { Constant, Poly, Piecewise };
  Kind kind = Kind::Constant;
  double c = 1.0;       // value (Constant), numerator (Poly), first phase (Piecewise)
  double alpha = 0.0;   // Poly exponent
  double offset = 0.0;  // Poly: c / (k + offset)^alpha
  std::size_t switch_step = 0;  // Piecewise: c for k <= switch_step, c2 after
  double c2 = 0.0;

  static Sequence constant(double v) { return {Kind::Constant, v}; }
  static Sequence poly(double c, double alpha, double offset = 0.0) {
    Sequence s{Kind::Poly, c};
    s.alpha = alpha;
    s.offset = offset;
    return s;
  }
  static Sequence piecewise(double first, std::size_t switch_step, double second) {
    Sequence s{Kind::Piecewise, first};
    s.switch_step = switch_step;
    s.c2 = second;
    return s;
  }

  double operator()(std::size_t k) const {
    switch (kind) {
      case Kind::Constant:
        return c;
      case Kind::Poly:
        return c / std::pow(static_cast<double>(k) + offset, alpha);
      case Kind::Piecewise:
        return k <= switch_step ? c : c2;
    }
    return c;
  }

  /// Throws unless the sequence is positive and non-increasing.
  void validate(const char* what) const {
    auto fail = [&](const std::string& msg) { throw std::invalid_argument(std::string(what) + ": " + msg); };
    if (!(c > 0.0) || !std::isfinite(c)) fail("leading value must be finite and > 0");
    if (kind == Kind::Poly) {
      if (!(alpha >= 0.0 && alpha <= 1.0)) fail("exponent must lie in [0, 1]");
      if (!(1.0 + offset > 0.0)) fail("offset must satisfy 1 + offset > 0");
    }
    if (kind == Kind::Piecewise) {
      if (!(c2 > 0.0) || !std::isfinite(c2)) fail("second-phase value must be finite and > 0");
      if (c2 > c) fail("second-phase value exceeds the first (sequence must be non-increasing)");
    }
  }
};

struct StepPlan {
  Sequence gamma = Sequence::constant(1e-2);
  /// Absent means lambda_k = gamma_k.
  std::optional<Sequence> lambda;
  std::size_t burn_in = 0;

  double gamma_at(std::size_t k) const { return gamma(k); }
  double lambda_at(std::size_t k) const { return lambda ? (*lambda)(k) : gamma(k); }

  static StepPlan constant(double g, std::size_t burn_in = 0) {
    StepPlan p;
    p.gamma = Sequence::constant(g);
    p.burn_in = burn_in;
    return p;
  }

  void validate() const {
    gamma.validate("step-size sequence");
    if (lambda) lambda->validate("weight sequence");
  }
  /// Also requires gamma_1 <= 1/L for a smooth potential with L > 0.
  void validate(double L) const {
    validate();
    if (L > 0.0 && gamma_at(1) > (1.0 / L) * (1.0 + 1e-12))
      throw std::invalid_argument("step plan: gamma_1 = " + std::to_string(gamma_at(1)) +
                                  " exceeds 1/L = " + std::to_string(1.0 / L));
  }
};

/// gamma_k = gamma1 / k^alpha with weights lambda_k = gamma1 / (k + 1)^alpha.
inline StepPlan make_poly_plan(double gamma1, double alpha) {
  StepPlan p;
  p.gamma = Sequence::poly(gamma1, alpha);
  p.lambda = Sequence::poly(gamma1, alpha, 1.0);
  return p;
}

enum class Variant { ULA, SGLD };

struct Admissibility {
  bool ok = true;
  std::size_t first_violation = 0;  // 0 when ok
};

/// ULA:  lambda_{k+1}(1 - m gamma_{k+1}) / gamma_{k+1} <= lambda_k / gamma_k
/// SGLD: lambda_{k+1} / gamma_{k+2} <= lambda_k / gamma_{k+1}
/// for k = 1..horizon, with relative slack 1e-12.
inline Admissibility admissibility(const StepPlan& plan, double m, Variant variant, std::size_t horizon) {
  constexpr double kSlack = 1e-12;
  for (std::size_t k = 1; k <= horizon; ++k) {
    double lhs = 0.0, rhs = 0.0;
    if (variant == Variant::ULA) {
      const double g1 = plan.gamma_at(k + 1);
      lhs = plan.lambda_at(k + 1) * (1.0 - m * g1) / g1;
      rhs = plan.lambda_at(k) / plan.gamma_at(k);
    } else {
      lhs = plan.lambda_at(k + 1) / plan.gamma_at(k + 2);
      rhs = plan.lambda_at(k) / plan.gamma_at(k + 1);
    }
    if (lhs > rhs + kSlack * std::abs(rhs)) return {false, k};
  }
  return {};
}

inline bool check_admissible(const StepPlan& plan, double m, Variant variant, std::size_t horizon) {
  return admissibility(plan, m, variant, horizon).ok;
}

struct Cumulative {
  double Gamma = 0.0;
  double Lambda = 0.0;
};

/// Gamma_{N,N+n} = sum_{k=N+1}^{N+n} gamma_k and likewise for lambda.
inline Cumulative cumulative(const StepPlan& plan, std::size_t N, std::size_t n) {
  if (n == 0) throw std::invalid_argument("cumulative: n must be >= 1");
  // Neumaier compensated sums.
  double g = 0.0, gc = 0.0, l = 0.0, lc = 0.0;
  auto add = [](double& s, double& comp, double v) {
    const double t = s + v;
    comp += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  };
  for (std::size_t k = N + 1; k <= N + n; ++k) {
    add(g, gc, plan.gamma_at(k));
    add(l, lc, plan.lambda_at(k));
  }
  return {g + gc, l + lc};
}

}  // namespace langevin

#endif  // LANGEVIN_SCHEDULES_HPP_
