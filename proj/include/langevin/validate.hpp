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

#ifndef LANGEVIN_VALIDATE_HPP_
#define LANGEVIN_VALIDATE_HPP_

// Gaussian verification suite: the one-step inequalities, bias and
// contraction bounds checked against exact ULA laws on quadratic potentials.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "langevin/analytics.hpp"
#include "langevin/bounds.hpp"

namespace langevin::validation {

struct Result {
  std::string name;
  bool pass = false;
  std::size_t cases = 0;
  double worst = 0.0;  // check-specific figure of merit
  double seconds = 0.0;
  std::string detail;

  nlohmann::json to_json() const {
    return {{"check", name}, {"pass", pass}, {"cases", cases}, {"worst", worst}, {"seconds", seconds},
            {"detail", detail}};
  }
};

namespace detail {

template <class... A>
std::string fmt(const char* f, A... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

inline Vector random_vector(RngStream& rng, Eigen::Index d, double scale) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = scale * rng.normal();
  return v;
}

inline Matrix random_spd(RngStream& rng, Eigen::Index d, double shift) {
  Matrix A(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) A(i, j) = rng.normal();
  Matrix S = A * A.transpose() / static_cast<double>(d);
  S.diagonal().array() += shift;
  return 0.5 * (S + S.transpose());
}

inline GaussianLaw random_law(RngStream& rng, Eigen::Index d) {
  return {random_vector(rng, d, 3.0), random_spd(rng, d, 1e-3 + rng.uniform())};
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Identity and two diagonal grids for each d in {1, 2, 5}.
inline std::vector<Matrix> hessian_grid() {
  std::vector<Matrix> out;
  for (Eigen::Index d : {1, 2, 5}) {
    out.push_back(Matrix::Identity(d, d));
    out.push_back(Matrix(Vector::LinSpaced(d, 0.5, 2.0).asDiagonal()));
    out.push_back(Matrix(Vector::LinSpaced(d, 0.01, 10.0).asDiagonal()));
  }
  return out;
}

/// {1e-3, 1e-2, 1e-1} capped at 1/L, plus 1/L.
inline std::vector<double> step_grid(double L) {
  std::vector<double> g;
  for (double v : {1e-3, 1e-2, 1e-1})
    if (v <= 1.0 / L) g.push_back(v);
  g.push_back(1.0 / L);
  return g;
}

inline Result one_step_inequality(std::uint64_t seed = 101, int laws_per_case = 50) {
  detail::Timer timer;
  RngStream rng(seed, 0);
  Result r;
  r.name = "one-step-inequality";
  r.worst = std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (const Matrix& H : hessian_grid())
    for (double g : step_grid(hessian_spectrum(H).max))
      for (int t = 0; t < laws_per_case; ++t) {
        const double m = one_step_gap_check(H, g, detail::random_law(rng, H.rows())).one_step.margin();
        r.worst = std::min(r.worst, m);
        violations += m < -1e-9;
        ++r.cases;
      }
  r.seconds = timer.seconds();
  r.pass = violations == 0;
  r.detail = detail::fmt("%zu cases, %zu violations, min margin %.3e", r.cases, violations, r.worst);
  return r;
}

inline Result energy_and_entropy_lemmas(std::uint64_t seed = 102, int laws_per_case = 50, int triples = 200) {
  detail::Timer timer;
  RngStream rng(seed, 0);
  Result r;
  r.name = "energy-entropy-lemmas";
  double worst_eq = 0.0, worst_heat = std::numeric_limits<double>::infinity();
  for (const Matrix& H : hessian_grid())
    for (double g : step_grid(hessian_spectrum(H).max))
      for (int t = 0; t < laws_per_case; ++t) {
        const auto c = one_step_gap_check(H, g, detail::random_law(rng, H.rows()));
        worst_eq = std::max(worst_eq, std::abs(c.energy_increment - c.gamma_trace_h));
        worst_heat = std::min(worst_heat, c.energy_heat.margin());
        ++r.cases;
      }
  double worst_flow = std::numeric_limits<double>::infinity();
  for (int t = 0; t < triples; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(5));
    const double gamma = std::pow(10.0, -3.0 + 3.0 * rng.uniform());
    worst_flow = std::min(worst_flow,
                          entropy_flow_check(detail::random_law(rng, d), detail::random_law(rng, d), gamma).margin());
  }
  r.cases += static_cast<std::size_t>(triples);
  r.worst = worst_flow;
  r.seconds = timer.seconds();
  r.pass = worst_eq <= 1e-10 && worst_heat >= -1e-10 && worst_flow >= -1e-9;
  r.detail = detail::fmt(
      "energy increment vs gamma tr(H): max |diff| %.2e (tol 1e-10); min margin to L d gamma %.3e (tol -1e-10); "
      "entropy flow on %d triples: min margin %.3e (tol -1e-9)",
      worst_eq, worst_heat, triples, worst_flow);
  return r;
}

inline Result stationary_bias_bounds() {
  detail::Timer timer;
  Result r;
  r.name = "stationary-bias-bounds";
  std::size_t violations = 0;
  double tight_kl = 0.0, tight_w2 = 0.0;
  for (const Matrix& H : hessian_grid()) {
    const auto s = hessian_spectrum(H);
    const double d = static_cast<double>(H.rows());
    for (double g : step_grid(s.max)) {
      const GaussianLaw pg = ula_gaussian_stationary(H, g), pi = gaussian_target(H);
      const double kl = kl_gaussian(pg, pi), w2 = w2sq_gaussian(pg, pi);
      const double kl_b = s.max * d * g, w2_b = 2.0 * s.max * d * g / s.min;
      violations += (kl > kl_b) + (w2 > w2_b);
      tight_kl = std::max(tight_kl, kl / kl_b);
      tight_w2 = std::max(tight_w2, w2 / w2_b);
      ++r.cases;
    }
  }
  // d = 1, h = 1, gamma = 0.1: stationary variance 2 / (2 - gamma) in the 1D KL formula.
  const double v = 2.0 / 1.9, oracle = 0.5 * (v - 1.0 - std::log(v));
  const Matrix one = Matrix::Identity(1, 1);
  const double kl = kl_gaussian(ula_gaussian_stationary(one, 0.1), gaussian_target(one));
  const bool example = std::abs(kl - oracle) <= 1e-12 && kl <= 0.1;
  r.worst = std::max(tight_kl, tight_w2);
  r.seconds = timer.seconds();
  r.pass = violations == 0 && example;
  r.detail = detail::fmt(
      "%zu (H, gamma) cases, %zu violations, max KL/bound %.3f, max W2^2/bound %.3f; "
      "d=1 h=1 gamma=0.1: KL %.9e (oracle %.9e) <= 0.1",
      r.cases, violations, tight_kl, tight_w2, kl, oracle);
  return r;
}

inline Result w2_contraction(std::uint64_t seed = 104, std::size_t horizon = 10000) {
  detail::Timer timer;
  RngStream rng(seed, 0);
  Result r;
  r.name = "w2-contraction";
  std::size_t plans = 0, violations = 0;
  for (const Matrix& H : hessian_grid()) {
    const auto s = hessian_spectrum(H);
    const double d = static_cast<double>(H.rows());
    std::vector<StepPlan> grid{StepPlan::constant(1.0 / s.max), StepPlan::constant(0.1 / s.max)};
    for (double a : {0.25, 0.5, 1.0}) grid.push_back(make_poly_plan(1.0 / s.max, a));
    for (const StepPlan& plan : grid) {
      const GaussianLaw mu0 = rng.uniform() < 0.5
                                  ? GaussianLaw::point_mass(detail::random_vector(rng, H.rows(), 5.0))
                                  : detail::random_law(rng, H.rows());
      const GaussianLaw pi = gaussian_target(H);
      const auto bound = ula_w2_bound_series(s.min, s.max, d, w2sq_gaussian(mu0, pi), plan, horizon);
      ula_gaussian_trajectory(H, plan, horizon, mu0, [&](std::size_t k, const GaussianLaw& law) {
        const double w = w2sq_gaussian(law, pi);
        ++r.cases;
        violations += w > bound[k] * (1.0 + 1e-9) + 1e-12;
        r.worst = std::max(r.worst, w / bound[k]);
      });
      ++plans;
    }
  }
  r.seconds = timer.seconds();
  r.pass = violations == 0;
  r.detail = detail::fmt("%zu plans x %zu steps, %zu checks, %zu violations, max exact/bound %.3f", plans, horizon,
                         r.cases, violations, r.worst);
  return r;
}

/// ULA run with (gamma, n) from the strongly convex W2 tuning rule reaches
/// W2 <= eps (and W2^2 <= eps) under the exact law.
inline Result tuning_closure(const std::vector<double>& eps_list = {0.5, 0.1}) {
  detail::Timer timer;
  Result r;
  r.name = "tuning-closure";
  const Matrix H = Vector::LinSpaced(3, 0.5, 2.0).asDiagonal();
  const auto s = hessian_spectrum(H);
  const GaussianLaw pi = gaussian_target(H);
  r.pass = true;
  std::ostringstream d;
  for (double w0_target : {1.0, 25.0})
    for (double eps : eps_list) {
      const Vector x0 = Vector::Constant(3, std::sqrt(w0_target / 3.0));
      const double W0 = w2sq_gaussian(GaussianLaw::point_mass(x0), pi);
      ProblemConstants c;
      c.set("d", 3);
      c.set("L", s.max);
      c.set("m", s.min);
      c.set("W0sq", W0);
      const auto t = tune("ula-strconv-w2", c, eps);
      const GaussianLaw law = ula_gaussian_law(H, t.out("gamma"), static_cast<std::size_t>(t.out("n")), x0);
      const double w = w2_gaussian(law, pi);
      r.pass = r.pass && w <= eps && w * w <= eps;
      r.worst = std::max(r.worst, w / eps);
      ++r.cases;
      d << detail::fmt("W0^2=%.3g eps=%g: gamma=%.4g n=%.0f W2=%.3e; ", W0, eps, t.out("gamma"), t.out("n"), w);
    }
  r.seconds = timer.seconds();
  r.detail = d.str();
  return r;
}

inline Result free_energy_identity(std::uint64_t seed = 106, int pairs = 100) {
  detail::Timer timer;
  RngStream rng(seed, 0);
  Result r;
  r.name = "free-energy-identity";
  for (int t = 0; t < pairs; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(5));
    const Matrix H = detail::random_spd(rng, d, 0.1);
    const GaussianLaw mu = detail::random_law(rng, d);
    const double diff = free_energy_gaussian(mu, H) - free_energy_gaussian(gaussian_target(H), H);
    r.worst = std::max(r.worst, std::abs(diff - kl_gaussian(mu, gaussian_target(H))));
    ++r.cases;
  }
  r.seconds = timer.seconds();
  r.pass = r.worst <= 1e-9;
  r.detail = detail::fmt("%d random pairs, max |F(mu) - F(pi) - KL(mu|pi)| = %.2e (tol 1e-9)", pairs, r.worst);
  return r;
}

/// The whole suite in a fixed order.
inline std::vector<Result> gaussian_suite() {
  return {one_step_inequality(),  energy_and_entropy_lemmas(), stationary_bias_bounds(),
          w2_contraction(),       tuning_closure(),            free_energy_identity()};
}

}  // namespace langevin::validation

#endif  // LANGEVIN_VALIDATE_HPP_
