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

#ifndef LANGEVIN_ORACLES_HPP_
#define LANGEVIN_ORACLES_HPP_

// Minibatch stochastic (sub)gradient oracles over finite-sum models, with
// exact subset-enumeration references for small N.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "langevin/model.hpp"
#include "langevin/rng.hpp"

namespace langevin {

/// U(x) = sum_n l_n(x) + prior(x). Row gradients are accumulated with a
/// caller-chosen scale.
template <class M>
concept FiniteSumModel = requires(const M& m, std::size_t n, const Vector& x, double s, Vector& out) {
  { m.rows() } -> std::convertible_to<std::size_t>;
  { m.dim() } -> std::convertible_to<std::size_t>;
  m.add_row_grad(n, x, s, out);
  m.add_all_rows_grad(x, out);
  m.add_prior_smooth_grad(x, out);
  m.add_prior_subgrad(x, out);
  { m.row_lipschitz(n) } -> std::convertible_to<double>;
  { m.prior_smooth_lipschitz() } -> std::convertible_to<double>;
};

enum class OracleMode {
  SmoothPart,       // (N/Nb) sum_Z grad l_n + grad of the smooth prior
  FullSubgradient,  // the above + designated subgradient of the l1 prior
};

/// Per-chain scratch space. The index permutation persists between draws.
struct OracleWorkspace {
  std::vector<std::size_t> perm;
};

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

template <FiniteSumModel Model>
class MinibatchOracle {
 public:
  MinibatchOracle(std::shared_ptr<const Model> model, std::size_t batch, OracleMode mode)
      : model_(std::move(model)), batch_(batch), mode_(mode) {
    if (batch_ == 0) throw std::invalid_argument("MinibatchOracle: batch size must be >= 1");
    if (batch_ > model_->rows())
      throw std::invalid_argument("MinibatchOracle: batch size " + std::to_string(batch_) +
                                  " exceeds N = " + std::to_string(model_->rows()));
    scale_ = batch_ == model_->rows() ? 1.0
                                      : static_cast<double>(model_->rows()) / static_cast<double>(batch_);
  }

  const Model& model() const { return *model_; }
  std::size_t batch() const { return batch_; }
  std::size_t rows() const { return model_->rows(); }
  std::size_t dim() const { return model_->dim(); }
  OracleMode mode() const { return mode_; }
  /// Row evaluations per draw divided by N.
  double pass_fraction() const { return static_cast<double>(batch_) / static_cast<double>(rows()); }

  /// Theta(x, Z) for an explicit subset Z.
  void evaluate_subset(const Vector& x, std::span<const std::size_t> subset, Vector& out) const {
    check_dim("MinibatchOracle", dim(), x.size());
    out.setZero(x.size());
    for (std::size_t n : subset) model_->add_row_grad(n, x, scale_, out);
    add_prior(x, out);
  }

  /// One realization with Z uniform over size-Nb subsets. When Nb = N rows
  /// are visited in order and no randomness is consumed.
  void draw(const Vector& x, RngStream& rng, OracleWorkspace& ws, Vector& out) const {
    check_dim("MinibatchOracle", dim(), x.size());
    out.setZero(x.size());
    const std::size_t N = rows();
    if (batch_ == N) {
      model_->add_all_rows_grad(x, out);
    } else {
      if (ws.perm.size() != N) {
        ws.perm.resize(N);
        std::iota(ws.perm.begin(), ws.perm.end(), std::size_t{0});
      }
      for (std::size_t i = 0; i < batch_; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(N - i));
        std::swap(ws.perm[i], ws.perm[j]);
        model_->add_row_grad(ws.perm[i], x, scale_, out);
      }
    }
    add_prior(x, out);
  }

  Vector draw(const Vector& x, RngStream& rng, OracleWorkspace& ws) const {
    Vector out(x.size());
    draw(x, rng, ws, out);
    return out;
  }

  /// E_Z Theta(x, Z): the full (sub)gradient.
  void mean(const Vector& x, Vector& out) const {
    check_dim("MinibatchOracle", dim(), x.size());
    out.setZero(x.size());
    model_->add_all_rows_grad(x, out);
    add_prior(x, out);
  }
  Vector mean(const Vector& x) const {
    Vector out(x.size());
    mean(x, out);
    return out;
  }

  /// Worst-case cocoercivity constant of the smooth oracle:
  /// (N/Nb) * (largest sum of Nb row constants) + prior constant.
  double cocoercivity_constant() const {
    std::vector<double> lips(rows());
    for (std::size_t n = 0; n < rows(); ++n) lips[n] = model_->row_lipschitz(n);
    std::sort(lips.begin(), lips.end(), std::greater<>());
    double top = 0.0;
    for (std::size_t i = 0; i < batch_; ++i) top += lips[i];
    return scale_ * top + model_->prior_smooth_lipschitz();
  }

 private:
  void add_prior(const Vector& x, Vector& out) const {
    model_->add_prior_smooth_grad(x, out);
    if (mode_ == OracleMode::FullSubgradient) model_->add_prior_subgrad(x, out);
  }

  std::shared_ptr<const Model> model_;
  std::size_t batch_;
  OracleMode mode_;
  double scale_ = 1.0;
};

constexpr double kMaxEnumeratedSubsets = 1e6;

/// Calls f(subset) for every size-k subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (binomial(n, k) > kMaxEnumeratedSubsets)
    throw std::invalid_argument("subset enumeration: C(" + std::to_string(n) + "," + std::to_string(k) +
                                ") exceeds 1e6");
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    f(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Exact average of Theta(x, Z) over all size-Nb subsets (long double sums).
template <FiniteSumModel Model>
Vector oracle_mean_bruteforce(const MinibatchOracle<Model>& o, const Vector& x) {
  const auto d = static_cast<Eigen::Index>(o.dim());
  Eigen::Matrix<long double, Eigen::Dynamic, 1> acc = Eigen::Matrix<long double, Eigen::Dynamic, 1>::Zero(d);
  Vector g(d);
  std::size_t count = 0;
  for_each_subset(o.rows(), o.batch(), [&](std::span<const std::size_t> z) {
    o.evaluate_subset(x, z, g);
    acc += g.cast<long double>();
    ++count;
  });
  return (acc / static_cast<long double>(count)).template cast<double>();
}

/// Exact E|Theta(x,Z) - E Theta(x,Z)|^2 by enumeration.
template <FiniteSumModel Model>
double variance_bruteforce(const MinibatchOracle<Model>& o, const Vector& x) {
  const Vector center = oracle_mean_bruteforce(o, x);
  Vector g(x.size());
  long double acc = 0.0L;
  std::size_t count = 0;
  for_each_subset(o.rows(), o.batch(), [&](std::span<const std::size_t> z) {
    o.evaluate_subset(x, z, g);
    acc += static_cast<long double>((g - center).squaredNorm());
    ++count;
  });
  return static_cast<double>(acc / static_cast<long double>(count));
}

struct VarianceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of the oracle variance at x, centered at the exact
/// oracle mean (the full gradient).
template <FiniteSumModel Model>
VarianceEstimate variance_at(const MinibatchOracle<Model>& o, const Vector& x, std::size_t n_samples,
                             RngStream& rng) {
  if (n_samples < 2) throw std::invalid_argument("variance_at: need at least 2 samples");
  const Vector center = o.mean(x);
  OracleWorkspace ws;
  Vector g(x.size());
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    o.draw(x, rng, ws, g);
    const double v = (g - center).squaredNorm();
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples)), n_samples};
}

// ---------------------------------------------------------------------------
// Type-erased oracle used by the samplers.

struct StochasticGradient {
  std::size_t dim = 0;
  std::function<void(const Vector&, RngStream&, OracleWorkspace&, Vector&)> draw;
  /// Effective passes consumed by one draw.
  double pass_fraction = 1.0;
};

template <FiniteSumModel Model>
StochasticGradient as_stochastic(std::shared_ptr<const MinibatchOracle<Model>> o) {
  StochasticGradient s;
  s.dim = o->dim();
  s.pass_fraction = o->pass_fraction();
  s.draw = [o](const Vector& x, RngStream& rng, OracleWorkspace& ws, Vector& out) { o->draw(x, rng, ws, out); };
  return s;
}

template <FiniteSumModel Model>
StochasticGradient as_stochastic(const MinibatchOracle<Model>& o) {
  return as_stochastic(std::make_shared<const MinibatchOracle<Model>>(o));
}

/// Deterministic grad U1.
inline StochasticGradient exact_smooth_oracle(const CompositePotential& p) {
  StochasticGradient s;
  s.dim = p.dim();
  auto grad = p.u1.grad;
  s.draw = [grad](const Vector& x, RngStream&, OracleWorkspace&, Vector& out) { grad(x, out); };
  return s;
}

/// Deterministic grad U1 + designated subgradient of U2.
inline StochasticGradient exact_subgradient_oracle(const CompositePotential& p) {
  StochasticGradient s;
  s.dim = p.dim();
  auto grad = p.u1.grad;
  std::function<void(const Vector&, Vector&)> sub;
  if (p.u2) sub = p.u2->subgrad;
  s.draw = [grad, sub](const Vector& x, RngStream&, OracleWorkspace&, Vector& out) {
    grad(x, out);
    if (sub) {
      Vector v(x.size());
      sub(x, v);
      out += v;
    }
  };
  return s;
}

/// base + sigma * xi with xi standard normal: unbiased with variance sigma^2 d.
inline StochasticGradient with_additive_noise(StochasticGradient base, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("with_additive_noise: sigma must be >= 0");
  StochasticGradient s = base;
  s.draw = [inner = std::move(base.draw), sigma](const Vector& x, RngStream& rng, OracleWorkspace& ws,
                                                  Vector& out) {
    inner(x, rng, ws, out);
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += sigma * rng.normal();
  };
  return s;
}

}  // namespace langevin

#endif  // LANGEVIN_ORACLES_HPP_
