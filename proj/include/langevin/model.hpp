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

#ifndef LANGEVIN_MODEL_HPP_
#define LANGEVIN_MODEL_HPP_

// Potentials U = U1 + U2 for targets pi ~ exp(-U): a smooth convex part with
// curvature constants (m, L) and an optional Lipschitz non-smooth part that
// exposes a designated subgradient and its proximal map.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace langevin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
      : std::invalid_argument(what + ": expected dimension " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

inline void check_dim(const char* what, std::size_t expected, Eigen::Index got) {
  if (static_cast<std::size_t>(got) != expected)
    throw DimensionMismatch(what, expected, static_cast<std::size_t>(got));
}

/// Convex, L-smooth part U1. `grad` writes into its output argument so the
/// samplers can reuse buffers. L == 0 is allowed for a flat potential, in
/// which case there is no step-size restriction.
struct SmoothPotential {
  std::size_t dim = 0;
  std::function<double(const Vector&)> value;
  std::function<void(const Vector&, Vector&)> grad;
  double m = 0.0;  // strong convexity modulus
  double L = 0.0;  // gradient Lipschitz constant

  Vector gradient(const Vector& x) const {
    Vector g(x.size());
    grad(x, g);
    return g;
  }
  /// Largest admissible step 1/L (infinity for a flat potential).
  double max_step() const {
    return L > 0.0 ? 1.0 / L : std::numeric_limits<double>::infinity();
  }
};

/// Convex, M2-Lipschitz part U2.
struct NonSmoothTerm {
  std::size_t dim = 0;
  std::function<double(const Vector&)> value;
  /// Designated element of the subdifferential.
  std::function<void(const Vector&, Vector&)> subgrad;
  /// prox(gamma, x) = argmin_y U2(y) + |x - y|^2 / (2 gamma).
  std::function<void(double, const Vector&, Vector&)> prox;
  double M2 = 0.0;

  Vector proximal(double gamma, const Vector& x) const {
    Vector y(x.size());
    prox(gamma, x, y);
    return y;
  }
  Vector subgradient(const Vector& x) const {
    Vector g(x.size());
    subgrad(x, g);
    return g;
  }
};

struct CompositePotential {
  SmoothPotential u1;
  std::optional<NonSmoothTerm> u2;
  /// Global Lipschitz constant of U, when known or user supplied.
  std::optional<double> M;
  std::optional<Vector> x_star;

  std::size_t dim() const { return u1.dim; }
  double M2() const { return u2 ? u2->M2 : 0.0; }

  double value(const Vector& x) const {
    double v = u1.value(x);
    if (u2) v += u2->value(x);
    return v;
  }
};

inline CompositePotential make_composite(SmoothPotential u1, std::optional<NonSmoothTerm> u2 = {},
                                         std::optional<double> M = {},
                                         std::optional<Vector> x_star = {}) {
  if (u2 && u2->dim != u1.dim) throw DimensionMismatch("make_composite", u1.dim, u2->dim);
  if (x_star) check_dim("make_composite x_star", u1.dim, x_star->size());
  return CompositePotential{std::move(u1), std::move(u2), M, std::move(x_star)};
}

struct CompositeEval {
  double value = 0.0;
  Vector smooth_grad;
  Vector sub_grad;  // grad U1 + designated subgradient of U2, an element of dU
};

inline CompositeEval eval_composite(const CompositePotential& p, const Vector& x) {
  check_dim("eval_composite", p.dim(), x.size());
  CompositeEval out;
  out.value = p.value(x);
  out.smooth_grad.resize(x.size());
  p.u1.grad(x, out.smooth_grad);
  out.sub_grad = out.smooth_grad;
  if (p.u2) out.sub_grad += p.u2->subgradient(x);
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic / Gaussian potentials.

/// U(x) = x'Hx / 2 with H symmetric positive semi-definite; m and L are the
/// extreme eigenvalues of H.
inline SmoothPotential make_quadratic(const Matrix& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("make_quadratic: H must be square");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("make_quadratic: H must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -1e-12 * (1.0 + std::abs(hi)))
    throw std::invalid_argument("make_quadratic: H must be positive semi-definite");
  auto h = std::make_shared<const Matrix>(H);
  SmoothPotential u;
  u.dim = static_cast<std::size_t>(H.rows());
  u.value = [h](const Vector& x) { return 0.5 * x.dot(*h * x); };
  u.grad = [h](const Vector& x, Vector& g) { g.noalias() = *h * x; };
  u.m = std::max(lo, 0.0);
  u.L = hi;
  return u;
}

inline SmoothPotential make_flat(std::size_t dim) {
  SmoothPotential u;
  u.dim = dim;
  u.value = [](const Vector&) { return 0.0; };
  u.grad = [](const Vector& x, Vector& g) { g.setZero(x.size()); };
  u.m = 0.0;
  u.L = 0.0;
  return u;
}

// ---------------------------------------------------------------------------
// Laplace (l1) term.

constexpr double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Coordinatewise soft-thresholding sign(x_i) max(|x_i| - t, 0).
inline void soft_threshold(const Vector& x, double t, Vector& out) {
  out.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out(i) = sign0(x(i)) * std::max(std::abs(x(i)) - t, 0.0);
}

/// U2(x) = a1 * |x|_1. The designated subgradient uses sign(0) = 0.
inline NonSmoothTerm make_laplace_term(std::size_t dim, double a1) {
  if (!(a1 >= 0.0)) throw std::invalid_argument("make_laplace_term: a1 must be >= 0");
  NonSmoothTerm t;
  t.dim = dim;
  t.value = [a1](const Vector& x) { return a1 * x.lpNorm<1>(); };
  t.subgrad = [a1](const Vector& x, Vector& g) {
    g.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = a1 * sign0(x(i));
  };
  t.prox = [a1](double gamma, const Vector& x, Vector& y) { soft_threshold(x, a1 * gamma, y); };
  t.M2 = a1 * std::sqrt(static_cast<double>(dim));
  return t;
}

// ---------------------------------------------------------------------------
// Bayesian logistic regression.

namespace detail {
// log(1 + e^u) without overflow.
inline double softplus(double u) {
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}
// e^u / (1 + e^u).
inline double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}
}  // namespace detail

struct LogisticConstants {
  double m = 0.0;
  double L = 0.0;
  double M2 = 0.0;
};

/// Logistic likelihood with the elastic-net prior
///   U(b) = sum_n l_n(b) + a2 |b|^2 + a1 |b|_1,
///   l_n(b) = -y_n b'x_n + log(1 + exp(b'x_n)).
/// The smooth part carries the likelihood and the ridge term; the l1 term is
/// the non-smooth part.
class LogisticModel {
 public:
  LogisticModel(Matrix X, Vector y, double a1, double a2)
      : X_(std::move(X)), y_(std::move(y)), a1_(a1), a2_(a2) {
    if (X_.rows() != y_.size())
      throw DimensionMismatch("LogisticModel labels", static_cast<std::size_t>(X_.rows()),
                              static_cast<std::size_t>(y_.size()));
    if (X_.rows() == 0) throw std::invalid_argument("LogisticModel: no observations");
    if (!(a1_ >= 0.0) || !(a2_ >= 0.0))
      throw std::invalid_argument("LogisticModel: prior scales must be >= 0");
    for (Eigen::Index n = 0; n < y_.size(); ++n)
      if (y_(n) != 0.0 && y_(n) != 1.0)
        throw std::invalid_argument("LogisticModel: labels must be 0 or 1");
    if (!X_.allFinite()) throw std::invalid_argument("LogisticModel: non-finite covariate");
  }

  std::size_t rows() const { return static_cast<std::size_t>(X_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(X_.cols()); }
  const RowMatrix& X() const { return X_; }
  const Vector& y() const { return y_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

  double row_loss(std::size_t n, const Vector& beta) const {
    const double u = X_.row(static_cast<Eigen::Index>(n)).dot(beta);
    return -y_(static_cast<Eigen::Index>(n)) * u + detail::softplus(u);
  }

  /// out += scale * grad l_n(beta).
  void add_row_grad(std::size_t n, const Vector& beta, double scale, Vector& out) const {
    const auto i = static_cast<Eigen::Index>(n);
    const double u = X_.row(i).dot(beta);
    out.noalias() += (scale * (detail::logistic(u) - y_(i))) * X_.row(i).transpose();
  }

  /// out += gradient of the smooth prior part (2 a2 beta).
  void add_prior_smooth_grad(const Vector& beta, Vector& out) const {
    if (a2_ != 0.0) out.noalias() += (2.0 * a2_) * beta;
  }
  /// out += designated subgradient of a1 |beta|_1.
  void add_prior_subgrad(const Vector& beta, Vector& out) const {
    if (a1_ == 0.0) return;
    for (Eigen::Index i = 0; i < beta.size(); ++i) out(i) += a1_ * sign0(beta(i));
  }

  double smooth_value(const Vector& beta) const {
    check_dim("LogisticModel", dim(), beta.size());
    const Eigen::ArrayXd u = (X_ * beta).array();
    const Eigen::ArrayXd sp = u.max(0.0) + (-u.abs()).exp().log1p();
    return (sp - y_.array() * u).sum() + a2_ * beta.squaredNorm();
  }
  /// out += sum_n grad l_n(beta), vectorized over rows.
  void add_all_rows_grad(const Vector& beta, Vector& out) const {
    check_dim("LogisticModel", dim(), beta.size());
    const Eigen::ArrayXd u = (X_ * beta).array();
    const Eigen::VectorXd r = (1.0 / (1.0 + (-u).exp()) - y_.array()).matrix();
    out.noalias() += X_.transpose() * r;
  }
  /// Full gradient of the smooth part. The full-batch oracle uses the same
  /// code path, so both agree bitwise.
  void smooth_grad(const Vector& beta, Vector& out) const {
    out.setZero(beta.size());
    add_all_rows_grad(beta, out);
    add_prior_smooth_grad(beta, out);
  }

  double row_sq_norm(std::size_t n) const {
    return X_.row(static_cast<Eigen::Index>(n)).squaredNorm();
  }
  /// Lipschitz constant of grad l_n: |x_n|^2 / 4.
  double row_lipschitz(std::size_t n) const { return 0.25 * row_sq_norm(n); }
  double prior_smooth_lipschitz() const { return 2.0 * a2_; }

 private:
  RowMatrix X_;
  Vector y_;
  double a1_;
  double a2_;
};

/// m = 2 a2, L = (1/4) sum_n |x_n|^2 + 2 a2, M2 = a1 sqrt(d).
inline LogisticConstants logistic_constants(const LogisticModel& model) {
  LogisticConstants c;
  c.m = 2.0 * model.a2();
  c.L = 0.25 * model.X().squaredNorm() + 2.0 * model.a2();
  c.M2 = model.a1() * std::sqrt(static_cast<double>(model.dim()));
  return c;
}

inline SmoothPotential make_logistic_smooth(std::shared_ptr<const LogisticModel> model) {
  const LogisticConstants c = logistic_constants(*model);
  SmoothPotential u;
  u.dim = model->dim();
  u.value = [model](const Vector& b) { return model->smooth_value(b); };
  u.grad = [model](const Vector& b, Vector& g) { model->smooth_grad(b, g); };
  u.m = c.m;
  u.L = c.L;
  return u;
}

/// Posterior potential: smooth likelihood + ridge, l1 prior as U2 when a1 > 0.
/// No global Lipschitz constant is attached (the likelihood is Lipschitz but
/// the ridge term is not); callers supplying M for bound evaluation should
/// flag the result as heuristic.
inline CompositePotential make_logistic_posterior(std::shared_ptr<const LogisticModel> model) {
  std::optional<NonSmoothTerm> u2;
  if (model->a1() > 0.0) u2 = make_laplace_term(model->dim(), model->a1());
  return make_composite(make_logistic_smooth(model), std::move(u2));
}

// ---------------------------------------------------------------------------
// Finite sum of isotropic quadratics, U(x) = sum_n (h_n / 2)|x - c_n|^2.
// Small exactly-solvable data model for oracle tests.

class QuadraticSumModel {
 public:
  QuadraticSumModel(Matrix centers, Vector weights)
      : c_(std::move(centers)), h_(std::move(weights)) {
    if (c_.rows() != h_.size())
      throw DimensionMismatch("QuadraticSumModel weights", static_cast<std::size_t>(c_.rows()),
                              static_cast<std::size_t>(h_.size()));
    if ((h_.array() < 0.0).any()) throw std::invalid_argument("QuadraticSumModel: negative weight");
  }
  std::size_t rows() const { return static_cast<std::size_t>(c_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(c_.cols()); }
  double row_lipschitz(std::size_t n) const { return h_(static_cast<Eigen::Index>(n)); }
  double prior_smooth_lipschitz() const { return 0.0; }
  const Matrix& centers() const { return c_; }
  const Vector& weights() const { return h_; }

  void add_row_grad(std::size_t n, const Vector& x, double scale, Vector& out) const {
    const auto i = static_cast<Eigen::Index>(n);
    out.noalias() += (scale * h_(i)) * (x - c_.row(i).transpose());
  }
  void add_prior_smooth_grad(const Vector&, Vector&) const {}
  void add_prior_subgrad(const Vector&, Vector&) const {}

  double smooth_value(const Vector& x) const {
    double v = 0.0;
    for (Eigen::Index i = 0; i < c_.rows(); ++i)
      v += 0.5 * h_(i) * (x - c_.row(i).transpose()).squaredNorm();
    return v;
  }
  void add_all_rows_grad(const Vector& x, Vector& out) const {
    for (std::size_t n = 0; n < rows(); ++n) add_row_grad(n, x, 1.0, out);
  }
  void smooth_grad(const Vector& x, Vector& out) const {
    out.setZero(x.size());
    add_all_rows_grad(x, out);
  }

 private:
  Matrix c_;
  Vector h_;
};

// ---------------------------------------------------------------------------

struct MinimizerResult {
  Vector x;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Proximal gradient descent x <- prox_{t U2}(x - t grad U1(x)), t = 1/L,
/// stopped when successive iterates differ by at most `tol` in norm.
inline MinimizerResult find_minimizer(const CompositePotential& p, const Vector& x0,
                                      double tol = 1e-10, std::size_t max_iter = 2'000'000) {
  check_dim("find_minimizer", p.dim(), x0.size());
  if (!(p.u1.L > 0.0))
    throw std::invalid_argument("find_minimizer: needs a smooth part with L > 0");
  const double t = 1.0 / p.u1.L;
  MinimizerResult r;
  r.x = x0;
  Vector g(x0.size()), step(x0.size()), next(x0.size());
  for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
    p.u1.grad(r.x, g);
    step = r.x - t * g;
    if (p.u2)
      p.u2->prox(t, step, next);
    else
      next = step;
    const double moved = (next - r.x).norm();
    r.x.swap(next);
    if (moved <= tol) {
      r.converged = true;
      ++r.iterations;
      break;
    }
  }
  return r;
}

}  // namespace langevin

#endif  // LANGEVIN_MODEL_HPP_
