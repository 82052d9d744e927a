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

#ifndef LANGEVIN_ANALYTICS_HPP_
#define LANGEVIN_ANALYTICS_HPP_

// Closed-form Gaussian analytics for ULA on U(x) = x'Hx/2, exact
// divergences between Gaussian laws, and 1D empirical transport distances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "langevin/model.hpp"
#include "langevin/schedules.hpp"

namespace langevin {

constexpr std::size_t kMaxAnalyticDim = 1000;

struct GaussianLaw {
  Vector mean;
  Matrix cov;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }

  static GaussianLaw point_mass(const Vector& x) {
    return {x, Matrix::Zero(x.size(), x.size())};
  }
  static GaussianLaw isotropic(const Vector& m, double var) {
    return {m, var * Matrix::Identity(m.size(), m.size())};
  }
};

class NotPositiveSemidefinite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double matrix_scale(const Matrix& A) { return 1.0 + (A.size() ? A.cwiseAbs().maxCoeff() : 0.0); }

inline bool is_diagonal(const Matrix& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (i != j && A(i, j) != 0.0) return false;
  return true;
}

inline void validate_law(const GaussianLaw& a, const char* what) {
  const auto d = a.mean.size();
  if (a.cov.rows() != d || a.cov.cols() != d) throw DimensionMismatch(what, static_cast<std::size_t>(d),
                                                                      static_cast<std::size_t>(a.cov.rows()));
  if (static_cast<std::size_t>(d) > kMaxAnalyticDim)
    throw std::invalid_argument(std::string(what) + ": dimension exceeds the dense analytics cap");
  const double scale = matrix_scale(a.cov);
  if ((a.cov - a.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotPositiveSemidefinite(std::string(what) + ": covariance is not symmetric");
}

/// Eigenvalues of a symmetric matrix, failing on values below -tol.
inline Vector psd_eigenvalues(const Matrix& A, const char* what) {
  if (is_diagonal(A)) {
    Vector e = A.diagonal();
    const double tol = 1e-12 * matrix_scale(A);
    if ((e.array() < -tol).any()) throw NotPositiveSemidefinite(std::string(what) + ": matrix is not PSD");
    return e.cwiseMax(0.0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A, Eigen::EigenvaluesOnly);
  const double tol = 1e-12 * matrix_scale(A);
  if ((eig.eigenvalues().array() < -tol).any())
    throw NotPositiveSemidefinite(std::string(what) + ": matrix is not PSD");
  return eig.eigenvalues().cwiseMax(0.0);
}

/// Symmetric PSD square root with eigenvalues clamped at 0.
inline Matrix psd_sqrt(const Matrix& A, const char* what = "psd_sqrt") {
  if (is_diagonal(A)) {
    const Vector e = psd_eigenvalues(A, what);
    return e.cwiseSqrt().asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
  const double tol = 1e-12 * matrix_scale(A);
  if ((eig.eigenvalues().array() < -tol).any())
    throw NotPositiveSemidefinite(std::string(what) + ": matrix is not PSD");
  const Vector s = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * s.asDiagonal() * eig.eigenvectors().transpose();
}

struct Spectrum {
  double min = 0.0;
  double max = 0.0;
};

inline Spectrum hessian_spectrum(const Matrix& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("Hessian must be square");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * matrix_scale(H))
    throw NotPositiveSemidefinite("Hessian is not symmetric");
  const Vector e = psd_eigenvalues(H, "Hessian");
  return {e.minCoeff(), e.maxCoeff()};
}

// ---------------------------------------------------------------------------
// Exact iterate laws.

/// Push-forward by the gradient step x -> (I - gamma H) x.
inline GaussianLaw gaussian_S(const Matrix& H, double gamma, const GaussianLaw& mu) {
  const Matrix A = Matrix::Identity(H.rows(), H.cols()) - gamma * H;
  GaussianLaw out{A * mu.mean, A * mu.cov * A.transpose()};
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

/// Convolution with N(0, 2 gamma I).
inline GaussianLaw gaussian_T(double gamma, const GaussianLaw& mu) {
  GaussianLaw out = mu;
  out.cov.diagonal().array() += 2.0 * gamma;
  return out;
}

/// One ULA transition mu R_gamma = (mu S_gamma) T_gamma.
inline GaussianLaw ula_gaussian_step(const Matrix& H, double gamma, const GaussianLaw& mu) {
  return gaussian_T(gamma, gaussian_S(H, gamma, mu));
}

namespace detail {
inline void check_ula_step(const Matrix& H, double gamma, const char* what) {
  const Spectrum s = hessian_spectrum(H);
  if (!(gamma > 0.0)) throw std::invalid_argument(std::string(what) + ": gamma must be > 0");
  if (s.max > 0.0 && gamma > (1.0 / s.max) * (1.0 + 1e-12))
    throw std::invalid_argument(std::string(what) + ": gamma exceeds 1/lambda_max(H)");
}
}  // namespace detail

inline GaussianLaw ula_gaussian_law(const Matrix& H, double gamma, std::size_t k, const GaussianLaw& mu0) {
  detail::check_ula_step(H, gamma, "ula_gaussian_law");
  validate_law(mu0, "ula_gaussian_law");
  check_dim("ula_gaussian_law", static_cast<std::size_t>(H.rows()), mu0.mean.size());
  GaussianLaw mu = mu0;
  for (std::size_t i = 0; i < k; ++i) mu = ula_gaussian_step(H, gamma, mu);
  return mu;
}

/// Law of X_k for X_0 = x0: mean (I - gamma H)^k x0,
/// covariance 2 gamma sum_{i<k} (I - gamma H)^{2i}.
inline GaussianLaw ula_gaussian_law(const Matrix& H, double gamma, std::size_t k, const Vector& x0) {
  return ula_gaussian_law(H, gamma, k, GaussianLaw::point_mass(x0));
}

/// Calls visit(k, law_k) for k = 0..k_max under the step plan.
inline void ula_gaussian_trajectory(const Matrix& H, const StepPlan& plan, std::size_t k_max, const GaussianLaw& mu0,
                                    const std::function<void(std::size_t, const GaussianLaw&)>& visit) {
  validate_law(mu0, "ula_gaussian_trajectory");
  GaussianLaw mu = mu0;
  visit(0, mu);
  const double L = hessian_spectrum(H).max;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double g = plan.gamma_at(k);
    if (L > 0.0 && g > (1.0 / L) * (1.0 + 1e-12))
      throw std::invalid_argument("ula_gaussian_trajectory: gamma_k exceeds 1/L");
    mu = ula_gaussian_step(H, g, mu);
    visit(k, mu);
  }
}

/// pi = N(0, H^{-1}); H must be positive definite.
inline GaussianLaw gaussian_target(const Matrix& H) {
  const Spectrum s = hessian_spectrum(H);
  if (!(s.min > 0.0)) throw std::invalid_argument("gaussian_target: H must be positive definite");
  const auto d = H.rows();
  Matrix C = is_diagonal(H) ? Matrix(H.diagonal().cwiseInverse().asDiagonal())
                            : Matrix(H.ldlt().solve(Matrix::Identity(d, d)));
  C = 0.5 * (C + C.transpose());
  return {Vector::Zero(d), C};
}

/// Stationary law of R_gamma: per eigenvalue h of H, variance 2 / (h (2 - gamma h)).
inline GaussianLaw ula_gaussian_stationary(const Matrix& H, double gamma) {
  const Spectrum s = hessian_spectrum(H);
  if (!(gamma > 0.0)) throw std::invalid_argument("ula_gaussian_stationary: gamma must be > 0");
  if (!(s.min > 0.0)) throw std::invalid_argument("ula_gaussian_stationary: H must be positive definite");
  if (gamma * s.max >= 2.0) throw std::invalid_argument("ula_gaussian_stationary: gamma >= 2/lambda_max(H), chain diverges");
  const auto d = H.rows();
  auto var = [gamma](double h) { return 2.0 / (h * (2.0 - gamma * h)); };
  if (is_diagonal(H)) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = var(H(i, i));
    return {Vector::Zero(d), Matrix(v.asDiagonal())};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = var(eig.eigenvalues()(i));
  Matrix C = eig.eigenvectors() * v.asDiagonal() * eig.eigenvectors().transpose();
  return {Vector::Zero(d), 0.5 * (C + C.transpose())};
}

// ---------------------------------------------------------------------------
// Divergences and functionals.

/// |m_a - m_b|^2 + tr(A + B - 2 (B^{1/2} A B^{1/2})^{1/2}).
inline double w2sq_gaussian(const GaussianLaw& a, const GaussianLaw& b) {
  validate_law(a, "w2_gaussian");
  validate_law(b, "w2_gaussian");
  if (a.dim() != b.dim()) throw DimensionMismatch("w2_gaussian", a.dim(), b.dim());
  const double mean_part = (a.mean - b.mean).squaredNorm();
  double cov_part = 0.0;
  if (is_diagonal(a.cov) && is_diagonal(b.cov)) {
    const Vector sa = psd_eigenvalues(a.cov, "w2_gaussian").cwiseSqrt();
    const Vector sb = psd_eigenvalues(b.cov, "w2_gaussian").cwiseSqrt();
    cov_part = (sa - sb).squaredNorm();
  } else {
    psd_eigenvalues(a.cov, "w2_gaussian");
    const Matrix rb = psd_sqrt(b.cov, "w2_gaussian");
    Matrix M = rb * a.cov * rb;
    M = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(M, Eigen::EigenvaluesOnly);
    const double cross = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    cov_part = std::max(0.0, a.cov.trace() + b.cov.trace() - 2.0 * cross);
  }
  return mean_part + cov_part;
}

inline double w2_gaussian(const GaussianLaw& a, const GaussianLaw& b) { return std::sqrt(w2sq_gaussian(a, b)); }

/// log det of a PSD matrix, -infinity when singular.
inline double log_det_psd(const Matrix& C) {
  const Vector e = psd_eigenvalues(C, "log_det");
  if ((e.array() <= 0.0).any()) return -std::numeric_limits<double>::infinity();
  return e.array().log().sum();
}

/// KL(a | b) for Gaussians; b must be nondegenerate, +infinity when a is singular.
inline double kl_gaussian(const GaussianLaw& a, const GaussianLaw& b) {
  validate_law(a, "kl_gaussian");
  validate_law(b, "kl_gaussian");
  if (a.dim() != b.dim()) throw DimensionMismatch("kl_gaussian", a.dim(), b.dim());
  const double ld_b = log_det_psd(b.cov);
  if (!std::isfinite(ld_b)) throw std::invalid_argument("kl_gaussian: reference law is degenerate");
  const double ld_a = log_det_psd(a.cov);
  if (!std::isfinite(ld_a)) return std::numeric_limits<double>::infinity();
  const auto d = static_cast<double>(a.dim());
  const Vector dm = b.mean - a.mean;
  double tr = 0.0, quad = 0.0;
  if (is_diagonal(a.cov) && is_diagonal(b.cov)) {
    const Vector bi = b.cov.diagonal().cwiseInverse();
    tr = bi.dot(a.cov.diagonal());
    quad = dm.cwiseAbs2().dot(bi);
  } else {
    Eigen::LLT<Matrix> llt(b.cov);
    tr = llt.solve(a.cov).trace();
    quad = dm.dot(llt.solve(dm));
  }
  return std::max(0.0, 0.5 * (tr + quad - d + ld_b - ld_a));
}

/// H(mu) = integral of mu log mu = -(1/2) log((2 pi e)^d det C); +infinity when singular.
inline double entropy_functional_gaussian(const GaussianLaw& mu) {
  validate_law(mu, "entropy");
  const double ld = log_det_psd(mu.cov);
  if (!std::isfinite(ld)) return std::numeric_limits<double>::infinity();
  const auto d = static_cast<double>(mu.dim());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi * std::numbers::e) + ld);
}

/// E(mu) = integral of U dmu = (m'Hm + tr(HC)) / 2.
inline double energy_gaussian(const GaussianLaw& mu, const Matrix& H) {
  check_dim("energy_gaussian", static_cast<std::size_t>(H.rows()), mu.mean.size());
  return 0.5 * (mu.mean.dot(H * mu.mean) + (H * mu.cov).trace());
}

inline double free_energy_gaussian(const GaussianLaw& mu, const Matrix& H) {
  return energy_gaussian(mu, H) + entropy_functional_gaussian(mu);
}

/// min(sqrt(2 kl), 1).
inline double pinsker_tv_bound(double kl) {
  if (!(kl >= 0.0)) throw std::invalid_argument("pinsker_tv_bound: kl must be >= 0");
  return std::min(1.0, std::sqrt(2.0 * kl));
}

// ---------------------------------------------------------------------------
// One-step inequalities.

struct Inequality {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin() const { return rhs - lhs; }
  bool holds(double tol = 1e-9) const { return margin() >= -tol; }
};

struct OneStepReport {
  double gamma = 0.0;
  double L = 0.0, m = 0.0;
  std::size_t d = 0;
  /// 2 gamma (F(mu R) - F(pi)) <= (1 - m gamma) W2^2(mu, pi) - W2^2(mu R, pi) + 2 gamma^2 L d.
  Inequality one_step;
  /// E(mu T) - E(mu) = gamma tr(H) <= L d gamma.
  double energy_increment = 0.0;
  double gamma_trace_h = 0.0;
  Inequality energy_heat;
  /// 2 gamma (E(mu S) - E(pi)) <= (1 - m gamma) W2^2(mu, pi) - W2^2(mu S, pi)
  ///                               - gamma^2 (1 - gamma L) E|grad U|^2.
  Inequality energy_gradient;
  /// 2 gamma (H(mu T) - H(pi)) <= W2^2(mu, pi) - W2^2(mu T, pi).
  Inequality entropy_flow;

  bool holds(double tol = 1e-9) const {
    return one_step.holds(tol) && energy_heat.holds(tol) && energy_gradient.holds(tol) && entropy_flow.holds(tol);
  }
};

/// 2 gamma (H(mu T_gamma) - H(nu)) <= W2^2(mu, nu) - W2^2(mu T_gamma, nu).
inline Inequality entropy_flow_check(const GaussianLaw& mu, const GaussianLaw& nu, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("entropy_flow_check: gamma must be > 0");
  const GaussianLaw mt = gaussian_T(gamma, mu);
  return {2.0 * gamma * (entropy_functional_gaussian(mt) - entropy_functional_gaussian(nu)),
          w2sq_gaussian(mu, nu) - w2sq_gaussian(mt, nu)};
}

inline OneStepReport one_step_gap_check(const Matrix& H, double gamma, const GaussianLaw& mu0) {
  detail::check_ula_step(H, gamma, "one_step_gap_check");
  const Spectrum s = hessian_spectrum(H);
  const GaussianLaw pi = gaussian_target(H);
  OneStepReport r;
  r.gamma = gamma;
  r.L = s.max;
  r.m = s.min;
  r.d = static_cast<std::size_t>(H.rows());
  const double d = static_cast<double>(r.d);
  const double w0 = w2sq_gaussian(mu0, pi);

  const GaussianLaw mr = ula_gaussian_step(H, gamma, mu0);
  r.one_step = {2.0 * gamma * (free_energy_gaussian(mr, H) - free_energy_gaussian(pi, H)),
                (1.0 - r.m * gamma) * w0 - w2sq_gaussian(mr, pi) + 2.0 * gamma * gamma * r.L * d};

  const GaussianLaw mt = gaussian_T(gamma, mu0);
  r.energy_increment = energy_gaussian(mt, H) - energy_gaussian(mu0, H);
  r.gamma_trace_h = gamma * H.trace();
  r.energy_heat = {r.energy_increment, r.L * d * gamma};

  const GaussianLaw ms = gaussian_S(H, gamma, mu0);
  const Matrix H2 = H * H;
  const double grad_sq = mu0.mean.dot(H2 * mu0.mean) + (H2 * mu0.cov).trace();
  r.energy_gradient = {2.0 * gamma * (energy_gaussian(ms, H) - energy_gaussian(pi, H)),
                       (1.0 - r.m * gamma) * w0 - w2sq_gaussian(ms, pi) - gamma * gamma * (1.0 - gamma * r.L) * grad_sq};

  r.entropy_flow = entropy_flow_check(mu0, pi, gamma);
  return r;
}

// ---------------------------------------------------------------------------
// Averaged law nu = Lambda^{-1} sum_{k=N+1}^{N+n} lambda_k mu0 Q_k.

struct AveragedKl {
  double lower = 0.0;  // KL of the moment-matched Gaussian
  double upper = 0.0;  // sum of weighted per-iterate KL (convexity)
};

/// Exact two-sided bounds on KL(nu | pi) for the weighted mixture of ULA laws.
/// The lower bound uses that the Gaussian maximizes entropy at fixed
/// covariance while the energy depends on first and second moments only.
inline AveragedKl averaged_kl_bounds(const Matrix& H, const StepPlan& plan, std::size_t N, std::size_t n,
                                     const GaussianLaw& mu0) {
  if (n == 0) throw std::invalid_argument("averaged_kl_bounds: n must be >= 1");
  const GaussianLaw pi = gaussian_target(H);
  const auto d = H.rows();
  double lambda_total = 0.0, kl_sum = 0.0;
  Vector m1 = Vector::Zero(d);
  Matrix m2 = Matrix::Zero(d, d);
  ula_gaussian_trajectory(H, plan, N + n, mu0, [&](std::size_t k, const GaussianLaw& law) {
    if (k <= N) return;
    const double w = plan.lambda_at(k);
    lambda_total += w;
    kl_sum += w * kl_gaussian(law, pi);
    m1 += w * law.mean;
    m2 += w * (law.cov + law.mean * law.mean.transpose());
  });
  m1 /= lambda_total;
  m2 /= lambda_total;
  Matrix cov = m2 - m1 * m1.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return {kl_gaussian({m1, cov}, pi), kl_sum / lambda_total};
}

// ---------------------------------------------------------------------------
// Empirical samples.

struct EmpiricalSample {
  Matrix points;  // n x d
  std::optional<Vector> weights;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }

  static EmpiricalSample from_values(const std::vector<double>& v) {
    EmpiricalSample s;
    s.points = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    return s;
  }
  static EmpiricalSample from_weighted(const std::vector<double>& v, const std::vector<double>& w) {
    if (v.size() != w.size()) throw std::invalid_argument("EmpiricalSample: value/weight size mismatch");
    EmpiricalSample s = from_values(v);
    Vector wt = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    const double total = wt.sum();
    if (!(total > 0.0) || (wt.array() < 0.0).any())
      throw std::invalid_argument("EmpiricalSample: weights must be >= 0 with a positive total");
    s.weights = wt / total;
    return s;
  }
};

namespace detail {
struct Atom {
  double x;
  double w;
};
inline std::vector<Atom> sorted_atoms_1d(const EmpiricalSample& s, const char* what) {
  if (s.size() == 0) throw std::invalid_argument(std::string(what) + ": empty sample");
  if (s.dim() != 1) throw std::invalid_argument(std::string(what) + ": sample must be one-dimensional");
  std::vector<Atom> a(s.size());
  const double uw = 1.0 / static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    a[i] = {s.points(static_cast<Eigen::Index>(i), 0), s.weights ? (*s.weights)(static_cast<Eigen::Index>(i)) : uw};
  std::sort(a.begin(), a.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  return a;
}
}  // namespace detail

/// Exact W2 between two 1D (weighted) empirical measures via the quantile coupling.
inline double w2_empirical_1d(const EmpiricalSample& s1, const EmpiricalSample& s2) {
  const auto a = detail::sorted_atoms_1d(s1, "w2_empirical_1d");
  const auto b = detail::sorted_atoms_1d(s2, "w2_empirical_1d");
  std::size_t i = 0, j = 0;
  double ra = a[0].w, rb = b[0].w, acc = 0.0;
  while (i < a.size() && j < b.size()) {
    const bool next_a = ra <= rb;
    const bool next_b = rb <= ra;
    const double mass = std::min(ra, rb);
    const double diff = a[i].x - b[j].x;
    acc += mass * diff * diff;
    if (next_a) {
      if (++i < a.size()) ra = a[i].w;
    } else {
      ra -= mass;
    }
    if (next_b) {
      if (++j < b.size()) rb = b[j].w;
    } else {
      rb -= mass;
    }
  }
  return std::sqrt(std::max(0.0, acc));
}

struct QuantileIntegrals {
  /// A(u) = int_0^u Q(t) dt and B(u) = int_0^u Q(t)^2 dt for the target quantile Q.
  std::function<double(double)> first;
  std::function<double(double)> second;
};

/// Exact W2 between an empirical 1D sample and a continuous law given by
/// antiderivatives of its quantile function and squared quantile function.
inline double w2_to_quantile_1d(const EmpiricalSample& s, const QuantileIntegrals& q) {
  const auto a = detail::sorted_atoms_1d(s, "w2_to_quantile_1d");
  double acc = 0.0, u0 = 0.0, A0 = q.first(0.0), B0 = q.second(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u1 = i + 1 == a.size() ? 1.0 : std::min(1.0, u0 + a[i].w);
    const double A1 = q.first(u1), B1 = q.second(u1);
    const double x = a[i].x;
    acc += x * x * (u1 - u0) - 2.0 * x * (A1 - A0) + (B1 - B0);
    u0 = u1;
    A0 = A1;
    B0 = B1;
  }
  return std::sqrt(std::max(0.0, acc));
}

/// Quantile integrals of the Laplace law with density exp(-|x|/b) / (2b).
inline QuantileIntegrals laplace_quantile_integrals(double b = 1.0) {
  if (!(b > 0.0)) throw std::invalid_argument("laplace scale must be > 0");
  // Lower half, Q(u) = b ln(2u) for u <= 1/2.
  auto A_low = [b](double u) { return u <= 0.0 ? 0.0 : b * (u * std::log(2.0 * u) - u); };
  auto B_low = [b](double u) {
    if (u <= 0.0) return 0.0;
    const double l = std::log(2.0 * u);
    return b * b * u * (l * l - 2.0 * l + 2.0);
  };
  QuantileIntegrals q;
  q.first = [A_low](double u) { return u <= 0.5 ? A_low(u) : A_low(1.0 - u); };
  q.second = [B_low, b](double u) { return u <= 0.5 ? B_low(u) : 2.0 * b * b - B_low(1.0 - u); };
  return q;
}

inline double w2_to_laplace_1d(const EmpiricalSample& s, double b = 1.0) {
  return w2_to_quantile_1d(s, laplace_quantile_integrals(b));
}

// ---------------------------------------------------------------------------
// Report rows.

struct ReportRow {
  double gamma = 0.0;
  std::size_t k = 0;
  double w2_exact = 0.0, w2_bound = 0.0, kl_exact = 0.0, kl_bound = 0.0;
  double margin() const { return std::min(w2_bound - w2_exact, kl_bound - kl_exact); }
};

inline void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "gamma,k,w2_exact,w2_bound,kl_exact,kl_bound,margin\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.gamma << ',' << r.k << ',' << r.w2_exact << ',' << r.w2_bound << ',' << r.kl_exact << ','
       << r.kl_bound << ',' << r.margin() << '\n';
}

}  // namespace langevin

#endif  // LANGEVIN_ANALYTICS_HPP_
