#include "thf/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "thf/errors.hpp"

namespace thf {
namespace {

// Monic three-term recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.
struct Recurrence {
  std::vector<double> a;  // a_0 .. a_{n-1}
  std::vector<double> b;  // b_0 unused, b_1 .. b_{n-1}
  double mu0 = 1.0;       // total mass of the weight
};

Recurrence jacobi_recurrence(std::size_t n, double alpha, double beta) {
  Recurrence r;
  r.a.resize(n);
  r.b.assign(n, 0.0);
  const double ab = alpha + beta;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    if (k == 0) {
      r.a[k] = (beta - alpha) / (ab + 2.0);
    } else {
      r.a[k] = (beta * beta - alpha * alpha) / ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0));
    }
    if (k == 1) {
      r.b[k] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else if (k > 1) {
      const double s = 2.0 * kk + ab;
      r.b[k] = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  r.mu0 = std::exp((ab + 1.0) * std::numbers::ln2 + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                   std::lgamma(ab + 2.0));
  return r;
}

Recurrence laguerre_recurrence(std::size_t n) {
  Recurrence r;
  r.a.resize(n);
  r.b.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    r.a[k] = 2.0 * kk + 1.0;
    r.b[k] = kk * kk;
  }
  r.mu0 = 1.0;
  return r;
}

// Orthonormal polynomials p^_0..p^_{n-1} at x (normalized so the weight has
// unit mass). Returns log(sum_k p^_k(x)^2) and the Newton step p^_n / p^_n'.
// Values are rescaled on the fly so large-argument Laguerre nodes do not overflow.
struct ChristoffelEval {
  double log_sum;
  double newton_step;
};

ChristoffelEval christoffel(const Recurrence& r, std::size_t n, double x) {
  double p_prev = 0.0, p = 1.0;
  double d_prev = 0.0, d = 0.0;
  double sum = 1.0;
  double log_scale = 0.0;  // true values = stored * exp(log_scale)
  for (std::size_t k = 0; k < n; ++k) {
    const double sb_next = std::sqrt(r.b[k + 1]);
    const double sb = std::sqrt(r.b[k]);
    const double p_next = ((x - r.a[k]) * p - sb * p_prev) / sb_next;
    const double d_next = (p + (x - r.a[k]) * d - sb * d_prev) / sb_next;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    if (k + 1 < n) sum += p * p;
    const double mag = std::max(std::abs(p), std::abs(p_prev));
    if (mag > 1e100) {
      const double s = 1e-100;
      p *= s;
      p_prev *= s;
      d *= s;
      d_prev *= s;
      sum *= s * s;
      log_scale += 100.0 * std::numbers::ln10;
    }
  }
  return {std::log(sum) + 2.0 * log_scale, p / d};
}

QuadratureRule golub_welsch(const Recurrence& r, std::size_t n) {
  if (n == 0) throw ValidationError("quadrature order must be positive");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (std::size_t k = 0; k < n; ++k) diag[k] = r.a[k];
  for (std::size_t k = 1; k < n; ++k) sub[k - 1] = std::sqrt(r.b[k]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigenvalue solve failed");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    for (int it = 0; it < 2; ++it) {
      const double step = christoffel(r, n, x).newton_step;
      if (std::isfinite(step)) x -= step;
    }
    rule.nodes[i] = x;
    rule.weights[i] = std::exp(std::log(r.mu0) - christoffel(r, n, x).log_sum);
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) throw ValidationError("Jacobi exponents must exceed -1");
  // One extra recurrence coefficient is needed for the Newton polish on p_n.
  Recurrence r = jacobi_recurrence(n + 1, alpha, beta);
  return golub_welsch(r, n);
}

QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta, double a, double b) {
  if (!(b > a)) throw ValidationError("quadrature interval must satisfy a < b");
  // (b-x) = h (1-y), (x-a) = h (1+y), dx = h dy with h = (b-a)/2.
  const QuadratureRule& ref = cached_gauss_jacobi(n, alpha, beta);
  const double h = 0.5 * (b - a);
  const double scale = std::pow(h, alpha + beta + 1.0);
  QuadratureRule out;
  out.nodes.resize(n);
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.nodes[i] = a + h * (1.0 + ref.nodes[i]);
    out.weights[i] = scale * ref.weights[i];
  }
  return out;
}

const QuadratureRule& cached_gauss_jacobi(std::size_t n, double alpha, double beta) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, double, double>, std::unique_ptr<QuadratureRule>> cache;
  const auto key = std::make_tuple(n, alpha, beta);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<QuadratureRule>(gauss_jacobi(n, alpha, beta));
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(rule));
  return *it->second;
}

QuadratureRule gauss_laguerre(std::size_t n) {
  Recurrence r = laguerre_recurrence(n + 1);
  return golub_welsch(r, n);
}

const QuadratureRule& cached_gauss_laguerre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<QuadratureRule>(gauss_laguerre(n));
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(n, std::move(rule));
  return *it->second;
}

QuadratureRule circle_trapezoid(std::size_t n) {
  if (n == 0) throw ValidationError("quadrature order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, 1.0 / static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    rule.nodes[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  }
  return rule;
}

}  // namespace thf
