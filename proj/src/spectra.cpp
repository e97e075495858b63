#include "thf/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "thf/errors.hpp"

namespace thf {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Solves (T - shift I) x = b in place for symmetric tridiagonal T, Gaussian
// elimination with partial pivoting (the dgttrf/dgtts2 scheme). Zero pivots are
// replaced by `tiny` so inverse iteration can run at an exact eigenvalue.
void shifted_tridiagonal_solve(const std::vector<double>& diag, const std::vector<double>& off, double shift,
                               double tiny, std::vector<double>& b) {
  const std::size_t n = diag.size();
  if (n == 1) {
    double d = diag[0] - shift;
    if (std::abs(d) < tiny) d = tiny;
    b[0] /= d;
    return;
  }
  std::vector<double> d(n), dl(off.begin(), off.begin() + static_cast<long>(n - 1)),
      du(off.begin(), off.begin() + static_cast<long>(n - 1)), du2(n, 0.0);
  std::vector<bool> swapped(n, false);
  for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (std::abs(d[i]) < tiny) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (std::abs(d[n - 1]) < tiny) d[n - 1] = tiny;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!swapped[i]) {
      b[i + 1] -= dl[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl[i] * b[i];
    }
  }
  b[n - 1] /= d[n - 1];
  b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
}

struct TopPair {
  double value;
  std::vector<double> vector;
};

TopPair tridiagonal_top(const std::vector<double>& alpha, const std::vector<double>& beta, std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::VectorXd diag(kk), sub(kk > 0 ? kk - 1 : 0);
  for (Eigen::Index i = 0; i < kk; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < kk; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (k <= 64) {
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd v = solver.eigenvectors().col(kk - 1);
    return {solver.eigenvalues()[kk - 1], std::vector<double>(v.data(), v.data() + kk)};
  }
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const double theta = solver.eigenvalues()[kk - 1];
  std::vector<double> d(alpha.begin(), alpha.begin() + kk), off(beta.begin(), beta.begin() + kk);
  double scale = std::abs(theta);
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(d[i]) + std::abs(off[i]));
  const double tiny = kEps * std::max(scale, std::numeric_limits<double>::min());
  std::vector<double> x(k, 1.0 / std::sqrt(static_cast<double>(k)));
  for (int it = 0; it < 3; ++it) {
    shifted_tridiagonal_solve(d, off, theta, tiny, x);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
  }
  return {theta, std::move(x)};
}

bool check_now(std::size_t dim) { return dim <= 20 || dim % std::max<std::size_t>(4, dim / 10) == 0; }

}  // namespace

RitzPair lanczos_largest(const LinearOperator& op, std::size_t n, double norm_bound, const LanczosOptions& opts) {
  if (n == 0) throw ValidationError("operator dimension must be positive");
  if (!(opts.tol > 0.0)) throw ValidationError("Lanczos tolerance must be positive");
  const auto nn = static_cast<Eigen::Index>(n);
  const int max_it = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(4 * n);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd q(nn);
  for (Eigen::Index i = 0; i < nn; ++i) q[i] = normal(rng);
  q.normalize();

  std::vector<Eigen::VectorXcd> basis;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd w(nn), av(nn);
  RitzPair best;
  const double breakdown = 64.0 * kEps * std::max(norm_bound, std::numeric_limits<double>::min());

  for (int it = 0; it < max_it; ++it) {
    basis.push_back(q);
    op(q, w);
    const double a = q.dot(w).real();  // dot() conjugates the left operand
    alpha.push_back(a);
    w -= a * q;
    if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
    for (int pass = 0; pass < 2; ++pass) {
      for (const Eigen::VectorXcd& v : basis) w -= v.dot(w) * v;
    }
    const double b = w.norm();
    beta.push_back(b);

    const std::size_t dim = basis.size();
    const bool exhausted = b <= breakdown || dim == n || it + 1 == max_it;
    if (!exhausted && !check_now(dim)) {
      q = w / b;
      continue;
    }
    const TopPair top = tridiagonal_top(alpha, beta, dim);
    const double threshold = opts.tol * (std::abs(top.value) + norm_bound);
    const double estimate = b * std::abs(top.vector.back());
    if (estimate <= threshold || exhausted) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nn);
      for (std::size_t j = 0; j < dim; ++j) v += top.vector[j] * basis[j];
      v.normalize();
      op(v, av);
      const double residual = (av - top.value * v).norm();
      best = {top.value, std::move(v), residual, it + 1, residual <= threshold};
      if (best.converged || exhausted) return best;
    }
    q = w / b;
  }
  return best;
}

double gershgorin_bound(const CoefficientSequence& c, std::size_t n) {
  if (n == 0) return 0.0;
  const long last = static_cast<long>(n) - 1;
  if (c.kind() == StructureKind::toeplitz) {
    // prefix[k + last] = sum_{j <= k} |t_j| for k in [-last, last]
    std::vector<double> prefix(2 * n);
    double acc = 0.0;
    for (long k = -last; k <= last; ++k) {
      acc += std::abs(c.t(k));
      prefix[static_cast<std::size_t>(k + last + 1)] = acc;
    }
    double best = 0.0;
    for (long r = 0; r <= last; ++r) {
      best = std::max(best, prefix[static_cast<std::size_t>(r + last + 1)] - prefix[static_cast<std::size_t>(r)]);
    }
    return best;
  }
  std::vector<double> prefix(2 * n, 0.0);
  double acc = 0.0;
  for (long k = 0; k <= 2 * last; ++k) {
    acc += std::abs(c.h(k));
    prefix[static_cast<std::size_t>(k + 1)] = acc;
  }
  double best = 0.0;
  for (long r = 0; r <= last; ++r) {
    best = std::max(best, prefix[static_cast<std::size_t>(r + last + 1)] - prefix[static_cast<std::size_t>(r)]);
  }
  return best;
}

SpectralReport extreme_eigs(const CoefficientSequence& c, std::size_t n, double tol, std::uint64_t seed) {
  if (n == 0) throw ValidationError("section size must be at least 1");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const StructuredOperator a(c, n);
  const double shift = gershgorin_bound(c, n);

  LanczosOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  const RitzPair top = lanczos_largest([&a](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = a.apply(x); }, n,
                                       shift, opts);
  opts.seed = seed + 1;
  const RitzPair bottom = lanczos_largest(
      [&a, shift](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = shift * x - a.apply(x); }, n, shift, opts);

  SpectralReport r;
  r.n = n;
  r.lambda_max = top.value;
  r.lambda_min = std::min(shift - bottom.value, top.value);
  r.residual_norm = std::max(top.residual, bottom.residual);
  r.iterations = top.iterations + bottom.iterations;
  r.converged = top.converged && bottom.converged;
  r.max_vector = top.vector;
  r.min_vector = bottom.vector;
  if (!r.converged) {
    throw ConvergenceError("Lanczos did not converge for section N=" + std::to_string(n) + " (residual " +
                               std::to_string(r.residual_norm) + ")",
                           r);
  }
  return r;
}

PsdResult psd_check(const CoefficientSequence& c, std::size_t n, double tol, std::uint64_t seed) {
  PsdResult out;
  out.report = extreme_eigs(c, n, tol, seed);
  out.lambda_min = out.report.lambda_min;
  out.positive = out.lambda_min >= -tol;
  if (!out.positive) {
    const Eigen::VectorXcd& v = out.report.min_vector;
    out.witness = FiniteVector(std::vector<cplx>(v.data(), v.data() + v.size()));
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> norm_growth(const CoefficientSequence& c,
                                                        const std::vector<std::size_t>& sizes, double tol,
                                                        std::uint64_t seed) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw ValidationError("section sizes must be ascending");
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(sizes.size());
  for (std::size_t n : sizes) {
    const StructuredOperator a(c, n);
    LanczosOptions opts;
    opts.tol = tol;
    opts.seed = seed;
    const RitzPair top = lanczos_largest([&a](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = a.apply(x); },
                                         n, gershgorin_bound(c, n), opts);
    if (!top.converged) {
      SpectralReport partial;
      partial.n = n;
      partial.lambda_max = top.value;
      partial.lambda_min = top.value;
      partial.residual_norm = top.residual;
      partial.iterations = top.iterations;
      throw ConvergenceError("Lanczos did not converge for section N=" + std::to_string(n), partial);
    }
    out.emplace_back(n, top.value);
  }
  return out;
}

}  // namespace thf
