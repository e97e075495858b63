#include "thf/laguerre.hpp"

#include <cmath>
#include <string>

#include "thf/errors.hpp"
#include "thf/quadrature.hpp"

namespace thf {

double laguerre_eval(int n, double x) {
  if (n < 0 || n > 512) throw ValidationError("Laguerre degree must lie in [0, 512], got " + std::to_string(n));
  if (!(x >= 0.0) || !(x <= 700.0)) throw ValidationError("Laguerre argument must lie in [0, 700]");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> laguerre_scaled_all(int n_max, double x) {
  if (n_max < 0) throw ValidationError("Laguerre degree must be nonnegative");
  if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("Laguerre argument must be finite and >= 0");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  double log_scale = -0.5 * x;  // true value = stored * exp(log_scale)
  double prev = 0.0, cur = 1.0;
  out[0] = std::exp(log_scale);
  for (int k = 0; k < n_max; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
    out[static_cast<std::size_t>(k) + 1] = cur * std::exp(log_scale);
  }
  return out;
}

double laguerre_scaled(int n, double x) { return laguerre_scaled_all(n, x).back(); }

double laplace_of_laguerre(int n, double lambda) {
  if (n < 0) throw ValidationError("Laguerre degree must be nonnegative");
  if (!(lambda > -0.5)) throw ValidationError("Laplace parameter must exceed -1/2");
  const double ratio = (2.0 * lambda - 1.0) / (2.0 * lambda + 1.0);
  return std::pow(ratio, n) / (lambda + 0.5);
}

std::vector<cplx> U_map(const FiniteVector& f, std::span<const double> t_points) {
  std::vector<cplx> out;
  out.reserve(t_points.size());
  if (f.empty()) {
    out.assign(t_points.size(), cplx(0.0, 0.0));
    return out;
  }
  for (double t : t_points) {
    const std::vector<double> basis = laguerre_scaled_all(static_cast<int>(f.size()) - 1, t);
    cplx v = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) v += f[n] * basis[n];
    out.push_back(v);
  }
  return out;
}

double laguerre_substitution(double lambda) { return (2.0 * lambda - 1.0) / (2.0 * lambda + 1.0); }

cplx V_map(const std::function<cplx(double)>& u, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("V is defined for lambda > 0");
  return u(laguerre_substitution(lambda)) / (lambda + 0.5);
}

cplx laplace_quadrature(const std::function<cplx(double)>& g, double lambda, double decay, std::size_t order) {
  const double kappa = lambda + decay;
  if (!(kappa > 0.0)) throw ValidationError("lambda + decay must be positive for the Laplace quadrature");
  const QuadratureRule& rule = cached_gauss_laguerre(order);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i] / kappa;
    sum += rule.weights[i] * std::exp(decay * t) * g(t);
  }
  return sum / kappa;
}

cplx G_transform(const FiniteVector& laguerre_coeffs, double lambda, LaplacePath path, std::size_t order) {
  if (!(lambda > 0.0)) throw ValidationError("G is evaluated for lambda > 0");
  if (path == LaplacePath::closed_form) {
    cplx v = 0.0;
    for (std::size_t n = 0; n < laguerre_coeffs.size(); ++n) {
      v += laguerre_coeffs[n] * laplace_of_laguerre(static_cast<int>(n), lambda);
    }
    return v;
  }
  auto uf = [&laguerre_coeffs](double t) {
    const double pt[1] = {t};
    return U_map(laguerre_coeffs, pt)[0];
  };
  return laplace_quadrature(uf, lambda, 0.5, order);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 2) throw ValidationError("log grid needs 0 < lo <= hi and count >= 2");
  std::vector<double> g(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.back() = hi;
  return g;
}

std::vector<double> default_lambda_grid() { return log_grid(0.1, 50.0, 24); }

BridgeReport bridge_residual(const FiniteVector& f, std::span<const double> lambda_grid) {
  if (f.size() > 64) throw ValidationError("bridge check supports len(f) <= 64");
  BridgeReport report;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0) || !(lambda <= 50.0)) throw ValidationError("bridge grid must lie in (0, 50]");
    const cplx lhs = V_map([&f](double x) { return analytic_eval(f, cplx(x, 0.0)); }, lambda);
    const cplx rhs = G_transform(f, lambda, LaplacePath::quadrature);
    const double res = std::abs(lhs - rhs);
    report.points.push_back({lambda, lhs, rhs, res});
    report.max_residual = std::max(report.max_residual, res);
  }
  return report;
}

LineAtom pullback_atom(SigmaAtom a) {
  if (!(a.lambda > 0.0)) throw ValidationError("Sigma atoms must sit at lambda > 0");
  if (!(a.mass >= 0.0)) throw ValidationError("Sigma atom mass must be nonnegative");
  const double w = a.lambda + 0.5;
  return {laguerre_substitution(a.lambda), a.mass / (w * w)};
}

std::vector<LineAtom> pullback_atoms(std::span<const SigmaAtom> atoms) {
  std::vector<LineAtom> out;
  out.reserve(atoms.size());
  for (const SigmaAtom& a : atoms) out.push_back(pullback_atom(a));
  return out;
}

}  // namespace thf
