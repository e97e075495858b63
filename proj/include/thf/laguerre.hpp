#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "thf/forms.hpp"
#include "thf/measure.hpp"

namespace thf {

/// L_n(x) by (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}. Guarded to n <= 512 and
/// 0 <= x <= 700; use laguerre_scaled beyond that.
double laguerre_eval(int n, double x);

/// L_0(x) e^{-x/2} .. L_{n_max}(x) e^{-x/2}. The recurrence runs on rescaled
/// values with the exponent tracked separately, so large x neither overflows
/// L_n nor underflows the exponential prematurely.
std::vector<double> laguerre_scaled_all(int n_max, double x);
double laguerre_scaled(int n, double x);

/// int_0^inf L_n(t) e^{-(1/2+lambda) t} dt = (lambda+1/2)^{-1} ((2 lambda-1)/(2 lambda+1))^n.
double laplace_of_laguerre(int n, double lambda);

/// (Uf)(t) = sum f_n L_n(t) e^{-t/2} at each t >= 0.
std::vector<cplx> U_map(const FiniteVector& f, std::span<const double> t_points);

/// (Vu)(lambda) = (lambda+1/2)^{-1} u((2 lambda-1)/(2 lambda+1)), lambda > 0.
cplx V_map(const std::function<cplx(double)>& u, double lambda);

/// x(lambda) = (2 lambda - 1)/(2 lambda + 1); maps (0, inf) onto (-1, 1).
double laguerre_substitution(double lambda);

/// int_0^inf e^{-lambda t} g(t) dt by Gauss–Laguerre after the change of
/// variables s = (lambda + decay) t. `decay` declares g(t) = e^{-decay t} q(t)
/// with q smooth and polynomially bounded; the rule then integrates q exactly
/// when q is a polynomial of degree < 2 order.
cplx laplace_quadrature(const std::function<cplx(double)>& g, double lambda, double decay = 0.0,
                        std::size_t order = 128);

enum class LaplacePath { closed_form, quadrature };

/// Laplace transform of Uf at lambda > 0. closed_form sums laplace_of_laguerre;
/// quadrature evaluates Uf pointwise and integrates it, independently of the
/// closed form.
cplx G_transform(const FiniteVector& laguerre_coeffs, double lambda, LaplacePath path = LaplacePath::closed_form,
                 std::size_t order = 128);

/// Logarithmically spaced grid, count >= 2 points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> default_lambda_grid();

struct BridgePoint {
  double lambda;
  cplx power_side;    // V B f
  cplx laplace_side;  // G U f (quadrature)
  double residual;
};

struct BridgeReport {
  std::vector<BridgePoint> points;
  double max_residual = 0.0;
};

/// Compares V(Bf)(lambda) with (G Uf)(lambda) on the grid. len(f) <= 64 and
/// every lambda in (0, 50].
BridgeReport bridge_residual(const FiniteVector& f, std::span<const double> lambda_grid);

struct SigmaAtom {
  double lambda;
  double mass;
};

/// Point mass of dSigma at lambda > 0 pulled back to dM on (-1, 1):
/// x = (2 lambda - 1)/(2 lambda + 1), mass (lambda + 1/2)^{-2} sigma.
LineAtom pullback_atom(SigmaAtom a);
std::vector<LineAtom> pullback_atoms(std::span<const SigmaAtom> atoms);

}  // namespace thf
