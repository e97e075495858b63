#pragma once

#include <complex>
#include <span>
#include <vector>

#include "thf/measure.hpp"

namespace thf {

/// Outer function with boundary modulus sqrt(t) for a strictly positive
/// trigonometric density t:
///
///   t_out(z) = exp( 1/2 int (zeta + z)/(zeta - z) ln t(zeta) dm(zeta) ),  |z| < 1.
///
/// The Herglotz integral uses the trapezoidal rule on Q equispaced angles with
/// Q >= 64 (K + 1) / (1 - |z|).
class OuterFunction {
 public:
  /// Throws ValidationError if min t <= 0 (a shift t + beta is the caller's job).
  explicit OuterFunction(TrigDensity t);

  /// Smallest admissible distance from z to the unit circle.
  static constexpr double kMinBoundaryDistance = 1e-6;

  cplx operator()(cplx z) const;
  std::size_t quadrature_order(cplx z) const;

  /// ln t and the nodes zeta_j for one trapezoid order; reusable across points
  /// that share the order.
  struct Samples {
    std::vector<cplx> zeta;
    std::vector<double> log_t;
  };
  Samples sample(std::size_t q) const;
  /// Evaluation with precomputed samples; q must be >= quadrature_order(z).
  cplx evaluate(cplx z, const Samples& s) const;
  const TrigDensity& density() const { return t_; }
  double density_minimum() const { return gamma_; }

 private:
  TrigDensity t_;
  double gamma_ = 0.0;
};

cplx outer_eval(const TrigDensity& t, cplx z);

/// max over thetas of | |t_out(r e^{i theta})|^2 - t(e^{i theta}) |, 0.9 <= r < 1.
double boundary_modulus_check(const TrigDensity& t, std::span<const double> thetas, double r);

}  // namespace thf
