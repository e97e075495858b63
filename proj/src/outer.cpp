#include "thf/outer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "thf/errors.hpp"

namespace thf {

OuterFunction::OuterFunction(TrigDensity t) : t_(std::move(t)), gamma_(trig_minimum(t_)) {
  if (!(gamma_ > 0.0)) {
    throw ValidationError("outer function needs a strictly positive density (grid minimum " + std::to_string(gamma_) +
                          ")");
  }
}

std::size_t OuterFunction::quadrature_order(cplx z) const {
  const double dist = 1.0 - std::abs(z);
  const double q = 64.0 * (t_.degree() + 1) / std::max(dist, kMinBoundaryDistance);
  return static_cast<std::size_t>(std::ceil(q));
}

OuterFunction::Samples OuterFunction::sample(std::size_t q) const {
  Samples s;
  s.zeta.resize(q);
  s.log_t.resize(q);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(q);
  for (std::size_t j = 0; j < q; ++j) {
    const double theta = h * static_cast<double>(j);
    s.zeta[j] = std::polar(1.0, theta);
    s.log_t[j] = std::log(t_(theta));
  }
  return s;
}

cplx OuterFunction::evaluate(cplx z, const Samples& s) const {
  const double dist = 1.0 - std::abs(z);
  if (!(dist >= kMinBoundaryDistance)) {
    throw ValidationError("outer function evaluated too close to the unit circle (|z| = " +
                          std::to_string(std::abs(z)) + ")");
  }
  if (s.zeta.size() < quadrature_order(z)) throw ValidationError("trapezoid order too small for this point");
  cplx sum = 0.0;
  for (std::size_t j = 0; j < s.zeta.size(); ++j) sum += (s.zeta[j] + z) / (s.zeta[j] - z) * s.log_t[j];
  return std::exp(0.5 * sum / static_cast<double>(s.zeta.size()));
}

cplx OuterFunction::operator()(cplx z) const {
  if (!(1.0 - std::abs(z) >= kMinBoundaryDistance)) return evaluate(z, Samples{});
  return evaluate(z, sample(quadrature_order(z)));
}

cplx outer_eval(const TrigDensity& t, cplx z) { return OuterFunction(t)(z); }

double boundary_modulus_check(const TrigDensity& t, std::span<const double> thetas, double r) {
  if (!(r >= 0.9) || !(r < 1.0)) throw ValidationError("boundary check radius must lie in [0.9, 1)");
  const OuterFunction outer(t);
  // |r e^{i theta}| can round a hair above r, so size the rule from the actual points.
  std::size_t q = outer.quadrature_order(cplx(r, 0.0));
  for (double theta : thetas) q = std::max(q, outer.quadrature_order(std::polar(r, theta)));
  const OuterFunction::Samples samples = outer.sample(q);
  double worst = 0.0;
  for (double theta : thetas) {
    const double modulus2 = std::norm(outer.evaluate(std::polar(r, theta), samples));
    worst = std::max(worst, std::abs(modulus2 - t(theta)));
  }
  return worst;
}

}  // namespace thf
