#include "thf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "thf/errors.hpp"
#include "thf/quadrature.hpp"

namespace thf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

void check_mass(double mass) {
  require_finite(mass, "atom mass");
  if (mass < 0.0) throw ValidationError("atom mass must be nonnegative, got " + std::to_string(mass));
}

// Integral of p(x)(b-x)^alpha(x-a)^beta over [lo, hi] subset [a, b]. Factors
// whose singular endpoint coincides with lo/hi go into the Jacobi weight; the
// remaining factors are smooth on [lo, hi].
double integrate_density_piece(const LineMeasure& m, double lo, double hi) {
  const JacobiDensity& d = m.density();
  if (d.is_zero() || !(hi > lo)) return 0.0;
  const Interval s = m.support();
  const bool hi_at_b = hi >= s.b;
  const bool lo_at_a = lo <= s.a;
  const double wa = hi_at_b ? d.alpha() : 0.0;
  const double wb = lo_at_a ? d.beta() : 0.0;
  const bool smooth_extra = (!hi_at_b && d.alpha() != 0.0) || (!lo_at_a && d.beta() != 0.0);
  const std::size_t order = static_cast<std::size_t>(d.poly_degree() / 2 + 1) + (smooth_extra ? 48 : 0);
  const QuadratureRule rule = gauss_jacobi(order, wa, wb, lo, hi);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i];
    double f = d.poly_value(x);
    if (!hi_at_b && d.alpha() != 0.0) f *= std::pow(s.b - x, d.alpha());
    if (!lo_at_a && d.beta() != 0.0) f *= std::pow(x - s.a, d.beta());
    sum += rule.weights[i] * f;
  }
  return sum;
}

}  // namespace

// ---------------------------------------------------------------- TrigDensity

TrigDensity::TrigDensity(std::vector<cplx> nonnegative_coeffs) : coeffs_(std::move(nonnegative_coeffs)) {
  for (const cplx& c : coeffs_) {
    require_finite(c.real(), "trigonometric coefficient");
    require_finite(c.imag(), "trigonometric coefficient");
  }
  while (!coeffs_.empty() && coeffs_.back() == cplx(0.0, 0.0)) coeffs_.pop_back();
  if (!coeffs_.empty() && coeffs_[0].imag() != 0.0) {
    throw ValidationError("c_0 of a real trigonometric polynomial must be real");
  }
  if (degree() > kMaxDegree) {
    throw ValidationError("trigonometric degree " + std::to_string(degree()) + " exceeds cap " +
                          std::to_string(kMaxDegree));
  }
}

int TrigDensity::degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }

cplx TrigDensity::coefficient(int k) const {
  const std::size_t ak = static_cast<std::size_t>(k < 0 ? -static_cast<long>(k) : k);
  if (ak >= coeffs_.size()) return {0.0, 0.0};
  return k < 0 ? std::conj(coeffs_[ak]) : coeffs_[ak];
}

double TrigDensity::operator()(double theta) const {
  if (coeffs_.empty()) return 0.0;
  double v = coeffs_[0].real();
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    v += 2.0 * (coeffs_[k] * std::polar(1.0, static_cast<double>(k) * theta)).real();
  }
  return v;
}

double TrigDensity::derivative(double theta) const {
  double v = 0.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k);
    v += 2.0 * (cplx(0.0, kk) * coeffs_[k] * std::polar(1.0, kk * theta)).real();
  }
  return v;
}

double TrigDensity::second_derivative(double theta) const {
  double v = 0.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k);
    v -= 2.0 * kk * kk * (coeffs_[k] * std::polar(1.0, kk * theta)).real();
  }
  return v;
}

// -------------------------------------------------------------- JacobiDensity

JacobiDensity::JacobiDensity(std::vector<double> poly_coeffs, double alpha, double beta)
    : poly_(std::move(poly_coeffs)), alpha_(alpha), beta_(beta) {
  for (double c : poly_) require_finite(c, "polynomial coefficient");
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw ValidationError("Jacobi exponents alpha, beta must exceed -1");
  while (!poly_.empty() && poly_.back() == 0.0) poly_.pop_back();
  if (poly_degree() > kMaxDegree) {
    throw ValidationError("polynomial degree " + std::to_string(poly_degree()) + " exceeds cap " +
                          std::to_string(kMaxDegree));
  }
}

double JacobiDensity::poly_value(double x) const {
  double v = 0.0;
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) v = v * x + *it;
  return v;
}

// -------------------------------------------------------------- CircleMeasure

CircleMeasure::CircleMeasure(TrigDensity density, std::vector<CircleAtom> atoms)
    : density_(std::move(density)), atoms_(std::move(atoms)) {
  const int k = density_.degree();
  const int grid = 4 * k + 1;
  double scale = 0.0;
  for (const cplx& c : density_.coefficients()) scale += std::abs(c);
  for (int j = 0; j < grid; ++j) {
    const double theta = kTwoPi * j / grid;
    if (density_(theta) < -1e-12 * scale) {
      throw ValidationError("circle density is negative at theta=" + std::to_string(theta));
    }
  }
  for (CircleAtom& a : atoms_) {
    require_finite(a.theta, "atom location");
    check_mass(a.mass);
    a.theta = normalize_angle(a.theta);
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      if (atoms_[i].theta == atoms_[j].theta) throw ValidationError("circle atom locations must be distinct");
    }
  }
}

double CircleMeasure::atom_mass() const {
  double s = 0.0;
  for (const CircleAtom& a : atoms_) s += a.mass;
  return s;
}

double CircleMeasure::total_mass() const { return density_.coefficient(0).real() + atom_mass(); }

// ---------------------------------------------------------------- LineMeasure

LineMeasure::LineMeasure(Interval support, JacobiDensity density, std::vector<LineAtom> atoms)
    : support_(support), density_(std::move(density)), atoms_(std::move(atoms)) {
  require_finite(support_.a, "interval endpoint");
  require_finite(support_.b, "interval endpoint");
  if (!(support_.a < support_.b)) throw ValidationError("interval support requires a < b");
  const int deg = std::max(density_.poly_degree(), 0);
  const int grid = std::max(4 * deg + 1, 3);
  const double radius = std::max({1.0, std::abs(support_.a), std::abs(support_.b)});
  double scale = 0.0, rj = 1.0;
  for (double c : density_.poly()) {
    scale += std::abs(c) * rj;
    rj *= radius;
  }
  for (int j = 0; j < grid; ++j) {
    const double x = support_.a + (support_.b - support_.a) * j / (grid - 1);
    if (density_.poly_value(x) < -1e-12 * scale) {
      throw ValidationError("interval density is negative at x=" + std::to_string(x));
    }
  }
  for (const LineAtom& a : atoms_) {
    require_finite(a.location, "atom location");
    check_mass(a.mass);
    if (a.location < support_.a || a.location > support_.b) {
      throw ValidationError("atom at x=" + std::to_string(a.location) + " lies outside the support interval");
    }
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      if (atoms_[i].location == atoms_[j].location) throw ValidationError("line atom locations must be distinct");
    }
  }
}

double LineMeasure::density_value(double x) const {
  if (density_.is_zero() || x < support_.a || x > support_.b) return 0.0;
  return density_.poly_value(x) * std::pow(support_.b - x, density_.alpha()) *
         std::pow(x - support_.a, density_.beta());
}

double LineMeasure::total_mass() const { return moments(*this, 1)[0]; }

// -------------------------------------------------------------------- moments

cplx moment(const CircleMeasure& m, int n) {
  // int e^{-in theta} t(theta) dm = c_n
  cplx v = m.density().coefficient(n);
  for (const CircleAtom& a : m.atoms()) {
    v += a.mass * std::polar(1.0, -static_cast<double>(n) * a.theta);
  }
  return v;
}

std::vector<double> jacobi_weight_moments(Interval s, double alpha, double beta, std::size_t count) {
  std::vector<double> mom(count);
  if (count == 0) return mom;
  const double a = s.a, b = s.b;
  mom[0] = std::exp((alpha + beta + 1.0) * std::log(b - a) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                    std::lgamma(alpha + beta + 2.0));
  for (std::size_t n = 0; n + 1 < count; ++n) {
    const double nn = static_cast<double>(n);
    const double prev = n > 0 ? mom[n - 1] : 0.0;
    mom[n + 1] =
        ((nn * (a + b) + (alpha + 1.0) * a + (beta + 1.0) * b) * mom[n] - nn * a * b * prev) / (nn + alpha + beta + 2.0);
  }
  return mom;
}

std::vector<double> moments(const LineMeasure& m, std::size_t count) {
  std::vector<double> h(count, 0.0);
  const JacobiDensity& d = m.density();
  if (!d.is_zero()) {
    const auto p = d.poly();
    const std::vector<double> w = jacobi_weight_moments(m.support(), d.alpha(), d.beta(), count + p.size() - 1);
    for (std::size_t n = 0; n < count; ++n) {
      double s = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * w[n + j];
      h[n] = s;
    }
  }
  for (const LineAtom& a : m.atoms()) {
    double xn = 1.0;
    for (std::size_t n = 0; n < count; ++n) {
      h[n] += a.mass * xn;
      xn *= a.location;
    }
  }
  return h;
}

double moment(const LineMeasure& m, int n) {
  if (n < 0) throw ValidationError("power moment index must be nonnegative");
  return moments(m, static_cast<std::size_t>(n) + 1).back();
}

double density_mass(const LineMeasure& m, double lo, double hi) {
  return integrate_density_piece(m, std::max(lo, m.support().a), std::min(hi, m.support().b));
}

double mass_near_endpoint(const LineMeasure& m, Endpoint which, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw ValidationError("endpoint window eps must lie in (0, 1)");
  const Interval s = m.support();
  double mass = 0.0;
  if (which == Endpoint::plus_one) {
    for (const LineAtom& a : m.atoms()) {
      if (a.location > 1.0 - eps && a.location <= 1.0) mass += a.mass;
    }
    mass += integrate_density_piece(m, std::max(s.a, 1.0 - eps), std::min(s.b, 1.0));
  } else {
    for (const LineAtom& a : m.atoms()) {
      if (a.location >= -1.0 && a.location < -1.0 + eps) mass += a.mass;
    }
    mass += integrate_density_piece(m, std::max(s.a, -1.0), std::min(s.b, -1.0 + eps));
  }
  return mass;
}

double trig_minimum(const TrigDensity& t) {
  if (t.is_zero()) return 0.0;
  const int k = t.degree();
  if (k == 0) return t(0.0);
  const int grid = 16 * k + 16;
  const double h = kTwoPi / grid;
  std::vector<double> vals(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) vals[static_cast<std::size_t>(j)] = t(h * j);
  double best = *std::min_element(vals.begin(), vals.end());
  for (int j = 0; j < grid; ++j) {
    const double v = vals[static_cast<std::size_t>(j)];
    const double left = vals[static_cast<std::size_t>((j + grid - 1) % grid)];
    const double right = vals[static_cast<std::size_t>((j + 1) % grid)];
    if (v > left || v > right) continue;
    // Newton on t' inside the bracket [theta - h, theta + h].
    const double centre = h * j;
    double theta = centre;
    for (int it = 0; it < 8; ++it) {
      const double d2 = t.second_derivative(theta);
      if (!(d2 > 0.0)) break;
      const double next = theta - t.derivative(theta) / d2;
      if (std::abs(next - centre) > h) break;
      theta = next;
    }
    best = std::min(best, t(theta));
  }
  return best;
}

double semibounded_gap(const CircleMeasure& m) { return trig_minimum(m.density()); }

}  // namespace thf
