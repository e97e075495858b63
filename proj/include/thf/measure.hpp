#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace thf {

using cplx = std::complex<double>;

/// Real trigonometric polynomial t(e^{i theta}) = sum_{|k|<=K} c_k e^{ik theta}
/// with c_{-k} = conj(c_k). Only c_0..c_K are stored; c_0 is real.
class TrigDensity {
 public:
  TrigDensity() = default;
  /// Coefficients c_0..c_K. Throws ValidationError if c_0 has a nonzero
  /// imaginary part or K exceeds kMaxDegree.
  explicit TrigDensity(std::vector<cplx> nonnegative_coeffs);

  static TrigDensity constant(double value) { return TrigDensity({cplx(value, 0.0)}); }

  static constexpr int kMaxDegree = 64;

  int degree() const;
  bool is_zero() const { return coeffs_.empty(); }
  /// c_k for any integer k (zero outside [-K, K]).
  cplx coefficient(int k) const;
  double operator()(double theta) const;
  /// d/dtheta and d^2/dtheta^2, used by the minimum search.
  double derivative(double theta) const;
  double second_derivative(double theta) const;

  std::span<const cplx> coefficients() const { return coeffs_; }

 private:
  std::vector<cplx> coeffs_;  // trailing zeros stripped
};

struct Interval {
  double a = -1.0;
  double b = 1.0;
};

/// p(x) (b-x)^alpha (x-a)^beta on [a, b], alpha, beta > -1.
class JacobiDensity {
 public:
  JacobiDensity() = default;
  JacobiDensity(std::vector<double> poly_coeffs, double alpha, double beta);

  static constexpr int kMaxDegree = 64;

  int poly_degree() const { return poly_.empty() ? -1 : static_cast<int>(poly_.size()) - 1; }
  bool is_zero() const { return poly_.empty(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::span<const double> poly() const { return poly_; }
  double poly_value(double x) const;

 private:
  std::vector<double> poly_;  // trailing zeros stripped
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

struct CircleAtom {
  double theta = 0.0;  // location e^{i theta}
  double mass = 0.0;
};

struct LineAtom {
  double location = 0.0;
  double mass = 0.0;
};

/// Nonnegative measure on the unit circle: t(e^{i theta}) dm + atoms, where dm is
/// normalized arc length.
class CircleMeasure {
 public:
  CircleMeasure(TrigDensity density, std::vector<CircleAtom> atoms = {});

  static CircleMeasure lebesgue() { return CircleMeasure(TrigDensity::constant(1.0)); }

  const TrigDensity& density() const { return density_; }
  std::span<const CircleAtom> atoms() const { return atoms_; }
  double atom_mass() const;
  double total_mass() const;

 private:
  TrigDensity density_;
  std::vector<CircleAtom> atoms_;
};

/// Nonnegative measure on a real interval [a, b]: a Jacobi-weighted polynomial
/// density plus atoms (endpoint atoms allowed).
class LineMeasure {
 public:
  LineMeasure(Interval support, JacobiDensity density, std::vector<LineAtom> atoms = {});

  static LineMeasure lebesgue(double a, double b) { return LineMeasure({a, b}, JacobiDensity({1.0}, 0.0, 0.0)); }

  Interval support() const { return support_; }
  const JacobiDensity& density() const { return density_; }
  std::span<const LineAtom> atoms() const { return atoms_; }
  /// Density value p(x)(b-x)^alpha(x-a)^beta; infinite at a singular endpoint.
  double density_value(double x) const;
  double total_mass() const;

 private:
  Interval support_;
  JacobiDensity density_;
  std::vector<LineAtom> atoms_;
};

using Measure = std::variant<CircleMeasure, LineMeasure>;

/// t_n = int z^{-n} dM(z). Hermitian in n by construction.
cplx moment(const CircleMeasure& m, int n);

/// h_n = int x^n dM(x).
double moment(const LineMeasure& m, int n);

/// h_0 .. h_{count-1} in one pass (linear cost in count).
std::vector<double> moments(const LineMeasure& m, std::size_t count);

/// Moments of the bare Jacobi weight (b-x)^alpha (x-a)^beta on [a, b], via the
/// two-term recurrence obtained from integrating d/dx[x^n (b-x)^{alpha+1}(x-a)^{beta+1}].
std::vector<double> jacobi_weight_moments(Interval support, double alpha, double beta, std::size_t count);

enum class Endpoint { plus_one, minus_one };

/// Mass of the density part (atoms excluded) on [lo, hi] clipped to the support.
double density_mass(const LineMeasure& m, double lo, double hi);

/// M((1-eps, 1]) or M([-1, -1+eps)), endpoint atoms included.
double mass_near_endpoint(const LineMeasure& m, Endpoint which, double eps);

/// Essential infimum of the density part: gamma with M(X) >= gamma m(X).
double semibounded_gap(const CircleMeasure& m);

/// Minimum of a trigonometric polynomial over the circle (grid of 16K+16 points,
/// refined by Newton at every local grid minimum).
double trig_minimum(const TrigDensity& t);

}  // namespace thf
