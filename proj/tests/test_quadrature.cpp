#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "thf/quadrature.hpp"

using namespace thf;

TEST_CASE("Gauss-Legendre is exact through degree 2n-1") {
  const QuadratureRule r = gauss_legendre(10);
  for (int k = 0; k <= 19; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(s == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("Gauss-Jacobi matches adaptive quadrature for singular weights") {
  struct Case {
    double alpha, beta, a, b;
  };
  for (const Case c : {Case{-0.5, -0.5, -1, 1}, Case{1.5, 0.5, -1, 1}, Case{-0.5, 0.0, 0, 1}, Case{0.3, -0.3, -0.5, 0.8}}) {
    const QuadratureRule r = gauss_jacobi(20, c.alpha, c.beta, c.a, c.b);
    for (int k : {0, 1, 5, 17, 39}) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double ref = oracle::integrate_jacobi([k](double x) { return std::pow(x, k); }, c.alpha, c.beta, c.a, c.b,
                                                  c.a, c.b);
      CHECK(std::abs(s - ref) <= 1e-13 * (1.0 + std::abs(ref)));
    }
  }
}

TEST_CASE("Gauss-Laguerre integrates t^k e^{-t} to k!") {
  const QuadratureRule& r = cached_gauss_laguerre(64);
  double fact = 1.0;
  for (int k = 0; k <= 30; ++k) {
    if (k > 0) fact *= k;
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    CHECK(s == doctest::Approx(fact).epsilon(1e-12));
  }
}

TEST_CASE("128-point Gauss-Laguerre has finite positive weights summing to one") {
  const QuadratureRule& r = cached_gauss_laguerre(128);
  double s = 0.0;
  for (double w : r.weights) {
    CHECK(std::isfinite(w));
    CHECK(w >= 0.0);
    s += w;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.nodes.back() > 400.0);
}

TEST_CASE("circle trapezoid is exact for trigonometric polynomials below its order") {
  const QuadratureRule r = circle_trapezoid(9);
  for (int k = 1; k < 9; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r.weights[j] * std::cos(k * r.nodes[j]);
    CHECK(std::abs(s) < 1e-14);
  }
}

TEST_CASE("invalid quadrature parameters are rejected") {
  CHECK_THROWS(gauss_jacobi(0, 0.0, 0.0));
  CHECK_THROWS(gauss_jacobi(4, -1.0, 0.0));
  CHECK_THROWS(gauss_jacobi(4, 0.0, 0.0, 1.0, 1.0));
}
