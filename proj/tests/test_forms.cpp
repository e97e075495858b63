#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "thf/errors.hpp"
#include "thf/forms.hpp"

using namespace thf;

namespace {

// Dense product written out element by element, independent of finite_section.
std::vector<cplx> dense_product(const CoefficientSequence& c, std::span<const cplx> x) {
  const std::size_t n = x.size();
  std::vector<cplx> y(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx a = c.kind() == StructureKind::toeplitz
                         ? c.t(static_cast<long>(i) - static_cast<long>(j))
                         : cplx(c.h(static_cast<long>(i + j)), 0.0);
      y[i] += a * x[j];
    }
  }
  return y;
}

double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("form_direct examples") {
  const auto leb = from_measure(CircleMeasure::lebesgue(), 8);
  CHECK(form_direct(leb, FiniteVector::basis(3)) == doctest::Approx(1.0));
  CHECK(form_direct(leb, FiniteVector({1.0, 1.0, 1.0})) == doctest::Approx(3.0));

  const auto ones = from_measure(CircleMeasure(TrigDensity(), {{0.0, 1.0}}), 8);
  CHECK(form_direct(ones, FiniteVector({1.0, -1.0})) == doctest::Approx(0.0));
  CHECK(form_direct(ones, FiniteVector({1.0, 1.0, 1.0})) == doctest::Approx(9.0));

  const auto hil = from_measure(LineMeasure::lebesgue(0.0, 1.0), 8);
  CHECK(hil.h(4) == doctest::Approx(0.2));
  // e_0 + e_1: h_0 + 2 h_1 + h_2 = 1 + 1 + 1/3.
  CHECK(form_direct(hil, FiniteVector({1.0, 1.0})) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("form_direct rejects vectors beyond the stored coefficients") {
  const auto c = from_measure(CircleMeasure::lebesgue(), 4);
  CHECK_THROWS_AS(form_direct(c, FiniteVector(std::vector<cplx>(6, 1.0))), RangeError);
  const auto h = CoefficientSequence::hankel({1.0, 0.5, 0.25});
  CHECK(h.max_section() == 2);
  CHECK_THROWS_AS(form_direct(h, FiniteVector(std::vector<cplx>(3, 1.0))), RangeError);
  CHECK_THROWS_AS(c.t(5), RangeError);
  CHECK_THROWS_AS(h.h(3), RangeError);
}

TEST_CASE("coefficient sequence validation") {
  CHECK_THROWS_AS(CoefficientSequence::toeplitz({cplx(1.0, 0.1)}), ValidationError);
  CHECK_THROWS_AS(CoefficientSequence::toeplitz({}), ValidationError);
  CHECK_THROWS_AS(CoefficientSequence::hankel({}), ValidationError);
  const auto t = CoefficientSequence::toeplitz({1.0, cplx(0.2, 0.3)});
  CHECK(t.t(-1) == cplx(0.2, -0.3));
  CHECK(t.element(0, 1) == cplx(0.2, -0.3));
}

TEST_CASE("analytic_eval is Horner") {
  const FiniteVector f({1.0, 2.0, 3.0});
  CHECK(analytic_eval(f, 2.0) == cplx(17.0, 0.0));
  CHECK(std::abs(analytic_eval(f, cplx(0.0, 1.0)) - cplx(-2.0, 2.0)) < 1e-15);
}

TEST_CASE("representation identity on the corpus") {
  std::mt19937_64 rng(7);
  for (const auto& e : corpus::all_measures()) {
    const auto c = from_measure(e.measure, 64);
    for (int trial = 0; trial < 40; ++trial) {
      const FiniteVector f = corpus::random_vector(rng, 64);
      const double direct = form_direct(c, f);
      const double via = form_via_measure(e.measure, f);
      CHECK_MESSAGE(std::abs(direct - via) <= 1e-10 * (1.0 + std::abs(via)), e.name);
    }
  }
}

TEST_CASE("form_via_measure agrees with adaptive quadrature") {
  std::mt19937_64 rng(3);
  for (const auto& e : corpus::all_measures()) {
    const FiniteVector f = corpus::random_vector(rng, 12);
    double ref = 0.0;
    if (const auto* cm = std::get_if<CircleMeasure>(&e.measure)) {
      ref = oracle::integrate_periodic([&](double th) {
              return std::norm(analytic_eval(f, std::polar(1.0, th))) * cm->density()(th);
            }) /
            (2.0 * std::numbers::pi);
      if (cm->density().is_zero()) ref = 0.0;
      for (const auto& a : cm->atoms()) ref += a.mass * std::norm(analytic_eval(f, std::polar(1.0, a.theta)));
    } else {
      const auto& lm = std::get<LineMeasure>(e.measure);
      ref = oracle::line_density_integral(lm, [&](double x) { return std::norm(analytic_eval(f, x)); },
                                          lm.support().a, lm.support().b);
      for (const auto& a : lm.atoms()) ref += a.mass * std::norm(analytic_eval(f, a.location));
    }
    CHECK_MESSAGE(form_via_measure(e.measure, f) == doctest::Approx(ref).epsilon(1e-11), e.name);
  }
}

TEST_CASE("forms of nonnegative measures are nonnegative") {
  std::mt19937_64 rng(99);
  for (const auto& e : corpus::all_measures()) {
    const auto c = from_measure(e.measure, 32);
    for (int trial = 0; trial < 20; ++trial) {
      const FiniteVector f = corpus::random_vector(rng, 32);
      CHECK_MESSAGE(form_direct(c, f) >= -1e-12 * f.norm_squared() * (1.0 + std::abs(c.element(0, 0))), e.name);
    }
  }
}

TEST_CASE("finite_section matches element access and is Hermitian") {
  for (const auto& e : corpus::all_measures()) {
    const auto c = from_measure(e.measure, 20);
    const auto a = finite_section(c, 16);
    CHECK((a - a.adjoint()).norm() == 0.0);
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j)
        CHECK(a(static_cast<long>(i), static_cast<long>(j)) == c.element(i, j));
  }
}

TEST_CASE("fast_matvec matches the dense product") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (const auto& e : corpus::all_measures()) {
    for (std::size_t n : {1u, 2u, 7u, 64u, 100u, 512u}) {
      const auto c = from_measure(e.measure, n);
      std::vector<cplx> x(n);
      for (auto& v : x) v = cplx(g(rng), g(rng));
      CHECK_MESSAGE(rel_diff(fast_matvec(c, x), dense_product(c, x)) <= 1e-12, e.name << " N=" << n);
    }
  }
}

TEST_CASE("StructuredOperator on a section smaller than the stored range") {
  const auto c = from_measure(LineMeasure::lebesgue(0.0, 1.0), 300);
  const StructuredOperator op(c, 37);
  std::vector<cplx> x(37, cplx(1.0, 0.0)), y(37);
  op.apply(x, y);
  CHECK(rel_diff(y, dense_product(c, x)) <= 1e-13);
  CHECK_THROWS_AS(StructuredOperator(c, 302), RangeError);
}

TEST_CASE("form examples from the measure side") {
  const FiniteVector f({1.0, 1.0});
  CHECK(form_via_measure(Measure(LineMeasure({-1.0, 1.0}, JacobiDensity(), {{0.5, 1.0}})), f) ==
        doctest::Approx(9.0 / 4.0));
  const FiniteVector g({cplx(1.0, 2.0), -3.0, cplx(0.0, 0.5)});
  CHECK(form_via_measure(CircleMeasure(TrigDensity(), {{0.0, 1.0}}), g) == doctest::Approx(std::norm(cplx(-2.0, 2.5))));
  const auto ones = from_measure(CircleMeasure(TrigDensity(), {{0.0, 1.0}}), 4);
  CHECK(form_direct(ones, FiniteVector({1.0, 1.0})) == doctest::Approx(4.0));
  CHECK(form_direct(from_measure(LineMeasure::lebesgue(0.0, 1.0), 2), FiniteVector::basis(0)) == doctest::Approx(1.0));
}

TEST_CASE("Parseval on the circle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const FiniteVector f = corpus::random_vector(rng, 64);
    CHECK(std::abs(form_via_measure(CircleMeasure::lebesgue(), f) - f.norm_squared()) <= 1e-12 * f.norm_squared());
    CHECK(std::abs(form_direct(from_measure(CircleMeasure::lebesgue(), 64), f) - f.norm_squared()) <=
          1e-12 * f.norm_squared());
  }
}

TEST_CASE("semibounded forms stay above gamma times the norm") {
  std::mt19937_64 rng(21);
  for (const auto& e : corpus::circle_measures()) {
    const auto& m = std::get<CircleMeasure>(e.measure);
    const double gamma = semibounded_gap(m);
    const auto c = from_measure(m, 64);
    for (int trial = 0; trial < 30; ++trial) {
      const FiniteVector f = corpus::random_vector(rng, 64);
      CHECK_MESSAGE(form_direct(c, f) >= gamma * f.norm_squared() - 1e-10, e.name);
    }
  }
}

TEST_CASE("form_direct equals the quadratic form of the section matrix") {
  std::mt19937_64 rng(4);
  for (const auto& e : corpus::all_measures()) {
    const FiniteVector f = corpus::random_vector(rng, 40);
    const auto c = from_measure(e.measure, 40);
    const Eigen::Map<const Eigen::VectorXcd> v(f.entries().data(), static_cast<long>(f.size()));
    const cplx q = v.dot(finite_section(c, f.size()) * v);
    CHECK_MESSAGE(form_direct(c, f) == doctest::Approx(q.real()).epsilon(1e-12).scale(1.0), e.name);
    CHECK(std::abs(q.imag()) <= 1e-10 * (1.0 + std::abs(q.real())));
  }
}

TEST_CASE("analytic_eval of a geometric vector") {
  const double rho = 0.7, x = -0.9;
  const std::size_t n = 25;
  CHECK(analytic_eval(FiniteVector::geometric(rho, n), x).real() ==
        doctest::Approx((1.0 - std::pow(rho * x, n)) / (1.0 - rho * x)).epsilon(1e-14));
  CHECK(analytic_eval(FiniteVector::basis(0), cplx(3.0, -1.0)) == cplx(1.0, 0.0));
  CHECK(analytic_eval(FiniteVector({1.0, 1.0, 1.0}), 1.0) == cplx(3.0, 0.0));
}

TEST_CASE("finite_section and fast_matvec examples") {
  const auto id = from_measure(CircleMeasure::lebesgue(), 3);
  CHECK(finite_section(id, 3).isApprox(Eigen::MatrixXcd::Identity(3, 3)));
  const auto ones = from_measure(CircleMeasure(TrigDensity(), {{0.0, 1.0}}), 3);
  CHECK(finite_section(ones, 3).isApprox(Eigen::MatrixXcd::Ones(3, 3)));
  const auto hil = finite_section(from_measure(LineMeasure::lebesgue(0.0, 1.0), 2), 2);
  CHECK(hil(0, 0) == cplx(1.0, 0.0));
  CHECK(hil(0, 1) == cplx(0.5, 0.0));
  CHECK(hil(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));

  const std::vector<cplx> x{cplx(1.0, 2.0), -0.5, 3.0, cplx(0.0, -1.0)};
  const auto y = fast_matvec(from_measure(CircleMeasure::lebesgue(), 4), x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-15);
  const std::vector<cplx> all(100, 1.0);
  const auto z = fast_matvec(from_measure(CircleMeasure(TrigDensity(), {{0.0, 1.0}}), 100), all);
  for (const cplx& v : z) CHECK(std::abs(v - 100.0) <= 1e-12);
}
