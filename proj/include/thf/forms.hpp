#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "thf/measure.hpp"

namespace thf {

/// Finitely supported sequence f_0 .. f_{N-1}.
class FiniteVector {
 public:
  FiniteVector() = default;
  explicit FiniteVector(std::vector<cplx> entries) : entries_(std::move(entries)) {}

  static FiniteVector basis(std::size_t n, std::size_t length = 0);
  static FiniteVector geometric(cplx ratio, std::size_t length);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const cplx& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const cplx> entries() const { return entries_; }
  double norm_squared() const;

 private:
  std::vector<cplx> entries_;
};

enum class StructureKind { toeplitz, hankel };

/// Toeplitz elements t_n, |n| <= N_max (t_{-n} = conj(t_n)), or real Hankel
/// elements h_n, 0 <= n <= 2 N_max. Either way sections up to N_max + 1 are
/// covered.
class CoefficientSequence {
 public:
  /// t_0 .. t_{N_max}; t_0 must be real.
  static CoefficientSequence toeplitz(std::vector<cplx> nonnegative_part);
  /// h_0 .. h_{L-1}; the largest covered section is floor((L+1)/2).
  static CoefficientSequence hankel(std::vector<double> values);

  StructureKind kind() const { return kind_; }
  /// Largest N such that the N x N section is covered.
  std::size_t max_section() const;
  /// Highest stored index (N_max for Toeplitz, L-1 for Hankel).
  std::size_t max_index() const;

  /// t_n for any |n| <= N_max. Throws RangeError outside.
  cplx t(long n) const;
  /// h_n for 0 <= n < L. Throws RangeError outside.
  double h(long n) const;
  /// Matrix element of the section: t_{row-col} or h_{row+col}.
  cplx element(std::size_t row, std::size_t col) const;

  std::span<const cplx> toeplitz_values() const { return toeplitz_; }
  std::span<const double> hankel_values() const { return hankel_; }

 private:
  StructureKind kind_ = StructureKind::toeplitz;
  std::vector<cplx> toeplitz_;
  std::vector<double> hankel_;
};

/// Moments of M up to N_max (Toeplitz) or 2 N_max (Hankel).
CoefficientSequence from_measure(const CircleMeasure& m, std::size_t n_max);
CoefficientSequence from_measure(const LineMeasure& m, std::size_t n_max);
CoefficientSequence from_measure(const Measure& m, std::size_t n_max);

/// sum_{n,m} c_{n-m or n+m} f_m conj(f_n).
double form_direct(const CoefficientSequence& c, const FiniteVector& f);

/// sum_n f_n z^n by Horner.
cplx analytic_eval(const FiniteVector& f, cplx z);

/// int |sum f_n z^n|^2 dM with a quadrature rule exact for the integrand.
double form_via_measure(const CircleMeasure& m, const FiniteVector& f);
double form_via_measure(const LineMeasure& m, const FiniteVector& f);
double form_via_measure(const Measure& m, const FiniteVector& f);

/// Dense N x N section (Hermitian, or real symmetric for Hankel).
Eigen::MatrixXcd finite_section(const CoefficientSequence& c, std::size_t n);

/// Matrix-free section product via circulant embedding of length
/// next_pow2(2N - 1). Holds the transformed embedding vector; apply() is const
/// and safe to call concurrently.
class StructuredOperator {
 public:
  StructuredOperator(const CoefficientSequence& c, std::size_t n);
  ~StructuredOperator();
  StructuredOperator(StructuredOperator&&) noexcept;
  StructuredOperator& operator=(StructuredOperator&&) noexcept;

  std::size_t size() const { return n_; }
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

 private:
  struct Plans;
  std::size_t n_ = 0;
  std::size_t embed_ = 0;
  bool flip_ = false;  // Hankel: reverse the input, then multiply by a Toeplitz matrix
  std::vector<cplx> symbol_;
  std::unique_ptr<Plans> plans_;
};

std::vector<cplx> fast_matvec(const CoefficientSequence& c, std::span<const cplx> x);

}  // namespace thf
