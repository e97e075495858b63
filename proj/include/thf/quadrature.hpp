#pragma once

#include <cstddef>
#include <vector>

namespace thf {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss–Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1].
///
/// Nodes are the eigenvalues of the Jacobi matrix (Golub–Welsch); weights come
/// from the Christoffel function, so the cost is O(n^2) and no eigenvectors are
/// formed. Exact for polynomials of degree <= 2n - 1.
QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta);

/// Same rule mapped to [a, b] for the weight (b-x)^alpha (x-a)^beta.
QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta, double a, double b);

/// Memoized version of the [-1, 1] rule. Thread-safe; the reference stays valid
/// for the lifetime of the program.
const QuadratureRule& cached_gauss_jacobi(std::size_t n, double alpha, double beta);

inline QuadratureRule gauss_legendre(std::size_t n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Gauss–Laguerre rule for the weight e^{-t} on [0, inf).
QuadratureRule gauss_laguerre(std::size_t n);
const QuadratureRule& cached_gauss_laguerre(std::size_t n);

/// Equispaced angles 2*pi*j/n with weight 1/n (normalized arc length).
/// Exact for trigonometric polynomials of degree < n.
QuadratureRule circle_trapezoid(std::size_t n);

}  // namespace thf
