#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "thf/forms.hpp"

namespace thf {

/// Extreme-eigenvalue estimates for one finite section.
struct SpectralReport {
  std::size_t n = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double residual_norm = 0.0;  // max of ||Av - lambda v|| over the two Ritz pairs
  int iterations = 0;          // Lanczos steps, both runs combined
  bool converged = false;
  Eigen::VectorXcd min_vector;  // unit Ritz vectors
  Eigen::VectorXcd max_vector;
};

/// Thrown when Lanczos exhausts its iteration budget; carries the best estimate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, SpectralReport best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const SpectralReport& best_estimate() const { return best_; }

 private:
  SpectralReport best_;
};

struct LanczosOptions {
  double tol = 1e-10;
  std::uint64_t seed = 42;
  int max_iterations = 0;  // 0 means 4N
};

using LinearOperator = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

struct RitzPair {
  double value = 0.0;
  Eigen::VectorXcd vector;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest eigenpair of a Hermitian operator by Lanczos with full
/// reorthogonalization. Converged when ||Av - theta v|| <= tol (|theta| + norm_bound).
RitzPair lanczos_largest(const LinearOperator& op, std::size_t n, double norm_bound, const LanczosOptions& opts);

/// Row-sum bound on ||A|| for the N x N section, from the coefficients alone.
double gershgorin_bound(const CoefficientSequence& c, std::size_t n);

/// lambda_max by Lanczos on A, lambda_min by Lanczos on s I - A with s the
/// Gershgorin bound. Throws ConvergenceError on failure.
SpectralReport extreme_eigs(const CoefficientSequence& c, std::size_t n, double tol = 1e-10,
                            std::uint64_t seed = 42);

struct PsdResult {
  bool positive = false;
  double lambda_min = 0.0;
  std::optional<FiniteVector> witness;  // set when !positive; form_direct(c, witness) < 0
  SpectralReport report;
};

PsdResult psd_check(const CoefficientSequence& c, std::size_t n, double tol = 1e-10, std::uint64_t seed = 42);

/// (N, lambda_max) for each N of an ascending list.
std::vector<std::pair<std::size_t, double>> norm_growth(const CoefficientSequence& c,
                                                        const std::vector<std::size_t>& sizes, double tol = 1e-10,
                                                        std::uint64_t seed = 42);

}  // namespace thf
