#pragma once

#include <complex>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "thf/forms.hpp"
#include "thf/measure.hpp"

namespace thf {

/// One named criterion. Every verdict carries at least one scalar in `evidence`.
struct Verdict {
  bool holds = false;
  bool required = true;  // participates in DiagnosticReport::overall
  std::map<std::string, double> evidence;
  std::map<std::string, std::vector<double>> series;
  std::string note;
};

struct DiagnosticReport {
  std::map<std::string, Verdict> verdicts;
  bool overall = false;

  /// overall = conjunction of the required verdicts.
  void finalize();
};

/// Powers of two 1, 2, 4, ... up to and including the largest <= limit.
std::vector<std::size_t> dyadic_grid(std::size_t limit);

struct DecayStats {
  std::vector<std::size_t> grid;   // dyadic N
  std::vector<double> sup_tail;    // sup_{|n| >= N} |c_n| over the stored range
  std::vector<double> tail_energy; // sum_{|n| >= N} |c_n|^2 over the stored range (both signs for Toeplitz)
  double exponent = std::numeric_limits<double>::quiet_NaN();  // log-log slope of |c_n|
  std::size_t fit_lo = 0;
  std::size_t fit_hi = 0;
};

/// Fit range defaults to [64, max_index] when at least 64 indices are stored,
/// otherwise [1, max_index].
DecayStats decay_stats(const CoefficientSequence& c, std::size_t fit_lo = 0, std::size_t fit_hi = 0);

struct DiagnosticOptions {
  std::size_t coefficient_range = 4096;  // highest moment index used for tail evidence
  std::vector<std::size_t> norm_sections{256, 1024, 2048};  // empty skips the norm-growth cross-check
  double tol = 1e-10;
  std::uint64_t seed = 42;
};

/// Decay evidence holds when sup_{n >= top/2} |c_n| <= kTailDrop * sup_{n >= top/16} |c_n|
/// (or the tail is numerically zero).
inline constexpr double kTailDrop = 0.9;

DiagnosticReport toeplitz_closable(const CircleMeasure& m, const DiagnosticOptions& opts = {});
DiagnosticReport hankel_closable(const LineMeasure& m, const DiagnosticOptions& opts = {});

/// M/eps at eps = 2^{-1} .. 2^{-20} must not keep growing: the last two levels
/// may differ by at most this factor.
inline constexpr double kEndpointRatioGrowth = 1.01;
/// (n+1)|h_n| on the upper half of the index range may exceed the lower-half
/// maximum by at most this factor.
inline constexpr double kDecayGrowth = 1.01;

DiagnosticReport widom_boundedness(const LineMeasure& m, const DiagnosticOptions& opts = {});
DiagnosticReport widom_boundedness(const CoefficientSequence& h, const DiagnosticOptions& opts = {});

/// f_n = rho^n, n >= 0.
struct GeometricVector {
  cplx rho;
};

struct ClosureValue {
  double value = 0.0;  // +inf when f is outside the form domain
  bool in_domain = true;
};

/// int |(sum f_n z^n)|^2 dM for a finite f, or for f_n = rho^n with |rho| < 1.
ClosureValue closure_domain_value(const Measure& m, const FiniteVector& f);
ClosureValue closure_domain_value(const Measure& m, GeometricVector f);

}  // namespace thf
