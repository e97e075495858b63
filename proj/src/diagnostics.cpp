#include "thf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "thf/errors.hpp"
#include "thf/quadrature.hpp"
#include "thf/spectra.hpp"

namespace thf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |c_n| for n = 0 .. max_index (Toeplitz uses n >= 0; the negative half mirrors it).
std::vector<double> magnitudes(const CoefficientSequence& c) {
  std::vector<double> out;
  if (c.kind() == StructureKind::toeplitz) {
    for (const cplx& v : c.toeplitz_values()) out.push_back(std::abs(v));
  } else {
    for (double v : c.hankel_values()) out.push_back(std::abs(v));
  }
  return out;
}

// sup_{n >= N} is nonincreasing in N. The tail "vanishes" when the window
// [top/2, top] sits clearly below the window [top/16, top]; almost periodic
// sequences (atoms on the circle or at +-1) keep both windows at the same level.
double tail_ratio(const std::vector<double>& sup_tail) {
  const std::size_t n = sup_tail.size();
  if (n < 2) return 0.0;
  const double last = sup_tail[n - 2];
  const double ref = sup_tail[n >= 5 ? n - 5 : 0];
  if (!std::isfinite(last) || !std::isfinite(ref)) return kInf;
  return ref > 0.0 ? last / ref : 0.0;
}

bool tails_vanish(const std::vector<double>& sup_tail, double scale) {
  if (sup_tail.size() < 2) return true;
  const double last = sup_tail[sup_tail.size() - 2];
  if (std::isfinite(last) && last <= 1e-12 * std::max(scale, 1.0)) return true;
  return tail_ratio(sup_tail) <= kTailDrop;
}

Verdict decay_verdict(const CoefficientSequence& c) {
  const DecayStats s = decay_stats(c);
  Verdict v;
  v.required = false;
  v.series["grid"] = std::vector<double>(s.grid.begin(), s.grid.end());
  v.series["sup_tail"] = s.sup_tail;
  v.evidence["sup_tail_last"] = s.sup_tail.empty() ? 0.0 : s.sup_tail.back();
  v.evidence["sup_tail_first"] = s.sup_tail.empty() ? 0.0 : s.sup_tail.front();
  v.evidence["tail_energy_last"] = s.tail_energy.empty() ? 0.0 : s.tail_energy.back();
  v.evidence["max_index"] = static_cast<double>(c.max_index());
  v.evidence["tail_ratio"] = tail_ratio(s.sup_tail);
  const double scale = magnitudes(c).front();
  v.holds = tails_vanish(s.sup_tail, scale);
  v.note = "advisory: finite data cannot decide a limit";
  return v;
}

Verdict norm_growth_verdict(const CoefficientSequence& c, const DiagnosticOptions& opts) {
  std::vector<std::size_t> sizes;
  for (std::size_t n : opts.norm_sections) {
    if (n <= c.max_section()) sizes.push_back(n);
  }
  Verdict v;
  v.required = false;
  if (sizes.size() < 2) {
    v.holds = true;
    v.evidence["sections"] = static_cast<double>(sizes.size());
    v.note = "skipped: fewer than two sections available";
    return v;
  }
  const auto growth = norm_growth(c, sizes, opts.tol, opts.seed);
  std::vector<double> ns, lambdas;
  for (const auto& [n, lam] : growth) {
    ns.push_back(static_cast<double>(n));
    lambdas.push_back(lam);
  }
  const double ratio = lambdas.front() > 0.0 ? lambdas.back() / lambdas.front() : (lambdas.back() > 0.0 ? kInf : 1.0);
  v.series["section"] = ns;
  v.series["lambda_max"] = lambdas;
  v.evidence["lambda_max_last"] = lambdas.back();
  v.evidence["growth_ratio"] = ratio;
  v.holds = ratio < 1.5;
  v.note = "advisory: lambda_max growth between the smallest and largest section";
  return v;
}

// Weighted sup (n+1)|h_n|; holds when the upper half of the range does not
// exceed the lower half by more than kDecayGrowth.
Verdict weighted_decay_verdict(const CoefficientSequence& h) {
  const auto vals = h.hankel_values();
  const std::size_t count = vals.size();
  const std::size_t half = std::max<std::size_t>(1, count / 2);
  double lower = 0.0, upper = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double w = static_cast<double>(n + 1) * std::abs(vals[n]);
    (n < half ? lower : upper) = std::max(n < half ? lower : upper, w);
  }
  Verdict v;
  v.evidence["sup_weighted"] = std::max(lower, upper);
  v.evidence["sup_weighted_lower_half"] = lower;
  v.evidence["sup_weighted_upper_half"] = upper;
  v.evidence["max_index"] = static_cast<double>(count - 1);
  v.holds = upper <= kDecayGrowth * lower;
  v.note = "sup_n (n+1)|h_n| must not grow across the available range";
  return v;
}

}  // namespace

void DiagnosticReport::finalize() {
  overall = true;
  for (const auto& [name, v] : verdicts) {
    if (v.required) overall = overall && v.holds;
  }
}

std::vector<std::size_t> dyadic_grid(std::size_t limit) {
  std::vector<std::size_t> g;
  for (std::size_t n = 1; n <= limit && n != 0; n *= 2) g.push_back(n);
  return g;
}

DecayStats decay_stats(const CoefficientSequence& c, std::size_t fit_lo, std::size_t fit_hi) {
  const std::vector<double> mag = magnitudes(c);
  const std::size_t top = mag.size() - 1;
  const bool two_sided = c.kind() == StructureKind::toeplitz;

  // suffix sup and suffix energy
  std::vector<double> sup(mag.size() + 1, 0.0), energy(mag.size() + 1, 0.0);
  for (std::size_t n = mag.size(); n-- > 0;) {
    sup[n] = std::max(sup[n + 1], mag[n]);
    energy[n] = energy[n + 1] + mag[n] * mag[n];
  }
  DecayStats s;
  s.grid = dyadic_grid(top);
  for (std::size_t n : s.grid) {
    s.sup_tail.push_back(sup[n]);
    s.tail_energy.push_back(two_sided ? 2.0 * energy[n] : energy[n]);
  }

  if (fit_hi == 0) fit_hi = top;
  if (fit_lo == 0) fit_lo = top >= 128 ? 64 : 1;
  fit_hi = std::min(fit_hi, top);
  s.fit_lo = fit_lo;
  s.fit_hi = fit_hi;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t n = fit_lo; n <= fit_hi; ++n) {
    if (mag[n] <= 0.0) continue;
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(mag[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    const double k = static_cast<double>(cnt);
    const double denom = k * sxx - sx * sx;
    if (denom != 0.0) s.exponent = (k * sxy - sx * sy) / denom;
  }
  return s;
}

DiagnosticReport toeplitz_closable(const CircleMeasure& m, const DiagnosticOptions& opts) {
  DiagnosticReport r;
  Verdict ac;
  ac.holds = m.atoms().empty();
  ac.evidence["atom_mass"] = m.atom_mass();
  ac.evidence["atom_count"] = static_cast<double>(m.atoms().size());
  ac.note = "closable iff the representing measure has no atoms";
  r.verdicts["absolutely_continuous"] = ac;
  r.verdicts["coefficient_decay"] = decay_verdict(from_measure(m, opts.coefficient_range));
  r.finalize();
  return r;
}

DiagnosticReport hankel_closable(const LineMeasure& m, const DiagnosticOptions& opts) {
  DiagnosticReport r;
  const Interval s = m.support();
  double endpoint_mass = 0.0, outside_atoms = 0.0;
  for (const LineAtom& a : m.atoms()) {
    if (a.location == 1.0 || a.location == -1.0) endpoint_mass += a.mass;
    if (std::abs(a.location) > 1.0) outside_atoms += a.mass;
  }
  double outside_density = 0.0;
  if (s.a < -1.0) outside_density += density_mass(m, s.a, std::min(s.b, -1.0));
  if (s.b > 1.0) outside_density += density_mass(m, std::max(s.a, 1.0), s.b);

  Verdict ii;
  ii.evidence["endpoint_atom_mass"] = endpoint_mass;
  ii.evidence["outside_atom_mass"] = outside_atoms;
  ii.evidence["outside_density_mass"] = outside_density;
  ii.holds = endpoint_mass == 0.0 && outside_atoms == 0.0 && outside_density == 0.0;
  ii.note = "measure must live on the open interval (-1, 1)";
  r.verdicts["ii_open_interval_support"] = ii;
  r.verdicts["iii_coefficient_decay"] = decay_verdict(from_measure(m, opts.coefficient_range / 2));
  r.finalize();
  return r;
}

DiagnosticReport widom_boundedness(const LineMeasure& m, const DiagnosticOptions& opts) {
  const Interval s = m.support();
  if (s.a < -1.0 || s.b > 1.0) throw ValidationError("boundedness test needs a measure supported in [-1, 1]");
  DiagnosticReport r;

  Verdict ii;
  std::vector<double> ratios;
  double sup_ratio = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const double mass = std::max(mass_near_endpoint(m, Endpoint::plus_one, eps),
                                 mass_near_endpoint(m, Endpoint::minus_one, eps));
    ratios.push_back(mass / eps);
    sup_ratio = std::max(sup_ratio, mass / eps);
  }
  const double prev = ratios[ratios.size() - 2];
  const double last = ratios.back();
  const double growth = prev > 0.0 ? last / prev : (last > 0.0 ? kInf : 1.0);
  ii.series["endpoint_ratio"] = ratios;
  ii.evidence["sup_ratio"] = sup_ratio;
  ii.evidence["last_level_growth"] = growth;
  ii.holds = std::isfinite(sup_ratio) && growth <= kEndpointRatioGrowth;
  ii.note = "M(1-eps,1]/eps and M[-1,-1+eps)/eps over eps = 2^-1..2^-20";
  r.verdicts["ii_endpoint_mass"] = ii;

  const CoefficientSequence h = from_measure(m, opts.coefficient_range / 2);
  r.verdicts["iii_coefficient_decay"] = weighted_decay_verdict(h);
  if (!opts.norm_sections.empty()) r.verdicts["norm_growth"] = norm_growth_verdict(h, opts);
  r.finalize();
  return r;
}

DiagnosticReport widom_boundedness(const CoefficientSequence& h, const DiagnosticOptions& opts) {
  if (h.kind() != StructureKind::hankel) throw ValidationError("boundedness test needs Hankel coefficients");
  DiagnosticReport r;
  r.verdicts["iii_coefficient_decay"] = weighted_decay_verdict(h);
  if (!opts.norm_sections.empty()) r.verdicts["norm_growth"] = norm_growth_verdict(h, opts);
  r.finalize();
  return r;
}

// ------------------------------------------------------------ closure values

ClosureValue closure_domain_value(const Measure& m, const FiniteVector& f) {
  return {form_via_measure(m, f), true};
}

namespace {

ClosureValue geometric_circle(const CircleMeasure& m, cplx rho) {
  auto kernel = [rho](double theta) { return 1.0 / std::norm(1.0 - rho * std::polar(1.0, theta)); };
  double sum = 0.0;
  if (!m.density().is_zero()) {
    // Fourier modes of the integrand decay like |rho|^k.
    const double r = std::abs(rho);
    const std::size_t extra = r > 0.0 ? static_cast<std::size_t>(std::ceil(40.0 / -std::log(r))) : 0;
    const std::size_t q = 2 * static_cast<std::size_t>(m.density().degree()) + 2 + extra;
    const QuadratureRule rule = circle_trapezoid(q);
    for (std::size_t j = 0; j < q; ++j) sum += rule.weights[j] * m.density()(rule.nodes[j]) * kernel(rule.nodes[j]);
  }
  for (const CircleAtom& a : m.atoms()) sum += a.mass * kernel(a.theta);
  return {sum, true};
}

ClosureValue geometric_line(const LineMeasure& m, cplx rho) {
  const Interval s = m.support();
  const double r = std::abs(rho);
  const JacobiDensity& d = m.density();
  const double radius = std::max(std::abs(s.a), std::abs(s.b));
  bool diverges = !d.is_zero() && r * radius >= 1.0;
  for (const LineAtom& a : m.atoms()) diverges = diverges || (a.mass > 0.0 && r * std::abs(a.location) >= 1.0);
  if (diverges) return {kInf, false};

  auto kernel = [rho](double x) { return 1.0 / std::norm(1.0 - rho * x); };
  double sum = 0.0;
  if (!d.is_zero()) {
    std::size_t q = static_cast<std::size_t>(d.poly_degree()) / 2 + 8;
    if (r > 0.0) {
      // Pole 1/rho in the reference variable; Bernstein ellipse through it.
      const cplx u0 = (2.0 / rho - (s.a + s.b)) / (s.b - s.a);
      cplx root = std::sqrt(u0 - 1.0) * std::sqrt(u0 + 1.0);
      double ellipse = std::max(std::abs(u0 + root), std::abs(u0 - root));
      q += static_cast<std::size_t>(std::ceil(20.0 / std::log(ellipse)));
    }
    q = std::min<std::size_t>(q, 4000);
    const QuadratureRule& ref = cached_gauss_jacobi(q, d.alpha(), d.beta());
    const double h = 0.5 * (s.b - s.a);
    const double scale = std::pow(h, d.alpha() + d.beta() + 1.0);
    for (std::size_t i = 0; i < q; ++i) {
      const double x = s.a + h * (1.0 + ref.nodes[i]);
      sum += scale * ref.weights[i] * d.poly_value(x) * kernel(x);
    }
  }
  for (const LineAtom& a : m.atoms()) sum += a.mass * kernel(a.location);
  return {sum, true};
}

}  // namespace

ClosureValue closure_domain_value(const Measure& m, GeometricVector f) {
  if (!(std::abs(f.rho) < 1.0)) throw ValidationError("geometric vector needs |rho| < 1");
  if (const auto* c = std::get_if<CircleMeasure>(&m)) return geometric_circle(*c, f.rho);
  return geometric_line(std::get<LineMeasure>(m), f.rho);
}

}  // namespace thf
