#include "thf/forms.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "thf/errors.hpp"
#include "thf/quadrature.hpp"

namespace thf {

// --------------------------------------------------------------- FiniteVector

FiniteVector FiniteVector::basis(std::size_t n, std::size_t length) {
  std::vector<cplx> e(std::max(length, n + 1), cplx(0.0, 0.0));
  e[n] = 1.0;
  return FiniteVector(std::move(e));
}

FiniteVector FiniteVector::geometric(cplx ratio, std::size_t length) {
  std::vector<cplx> e(length);
  cplx p = 1.0;
  for (cplx& v : e) {
    v = p;
    p *= ratio;
  }
  return FiniteVector(std::move(e));
}

double FiniteVector::norm_squared() const {
  double s = 0.0;
  for (const cplx& v : entries_) s += std::norm(v);
  return s;
}

// -------------------------------------------------------- CoefficientSequence

CoefficientSequence CoefficientSequence::toeplitz(std::vector<cplx> nonnegative_part) {
  if (nonnegative_part.empty()) throw ValidationError("Toeplitz sequence needs at least t_0");
  if (nonnegative_part[0].imag() != 0.0) throw ValidationError("t_0 must be real for a Hermitian sequence");
  CoefficientSequence c;
  c.kind_ = StructureKind::toeplitz;
  c.toeplitz_ = std::move(nonnegative_part);
  return c;
}

CoefficientSequence CoefficientSequence::hankel(std::vector<double> values) {
  if (values.empty()) throw ValidationError("Hankel sequence needs at least h_0");
  CoefficientSequence c;
  c.kind_ = StructureKind::hankel;
  c.hankel_ = std::move(values);
  return c;
}

std::size_t CoefficientSequence::max_section() const {
  return kind_ == StructureKind::toeplitz ? toeplitz_.size() : (hankel_.size() + 1) / 2;
}

std::size_t CoefficientSequence::max_index() const {
  return kind_ == StructureKind::toeplitz ? toeplitz_.size() - 1 : hankel_.size() - 1;
}

cplx CoefficientSequence::t(long n) const {
  if (kind_ != StructureKind::toeplitz) throw std::logic_error("t_n requested from a Hankel sequence");
  const std::size_t an = static_cast<std::size_t>(n < 0 ? -n : n);
  if (an >= toeplitz_.size()) {
    throw RangeError("Toeplitz index " + std::to_string(n) + " outside stored range |n| <= " +
                     std::to_string(toeplitz_.size() - 1));
  }
  return n < 0 ? std::conj(toeplitz_[an]) : toeplitz_[an];
}

double CoefficientSequence::h(long n) const {
  if (kind_ != StructureKind::hankel) throw std::logic_error("h_n requested from a Toeplitz sequence");
  if (n < 0 || static_cast<std::size_t>(n) >= hankel_.size()) {
    throw RangeError("Hankel index " + std::to_string(n) + " outside stored range [0, " +
                     std::to_string(hankel_.size() - 1) + "]");
  }
  return hankel_[static_cast<std::size_t>(n)];
}

cplx CoefficientSequence::element(std::size_t row, std::size_t col) const {
  if (kind_ == StructureKind::toeplitz) return t(static_cast<long>(row) - static_cast<long>(col));
  return h(static_cast<long>(row + col));
}

namespace {

void require_section(const CoefficientSequence& c, std::size_t n) {
  if (n > c.max_section()) {
    throw RangeError("section size " + std::to_string(n) + " exceeds coefficient coverage " +
                     std::to_string(c.max_section()));
  }
}

}  // namespace

// ---------------------------------------------------------------- from_measure

CoefficientSequence from_measure(const CircleMeasure& m, std::size_t n_max) {
  std::vector<cplx> t(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) t[n] = moment(m, static_cast<int>(n));
  t[0] = cplx(t[0].real(), 0.0);
  return CoefficientSequence::toeplitz(std::move(t));
}

CoefficientSequence from_measure(const LineMeasure& m, std::size_t n_max) {
  return CoefficientSequence::hankel(moments(m, 2 * n_max + 1));
}

CoefficientSequence from_measure(const Measure& m, std::size_t n_max) {
  return std::visit([n_max](const auto& mm) { return from_measure(mm, n_max); }, m);
}

// ------------------------------------------------------------------- forms

double form_direct(const CoefficientSequence& c, const FiniteVector& f) {
  const std::size_t n = f.size();
  require_section(c, n);
  cplx sum = 0.0;
  for (std::size_t row = 0; row < n; ++row) {
    if (f[row] == cplx(0.0, 0.0)) continue;
    cplx inner = 0.0;
    for (std::size_t col = 0; col < n; ++col) inner += c.element(row, col) * f[col];
    sum += inner * std::conj(f[row]);
  }
  return sum.real();
}

cplx analytic_eval(const FiniteVector& f, cplx z) {
  cplx v = 0.0;
  for (std::size_t i = f.size(); i-- > 0;) v = v * z + f[i];
  return v;
}

double form_via_measure(const CircleMeasure& m, const FiniteVector& f) {
  double sum = 0.0;
  if (!m.density().is_zero()) {
    const std::size_t q = static_cast<std::size_t>(m.density().degree()) + 2 * f.size() + 2;
    const QuadratureRule rule = circle_trapezoid(q);
    for (std::size_t j = 0; j < q; ++j) {
      const double theta = rule.nodes[j];
      sum += rule.weights[j] * m.density()(theta) * std::norm(analytic_eval(f, std::polar(1.0, theta)));
    }
  }
  for (const CircleAtom& a : m.atoms()) sum += a.mass * std::norm(analytic_eval(f, std::polar(1.0, a.theta)));
  return sum;
}

double form_via_measure(const LineMeasure& m, const FiniteVector& f) {
  double sum = 0.0;
  const JacobiDensity& d = m.density();
  if (!d.is_zero()) {
    const std::size_t q = static_cast<std::size_t>(d.poly_degree()) + 2 * f.size() + 2;
    const QuadratureRule& ref = cached_gauss_jacobi(q, d.alpha(), d.beta());
    const Interval s = m.support();
    const double h = 0.5 * (s.b - s.a);
    const double scale = std::pow(h, d.alpha() + d.beta() + 1.0);
    for (std::size_t i = 0; i < q; ++i) {
      const double x = s.a + h * (1.0 + ref.nodes[i]);
      sum += scale * ref.weights[i] * d.poly_value(x) * std::norm(analytic_eval(f, cplx(x, 0.0)));
    }
  }
  for (const LineAtom& a : m.atoms()) sum += a.mass * std::norm(analytic_eval(f, cplx(a.location, 0.0)));
  return sum;
}

double form_via_measure(const Measure& m, const FiniteVector& f) {
  return std::visit([&f](const auto& mm) { return form_via_measure(mm, f); }, m);
}

Eigen::MatrixXcd finite_section(const CoefficientSequence& c, std::size_t n) {
  require_section(c, n);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd a(nn, nn);
  for (Eigen::Index col = 0; col < nn; ++col) {
    for (Eigen::Index row = 0; row < nn; ++row) {
      a(row, col) = c.element(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
    }
  }
  return a;
}

// ------------------------------------------------------------ fast product

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  cplx* as_complex() { return reinterpret_cast<cplx*>(data); }
  fftw_complex* data;
};

}  // namespace

struct StructuredOperator::Plans {
  explicit Plans(std::size_t n) {
    FftwBuffer in(n), out(n);
    std::lock_guard lock(fftw_planner_mutex());
    const int len = static_cast<int>(n);
    forward = fftw_plan_dft_1d(len, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(len, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  fftw_plan forward;
  fftw_plan backward;
};

StructuredOperator::StructuredOperator(const CoefficientSequence& c, std::size_t n) : n_(n) {
  if (n == 0) throw ValidationError("section size must be positive");
  require_section(c, n);
  embed_ = std::bit_ceil(2 * n - 1);
  flip_ = c.kind() == StructureKind::hankel;
  plans_ = std::make_unique<Plans>(embed_);

  // First column of the circulant: tau_k at k, tau_{-k} at L-k.
  FftwBuffer col(embed_);
  cplx* cc = col.as_complex();
  std::fill(cc, cc + embed_, cplx(0.0, 0.0));
  const long last = static_cast<long>(n) - 1;
  auto tau = [&](long k) -> cplx {
    if (flip_) return c.h(k + last);
    return c.t(k);
  };
  for (long k = 0; k <= last; ++k) cc[k] = tau(k);
  for (long k = 1; k <= last; ++k) cc[embed_ - static_cast<std::size_t>(k)] = tau(-k);

  FftwBuffer spec(embed_);
  fftw_execute_dft(plans_->forward, col.data, spec.data);
  symbol_.assign(spec.as_complex(), spec.as_complex() + embed_);
  const double inv = 1.0 / static_cast<double>(embed_);
  for (cplx& s : symbol_) s *= inv;
}

StructuredOperator::~StructuredOperator() = default;
StructuredOperator::StructuredOperator(StructuredOperator&&) noexcept = default;
StructuredOperator& StructuredOperator::operator=(StructuredOperator&&) noexcept = default;

void StructuredOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != n_ || y.size() != n_) throw ValidationError("vector length does not match section size");
  FftwBuffer buf(embed_), freq(embed_);
  cplx* b = buf.as_complex();
  std::fill(b, b + embed_, cplx(0.0, 0.0));
  if (flip_) {
    for (std::size_t i = 0; i < n_; ++i) b[i] = x[n_ - 1 - i];
  } else {
    std::copy(x.begin(), x.end(), b);
  }
  fftw_execute_dft(plans_->forward, buf.data, freq.data);
  cplx* fq = freq.as_complex();
  for (std::size_t i = 0; i < embed_; ++i) fq[i] *= symbol_[i];
  fftw_execute_dft(plans_->backward, freq.data, buf.data);
  std::copy(b, b + n_, y.begin());
}

Eigen::VectorXcd StructuredOperator::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  apply(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size())),
        std::span<cplx>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

std::vector<cplx> fast_matvec(const CoefficientSequence& c, std::span<const cplx> x) {
  StructuredOperator op(c, x.size());
  std::vector<cplx> y(x.size());
  op.apply(x, y);
  return y;
}

}  // namespace thf
