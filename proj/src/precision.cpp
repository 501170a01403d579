#include "jinv/precision.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace jinv {

std::string_view to_string(PrecisionKind k) {
  switch (k) {
    case PrecisionKind::Absolute:
      return "absolute";
    case PrecisionKind::Relative:
      return "relative";
    case PrecisionKind::Regulated:
      return "regulated";
  }
  return "unknown";
}

Real Real::parse(std::string_view text, long prec) {
  std::string s(text);
  // accept the unicode minus sign
  for (auto pos = s.find("\xE2\x88\x92"); pos != std::string::npos; pos = s.find("\xE2\x88\x92"))
    s.replace(pos, 3, "-");
  if (s.empty()) throw DomainError("empty number");
  Real r(prec);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') throw DomainError("malformed number: " + s);
  if (!r.is_finite()) throw DomainError("non-finite number: " + s);
  return r;
}

Real Real::pi(long prec) {
  Real r(prec);
  telemetry::record(OpKind::Transcendental, prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::two_pow(long e, long prec) {
  Real r(prec);
  mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
  return r;
}

Real Real::euler_gamma(long prec) {
  Real r(prec);
  mpfr_const_euler(r.v_, MPFR_RNDN);
  return r;
}

mpq_class Real::to_rational() const {
  if (!is_finite()) throw DomainError("non-finite value has no rational form");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return q;
}

mpz_class Real::round_to_integer() const {
  if (!is_finite()) throw DomainError("non-finite value cannot be rounded");
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

long Real::exponent() const {
  if (is_zero()) return std::numeric_limits<long>::min() / 4;
  return mpfr_get_exp(v_);
}

std::string Real::to_decimal(long digits) const {
  if (is_zero()) return "0";
  mpfr_exp_t e = 0;
  std::unique_ptr<char, void (*)(char*)> s(mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN),
                                            mpfr_free_str);
  std::string m(s.get());
  std::string sign;
  if (!m.empty() && m[0] == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  while (m.size() > 1 && m.back() == '0') m.pop_back();
  std::string out = sign + m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  const long exp10 = static_cast<long>(e) - 1;
  if (exp10 != 0) out += "e" + std::to_string(exp10);
  return out;
}

Real abs(const Real& x) {
  Real r(x.prec());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.prec());
  telemetry::record(OpKind::Sqrt, x.prec());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real sqr(const Real& x) {
  Real r(x.prec());
  telemetry::record(OpKind::Mul, x.prec());
  mpfr_sqr(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x.prec());
  telemetry::record(OpKind::Transcendental, x.prec());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  if (x.sign() <= 0) throw DomainError("log of a non-positive real");
  Real r(x.prec());
  telemetry::record(OpKind::Transcendental, x.prec());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log2(const Real& x) {
  if (x.sign() <= 0) throw DomainError("log2 of a non-positive real");
  Real r(x.prec());
  telemetry::record(OpKind::Transcendental, x.prec());
  mpfr_log2(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(std::max(x.prec(), y.prec()));
  telemetry::record(OpKind::Transcendental, r.prec());
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

std::pair<Real, Real> sin_cos(const Real& x) {
  Real s(x.prec()), c(x.prec());
  telemetry::record(OpKind::Transcendental, x.prec());
  mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
  return {std::move(s), std::move(c)};
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real floor(const Real& x) {
  Real r(x.prec());
  mpfr_floor(r.raw(), x.raw());
  return r;
}

Complex Complex::rho(long prec) {
  Real s = sqrt(Real(3L, prec));
  return Complex(Real(0.5, prec), s.scaled(-1));
}

Complex& Complex::operator*=(const Complex& o) {
  Real ac = re_ * o.re_;
  Real bd = im_ * o.im_;
  Real ad = re_ * o.im_;
  im_ *= o.re_;
  im_ += ad;
  re_ = std::move(ac);
  re_ -= bd;
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  if (o.is_zero()) throw NumericalError("complex division by zero");
  // Smith's algorithm keeps intermediate magnitudes near 1.
  if (abs(o.re_) >= abs(o.im_)) {
    Real t = o.im_ / o.re_;
    Real den = o.re_ + o.im_ * t;
    Real nr = re_ + im_ * t;
    Real ni = im_ - re_ * t;
    re_ = nr / den;
    im_ = ni / den;
  } else {
    Real t = o.re_ / o.im_;
    Real den = o.re_ * t + o.im_;
    Real nr = re_ * t + im_;
    Real ni = im_ * t - re_;
    re_ = nr / den;
    im_ = ni / den;
  }
  return *this;
}

Real norm(const Complex& z) { return sqr(z.re()) + sqr(z.im()); }

Real abs(const Complex& z) {
  Real r(z.prec());
  telemetry::record(OpKind::Sqrt, r.prec());
  mpfr_hypot(r.raw(), z.re().raw(), z.im().raw(), MPFR_RNDN);
  return r;
}

Real arg(const Complex& z) { return atan2(z.im(), z.re()); }

Complex sqr(const Complex& z) {
  Real re = (z.re() + z.im()) * (z.re() - z.im());
  Real im = z.re() * z.im();
  return Complex(std::move(re), im.scaled(1));
}

Complex inverse(const Complex& z) { return Complex(Real(1L, z.prec())) / z; }

Complex exp(const Complex& z) {
  Real m = exp(z.re());
  auto [s, c] = sin_cos(z.im());
  return Complex(m * c, m * s);
}

Complex log(const Complex& z) {
  if (z.is_zero()) throw DomainError("log of zero");
  return Complex(log(abs(z)), arg(z));
}

Complex sqrt(const Complex& z) {
  const long p = z.prec();
  if (z.is_zero()) return Complex(p);
  Real r = abs(z);
  if (z.re().sign() >= 0) {
    Real u = sqrt((r + z.re()).scaled(-1));
    Real v = z.im() / u.scaled(1);
    return Complex(std::move(u), std::move(v));
  }
  Real v = sqrt((r - z.re()).scaled(-1));
  if (z.im().sign() < 0) v = -v;
  Real u = z.im() / v.scaled(1);
  return Complex(std::move(u), std::move(v));
}

Complex root(const Complex& z, int n) {
  if (n < 1) throw DomainError("root order must be positive");
  if (n == 1) return z;
  if (n == 2) return sqrt(z);
  if (z.is_zero()) return Complex(z.prec());
  Complex l = log(z);
  l /= static_cast<long>(n);
  return exp(l);
}

Complex pow(const Complex& z, unsigned long n) {
  Complex result(Real(1L, z.prec()));
  Complex base = z;
  while (n != 0) {
    if (n & 1UL) result *= base;
    n >>= 1;
    if (n != 0) base = sqr(base);
  }
  return result;
}

Real distance(const Complex& a, const Complex& b) { return abs(a - b); }

double log2_abs(const Complex& z) {
  if (z.is_zero()) return -std::numeric_limits<double>::infinity();
  Complex w(z, 64);
  long e = std::max(w.re().exponent(), w.im().exponent());
  Real m = abs(Complex(w.re().scaled(-e), w.im().scaled(-e)));
  return static_cast<double>(e) + std::log2(m.to_double());
}

Real regulated_error(const Complex& approx, const Complex& reference) {
  const long p = std::max(approx.prec(), reference.prec());
  Real denom = max(Real(1L, p), abs(reference));
  return abs(approx - reference) / denom;
}

Real regulated_error(const ApproxComplex& approx, const ApproxComplex& reference) {
  if (!reference.value.is_finite()) throw DomainError("reference must be finite");
  return regulated_error(approx.value, reference.value);
}

ApproxComplex complex_log(const ApproxComplex& z, PrecBits p) {
  Complex w(z.value, std::max(z.value.prec(), p.working()));
  Complex r = log(w).rounded(p.bits);
  return ApproxComplex(std::move(r), PrecisionClaim{PrecisionKind::Relative, p});
}

ApproxComplex complex_root(const ApproxComplex& z, int n, PrecBits p) {
  if (n != 2 && n != 3) throw DomainError("only square and cube roots are supported");
  Complex w(z.value, std::max(z.value.prec(), p.working()));
  Complex r = root(w, n).rounded(p.bits);
  return ApproxComplex(std::move(r), PrecisionClaim{PrecisionKind::Relative, p});
}

Real pi_to(PrecBits p) { return Real::pi(p.working()).rounded(p.bits); }

}  // namespace jinv
