#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "jinv/errors.hpp"
#include "jinv/telemetry.hpp"

namespace jinv {

// Extra working bits every public operation carries before rounding.
inline constexpr long kGuardBits = 64;

struct PrecBits {
  long bits;
  explicit PrecBits(long b) : bits(b) {
    if (b < 53) throw DomainError("precision must be at least 53 bits");
  }
  long working() const { return bits + kGuardBits; }
  friend auto operator<=>(const PrecBits&, const PrecBits&) = default;
};

enum class PrecisionKind { Absolute, Relative, Regulated };

std::string_view to_string(PrecisionKind k);

// Binary floating point number owning an mpfr_t.
class Real {
 public:
  Real() : Real(53) {}
  explicit Real(long prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double x, long prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, long prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(int x, long prec) : Real(static_cast<long>(x), prec) {}
  Real(const mpz_class& x, long prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
  }
  Real(const mpq_class& x, long prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Real& x, long prec) {
    mpfr_init2(v_, prec);
    mpfr_set(v_, x.v_, MPFR_RNDN);
  }
  // Parses a decimal literal; throws DomainError on malformed input.
  static Real parse(std::string_view text, long prec);
  static Real pi(long prec);
  static Real two_pow(long e, long prec);
  static Real euler_gamma(long prec);

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    *v_ = *o.v_;
    o.v_->_mpfr_d = nullptr;
  }
  Real& operator=(const Real& o) {
    if (this == &o) return *this;
    if (v_->_mpfr_d == nullptr) {
      mpfr_init2(v_, mpfr_get_prec(o.v_));
    } else {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    }
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    std::swap(*v_, *o.v_);
    return *this;
  }
  ~Real() {
    if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
  }

  long prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Real rounded(long prec) const { return Real(*this, prec); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  mpq_class to_rational() const;  // exact
  mpz_class round_to_integer() const;
  // binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero
  long exponent() const;
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  std::string to_decimal(long digits) const;

  Real operator-() const {
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Real& operator+=(const Real& o) {
    grow(o);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(const Real& o) {
    grow(o);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(const Real& o) {
    grow(o);
    telemetry::record(OpKind::Mul, prec());
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(const Real& o) {
    grow(o);
    telemetry::record(OpKind::Div, prec());
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator+=(long o) {
    mpfr_add_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(long o) {
    mpfr_sub_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(long o) {
    mpfr_mul_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(long o) {
    mpfr_div_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  // multiply by 2^e exactly
  Real scaled(long e) const {
    Real r(prec());
    mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN);
    return r;
  }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator*(long b, Real a) { return a *= b; }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  friend std::partial_ordering operator<=>(const Real& a, double b) {
    const int c = mpfr_cmp_d(a.v_, b);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  friend bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }

 private:
  void grow(const Real& o) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  }
  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real sqr(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);  // natural log, x > 0
Real log2(const Real& x);
Real atan2(const Real& y, const Real& x);
std::pair<Real, Real> sin_cos(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real floor(const Real& x);

class Complex {
 public:
  Complex() = default;
  explicit Complex(long prec) : re_(prec), im_(prec) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit Complex(Real re) : re_(std::move(re)), im_(re_.prec()) {}
  Complex(double re, double im, long prec) : re_(re, prec), im_(im, prec) {}
  Complex(const Complex& z, long prec) : re_(z.re_, prec), im_(z.im_, prec) {}
  static Complex i(long prec) { return Complex(Real(0L, prec), Real(1L, prec)); }
  // (1 + i*sqrt(3)) / 2
  static Complex rho(long prec);

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }
  long prec() const { return re_.prec() > im_.prec() ? re_.prec() : im_.prec(); }
  Complex rounded(long prec) const { return Complex(*this, prec); }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  Complex operator-() const { return Complex(-re_, -im_); }
  Complex conj() const { return Complex(re_, -im_); }
  Complex times_i() const { return Complex(-im_, re_); }
  Complex scaled(long e) const { return Complex(re_.scaled(e), im_.scaled(e)); }

  Complex& operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator+=(const Real& o) {
    re_ += o;
    return *this;
  }
  Complex& operator-=(const Real& o) {
    re_ -= o;
    return *this;
  }
  Complex& operator*=(const Real& o) {
    re_ *= o;
    im_ *= o;
    return *this;
  }
  Complex& operator/=(const Real& o) {
    re_ /= o;
    im_ /= o;
    return *this;
  }
  Complex& operator+=(long o) {
    re_ += o;
    return *this;
  }
  Complex& operator-=(long o) {
    re_ -= o;
    return *this;
  }
  Complex& operator*=(long o) {
    re_ *= o;
    im_ *= o;
    return *this;
  }
  Complex& operator/=(long o) {
    re_ /= o;
    im_ /= o;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator+(Complex a, const Real& b) { return a += b; }
  friend Complex operator-(Complex a, const Real& b) { return a -= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator*(const Real& b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, const Real& b) { return a /= b; }
  friend Complex operator+(Complex a, long b) { return a += b; }
  friend Complex operator-(Complex a, long b) { return a -= b; }
  friend Complex operator*(Complex a, long b) { return a *= b; }
  friend Complex operator*(long b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, long b) { return a /= b; }
  friend Complex operator-(long a, const Complex& b) { return Complex(Real(a, b.prec()) - b.re_, -b.im_); }

 private:
  Real re_;
  Real im_;
};

Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Real arg(const Complex& z);   // in (-pi, pi]
Complex sqr(const Complex& z);
Complex inverse(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);    // principal branch
Complex sqrt(const Complex& z);   // principal branch, Re >= 0
Complex root(const Complex& z, int n);  // principal n-th root
Complex pow(const Complex& z, unsigned long n);
Real distance(const Complex& a, const Complex& b);
// log2 of |z| as a double, -inf for zero
double log2_abs(const Complex& z);

struct PrecisionClaim {
  PrecisionKind kind;
  PrecBits bits;
};

// A complex value with an optional statement of how accurate it is.
struct ApproxComplex {
  Complex value;
  std::optional<PrecisionClaim> claim;

  ApproxComplex() = default;
  explicit ApproxComplex(Complex v, std::optional<PrecisionClaim> c = std::nullopt)
      : value(std::move(v)), claim(c) {}
};

Real regulated_error(const ApproxComplex& approx, const ApproxComplex& reference);
Real regulated_error(const Complex& approx, const Complex& reference);
ApproxComplex complex_log(const ApproxComplex& z, PrecBits p);
ApproxComplex complex_root(const ApproxComplex& z, int n, PrecBits p);
Real pi_to(PrecBits p);

}  // namespace jinv
