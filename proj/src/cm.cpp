#include "jinv/cm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "jinv/invert.hpp"
#include "jinv/modular_forms.hpp"

namespace jinv {

namespace {

constexpr long kSmallDiscriminants[] = {-3, -4, -7, -8, -11, -12, -15, -16};

double ln_height(long d, const Real& H) {
  if (d < 1) throw DomainError("degree bound must be positive");
  if (!H.is_finite() || H.sign() <= 0) throw DomainError("height bound must be a positive real");
  const double lh = log(Real(H, std::max(H.prec(), 64L))).to_double();
  if (lh < std::numbers::e * (1 - 1e-12)) throw DomainError("height bound must be at least e^e");
  return std::max(lh, std::numbers::e);
}

// log(d) + log(log(H)) combined with the d^2 ln H prefactor
double budget(long d, double lh) {
  const double s = std::log(static_cast<double>(d)) + std::log(lh);
  return static_cast<double>(d) * d * lh * s * s;
}

long claimed_bits(const ApproxComplex& x) { return x.claim ? x.claim->bits.bits : x.value.prec(); }

// absolute error bound implied by a claim on z
Real absolute_error(const ApproxComplex& z) {
  const long q = claimed_bits(z);
  Real e = Real::two_pow(-q, 64);
  if (!z.claim || z.claim->kind == PrecisionKind::Relative) e *= max(Real(1L, 64), abs(Complex(z.value, 64)));
  return e;
}

mpq_class floor_q(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return mpq_class(f);
}

struct Recognition {
  std::optional<ConvergentPair> pair;
  CMCertificate certificate;
};

Recognition recognize_detail(const ApproxComplex& z0, long d, const Real& H) {
  const double lh = ln_height(d, H);
  const Real tolerance = exp(-(Real(3.0 * std::log(19.0) + 8.0 * std::log(static_cast<double>(d)) + 8.0 * std::log(lh), 64)));
  const Real err = absolute_error(z0);
  const long w = z0.value.prec() + 8;
  const Real im(z0.value.im(), w);
  const Real im2 = sqr(im);
  Real err2 = err * abs(Real(im, 64)).scaled(1) + sqr(err) + Real::two_pow(im2.exponent() - w + 2, 64);
  Recognition out;
  Convergent cr = cf_convergents(z0.value.re(), tolerance, err);
  Convergent ci = cf_convergents(im2, tolerance, err2);
  ConvergentPair pair{cr.value, ci.value, rational_height(cr.value), rational_height(ci.value)};
  const double dd = static_cast<double>(d);
  const double real_cap = dd * dd * lh * lh / 9.7;
  const double imag_cap = dd * dd * dd * dd * lh * lh * lh * lh / 90.0;
  if (cmp(pair.real_height, real_cap) > 0) {
    out.certificate = {"real convergent height", Real(mpq_class(pair.real_height), 64), Real(real_cap, 64)};
    return out;
  }
  if (cmp(pair.imag_height, imag_cap) > 0) {
    out.certificate = {"imaginary convergent height", Real(mpq_class(pair.imag_height), 64), Real(imag_cap, 64)};
    return out;
  }
  out.certificate = {"convergent heights", Real(mpq_class(pair.imag_height), 64), Real(imag_cap, 64)};
  out.pair = std::move(pair);
  return out;
}

CMResult not_cm(CMCertificate cert, long required) {
  CMResult r;
  r.certificate = std::move(cert);
  r.required_bits = required;
  return r;
}

}  // namespace

Complex BinaryQuadraticForm::root(long prec) const {
  const long w = prec + 8;
  mpz_class absd = -D;
  Complex z(Real(mpz_class(-b), w), sqrt(Real(absd, w)));
  return (z / Real(mpz_class(2 * a), w)).rounded(prec);
}

std::vector<BinaryQuadraticForm> reduced_forms(long D) {
  if (D >= 0) throw DomainError("discriminant must be negative");
  const long m = ((D % 4) + 4) % 4;
  if (m != 0 && m != 1) throw DomainError("discriminant must be 0 or 1 mod 4");
  std::vector<BinaryQuadraticForm> out;
  const long n = -D;
  for (long a = 1; 3 * a * a <= n; ++a) {
    for (long b = -a; b <= a; ++b) {
      const long num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const long c = num / (4 * a);
      if (c < a) continue;
      if ((std::abs(b) == a || a == c) && b > 0) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      out.push_back({a, b, c, D});
    }
  }
  return out;
}

mpz_class rational_height(const mpq_class& q) {
  mpz_class n = abs(q.get_num());
  return n > q.get_den() ? n : mpz_class(q.get_den());
}

PrecBits required_precision(long d, const Real& H) {
  const double lh = ln_height(d, H);
  const double bits = std::ceil(300.0 * budget(d, lh) + 200.0);
  return PrecBits(std::max(400L, static_cast<long>(bits)));
}

long max_discriminant(long d, const Real& H) {
  const double lh = ln_height(d, H);
  return static_cast<long>(std::floor(static_cast<double>(d) * d * lh * lh / 9.7));
}

double class_number_bound(long D) {
  const long m = ((D % 4) + 4) % 4;
  if (D >= 0 || (m != 0 && m != 1)) throw DomainError("class number bound needs a negative discriminant");
  const double n = static_cast<double>(-D);
  return 3.0 / (2.0 * std::numbers::pi) * std::sqrt(n) * (2.0 + std::log(n));
}

double mahler_measure_log_bound(long D) {
  if (D >= 0) throw DomainError("Mahler bound needs a negative discriminant");
  const double n = static_cast<double>(-D);
  const double l = std::log(n);
  return 5.9 * std::numbers::pi * std::sqrt(n) * l * l;
}

Real separation_bound(long d, const Real& H) {
  const double lh = ln_height(d, H);
  return exp(Real(-31.0 * budget(d, lh) - 21.0, 64));
}

Convergent cf_convergents(const Real& x, const Real& stop_tol, const Real& x_error) {
  if (!x.is_finite()) throw DomainError("continued fraction of a non-finite number");
  if (stop_tol.sign() <= 0) throw DomainError("stop tolerance must be positive");
  if (x_error > stop_tol.scaled(-2)) throw PrecisionError("input is not known well enough for the requested tolerance");
  const mpq_class target = x.to_rational();
  const mpq_class tol = stop_tol.to_rational();
  Convergent out;
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  mpq_class rest = target;
  for (;;) {
    const mpq_class a = floor_q(rest);
    const mpz_class ai = a.get_num();
    mpz_class h = ai * h1 + h2;
    mpz_class k = ai * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    mpq_class conv(h, k);
    conv.canonicalize();
    out.path.push_back(conv);
    mpq_class gap = target - conv;
    if (abs(gap) <= tol || rest == a) {
      out.value = conv;
      return out;
    }
    rest = 1 / (rest - a);
  }
}

std::optional<ConvergentPair> recognize_quadratic(const ApproxComplex& z0, long d, const Real& H) {
  return recognize_detail(z0, d, H).pair;
}

BinaryQuadraticForm discriminant_from_convergents(const mpq_class& c_r, const mpq_class& c_i) {
  if (sgn(c_i) <= 0) throw InconsistencyError("squared imaginary part must be positive");
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), c_r.get_den_mpz_t(), c_i.get_den_mpz_t());
  mpz_class cap = 4 * l * l;
  const mpz_class hard_cap = 10'000'000;
  if (cap > hard_cap) cap = hard_cap;
  for (mpz_class a = 1; a <= cap; ++a) {
    mpq_class bq = -2 * a * c_r;
    bq.canonicalize();
    if (bq.get_den() != 1) continue;
    mpq_class dq = -4 * a * a * c_i;
    dq.canonicalize();
    if (dq.get_den() != 1) continue;
    const mpz_class b = bq.get_num();
    const mpz_class D = dq.get_num();
    const mpz_class num = b * b - D;
    if (num % (4 * a) != 0) continue;
    return {a, b, num / (4 * a), D};
  }
  throw InconsistencyError("no quadratic form reproduces the convergents");
}

std::optional<CMResult> small_disc_test(const AlgebraicInput& input) {
  const long d = input.degree;
  const double lh = ln_height(d, input.height);
  const long abs_bits = static_cast<long>(std::ceil(4.0 * d * (33.0 + lh))) + 2;
  const long p = abs_bits + 32;
  // 2^-2d H^-2d (3 10^6)^-d
  const Real threshold = exp(Real(-static_cast<double>(d) * (2.0 * std::log(2.0) + 2.0 * lh + std::log(3e6)), 64));
  const Real slack = Real::two_pow(-abs_bits, 64) + absolute_error(input.j_approx);
  const Complex jt(input.j_approx.value, p);
  for (long D : kSmallDiscriminants) {
    for (const BinaryQuadraticForm& f : reduced_forms(D)) {
      const Complex tau = f.root(p + 8);
      const Complex jv = j_qseries(ApproxComplex(tau), PrecBits(p)).value;
      const Real dist(abs(Complex(jt - jv, 64)), 64);
      if (dist + slack <= threshold) {
        CMResult r;
        r.is_cm = true;
        r.form = f;
        FundamentalPoint fp;
        fp.tau = ApproxComplex(tau.rounded(p), PrecisionClaim{PrecisionKind::Absolute, PrecBits(p)});
        r.tau = std::move(fp);
        r.certificate = {"small discriminant distance", dist + slack, threshold};
        r.required_bits = required_precision(d, input.height).bits;
        return r;
      }
    }
  }
  return std::nullopt;
}

CMResult is_cm(const AlgebraicInput& input) {
  const long d = input.degree;
  const PrecBits req = required_precision(d, input.height);
  if (!input.j_approx.value.is_finite()) throw DomainError("j must be finite");
  if (claimed_bits(input.j_approx) < req.bits)
    throw PrecisionError("j is known to " + std::to_string(claimed_bits(input.j_approx)) + " bits, " +
                         std::to_string(req.bits) + " are required");
  if (auto small = small_disc_test(input)) return *small;

  InversionResult inv = invert(input.j_approx, req);
  const ApproxComplex& z0 = inv.tau.tau;
  Recognition rec = recognize_detail(z0, d, input.height);
  if (!rec.pair) return not_cm(std::move(rec.certificate), req.bits);

  BinaryQuadraticForm form;
  try {
    form = discriminant_from_convergents(rec.pair->real_part, rec.pair->imag_squared);
  } catch (const InconsistencyError&) {
    return not_cm({"no integral form", Real(1L, 64), Real(0L, 64)}, req.bits);
  }
  const mpz_class absd = -form.D;
  const long dmax = max_discriminant(d, input.height);
  if (absd > dmax && absd > 16)
    return not_cm({"discriminant bound", Real(absd, 64), Real(dmax, 64)}, req.bits);

  const long w = z0.value.prec() + 64;
  const Complex tau = form.root(w);
  const Real dist = Real(abs(Complex(z0.value - tau, 64)), 64) + absolute_error(z0);
  const Real sep = separation_bound(d, input.height);
  if (!(dist <= sep)) return not_cm({"separation", dist, sep}, req.bits);

  CMResult r;
  r.is_cm = true;
  r.form = form;
  FundamentalPoint fp = inv.tau;
  fp.tau = ApproxComplex(tau.rounded(z0.value.prec()), z0.claim);
  r.tau = std::move(fp);
  r.certificate = {"separation", dist, sep};
  r.required_bits = req.bits;
  return r;
}

}  // namespace jinv
