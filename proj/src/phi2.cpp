#include "jinv/phi2.hpp"

#include <cmath>

namespace jinv {

const std::array<Phi2Term, 11>& phi2_terms() {
  static const std::array<Phi2Term, 11> terms{{
      {3, 0, "1"},
      {0, 3, "1"},
      {2, 2, "-1"},
      {2, 1, "1488"},
      {1, 2, "1488"},
      {2, 0, "-162000"},
      {0, 2, "-162000"},
      {1, 1, "40773375"},
      {1, 0, "8748000000"},
      {0, 1, "8748000000"},
      {0, 0, "-157464000000000"},
  }};
  return terms;
}

mpz_class phi2_eval_exact(const mpz_class& x, const mpz_class& y) {
  mpz_class sum = 0;
  for (const auto& t : phi2_terms()) {
    mpz_class m(t.coeff);
    for (int k = 0; k < t.x_deg; ++k) m *= x;
    for (int k = 0; k < t.y_deg; ++k) m *= y;
    sum += m;
  }
  return sum;
}

namespace {

bool holds_integer(const Complex& z) {
  return z.im().is_zero() && z.re().is_finite() && mpfr_integer_p(z.re().raw()) != 0;
}

struct CubicCoefficients {
  Complex c2, c1, c0;
};

CubicCoefficients coefficients_at(const Complex& j) {
  const long w = j.prec();
  Complex j2 = sqr(j);
  Complex j3 = j2 * j;
  CubicCoefficients c;
  c.c2 = -j2 + j * 1488L - 162000L;
  c.c1 = j2 * 1488L + j * 40773375L + Real(mpz_class("8748000000"), w);
  c.c0 = j3 - j2 * 162000L + j * Real(mpz_class("8748000000"), w) - Real(mpz_class("157464000000000"), w);
  return c;
}

}  // namespace

ApproxComplex phi2_eval(const ApproxComplex& x, const ApproxComplex& y) {
  const long in_prec = std::max(x.value.prec(), y.value.prec());
  if (holds_integer(x.value) && holds_integer(y.value)) {
    mpz_class v = phi2_eval_exact(x.value.re().round_to_integer(), y.value.re().round_to_integer());
    const long bits = std::max<long>(in_prec, static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) + 2);
    return ApproxComplex(Complex(Real(v, bits), Real(bits)));
  }
  const long w = in_prec + kGuardBits;
  Phi2Cubic cubic = specialize(x, w);
  return ApproxComplex(cubic.eval(Complex(y.value, w)).rounded(in_prec));
}

Complex Phi2Cubic::eval(const Complex& z) const {
  Complex acc = z + c2;
  acc *= z;
  acc += c1;
  acc *= z;
  acc += c0;
  return acc;
}

Complex Phi2Cubic::derivative(const Complex& z) const {
  Complex acc = z * 3L + c2.scaled(1);
  acc *= z;
  acc += c1;
  return acc;
}

Complex Phi2Cubic::second_derivative(const Complex& z) const { return z * 6L + c2.scaled(1); }

Phi2Cubic specialize(const ApproxComplex& j_tilde, long work_bits) {
  const long w = work_bits > 0 ? work_bits : std::max<long>(j_tilde.value.prec(), 64) + kGuardBits;
  CubicCoefficients c = coefficients_at(Complex(j_tilde.value, w));
  return Phi2Cubic{std::move(c.c2), std::move(c.c1), std::move(c.c0)};
}

KantorovichCertificate kantorovich_check(const Real& eta, const Real& K, const Real& r) {
  if (eta.sign() < 0 || K.sign() < 0 || r.sign() < 0) throw DomainError("Kantorovich quantities must be nonnegative");
  const long w = std::max({eta.prec(), K.prec(), r.prec()});
  KantorovichCertificate c{Real(eta, w), Real(K, w), K * eta, Real(r, w), false};
  c.ok = c.h <= Real(0.5, w) && c.r >= eta.scaled(1);
  return c;
}

long kantorovich_steps(const KantorovichCertificate& cert, const Real& bound) {
  if (!cert.ok) return -1;
  if (cert.eta.is_zero()) return 0;
  if (cert.eta <= bound) return 0;
  if (cert.h.is_zero()) return 1;
  // log2 of 2^-k (2h)^(2^k) eta/h, with 2h <= 1
  const double l2h = log2_abs(Complex(cert.h.scaled(1)));
  const double leta_h = log2_abs(Complex(cert.eta)) - log2_abs(Complex(cert.h));
  const double lbound = log2_abs(Complex(bound));
  if (l2h >= 0) return -1;  // h = 1/2 converges only linearly
  for (long k = 1; k < 64; ++k) {
    if (-k + std::ldexp(l2h, static_cast<int>(k)) + leta_h <= lbound) return k;
  }
  return -1;
}

KantorovichCertificate large_j_certificate(const Complex& j) {
  const long w = 64;
  Real a = abs(Complex(j, w));
  Real a2 = sqr(a);
  // eta <= 2^-54 |j|^6 / (0.71 |j|^4), K <= 8.3 |j|^2 / (0.71 |j|^4), r = 0.009 |j|^2
  Real eta = Real::two_pow(-54, w) * a2 / Real(0.71, w);
  Real K = Real(8.3, w) / (Real(0.71, w) * a2);
  Real r = Real(0.009, w) * a2;
  return kantorovich_check(eta, K, r);
}

ApproxComplex newton_solve(const Phi2Cubic& cubic, const ApproxComplex& z0, long steps, PrecBits p,
                           std::vector<Real>* residuals) {
  if (steps < 0) throw DomainError("step count must be nonnegative");
  if (steps == 0) {
    if (residuals) residuals->push_back(abs(cubic.eval(Complex(z0.value, p.working()))).rounded(64));
    return z0;
  }
  const long w = p.working();
  Complex z(z0.value, w);
  Phi2Cubic c{Complex(cubic.c2, w), Complex(cubic.c1, w), Complex(cubic.c0, w)};
  Complex f = c.eval(z);
  const double first = log2_abs(f);
  auto noise_floor = [&](const Complex& at) {
    // size of the terms that cancel in the residual
    Real s = abs(at);
    Real scale = s * s * s + abs(c.c2) * s * s + abs(c.c1) * s + abs(c.c0);
    return scale.is_zero() ? -static_cast<double>(w) : log2_abs(Complex(scale)) - w + 16;
  };
  if (residuals) residuals->push_back(abs(f).rounded(64));
  for (long k = 0; k < steps; ++k) {
    Complex d = c.derivative(z);
    if (d.is_zero()) throw NumericalError("Newton step hit a zero derivative");
    z -= f / d;
    f = c.eval(z);
    const double lf = log2_abs(f);
    if (residuals) residuals->push_back(abs(f).rounded(64));
    if (lf > std::max(first + 8, noise_floor(z))) throw ConvergenceError("Newton iteration on the cubic diverged");
  }
  return ApproxComplex(z.rounded(p.bits));
}

}  // namespace jinv
