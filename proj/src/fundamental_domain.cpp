#include "jinv/fundamental_domain.hpp"

namespace jinv {

bool UnimodularMatrix::is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

Complex UnimodularMatrix::apply(const Complex& tau) const {
  const long w = tau.prec();
  Complex num = tau * Real(a, w) + Real(b, w);
  Complex den = tau * Real(c, w) + Real(d, w);
  return num / den;
}

UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Real boundary_tolerance(PrecBits p) { return Real::two_pow(-p.bits + 8, 64); }

FundamentalPoint reduce_to_F(const ApproxComplex& tau, PrecBits p) {
  const Complex& t0 = tau.value;
  if (!t0.is_finite() || t0.im().sign() <= 0) throw DomainError("reduction needs Im(tau) > 0");
  const long w = std::max(t0.prec(), p.working());
  const Real tol(boundary_tolerance(p), w);
  const Real one(1L, w);
  const Real one_minus = one - tol;
  Complex z(t0, w);
  UnimodularMatrix m;
  long iterations = 0;
  const Real half(0.5, w);
  for (;; ++iterations) {
    if (iterations > 100000 + 4 * w) throw ConvergenceError("reduction did not terminate");
    mpz_class n = z.re().round_to_integer();
    if (n != 0) {
      z -= Real(n, w);
      m = UnimodularMatrix::translation(-n) * m;
    }
    if (norm(z) < one_minus) {
      z = -inverse(z);
      m = UnimodularMatrix::inversion() * m;
      continue;
    }
    break;
  }
  // half-open boundary conventions of F
  if (abs(z.re() + half) <= tol) {
    z += 1L;
    m = UnimodularMatrix::translation(1) * m;
  }
  if (abs(norm(z) - one) <= tol && z.re().sign() < 0 && abs(z.re()) > tol) {
    z = -inverse(z);
    m = UnimodularMatrix::inversion() * m;
  }
  FundamentalPoint fp;
  fp.tau = ApproxComplex(z.rounded(std::max(t0.prec(), p.bits)), tau.claim);
  fp.reducer = std::move(m);
  fp.iterations = iterations;
  return fp;
}

bool in_F(const ApproxComplex& tau, const Real& tol) {
  const Complex& z = tau.value;
  if (!z.is_finite() || z.im().sign() <= 0) return false;
  const long w = std::max(z.prec(), 64 - tol.exponent());
  const Real x(z.re(), w);
  const Real n = norm(Complex(z, w));
  const Real t(tol, w);
  if (!(x > Real(-0.5, w) + t) || x > Real(0.5, w) + t) return false;
  if (n > Real(1L, w) + t) return true;
  return abs(n - Real(1L, w)) <= t && x >= -t;
}

}  // namespace jinv
