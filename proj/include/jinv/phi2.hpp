#pragma once

#include <array>
#include <vector>

#include "jinv/precision.hpp"

namespace jinv {

// One monomial coeff * X^x_deg * Y^y_deg of the level-2 modular polynomial.
struct Phi2Term {
  int x_deg;
  int y_deg;
  const char* coeff;
};

// The nonzero terms of Phi_2(X, Y), exact.
const std::array<Phi2Term, 11>& phi2_terms();

mpz_class phi2_eval_exact(const mpz_class& x, const mpz_class& y);
// Horner evaluation at the larger input precision plus guard bits; exact
// when both inputs hold integers.
ApproxComplex phi2_eval(const ApproxComplex& x, const ApproxComplex& y);

// z^3 + c2 z^2 + c1 z + c0 = Phi_2(j, z) for a fixed j.
struct Phi2Cubic {
  Complex c2, c1, c0;

  Complex eval(const Complex& z) const;
  Complex derivative(const Complex& z) const;
  Complex second_derivative(const Complex& z) const;
  long prec() const { return c0.prec(); }
};

// Coefficients are formed at `work_bits` (default: input precision + guard).
Phi2Cubic specialize(const ApproxComplex& j_tilde, long work_bits = 0);

struct KantorovichCertificate {
  Real eta, K, h, r;
  bool ok = false;
};

KantorovichCertificate kantorovich_check(const Real& eta, const Real& K, const Real& r);
// Smallest k with 2^-k (2h)^(2^k) eta / h <= bound; -1 when the
// certificate does not pass.
long kantorovich_steps(const KantorovichCertificate& cert, const Real& bound);

// Certificate for Newton on Phi_2(j, .) from j^2 - 1488 j + 160512, built
// from the closed-form bounds valid when |j| >= e^{6 pi} + 2079.
KantorovichCertificate large_j_certificate(const Complex& j);

// Exactly `steps` Newton iterations at p + guard bits. Residuals |cubic(z_k)|
// for k = 0..steps are appended to `residuals` when given.
ApproxComplex newton_solve(const Phi2Cubic& cubic, const ApproxComplex& z0, long steps, PrecBits p,
                           std::vector<Real>* residuals = nullptr);

}  // namespace jinv
