#pragma once

#include <utility>
#include <vector>

#include "jinv/precision.hpp"

namespace jinv {

// Bound 4*exp(4*pi*sqrt(n)) on the n-th q-coefficient of j, as log2.
double qcoefficient_bound_log2(long n);

// Exact integer q-expansion coefficients of j; index 0 holds the q^-1
// coefficient, index k holds that of q^(k-1). Cached process-wide.
std::vector<mpz_class> j_coefficients(long count);

ApproxComplex j_qseries(const ApproxComplex& tau, PrecBits p);
ApproxComplex j_theta(const ApproxComplex& tau, PrecBits p);
ApproxComplex j_derivative(const ApproxComplex& tau, int order, PrecBits p);

// j via theta quotients obtained by Newton iteration on the AGM relation;
// O(M(p) log p). Needs tau inside {|Re| <= 1, |tau -+ 1/2| >= 1/2} and
// Im(tau) <= 8.
ApproxComplex j_fast(const ApproxComplex& tau, PrecBits p);

// Jacobi theta constants theta2, theta3, theta4 at tau.
struct ThetaConstants {
  Complex t2, t3, t4;
};
ThetaConstants theta_constants(const Complex& tau, long prec);

// 2F1(1/6, 5/6; 1; z) on |z| <= 0.9 by the power series.
ApproxComplex hypergeom_16_56(const ApproxComplex& z, PrecBits p);

// (2F1(1/6,5/6;1;a), 2F1(1/6,5/6;1;1-a)) for Re(a) <= 1/2, a != 0, by
// analytic continuation of the hypergeometric equation from a = 1/2.
std::pair<Complex, Complex> hypergeom_16_56_pair(const Complex& a, long prec);

// Low precision preimage of j_tilde in F from the hypergeometric
// parametrisation. `work_bits` is the fixed working precision.
ApproxComplex low_precision_inverse(const ApproxComplex& j_tilde, long work_bits = 128);

// j''(i), j'''(rho), j'(2i), j'(i*sqrt(3)); computed once at 128 bits and
// checked against the published enclosures.
struct SpecialDerivatives {
  Complex j2_at_i;
  Complex j3_at_rho;
  Complex j1_at_2i;
  Complex j1_at_i_sqrt3;
};
const SpecialDerivatives& special_derivatives();

}  // namespace jinv
