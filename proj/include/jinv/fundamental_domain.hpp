#pragma once

#include "jinv/precision.hpp"

namespace jinv {

// Integer matrix [[a, b], [c, d]] with ad - bc = 1 acting by Moebius maps.
struct UnimodularMatrix {
  mpz_class a{1}, b{0}, c{0}, d{1};

  static UnimodularMatrix identity() { return {}; }
  static UnimodularMatrix translation(const mpz_class& k) { return {1, k, 0, 1}; }
  static UnimodularMatrix inversion() { return {0, -1, 1, 0}; }

  mpz_class determinant() const { return a * d - b * c; }
  bool is_identity() const;
  // (a tau + b) / (c tau + d) at the precision of tau
  Complex apply(const Complex& tau) const;

  friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y);
  friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;
};

struct FundamentalPoint {
  ApproxComplex tau;
  UnimodularMatrix reducer;
  long iterations = 0;
};

// Boundary tolerance 2^(-p+8) used by reduce_to_F.
Real boundary_tolerance(PrecBits p);

FundamentalPoint reduce_to_F(const ApproxComplex& tau, PrecBits p);
bool in_F(const ApproxComplex& tau, const Real& tol);

}  // namespace jinv
