#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jinv/fundamental_domain.hpp"
#include "jinv/precision.hpp"

namespace jinv {

// j_approx is an approximation to an algebraic number of degree <= degree
// whose Mahler measure is at most height^degree; height >= e^e.
struct AlgebraicInput {
  ApproxComplex j_approx;
  long degree = 1;
  Real height;
};

// a x^2 + b x y + c y^2 with discriminant b^2 - 4ac < 0, a > 0, primitive.
// Reduced forms follow the boundary convention of F: b <= 0 whenever
// |b| = a or a = c, so the root (-b + i sqrt|D|) / (2a) lies in F.
struct BinaryQuadraticForm {
  mpz_class a, b, c, D;

  Complex root(long prec) const;
  friend bool operator==(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;
};

// Primitive reduced forms of discriminant D, sorted by (a, b).
std::vector<BinaryQuadraticForm> reduced_forms(long D);

struct Convergent {
  mpq_class value;
  // every convergent produced on the way, value included
  std::vector<mpq_class> path;
};

mpz_class rational_height(const mpq_class& q);

struct ConvergentPair {
  mpq_class real_part;
  mpq_class imag_squared;
  mpz_class real_height;
  mpz_class imag_height;
};

// Decision record: the inequality lhs <= rhs that settled the verdict.
struct CMCertificate {
  std::string rule;
  Real lhs;
  Real rhs;
};

struct CMResult {
  bool is_cm = false;
  std::optional<BinaryQuadraticForm> form;
  std::optional<FundamentalPoint> tau;
  CMCertificate certificate;
  long required_bits = 0;
};

// ceil(300 d^2 ln H (ln d + ln ln H)^2 + 200), at least 400
PrecBits required_precision(long d, const Real& H);
// floor(d^2 (ln H)^2 / 9.7)
long max_discriminant(long d, const Real& H);
// (3 / 2pi) sqrt|D| (2 + ln|D|)
double class_number_bound(long D);
// natural log of the Mahler measure bound 5.9 pi sqrt|D| (ln|D|)^2
double mahler_measure_log_bound(long D);
// exp(-31 d^2 ln H (ln d + ln ln H)^2 - 21)
Real separation_bound(long d, const Real& H);

// First continued fraction convergent p/q of x with |x - p/q| <= stop_tol.
// x_error is the certified absolute error of x; it must not exceed stop_tol/4.
Convergent cf_convergents(const Real& x, const Real& stop_tol, const Real& x_error);

// Convergents of Re z0 and (Im z0)^2 at tolerance 19^-3 d^-8 (ln H)^-8, or
// nothing when a convergent is too tall to come from a CM point.
std::optional<ConvergentPair> recognize_quadratic(const ApproxComplex& z0, long d, const Real& H);

// Smallest form whose root has real part c_r and squared imaginary part c_i.
BinaryQuadraticForm discriminant_from_convergents(const mpq_class& c_r, const mpq_class& c_i);

std::optional<CMResult> small_disc_test(const AlgebraicInput& input);

CMResult is_cm(const AlgebraicInput& input);

}  // namespace jinv
