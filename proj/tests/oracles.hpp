#pragma once

// Reference computations that avoid the library's own evaluation paths.

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "jinv/precision.hpp"

namespace oracle {

using jinv::Complex;
using jinv::Real;

inline mpz_class divisor_power_sum(long n, unsigned long k) {
  mpz_class s = 0, t;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), k);
    s += t;
    const long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(e), k);
      s += t;
    }
  }
  return s;
}

// j = 1728 E4^3 / (E4^3 - E6^2) with E4, E6 from divisor sums; Im(tau) >= 0.5.
inline Complex eisenstein_j(const Complex& tau, long prec) {
  const long w = prec + 64;
  Complex t(tau, w);
  Complex two_pi_i_tau = t * Real::pi(w).scaled(1);
  two_pi_i_tau = two_pi_i_tau.times_i();
  const Complex q = exp(two_pi_i_tau);
  const double lq = jinv::log2_abs(q);
  Complex e4(Real(1L, w)), e6(Real(1L, w));
  Complex qn = q;
  for (long n = 1;; ++n) {
    // sigma_5(n) <= 2 n^5; stop when q^n n^6 is below the target
    if (n * lq + 6 * std::log2(static_cast<double>(n)) + 12 < -static_cast<double>(w)) break;
    e4 += qn * Real(mpz_class(divisor_power_sum(n, 3) * 240), w);
    e6 -= qn * Real(mpz_class(divisor_power_sum(n, 5) * 504), w);
    qn *= q;
  }
  Complex e43 = e4 * e4 * e4;
  Complex j = e43 * 1728L / (e43 - e6 * e6);
  return j.rounded(prec);
}

// Exhaustive primitive reduced forms of discriminant D in the convention
// |b| <= a <= c, b <= 0 on the boundary, by scanning a box.
inline std::vector<std::tuple<long, long, long>> brute_forms(long D) {
  std::vector<std::tuple<long, long, long>> out;
  const long n = -D;
  for (long a = 1; a <= n; ++a)
    for (long b = -a; b <= a; ++b)
      for (long c = a; 4 * a * c - b * b <= n; ++c) {
        if (b * b - 4 * a * c != D) continue;
        if ((std::abs(b) == a || a == c) && b > 0) continue;
        if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
        out.emplace_back(a, b, c);
      }
  return out;
}

// Uniform-ish sample of F with Im <= ymax.
inline Complex sample_F(std::mt19937_64& rng, double ymax, long prec) {
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.0, 1.0);
  for (;;) {
    const double x = ux(rng);
    const double y = std::sqrt(0.75) + (ymax - std::sqrt(0.75)) * uy(rng);
    if (x * x + y * y > 1.0 && x > -0.5) return Complex(x, y, prec);
  }
}

}  // namespace oracle
