#include <gtest/gtest.h>

#include <random>

#include "jinv/fundamental_domain.hpp"
#include "jinv/modular_forms.hpp"
#include "jinv/phi2.hpp"
#include "oracles.hpp"

using namespace jinv;

namespace {

Complex rho(long prec) { return Complex::rho(prec); }

Complex i_times(const Real& y) { return Complex(Real(0L, y.prec()), y); }

ApproxComplex A(const Complex& z) { return ApproxComplex(z); }

double reg_log2(const Complex& a, const Complex& ref) {
  return std::log2(regulated_error(a, ref).to_double());
}

}  // namespace

TEST(QCoefficients, LeadingValues) {
  auto c = j_coefficients(6);
  EXPECT_EQ(c[0], 1);
  EXPECT_EQ(c[1], 744);
  EXPECT_EQ(c[2], 196884);
  EXPECT_EQ(c[3], 21493760);
  EXPECT_EQ(c[4], 864299970);
  EXPECT_EQ(c[5], mpz_class("20245856256"));
}

TEST(QCoefficients, MatchEisensteinQuotient) {
  // j * Delta = E4^3 as power series, Delta from the product formula
  const long n = 40;
  std::vector<mpz_class> e4(n + 2);
  e4[0] = 1;
  for (long k = 1; k <= n + 1; ++k) e4[k] = 240 * oracle::divisor_power_sum(k, 3);
  std::vector<mpz_class> e43(n + 2, 0), tmp(n + 2, 0);
  for (long a = 0; a <= n + 1; ++a)
    for (long b = 0; a + b <= n + 1; ++b) tmp[a + b] += e4[a] * e4[b];
  for (long a = 0; a <= n + 1; ++a)
    for (long b = 0; a + b <= n + 1; ++b) e43[a + b] += tmp[a] * e4[b];
  // Delta = q prod (1-q^k)^24 via repeated multiplication
  std::vector<mpz_class> prod(n + 2, 0);
  prod[0] = 1;
  for (long k = 1; k <= n + 1; ++k)
    for (int r = 0; r < 24; ++r)
      for (long m = n + 1; m >= k; --m) prod[m] -= prod[m - k];
  auto c = j_coefficients(n + 1);
  // (sum_i c_i q^(i-1)) * (sum_m prod_m q^(m+1)) = sum e43_k q^k
  for (long k = 0; k <= n; ++k) {
    mpz_class s = 0;
    for (long i = 0; i <= k; ++i) s += c[i] * prod[k - i];
    EXPECT_EQ(s, e43[k]) << "k=" << k;
  }
}

TEST(QCoefficients, BoundHoldsAndIsMonotone) {
  auto c = j_coefficients(200);
  for (long n = 1; n < 199; ++n) {
    EXPECT_LE(std::log2(mpz_class(c[n + 1]).get_d()), qcoefficient_bound_log2(n)) << n;
    EXPECT_LT(qcoefficient_bound_log2(n), qcoefficient_bound_log2(n + 1));
  }
}

TEST(JQSeries, SpecialValues) {
  const long p = 256;
  const long w = p + 64;
  EXPECT_LT(reg_log2(j_qseries(A(Complex::i(w)), PrecBits(p)).value, Complex(1728.0, 0, p)), -p + 4);
  EXPECT_LT(log2_abs(j_qseries(A(rho(w)), PrecBits(p)).value), -p + 12);
  EXPECT_LT(reg_log2(j_qseries(A(i_times(sqrt(Real(3L, w)))), PrecBits(p)).value, Complex(54000.0, 0, p)), -p + 4);
  EXPECT_LT(reg_log2(j_qseries(A(Complex(0.0, 2.0, w)), PrecBits(p)).value, Complex(287496.0, 0, p)), -p + 4);
  EXPECT_EQ(phi2_eval_exact(1728, 287496), 0);
}

TEST(JQSeries, MatchesEisensteinOracle) {
  std::mt19937_64 rng(11);
  const long p = 512;
  for (int k = 0; k < 30; ++k) {
    Complex tau = oracle::sample_F(rng, 4.0, p + 64);
    Complex a = j_qseries(A(tau), PrecBits(p)).value;
    Complex b = oracle::eisenstein_j(tau, p);
    EXPECT_LT(reg_log2(a, b), -p + 8);
  }
}

TEST(JQSeries, ModularInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> ent(-10, 10);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.5, 3.0);
  const long p = 300;
  int checked = 0;
  while (checked < 50) {
    long a = ent(rng), b = ent(rng), c = ent(rng), d = ent(rng);
    if (a * d - b * c != 1) continue;
    Complex tau(ux(rng), uy(rng), p + 128);
    UnimodularMatrix g{a, b, c, d};
    Complex t2 = g.apply(tau);
    if (t2.im() < 0.5) continue;
    Complex j1 = j_qseries(A(tau), PrecBits(p)).value;
    Complex j2 = j_qseries(A(t2), PrecBits(p)).value;
    EXPECT_LT(reg_log2(j2, j1), -p + 8);
    ++checked;
  }
}

TEST(JQSeries, QDominanceOnF) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    Complex tau = oracle::sample_F(rng, 6.0, 128);
    Complex j = j_qseries(A(tau), PrecBits(128)).value;
    Complex q_inv = exp(tau.times_i() * Real::pi(128).scaled(1) * -1L);
    EXPECT_LE(abs(j - q_inv).to_double(), 2079.0);
  }
}

TEST(JQSeries, RejectsSmallImaginaryPart) {
  EXPECT_THROW(j_qseries(A(Complex(0.0, 0.3, 64)), PrecBits(64)), PrecisionError);
}

TEST(JTheta, SpecialValues) {
  const long p = 256;
  const long w = p + 64;
  EXPECT_LT(reg_log2(j_theta(A(Complex::i(w)), PrecBits(p)).value, Complex(1728.0, 0, p)), -p + 4);
  EXPECT_LT(reg_log2(j_theta(A(i_times(sqrt(Real(3L, w)))), PrecBits(p)).value, Complex(54000.0, 0, p)), -p + 4);
}

TEST(JTheta, AgreesWithQSeries) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.9, 3.2);
  const long p = 512;
  for (int k = 0; k < 100; ++k) {
    Complex tau(ux(rng), uy(rng), p + 64);
    EXPECT_LT(reg_log2(j_theta(A(tau), PrecBits(p)).value, j_qseries(A(tau), PrecBits(p)).value), -p + 1);
  }
}

TEST(JFast, AgreesWithQSeries) {
  std::mt19937_64 rng(19);
  for (long p : {200L, 1024L, 3000L}) {
    for (int k = 0; k < 25; ++k) {
      Complex tau = oracle::sample_F(rng, 9.0, p + 64);
      EXPECT_LT(reg_log2(j_fast(A(tau), PrecBits(p)).value, j_qseries(A(tau), PrecBits(p)).value), -p + 2);
    }
  }
}

TEST(JDerivative, RamificationValues) {
  const long p = 128;
  const long w = p + 64;
  const double d2 = abs(j_derivative(A(Complex::i(w)), 2, PrecBits(p)).value).to_double();
  EXPECT_GE(d2, 49600);
  EXPECT_LE(d2, 49700);
  const double d3 = abs(j_derivative(A(rho(w)), 3, PrecBits(p)).value).to_double();
  EXPECT_GE(d3, 274000);
  EXPECT_LE(d3, 275000);
  EXPECT_LT(log2_abs(j_derivative(A(Complex::i(w)), 1, PrecBits(p)).value), -p + 20);
  EXPECT_LT(log2_abs(j_derivative(A(rho(w)), 1, PrecBits(p)).value), -p + 20);
  const double d1 = abs(j_derivative(A(i_times(sqrt(Real(3L, w)))), 1, PrecBits(p)).value).to_double();
  EXPECT_GE(d1, 334000);
  EXPECT_LE(d1, 334600);
}

TEST(JDerivative, CachedSpecialValuesInsideEnclosures) {
  const SpecialDerivatives& s = special_derivatives();
  EXPECT_NEAR(abs(s.j2_at_i).to_double(), 49650, 50);
  EXPECT_NEAR(abs(s.j3_at_rho).to_double(), 274500, 500);
}

TEST(JDerivative, MatchesCenteredDifference) {
  std::mt19937_64 rng(23);
  const long p = 300;
  const long step_bits = p / 3;
  for (int k = 0; k < 20; ++k) {
    Complex tau = oracle::sample_F(rng, 3.0, p + 64);
    const Real h = Real::two_pow(-step_bits, p + 64);
    Complex fp = j_qseries(A(tau + h), PrecBits(p)).value;
    Complex fm = j_qseries(A(tau - h), PrecBits(p)).value;
    Complex fd = (fp - fm) / h.scaled(1);
    Complex d = j_derivative(A(tau), 1, PrecBits(p)).value;
    EXPECT_LT(reg_log2(fd, d), -step_bits + 16);
  }
}

TEST(Hypergeometric, AtZeroIsOne) {
  Complex v = hypergeom_16_56(A(Complex(0.0, 0.0, 128)), PrecBits(128)).value;
  EXPECT_EQ(v.re(), 1.0);
  EXPECT_TRUE(v.im().is_zero());
}

TEST(Hypergeometric, HalfMatchesLongPartialSum) {
  const long p = 200;
  Complex v = hypergeom_16_56(A(Complex(0.5, 0.0, p)), PrecBits(p)).value;
  // 10000 terms at doubled precision
  const long w = 2 * p;
  Real term(1L, w), sum(1L, w), z(0.5, w);
  for (long n = 0; n < 10000; ++n) {
    term *= z;
    term *= 36 * n * n + 36 * n + 5;
    term /= 36 * (n + 1) * (n + 1);
    sum += term;
  }
  EXPECT_LT(reg_log2(v, Complex(sum)), -p + 2);
}

TEST(Hypergeometric, RatioSymmetryAtHalf) {
  auto [fa, fb] = hypergeom_16_56_pair(Complex(0.5, 0.0, 128), 128);
  EXPECT_LT(reg_log2(fb / fa, Complex(1.0, 0.0, 128)), -120);
}

TEST(Hypergeometric, PairMatchesSeriesInsideDisc) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  for (int k = 0; k < 20; ++k) {
    Complex a(0.3 + u(rng) / 3, u(rng), 160);
    auto [fa, fb] = hypergeom_16_56_pair(a, 160);
    Complex sa = hypergeom_16_56(A(a), PrecBits(160)).value;
    Complex sb = hypergeom_16_56(A(Complex(1L - a)), PrecBits(160)).value;
    EXPECT_LT(reg_log2(fa, sa), -140);
    EXPECT_LT(reg_log2(fb, sb), -140);
  }
}

TEST(Hypergeometric, OutsideDiscRejected) {
  EXPECT_THROW(hypergeom_16_56(A(Complex(0.95, 0.0, 64)), PrecBits(64)), DomainError);
}

TEST(LowPrecisionInverse, KnownValues) {
  auto t1 = low_precision_inverse(A(Complex(1728.0, 0, 128))).value;
  EXPECT_LT(log2_abs(t1 - Complex::i(128)), -100);
  auto t2 = low_precision_inverse(A(Complex(287496.0, 0, 128))).value;
  EXPECT_LT(log2_abs(t2 - Complex(0.0, 2.0, 128)), -90);
  auto t3 = low_precision_inverse(A(Complex(54000.0, 0, 128))).value;
  EXPECT_LT(log2_abs(t3 - i_times(sqrt(Real(3L, 128)))), -90);
}

TEST(LowPrecisionInverse, RoundTripOnF) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 100; ++k) {
    Complex tau = oracle::sample_F(rng, 3.1, 256);
    Complex j = j_qseries(A(tau), PrecBits(192)).value;
    Complex t0 = low_precision_inverse(A(j)).value;
    Complex ref = reduce_to_F(A(tau), PrecBits(100)).tau.value;
    // boundary points may come back as the other representative
    const double err = log2_abs(t0 - ref);
    const double err_shift = std::min(log2_abs(t0 - ref - 1L), log2_abs(t0 - ref + 1L));
    EXPECT_LT(std::min(err, err_shift), -60);
  }
}
