#include <gtest/gtest.h>

#include <map>
#include <random>

#include "jinv/fundamental_domain.hpp"
#include "jinv/modular_forms.hpp"
#include "jinv/phi2.hpp"
#include "oracles.hpp"

using namespace jinv;

namespace {

ApproxComplex A(const Complex& z) { return ApproxComplex(z); }

Complex jq(const Complex& tau, long p) {
  FundamentalPoint fp = reduce_to_F(A(Complex(tau, p + 64)), PrecBits(p + 64));
  return j_qseries(fp.tau, PrecBits(p + 32)).value;
}

double rel_log2(const Complex& a, const Complex& ref) { return log2_abs(a - ref) - log2_abs(ref); }

}  // namespace

TEST(Phi2Terms, ExactPolynomial) {
  const std::map<std::pair<int, int>, std::string> expected = {
      {{3, 0}, "1"},           {{0, 3}, "1"},           {{2, 2}, "-1"},
      {{2, 1}, "1488"},        {{1, 2}, "1488"},        {{2, 0}, "-162000"},
      {{0, 2}, "-162000"},     {{1, 1}, "40773375"},    {{1, 0}, "8748000000"},
      {{0, 1}, "8748000000"},  {{0, 0}, "-157464000000000"},
  };
  std::map<std::pair<int, int>, std::string> got;
  for (const Phi2Term& t : phi2_terms()) got[{t.x_deg, t.y_deg}] = mpz_class(t.coeff).get_str();
  EXPECT_EQ(got, expected);
}

TEST(Phi2Eval, KnownZeros) {
  EXPECT_EQ(phi2_eval_exact(0, 54000), 0);
  EXPECT_EQ(phi2_eval_exact(1728, 287496), 0);
  EXPECT_EQ(phi2_eval_exact(1728, 1728), 0);
  ApproxComplex v = phi2_eval(A(Complex(0.0, 0.0, 64)), A(Complex(54000.0, 0.0, 64)));
  EXPECT_TRUE(v.value.is_zero());
}

TEST(Phi2Eval, SymmetricOnRandomIntegers) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<long> u(-1000000000L, 1000000000L);
  for (int k = 0; k < 50; ++k) {
    mpz_class a = u(rng), b = u(rng);
    EXPECT_EQ(phi2_eval_exact(a, b), phi2_eval_exact(b, a));
    ApproxComplex x = phi2_eval(A(Complex(Real(a, 64))), A(Complex(Real(b, 64))));
    EXPECT_EQ(x.value.re().to_rational(), mpq_class(phi2_eval_exact(a, b)));
  }
}

TEST(Specialize, AtZeroAnd1728) {
  Phi2Cubic c = specialize(A(Complex(0.0, 0.0, 128)));
  EXPECT_EQ(c.c2.re(), -162000.0);
  EXPECT_EQ(c.c1.re().to_rational(), mpq_class(8748000000L));
  EXPECT_EQ(c.c0.re().to_rational(), mpq_class(mpz_class("-157464000000000")));

  Phi2Cubic d = specialize(A(Complex(1728.0, 0.0, 128)));
  mpz_class j = 1728;
  mpz_class c0 = j * j * j - 162000 * j * j + mpz_class(8748000000L) * j - mpz_class("157464000000000");
  EXPECT_EQ(d.c0.re().to_rational(), mpq_class(c0));
}

TEST(Specialize, MatchesPhi2Eval) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 20; ++k) {
    Complex j(u(rng), u(rng), 256), z(u(rng), u(rng), 256);
    Complex a = specialize(A(j)).eval(z);
    Complex b = phi2_eval(A(j), A(z)).value;
    EXPECT_LT(rel_log2(a, b), -200);
  }
}

TEST(Kantorovich, Examples) {
  auto c1 = kantorovich_check(Real(0.1, 64), Real(1L, 64), Real(0.25, 64));
  EXPECT_TRUE(c1.ok);
  EXPECT_NEAR(c1.h.to_double(), 0.1, 1e-15);
  EXPECT_FALSE(kantorovich_check(Real(1L, 64), Real(1L, 64), Real(10L, 64)).ok);
  EXPECT_FALSE(kantorovich_check(Real(0.1, 64), Real(1L, 64), Real(0.15, 64)).ok);
  EXPECT_EQ(kantorovich_steps(kantorovich_check(Real(1L, 64), Real(1L, 64), Real(10L, 64)), Real(1e-10, 64)), -1);
}

TEST(Kantorovich, LargeJCertificatePassesAboveThreshold) {
  const double threshold = std::exp(6 * M_PI) + 2079;
  for (double s : {1.0, 10.0, 1e10, 1e100}) {
    auto cert = large_j_certificate(Complex(threshold * s, 0.0, 128));
    EXPECT_TRUE(cert.ok) << s;
    EXPECT_LE(cert.h.to_double(), std::ldexp(1.0, -10));
  }
}

TEST(NewtonSolve, DoublesArgumentInLargeRegime) {
  const long p = 512;
  Complex j = jq(Complex(0.0, 3.2, p + 64), p);
  Complex target = jq(Complex(0.0, 6.4, p + 64), p);
  Complex start = sqr(j) - j * 1488L + 160512L;
  const long steps = static_cast<long>(std::ceil(2 * std::log2(p) + 2 * std::log2(log2_abs(j))));
  Complex z = newton_solve(specialize(A(j)), A(start), steps, PrecBits(p)).value;
  EXPECT_LT(rel_log2(z, target), -500);
}

TEST(NewtonSolve, ExactRootIsFixedPoint) {
  Complex root(1728.0, 0.0, 256);  // the simple root
  Complex z = newton_solve(specialize(A(Complex(1728.0, 0.0, 256))), A(root), 10, PrecBits(256)).value;
  EXPECT_LT(log2_abs(z - root), -256 + 8);
}

TEST(NewtonSolve, ZeroStepsEchoesStart) {
  Complex start(287000.0, 3.0, 256);
  Complex z = newton_solve(specialize(A(Complex(1728.0, 0.0, 256))), A(start), 0, PrecBits(256)).value;
  EXPECT_TRUE((z - start).is_zero());
}

TEST(NewtonSolve, MultipleRootsConvergeLinearly) {
  // Phi_2(1728, z) = (z - 287496)^2 (z - 1728) and Phi_2(0, z) = (z - 54000)^3
  Complex a = newton_solve(specialize(A(Complex(1728.0, 0.0, 256))), A(Complex(287000.0, 0.0, 256)), 20,
                           PrecBits(256)).value;
  EXPECT_LT(abs(a - Complex(287496.0, 0.0, 256)).to_double(), 1e-3);
  Complex b = newton_solve(specialize(A(Complex(0.0, 0.0, 256))), A(Complex(54001.0, 0.0, 256)), 20,
                           PrecBits(256)).value;
  EXPECT_LT(abs(b - Complex(54000.0, 0.0, 256)).to_double(), 1e-3);
}

TEST(NewtonSolve, ZeroDerivativeIsNumericalError) {
  EXPECT_THROW(newton_solve(specialize(A(Complex(0.0, 0.0, 128))), A(Complex(54000.0, 0.0, 128)), 3, PrecBits(128)),
               NumericalError);
}

TEST(NewtonSolve, QuadraticConvergenceMatchesKantorovichRate) {
  const long p = 1024;
  Complex j = jq(Complex(0.1, 5.0, p + 64), p);
  auto cert = large_j_certificate(j);
  ASSERT_TRUE(cert.ok);
  ASSERT_LE(cert.h.to_double(), std::ldexp(1.0, -10));
  Phi2Cubic cubic = specialize(A(j));
  Complex start = sqr(j) - j * 1488L + 160512L;
  Complex root = newton_solve(cubic, A(start), 40, PrecBits(p)).value;
  const double lh = std::log2(cert.h.to_double());
  const double leta = std::log2(cert.eta.to_double());
  for (long k = 1; k <= 3; ++k) {
    Complex z = newton_solve(cubic, A(start), k, PrecBits(p)).value;
    const double bound = 1 + std::ldexp(1 + lh, static_cast<int>(k)) + leta - lh;
    EXPECT_LE(log2_abs(z - root), std::max(bound, -static_cast<double>(p) + 2 * log2_abs(j))) << k;
  }
}

TEST(Phi2Roots, ResidualAtDoubledArgument) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(1.0, 5.0);
  const long p = 512;
  for (int k = 0; k < 50; ++k) {
    Complex tau(ux(rng), uy(rng), p + 64);
    Complex j1 = jq(tau, p), j2 = jq(tau.scaled(1), p);
    Complex r = phi2_eval(A(j1), A(j2)).value;
    const double bound = -p + 40 + 6 * std::log2(1 + abs(j1).to_double());
    EXPECT_LE(log2_abs(r), bound);
  }
}

TEST(Phi2Roots, VietaRelations) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(1.0, 3.0);
  const long p = 400;
  for (int k = 0; k < 20; ++k) {
    Complex tau(ux(rng), uy(rng), p + 64);
    Complex r1 = jq(tau.scaled(1), p), r2 = jq(tau.scaled(-1), p), r3 = jq((tau + 1L).scaled(-1), p);
    Phi2Cubic c = specialize(A(jq(tau, p)));
    EXPECT_LT(rel_log2(r1 + r2 + r3, -c.c2), -p + 20);
    EXPECT_LT(rel_log2(r1 * r2 * r3, -c.c0), -p + 20);
  }
}
