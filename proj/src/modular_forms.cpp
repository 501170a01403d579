#include "jinv/modular_forms.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>

#include "jinv/fundamental_domain.hpp"

namespace jinv {

namespace {

constexpr double kLog2E = 1.4426950408889634;
constexpr double kPi = 3.141592653589793;

std::vector<mpz_class> compute_coefficients(long count) {
  const long n_max = count;
  std::vector<mpz_class> sigma1(n_max + 1, 0), sigma3(n_max + 1, 0);
  for (long d = 1; d <= n_max; ++d) {
    const mpz_class d3 = mpz_class(d) * d * d;
    for (long m = d; m <= n_max; m += d) {
      sigma1[m] += d;
      sigma3[m] += d3;
    }
  }
  // 1 / prod (1 - q^n)^24 from n a_n = 24 sum sigma(k) a_{n-k}
  std::vector<mpz_class> inv_eta(n_max, 0);
  inv_eta[0] = 1;
  for (long n = 1; n < n_max; ++n) {
    mpz_class s = 0;
    for (long k = 1; k <= n; ++k) s += sigma1[k] * inv_eta[n - k];
    inv_eta[n] = 24 * s / n;
  }
  std::vector<mpz_class> e4(n_max, 0);
  e4[0] = 1;
  for (long n = 1; n < n_max; ++n) e4[n] = 240 * sigma3[n];
  auto mul = [n_max](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    std::vector<mpz_class> c(n_max, 0);
    for (long i = 0; i < n_max; ++i) {
      if (a[i] == 0) continue;
      for (long k = 0; i + k < n_max; ++k) c[i + k] += a[i] * b[k];
    }
    return c;
  };
  return mul(mul(mul(e4, e4), e4), inv_eta);
}

struct CoefficientCache {
  std::shared_mutex mutex;
  std::vector<mpz_class> coeffs;
};

CoefficientCache& cache() {
  static CoefficientCache c;
  return c;
}

// log2 of the n-th term bound (2 pi n)^k 4 e^{4 pi sqrt n} e^{-2 pi n y}
double term_log2(long n, double y, int k) {
  return qcoefficient_bound_log2(n) - 2 * kPi * n * y * kLog2E + k * std::log2(2 * kPi * n);
}

// Smallest N such that sum_{n > N} of the term bounds is <= 2^-target_bits.
long truncation_index(double y, int k, double target_bits) {
  for (long n = 1;; ++n) {
    const double ratio_log =
        (4 * kPi * (std::sqrt(n + 2.0) - std::sqrt(n + 1.0)) - 2 * kPi * y) * kLog2E +
        k * std::log2((n + 2.0) / (n + 1.0));
    if (ratio_log >= 0) continue;
    const double tail = term_log2(n + 1, y, k) - std::log2(1 - std::exp2(ratio_log));
    if (tail <= -target_bits) return n;
  }
}

// log2 lower bound for |j(tau)| from |j - q^-1| <= 2079, or 0.
double j_magnitude_floor_log2(double y) {
  const double l = 2 * kPi * y * kLog2E;
  if (l < 13) return 0;
  return l + std::log2(1 - 2079.0 * std::exp2(-l));
}

void require_upper_half(const Complex& tau, double min_im) {
  if (!tau.is_finite()) throw DomainError("tau must be finite");
  if (tau.im().sign() <= 0) throw DomainError("tau must lie in the upper half plane");
  if (tau.im() < min_im) throw PrecisionError("q-series tail bound needs Im(tau) >= 0.5");
}

Complex two_pi_i_tau_exp(const Complex& tau, long w) {
  Complex t(tau, w);
  Real two_pi = Real::pi(w).scaled(1);
  return exp(t.times_i() * two_pi);
}

// sum_m c_m (m-1)^k q^m over the stored coefficients, by Horner
Complex q_polynomial(const std::vector<mpz_class>& c, long terms, int k, const Complex& q, long w) {
  auto coeff = [&](long m) {
    mpz_class v = c[m];
    if (k > 0) {
      mpz_class f;
      mpz_pow_ui(f.get_mpz_t(), mpz_class(m - 1).get_mpz_t(), static_cast<unsigned long>(k));
      v *= f;
    }
    return Real(v, w);
  };
  Complex acc(coeff(terms - 1), Real(w));
  for (long m = terms - 2; m >= 0; --m) {
    acc *= q;
    acc += coeff(m);
  }
  return acc;
}

Complex series_sum(const Complex& tau, int k, long p) {
  const double y = tau.im().to_double();
  const double floor_log2 = j_magnitude_floor_log2(y);
  const double scale = k == 0 ? floor_log2 : (floor_log2 > 0 ? floor_log2 + k * std::log2(2 * kPi) - 1 : 0.0);
  const long terms = truncation_index(y, k, p + 8 - scale) + 2;
  double peak = 2 * kPi * y * kLog2E + k * std::log2(2 * kPi);
  for (long n = 1; n < terms; ++n) peak = std::max(peak, term_log2(n, y, k));
  const long extra = static_cast<long>(std::ceil(std::max(0.0, peak - scale)));
  const long w = p + kGuardBits + extra;
  auto coeffs = j_coefficients(terms);
  Complex q = two_pi_i_tau_exp(tau, w);
  Complex sum = q_polynomial(coeffs, terms, k, q, w) / q;
  if (k > 0) {
    Complex factor = pow(Complex(Real(w), Real::pi(w).scaled(1)), static_cast<unsigned long>(k));
    sum *= factor;
  }
  return sum;
}

}  // namespace

double qcoefficient_bound_log2(long n) { return 2.0 + 4 * kPi * std::sqrt(static_cast<double>(n)) * kLog2E; }

std::vector<mpz_class> j_coefficients(long count) {
  auto& c = cache();
  {
    std::shared_lock lock(c.mutex);
    if (static_cast<long>(c.coeffs.size()) >= count)
      return std::vector<mpz_class>(c.coeffs.begin(), c.coeffs.begin() + count);
  }
  std::unique_lock lock(c.mutex);
  if (static_cast<long>(c.coeffs.size()) < count) {
    const long target = std::max<long>(count, 2 * static_cast<long>(c.coeffs.size()));
    c.coeffs = compute_coefficients(std::max<long>(target, 64));
  }
  return std::vector<mpz_class>(c.coeffs.begin(), c.coeffs.begin() + count);
}

ApproxComplex j_qseries(const ApproxComplex& tau, PrecBits p) {
  require_upper_half(tau.value, 0.5);
  Complex j = series_sum(tau.value, 0, p.bits).rounded(p.bits);
  return ApproxComplex(std::move(j), PrecisionClaim{PrecisionKind::Regulated, p});
}

ApproxComplex j_derivative(const ApproxComplex& tau, int order, PrecBits p) {
  if (order < 1 || order > 3) throw DomainError("derivative order must be 1, 2 or 3");
  require_upper_half(tau.value, 0.5);
  Complex d = series_sum(tau.value, order, p.bits).rounded(p.bits);
  return ApproxComplex(std::move(d), PrecisionClaim{PrecisionKind::Regulated, p});
}

ThetaConstants theta_constants(const Complex& tau, long prec) {
  const long w = prec + 16;
  Complex t(tau, w);
  Real pi = Real::pi(w);
  Complex q = exp(t.times_i() * pi);
  const double log2_q = -kPi * tau.im().to_double() * kLog2E;
  const double stop = -static_cast<double>(w) - 8;
  Complex one(Real(1L, w));
  // theta3, theta4: q^{n^2}; theta2: 2 q^{1/4} sum q^{n(n+1)}
  Complex q2 = sqr(q);
  Complex s34 = Complex(w), s_alt = Complex(w);
  Complex term = q, step = q;  // term = q^{n^2}, step = q^{2n-1}
  for (long n = 1; log2_q * n * n >= stop; ++n) {
    if (n % 2 == 0) s_alt += term; else s_alt -= term;
    s34 += term;
    step *= q2;
    term *= step;
  }
  Complex s2 = one;
  Complex term2 = q2, step2 = q2;  // term2 = q^{n(n+1)}, step2 = q^{2n}
  for (long n = 1; log2_q * n * (n + 1) >= stop; ++n) {
    s2 += term2;
    step2 *= q2;
    term2 *= step2;
  }
  Complex q4 = exp(t.times_i() * pi.scaled(-2));
  ThetaConstants th;
  th.t3 = one + s34.scaled(1);
  th.t4 = one + s_alt.scaled(1);
  th.t2 = (q4 * s2).scaled(1);
  return th;
}

ApproxComplex j_theta(const ApproxComplex& tau, PrecBits p) {
  require_upper_half(tau.value, 0.5);
  const long w = p.working() + 32;
  ThetaConstants th = theta_constants(Complex(tau.value, w), w);
  auto pow8 = [](const Complex& z) { return sqr(sqr(sqr(z))); };
  Complex num = pow8(th.t2) + pow8(th.t3) + pow8(th.t4);
  Complex den = pow8(th.t2 * th.t3 * th.t4);
  Complex j = (num * sqr(num) * 32L) / den;
  return ApproxComplex(j.rounded(p.bits), PrecisionClaim{PrecisionKind::Regulated, p});
}

namespace {

// Arithmetic-geometric mean of 1 and x with the optimal root choice.
Complex agm1(const Complex& x, long w) {
  Complex a(Real(1L, w)), b(x, w);
  const Real tol = Real::two_pow(-w + 4, 64);
  for (int it = 0; it < 4 * 64 + w; ++it) {
    Complex diff = a - b;
    if (diff.is_zero() || Real(abs(diff), 64) <= tol * Real(abs(a), 64)) break;
    Complex an = (a + b).scaled(-1);
    Complex bn = sqrt(a * b);
    Complex prod = bn * an.conj();
    if (prod.re().sign() < 0) bn = -bn;
    a = std::move(an);
    b = std::move(bn);
  }
  return (a + b).scaled(-1);
}

// the root of 1 - b^2 nearest to `ref`
Complex complementary_modulus(const Complex& b, const Complex& ref) {
  Complex a = sqrt(Complex(Real(1L, b.prec())) - sqr(b));
  if (norm(a - ref) > norm(a + ref)) a = -a;
  return a;
}

bool in_agm_region(const Complex& tau) {
  const Real& x = tau.re();
  const Real& y = tau.im();
  if (y > 8.0 || y <= 0.0 || abs(x) > 1.0) return false;
  Complex half(Real(0.5, 64), Real(64));
  Complex t(tau, 64);
  return norm(t - half) >= 0.25 && norm(t + half) >= 0.25;
}

}  // namespace

ApproxComplex j_fast(const ApproxComplex& tau, PrecBits p) {
  require_upper_half(tau.value, 0.5);
  if (!in_agm_region(tau.value)) return j_qseries(tau, p);
  const long w = p.working() + 32;
  const long start = 128;
  ThetaConstants th = theta_constants(Complex(tau.value, start), start);
  Complex t3sq = sqr(th.t3);
  Complex b = sqr(th.t2) / t3sq;
  Complex a_ref = sqr(th.t4) / t3sq;

  std::vector<long> schedule;
  for (long s = w; s > start - 16; s = s / 2 + 24) {
    schedule.push_back(s);
    if (s <= 2 * (start - 16)) break;
  }
  std::reverse(schedule.begin(), schedule.end());
  for (long s : schedule) {
    Complex bs(b, s);
    Complex a = complementary_modulus(bs, Complex(a_ref, s));
    Complex ma = agm1(a, s);
    Complex mb = agm1(bs, s);
    Complex f = (ma / mb).times_i() - Complex(tau.value, s);
    // d tau / d b = 2 M(1,a)^2 / (i pi b a^2)
    Complex deriv = (sqr(ma).scaled(1) / (bs * sqr(a) * Real::pi(s))).times_i() * -1L;
    b = bs - f / deriv;
    a_ref = a;
  }
  Complex lambda = sqr(Complex(b, w));
  Complex one(Real(1L, w));
  Complex u = one - lambda + sqr(lambda);
  Complex v = lambda * (one - lambda);
  Complex j = (u * sqr(u) * 256L) / sqr(v);
  return ApproxComplex(j.rounded(p.bits), PrecisionClaim{PrecisionKind::Regulated, p});
}

namespace {

// Series for F(z) and F'(z), F = 2F1(1/6,5/6;1;z), |z| <= 0.9.
std::pair<Complex, Complex> hypergeom_series(const Complex& z, long w) {
  const double r = std::sqrt(norm(Complex(z, 64)).to_double());
  Complex zz(z, w);
  Complex term(Real(1L, w));  // t_n
  Complex sum = term, dsum(w);
  const double tol_log2 = -static_cast<double>(w) - 4;
  for (long n = 0;; ++n) {
    // t_{n+1} = t_n z (36n^2+36n+5) / (36 (n+1)^2)
    term *= zz;
    term *= 36 * n * n + 36 * n + 5;
    term /= 36 * (n + 1) * (n + 1);
    sum += term;
    Complex dterm = term * (n + 1);
    dsum += dterm;
    // ratio of successive terms is below r, derivative terms below r(n+2)/(n+1)
    const double mag = log2_abs(dterm) - std::log2(std::max(1e-300, 1 - r * (n + 3.0) / (n + 2.0)));
    if (r * (n + 3.0) / (n + 2.0) < 1 && mag < tol_log2) break;
    if (n > 64 * w) throw ConvergenceError("hypergeometric series did not converge");
  }
  // dsum = z F'(z)
  if (zz.is_zero()) return {sum, Complex(Real(5L, w) / 36L, Real(w))};
  return {sum, dsum / zz};
}

struct OdeState {
  Complex y, dy;
};

// One Taylor step of z(1-z) y'' + (1-2z) y' - (5/36) y = 0 from z to z + h.
OdeState ode_step(const Complex& z, const Complex& h, const OdeState& s, long w) {
  Complex one(Real(1L, w));
  Complex p0 = z * (one - z);
  Complex A = -(one - z.scaled(1)) * h / p0;
  Complex B = sqr(h) / p0;
  Complex b0 = s.y, b1 = s.dy * h;
  Complex y = b0 + b1, hdy = b1;
  const double tol = -static_cast<double>(w) - 8;
  int small_run = 0;
  for (long n = 0; n < 64 * w; ++n) {
    Complex b2 = (A * b1 * ((n + 1) * (n + 1)) + B * b0 * (36 * n * n + 36 * n + 5) / 36L) / ((n + 2) * (n + 1));
    y += b2;
    hdy += b2 * (n + 2);
    const double mag = log2_abs(b2) + std::log2(n + 3.0);
    small_run = mag < tol ? small_run + 1 : 0;
    if (small_run >= 3) break;
    b0 = std::move(b1);
    b1 = std::move(b2);
  }
  return {y, hdy / h};
}

}  // namespace

ApproxComplex hypergeom_16_56(const ApproxComplex& z, PrecBits p) {
  Complex zz(z.value, 64);
  if (norm(zz) > 0.81 || norm(Complex(Real(1L, 64)) - zz) < 0.0025)
    throw DomainError("2F1(1/6,5/6;1;z) series needs |z| <= 0.9 and |1-z| >= 0.05");
  auto [f, df] = hypergeom_series(z.value, p.working());
  (void)df;
  return ApproxComplex(f.rounded(p.bits), PrecisionClaim{PrecisionKind::Regulated, p});
}

std::pair<Complex, Complex> hypergeom_16_56_pair(const Complex& a, long prec) {
  const long w = prec + 32;
  Complex alpha(a, w);
  if (alpha.is_zero()) throw DomainError("2F1(1-a) diverges at a = 0");
  if (alpha.re() > 0.5) throw DomainError("hypergeometric pair needs Re(a) <= 1/2");
  Complex one(Real(1L, w));
  Complex beta = one - alpha;
  if (norm(Complex(alpha, 64)) <= 0.5625 && norm(Complex(beta, 64)) <= 0.5625)
    return {hypergeom_series(alpha, w).first, hypergeom_series(beta, w).first};
  // continue F(z) and G(z) = F(1-z) from z = 1/2 to a; when a lies left of
  // the imaginary axis the path detours through the half plane of a to keep
  // clear of the singularity of G at 0
  Complex z(Real(0.5, w), Real(w));
  auto [f_half, df_half] = hypergeom_series(z, w);
  OdeState f{f_half, df_half}, g{f_half, -df_half};
  auto walk = [&](const Complex& target) {
    for (int step = 0; step < 100000; ++step) {
      Complex rest = target - z;
      if (rest.is_zero()) return;
      const double radius =
          std::sqrt(std::min(norm(Complex(z, 64)).to_double(), norm(Complex(one - z, 64)).to_double()));
      const double dist = std::sqrt(norm(Complex(rest, 64)).to_double());
      const bool last = dist <= 0.5 * radius;
      Complex h = last ? rest : rest * Real(0.5 * radius / dist, w);
      f = ode_step(z, h, f, w);
      g = ode_step(z, h, g, w);
      z = last ? target : z + h;
      if (last) return;
    }
    throw ConvergenceError("hypergeometric continuation did not reach its target");
  };
  if (alpha.re() < 0.125) {
    const double side = alpha.im().sign() < 0 ? -1.0 : 1.0;
    const double height = side * (std::sqrt(norm(Complex(alpha, 64)).to_double()) + 1.0);
    walk(Complex(Real(0.5, w), Real(height, w)));
  }
  walk(alpha);
  return {f.y, g.y};
}

ApproxComplex low_precision_inverse(const ApproxComplex& j_tilde, long work_bits) {
  const Complex& j = j_tilde.value;
  if (j.is_zero()) throw DomainError("low precision inverse needs j != 0");
  const long w = work_bits;
  // s^2 = 1 - 1728/j = (j - 1728)/j, formed before rounding so that j near 1728 keeps its digits
  Complex jm(j, std::max(j.prec(), w) + 16);
  jm -= 1728L;
  Complex s = sqrt(Complex(jm, w) / Complex(j, w));
  Complex one(Real(1L, w));
  Complex alpha = (one - s).scaled(-1);
  if (alpha.is_zero()) throw DomainError("j too large for the low precision inverse");
  auto [f_a, f_b] = hypergeom_16_56_pair(alpha, w);
  Complex ratio = f_b / f_a;
  Complex cand_a = ratio.times_i();
  Complex cand_b = inverse(ratio).times_i();
  const ApproxComplex target(Complex(j, w));
  for (const Complex& c : {cand_a, cand_b}) {
    if (c.im().sign() <= 0) continue;
    FundamentalPoint fp = reduce_to_F(ApproxComplex(c), PrecBits(w));
    if (fp.tau.value.im() < 0.5) continue;
    Complex jv = j_qseries(fp.tau, PrecBits(64)).value;
    if (regulated_error(jv, Complex(j, 64)) <= Real::two_pow(-30, 64))
      return ApproxComplex(fp.tau.value, PrecisionClaim{PrecisionKind::Absolute, PrecBits(w - 38)});
  }
  throw ConvergenceError("hypergeometric starting point does not reduce consistently");
}

const SpecialDerivatives& special_derivatives() {
  static const SpecialDerivatives values = [] {
    const PrecBits p(128);
    SpecialDerivatives d;
    const Complex i = Complex::i(192);
    const Complex rho = Complex::rho(192);
    d.j2_at_i = j_derivative(ApproxComplex(i), 2, p).value;
    d.j3_at_rho = j_derivative(ApproxComplex(rho), 3, p).value;
    d.j1_at_2i = j_derivative(ApproxComplex(Complex(Real(0L, 192), Real(2L, 192))), 1, p).value;
    d.j1_at_i_sqrt3 = j_derivative(ApproxComplex(Complex(Real(0L, 192), sqrt(Real(3L, 192)))), 1, p).value;
    auto inside = [](const Complex& z, double lo, double hi) {
      const double m = abs(z).to_double();
      return m >= lo && m <= hi;
    };
    if (!inside(d.j2_at_i, 49600, 49700) || !inside(d.j3_at_rho, 274000, 275000))
      throw CertificationError("special derivative values fall outside their enclosures");
    return d;
  }();
  return values;
}

}  // namespace jinv
