#include "jinv/invert.hpp"

#include <cmath>

#include "jinv/modular_forms.hpp"
#include "jinv/phi2.hpp"

namespace jinv {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::AtRho:
      return "AtRho";
    case Regime::AtI:
      return "AtI";
    case Regime::Large:
      return "Large";
    case Regime::NearI:
      return "NearI";
    case Regime::NearRho:
      return "NearRho";
    case Regime::Compact:
      return "Compact";
  }
  return "unknown";
}

long guaranteed_bits(long p, Regime r) {
  switch (r) {
    case Regime::AtRho:
    case Regime::AtI:
    case Regime::NearI:
    case Regime::NearRho:
      return p / 6;
    case Regime::Large:
    case Regime::Compact:
      break;
  }
  const long loss = static_cast<long>(std::ceil(11 * std::log2(static_cast<double>(p))));
  return p - std::max(loss, 100L);
}

namespace {

constexpr long kMinPrecision = 400;
constexpr int kRamificationLog2 = -31;

void require_precision(PrecBits p) {
  if (p.bits < kMinPrecision) throw PrecisionError("inversion needs at least 400 bits of precision");
}

void require_finite(const ApproxComplex& j) {
  if (!j.value.is_finite()) throw DomainError("j must be finite");
}

double log2_distance_to(const Complex& j, long value) {
  Complex d(j, j.prec() + 16);
  d -= value;
  return log2_abs(d);
}

bool beyond_large_threshold(const Complex& j) {
  Real threshold = exp(Real::pi(64) * 6L) + Real(2079L, 64);
  return Real(abs(Complex(j, 64)), 64) >= threshold;
}

ApproxComplex start_estimate(const ApproxComplex& j, long& start_bits) {
  for (int attempt = 0;; ++attempt) {
    try {
      return low_precision_inverse(j, start_bits);
    } catch (const ConvergenceError&) {
      if (attempt >= 3) throw;
      start_bits *= 2;
    }
  }
}

Regime classify_impl(const ApproxComplex& j, long p) {
  require_finite(j);
  const double lj = log2_abs(j.value);
  const double l1728 = log2_distance_to(j.value, 1728);
  if (lj <= -static_cast<double>(p) / 2) return Regime::AtRho;
  if (l1728 <= -static_cast<double>(p) / 3) return Regime::AtI;
  if (beyond_large_threshold(j.value)) return Regime::Large;
  // Taylor expansions at rho and i: |j| <= 2^-100 puts tau within 2^-36 of
  // rho, |j - 1728| <= 2^-90 puts it within 2^-52 of i
  if (lj <= -100) return Regime::NearRho;
  if (l1728 <= -90) return Regime::NearI;
  long bits = 128;
  Complex t0 = start_estimate(j, bits).value;
  const long w = t0.prec();
  const Real near = Real::two_pow(kRamificationLog2, 64);
  Complex rho = Complex::rho(w);
  if (Real(distance(t0, Complex::i(w)), 64) <= near) return Regime::NearI;
  if (Real(distance(t0, rho), 64) <= near || Real(distance(t0, rho - 1L), 64) <= near) return Regime::NearRho;
  if (t0.im() >= 3.0) return Regime::Large;
  return Regime::Compact;
}

InversionResult make_result(const Complex& tau, long p, Regime regime, PrecisionKind kind) {
  InversionResult res;
  const long q = guaranteed_bits(p, regime);
  res.achieved_bits = PrecBits(std::max(q, 53L));
  res.kind = kind;
  res.regime = regime;
  res.tau = reduce_to_F(ApproxComplex(tau), res.achieved_bits);
  res.tau.tau.claim = PrecisionClaim{kind, res.achieved_bits};
  return res;
}

InversionResult invert_impl(const ApproxComplex& j, long p, int depth);

InversionResult large_impl(const ApproxComplex& j, long p) {
  const long w = p + kGuardBits;
  Complex cur(j.value, w);
  if (cur.is_zero()) throw DomainError("large regime needs j != 0");
  const Real two_pi_64 = Real::pi(64).scaled(1);
  // 2^k tau is congruent to i log(j(2^k tau)) / (2 pi) modulo 1
  Complex est = log(Complex(cur, 64)).times_i() / two_pi_64;
  InversionResult partial;
  long k = 0;
  const double log2p = std::log2(static_cast<double>(p));
  while (log2_abs(cur) < static_cast<double>(p + 12)) {
    if (p - 3 * (k + 1) < 300) throw CertificationError("large regime precision would fall below 300 bits");
    KantorovichCertificate cert = large_j_certificate(cur);
    if (!cert.ok) throw CertificationError("Kantorovich condition fails for the doubling step");
    const long steps = static_cast<long>(std::ceil(2 * log2p + 2 * std::log2(log2_abs(cur))));
    Phi2Cubic cubic = specialize(ApproxComplex(cur), w);
    Complex start = sqr(cur) - cur * 1488L + 160512L;
    cur = newton_solve(cubic, ApproxComplex(start), steps, PrecBits(w)).value;
    ++k;
    partial.newton_steps.push_back(steps);
    Complex lk = log(Complex(cur, 64)).times_i() / two_pi_64;
    mpz_class n = (est.re().scaled(k) - lk.re()).round_to_integer();
    est = (lk + Real(n, 64)) / Real::two_pow(k, 64);
  }
  Complex lw = log(cur).times_i() / Real::pi(w).scaled(1);
  mpz_class n = (Real(est.re(), w + k).scaled(k) - lw.re()).round_to_integer();
  Complex tau = (lw + Real(n, w)) / Real::two_pow(k, w);
  InversionResult res = make_result(tau, p, Regime::Large, PrecisionKind::Absolute);
  res.doublings = k;
  res.newton_steps = std::move(partial.newton_steps);
  return res;
}

InversionResult compact_impl(const ApproxComplex& j, long p) {
  const long w_final = p + kGuardBits;
  const Complex jt(j.value, std::max(j.value.prec(), w_final));
  const Real tol = Real::two_pow(-p, 64) * max(Real(1L, 64), abs(Complex(jt, 64)));
  const long cap = static_cast<long>(std::ceil(4 * std::log2(static_cast<double>(std::max(p, 2L)))));
  long start_bits = 128;
  long total_iterations = 0;
  for (int restart = 0; restart <= 3; ++restart, start_bits *= 2) {
    long bits = start_bits;
    Complex t0;
    try {
      t0 = start_estimate(j, bits).value;
    } catch (const ConvergenceError&) {
      continue;
    }
    // the residual of the start is below its own precision; read it at 3x
    const long e0 = std::min(w_final, 3 * bits + kGuardBits);
    Complex f_prev = j_fast(ApproxComplex(Complex(t0, e0)), PrecBits(e0)).value - jt;
    Complex d0 = j_derivative(ApproxComplex(t0), 1, PrecBits(bits)).value;
    if (d0.is_zero()) continue;
    Complex z_prev(t0, w_final);
    Complex z = z_prev - Complex(f_prev, w_final) / Complex(d0, w_final);
    if ((z - z_prev).is_zero()) z += Complex(Real::two_pow(-bits, w_final), Real::two_pow(-bits, w_final));
    for (long it = 0; it < cap; ++it) {
      ++total_iterations;
      const double step = log2_abs(z - z_prev);
      const double b = std::min(static_cast<double>(p), std::isfinite(step) ? -step : static_cast<double>(p));
      const long e = std::min(w_final, std::max(bits, static_cast<long>(std::ceil(2.7 * std::max(b, 1.0))) + kGuardBits));
      Complex f = j_fast(ApproxComplex(Complex(z, e)), PrecBits(e)).value - jt;
      if (e == w_final && Real(abs(Complex(f, 64)), 64) <= tol) {
        InversionResult res = make_result(z, p, Regime::Compact, PrecisionKind::Absolute);
        res.secant_iterations = total_iterations;
        res.restarts = restart;
        return res;
      }
      Complex denom = f - f_prev;
      if (denom.is_zero()) break;
      Complex z_new = z - f * (z - z_prev) / denom;
      if (!z_new.is_finite() || z_new.im().sign() <= 0 || z_new.im() < 0.5) break;
      z_prev = std::move(z);
      f_prev = std::move(f);
      z = std::move(z_new);
    }
  }
  throw ConvergenceError("secant iteration did not converge; j is not within its claimed precision of a j-value");
}

InversionResult ramified_impl(const ApproxComplex& j, long p, Regime regime, int depth, int branch = 0) {
  if (depth > 0) throw CertificationError("ramified input reached inside a ramified inversion");
  const SpecialDerivatives& sd = special_derivatives();
  const long w = p + kGuardBits;
  Complex jw(j.value, std::max(j.value.prec(), w));
  Complex tau0;
  if (regime == Regime::NearI) {
    Complex d = Complex(jw - 1728L, w).scaled(1) / Complex(sd.j2_at_i, w);
    Complex delta = sqrt(d);
    if (branch % 2 != 0) delta = -delta;
    tau0 = Complex::i(w) + delta;
  } else {
    Complex d = Complex(jw, w) * 6L / Complex(sd.j3_at_rho, w);
    Complex delta = root(d, 3);
    const Complex omega = Complex::rho(w) - 1L;
    for (int k = 0; k < ((branch % 3) + 3) % 3; ++k) delta *= omega;
    tau0 = Complex::rho(w) + delta;
  }
  const long start_bits = std::max(128L, p / 3 + kGuardBits);
  Complex start = j_fast(ApproxComplex(Complex(tau0.scaled(1), start_bits)), PrecBits(start_bits)).value;
  Phi2Cubic cubic = specialize(ApproxComplex(jw), w);
  const long steps = static_cast<long>(std::ceil(2 * std::log2(static_cast<double>(p))));
  Complex image = newton_solve(cubic, ApproxComplex(start), steps, PrecBits(p)).value;
  const long inner_bits = std::max(64L, p / 3 - 11);
  InversionResult inner = invert_impl(ApproxComplex(Complex(image, inner_bits)), inner_bits, depth + 1);
  if (inner.regime != Regime::Compact && inner.regime != Regime::Large)
    throw CertificationError("image of a ramified input is again near a ramification point");
  const Complex& tp = inner.tau.tau.value;
  const long cw = tp.prec();
  Complex half(Real(0.5, cw));
  const Complex candidates[] = {tp.scaled(1), tp.scaled(-1), (tp + 1L).scaled(-1)};
  const Complex jt(jw, 128);
  int best = -1;
  Real best_err(64), second_err(64);
  std::vector<FundamentalPoint> reduced;
  for (int c = 0; c < 3; ++c) {
    reduced.push_back(reduce_to_F(ApproxComplex(candidates[c]), PrecBits(std::max(53L, inner_bits - 16))));
    Complex jc = j_qseries(ApproxComplex(Complex(reduced.back().tau.value, 128)), PrecBits(128)).value;
    Real err(abs(Complex(jc - jt, 64)), 64);
    if (best < 0 || err < best_err) {
      second_err = best < 0 ? err : best_err;
      best_err = err;
      best = c;
    } else if (err < second_err || c == 1) {
      second_err = min(second_err, err);
    }
  }
  const Real scale = max(Real(1L, 64), abs(Complex(jt, 64)));
  if (!(best_err <= Real::two_pow(-40, 64) * scale))
    throw ConvergenceError("no preimage candidate matches j after halving/doubling");
  InversionResult res = make_result(reduced[best].tau.value, p, regime, PrecisionKind::Relative);
  res.secant_iterations = inner.secant_iterations;
  res.restarts = inner.restarts;
  return res;
}

InversionResult invert_impl(const ApproxComplex& j, long p, int depth) {
  const Regime r = classify_impl(j, p);
  switch (r) {
    case Regime::AtRho:
      return make_result(Complex::rho(p), p, r, PrecisionKind::Relative);
    case Regime::AtI:
      return make_result(Complex::i(p), p, r, PrecisionKind::Relative);
    case Regime::Large:
      return large_impl(j, p);
    case Regime::NearI:
    case Regime::NearRho:
      return ramified_impl(j, p, r, depth);
    case Regime::Compact:
      return compact_impl(j, p);
  }
  throw DomainError("unclassified input");
}

}  // namespace

Regime classify(const ApproxComplex& j_tilde, PrecBits p) {
  require_precision(p);
  return classify_impl(j_tilde, p.bits);
}

InversionResult invert_large(const ApproxComplex& j_tilde, PrecBits p) {
  require_precision(p);
  require_finite(j_tilde);
  return large_impl(j_tilde, p.bits);
}

InversionResult invert_near_i(const ApproxComplex& j_tilde, PrecBits p, int branch) {
  require_precision(p);
  require_finite(j_tilde);
  if (log2_distance_to(j_tilde.value, 1728) <= -static_cast<double>(p.bits) / 3)
    throw DomainError("j is within 2^(-p/3) of 1728; the answer is i");
  return ramified_impl(j_tilde, p.bits, Regime::NearI, 0, branch);
}

InversionResult invert_near_rho(const ApproxComplex& j_tilde, PrecBits p, int branch) {
  require_precision(p);
  require_finite(j_tilde);
  if (log2_abs(j_tilde.value) <= -static_cast<double>(p.bits) / 2)
    throw DomainError("j is within 2^(-p/2) of 0; the answer is rho");
  return ramified_impl(j_tilde, p.bits, Regime::NearRho, 0, branch);
}

InversionResult invert_compact(const ApproxComplex& j_tilde, PrecBits p) {
  require_precision(p);
  require_finite(j_tilde);
  return compact_impl(j_tilde, p.bits);
}

InversionResult invert(const ApproxComplex& j_tilde, PrecBits p) {
  require_precision(p);
  return invert_impl(j_tilde, p.bits, 0);
}

}  // namespace jinv
