#pragma once

#include <string_view>
#include <vector>

#include "jinv/fundamental_domain.hpp"
#include "jinv/precision.hpp"

namespace jinv {

enum class Regime { AtRho, AtI, Large, NearI, NearRho, Compact };

std::string_view to_string(Regime r);

struct InversionResult {
  FundamentalPoint tau;
  PrecBits achieved_bits{53};
  PrecisionKind kind = PrecisionKind::Relative;
  Regime regime = Regime::Compact;
  long doublings = 0;
  // Newton steps spent on each doubling (Large regime only)
  std::vector<long> newton_steps;
  // secant iterations and restarts (Compact regime, or the inner inversion
  // of a ramified input)
  long secant_iterations = 0;
  long restarts = 0;
};

// Bits guaranteed for the given regime: p/6 at or near i and rho,
// p - max(11 log2 p, 100) elsewhere.
long guaranteed_bits(long p, Regime r);

Regime classify(const ApproxComplex& j_tilde, PrecBits p);

InversionResult invert_large(const ApproxComplex& j_tilde, PrecBits p);
// `branch` picks the square root (mod 2) or cube root (mod 3) of the start.
InversionResult invert_near_i(const ApproxComplex& j_tilde, PrecBits p, int branch = 0);
InversionResult invert_near_rho(const ApproxComplex& j_tilde, PrecBits p, int branch = 0);
InversionResult invert_compact(const ApproxComplex& j_tilde, PrecBits p);

// Full inversion: p >= 400 and j_tilde within regulated 2^-p of some j(tau).
InversionResult invert(const ApproxComplex& j_tilde, PrecBits p);

}  // namespace jinv
