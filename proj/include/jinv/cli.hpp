#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jinv/precision.hpp"

namespace jinv::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kDomainError = 3,
  kCertificationError = 4,
  kInsufficientPrecision = 5,
};

// Environment variable consulted for the default --prec-bits.
inline constexpr const char* kPrecisionEnv = "JINV_PREC_BITS";
inline constexpr long kDefaultPrecision = 512;

// A number as typed: integers, p/q and integer-valued exponent forms
// ("1e300") are exact; other decimals carry ceil(digits * log2(10)) bits.
struct Literal {
  std::optional<mpq_class> exact;
  std::string text;
  long inferred_bits = 0;  // 0 when exact

  Real to_real(long prec) const;
};

// Throws std::invalid_argument on malformed text.
Literal parse_literal(std::string_view text);

// Runs one command; args exclude the program name. Writes one JSON line to
// `out`, diagnostics to `err`, and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jinv::cli
