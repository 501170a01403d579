#pragma once

#include <cstdint>
#include <map>

namespace jinv {

enum class OpKind { Mul, Div, Sqrt, Transcendental };

// Operation counts for one call tree. Cost is measured in units of
// M(p) = p*log2(p): a multiplication at p bits costs M(p), division and
// square root 2*M(p), exp/log/trig log2(p)*M(p).
struct OpTally {
  std::uint64_t muls = 0;
  std::uint64_t divs = 0;
  std::uint64_t sqrts = 0;
  std::uint64_t transcendentals = 0;
  double cost = 0.0;
  std::map<long, std::uint64_t> mul_equivalents_by_prec;

  void record(OpKind kind, long prec);
};

// Routes every arithmetic operation on this thread into `tally` for the
// lifetime of the scope. Scopes nest; the innermost one wins.
class TelemetryScope {
 public:
  explicit TelemetryScope(OpTally& tally);
  ~TelemetryScope();
  TelemetryScope(const TelemetryScope&) = delete;
  TelemetryScope& operator=(const TelemetryScope&) = delete;

 private:
  OpTally* previous_;
};

namespace telemetry {
OpTally* active();
inline void record(OpKind kind, long prec) {
  if (OpTally* t = active()) t->record(kind, prec);
}
}  // namespace telemetry

}  // namespace jinv
