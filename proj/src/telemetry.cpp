#include "jinv/telemetry.hpp"

#include <cmath>

namespace jinv {

namespace {
thread_local OpTally* g_active = nullptr;
}

void OpTally::record(OpKind kind, long prec) {
  const double p = static_cast<double>(prec < 2 ? 2 : prec);
  const double m = p * std::log2(p);
  double weight = 1.0;
  switch (kind) {
    case OpKind::Mul:
      ++muls;
      break;
    case OpKind::Div:
      ++divs;
      weight = 2.0;
      break;
    case OpKind::Sqrt:
      ++sqrts;
      weight = 2.0;
      break;
    case OpKind::Transcendental:
      ++transcendentals;
      weight = std::log2(p);
      break;
  }
  cost += weight * m;
  mul_equivalents_by_prec[prec] += static_cast<std::uint64_t>(std::ceil(weight));
}

TelemetryScope::TelemetryScope(OpTally& tally) : previous_(g_active) { g_active = &tally; }
TelemetryScope::~TelemetryScope() { g_active = previous_; }

namespace telemetry {
OpTally* active() { return g_active; }
}  // namespace telemetry

}  // namespace jinv
