#pragma once

#include "fejercert/nat.hpp"

#include <cstdint>

namespace fejercert {

struct EvalLimits {
  // Recursion-internal evaluations (iterate steps, g-evaluations inside scans).
  std::uint64_t max_steps = 1'000'000;
  // Values wider than this saturate at 2^max_bits.
  std::uint32_t max_bits = 65536;
  // Domain of memoized max-scans for non-monotone moduli.
  std::uint64_t majorant_cap = 100'000;
};

// Budget for one certificate computation.
//
// Every functional evaluated here is nondecreasing in its arguments, so
// cutting a loop short or clamping a value yields a lower bound of the true
// result. saturated() records whether that happened; an unsaturated result is
// exact.
class EvalContext {
 public:
  explicit EvalContext(EvalLimits limits = {});

  const EvalLimits& limits() const { return limits_; }

  // Clamp to the ceiling, marking saturation when it bites.
  Nat clamp(Nat v);
  bool at_ceiling(const Nat& v) const { return v >= ceiling_; }
  const Nat& ceiling() const { return ceiling_; }

  // Consume one step. Returns false (and marks saturation) once the budget is gone.
  bool step();
  std::uint64_t steps_used() const { return steps_; }

  bool saturated() const { return saturated_; }
  void mark_saturated() { saturated_ = true; }

 private:
  EvalLimits limits_;
  Nat ceiling_;
  std::uint64_t steps_ = 0;
  bool saturated_ = false;
};

}  // namespace fejercert
