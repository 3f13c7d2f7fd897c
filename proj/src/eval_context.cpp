#include "fejercert/eval_context.hpp"

namespace fejercert {

EvalContext::EvalContext(EvalLimits limits) : limits_(limits) {
  ceiling_ = Nat(1) << limits_.max_bits;
}

Nat EvalContext::clamp(Nat v) {
  if (v >= ceiling_) {
    saturated_ = true;
    return ceiling_;
  }
  return v;
}

bool EvalContext::step() {
  if (steps_ >= limits_.max_steps) {
    saturated_ = true;
    return false;
  }
  ++steps_;
  return true;
}

}  // namespace fejercert
