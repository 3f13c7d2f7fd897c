#include "fejercert/approximation.hpp"

namespace fejercert {

double inverse_succ(const Nat& k) { return 1.0 / (to_double(k) + 1.0); }

}  // namespace fejercert
