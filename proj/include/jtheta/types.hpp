#pragma once

#include <optional>

#include "jtheta/mpcx.hpp"

namespace jtheta {

// Values of theta_{00,01,10} at (z, tau) and (0, tau), and theta_11(z, tau).
// achieved_bits is the absolute precision the producer certifies.
struct ThetaBundle {
  Complex th00_z, th01_z, th00_0, th01_0;
  std::optional<Complex> th10_z, th10_0, th11_z;
  long achieved_bits = 0;
  // Bits of the working precision consumed by error growth.
  long guard_bits_used = 0;
};

struct PrecisionPlan {
  long P = 0;          // requested absolute precision
  long B = 0;          // series bound (naive path), 0 otherwise
  long work_bits = 0;  // working precision
  long guard_bits = 0; // work_bits - P
};

}  // namespace jtheta
