#pragma once

// Absolute error bookkeeping: a budget k means |z - z~| <= k 2^-P.

#include <span>

namespace jtheta {

struct ErrorBudget {
  double k = 0.0;
};

enum class OpKind { kAdd, kMul, kSquare, kExp, kDiv, kSqrt };

struct Operand {
  // |z_j|.  For kExp this is |exp(z_1)| instead.
  double magnitude = 0.0;
  ErrorBudget budget;
};

// Budget of the result of op applied to operands carried at absolute
// precision P.  kAdd, kMul and kDiv take two operands, the others one.
// Throws PreconditionViolated if some k_j > 2^(P/2), or if a divisor or
// radicand is not bounded away from zero by 2 k_j 2^-P.
ErrorBudget propagate_error(OpKind op, std::span<const Operand> operands,
                            long P);

}  // namespace jtheta
