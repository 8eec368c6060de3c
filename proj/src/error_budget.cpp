#include "jtheta/error_budget.hpp"

#include <cmath>
#include <string>

#include "jtheta/errors.hpp"

namespace jtheta {

ErrorBudget propagate_error(OpKind op, std::span<const Operand> operands,
                            long P) {
  const std::size_t arity =
      (op == OpKind::kAdd || op == OpKind::kMul || op == OpKind::kDiv) ? 2 : 1;
  if (operands.size() != arity) {
    throw PreconditionViolated("propagate_error: wrong operand count");
  }
  const double cap = std::exp2(static_cast<double>(P) / 2);
  for (const Operand& o : operands) {
    if (!(o.budget.k >= 0) || o.budget.k > cap) {
      throw PreconditionViolated("propagate_error: k exceeds 2^(P/2)");
    }
  }
  const double ulp = std::exp2(-static_cast<double>(P));
  auto away_from_zero = [&](const Operand& o) {
    if (o.magnitude < 2 * o.budget.k * ulp || o.magnitude <= 0) {
      throw PreconditionViolated(
          "propagate_error: operand too close to zero");
    }
  };

  const double k1 = operands[0].budget.k;
  const double z1 = operands[0].magnitude;
  switch (op) {
    case OpKind::kAdd:
      return {k1 + operands[1].budget.k};
    case OpKind::kMul: {
      const double k2 = operands[1].budget.k;
      const double z2 = operands[1].magnitude;
      return {2 + 2 * k1 * z2 + 2 * k2 * z1};
    }
    case OpKind::kSquare:
      return {2 + 4 * k1 * z1};
    case OpKind::kExp:
      return {z1 * (7 * k1 + 8.5) / 2};
    case OpKind::kDiv: {
      away_from_zero(operands[0]);
      away_from_zero(operands[1]);
      const double k2 = operands[1].budget.k;
      const double z2 = operands[1].magnitude;
      const double a = 6 * (2 + 2 * k1 * z2 + 2 * k2 * z1) / (z2 * z2);
      const double b = (2 * (4 + 8 * k2 * z2) * (2 * z1 * z2 + 1) + 2) /
                       (z2 * z2 * z2 * z2);
      return {a + b};
    }
    case OpKind::kSqrt:
      away_from_zero(operands[0]);
      return {k1 / std::sqrt(z1)};
  }
  return {};
}

}  // namespace jtheta
