#include <gtest/gtest.h>

#include <array>
#include <random>

#include "jtheta/error_budget.hpp"
#include "jtheta/errors.hpp"
#include "jtheta/mpcx.hpp"

using namespace jtheta;

namespace {

ErrorBudget run(OpKind op, std::initializer_list<Operand> ops, long P = 100) {
  std::vector<Operand> v(ops);
  return propagate_error(op, v, P);
}

}  // namespace

TEST(PropagateError, Examples) {
  EXPECT_DOUBLE_EQ(run(OpKind::kAdd, {{0.5, {1}}, {0.7, {2}}}).k, 3);
  EXPECT_DOUBLE_EQ(run(OpKind::kSquare, {{1, {0}}}).k, 2);
  EXPECT_DOUBLE_EQ(run(OpKind::kExp, {{1, {0.5}}}).k, 6);
}

TEST(PropagateError, Clauses) {
  const double k1 = 3, k2 = 5, z1 = 0.75, z2 = 0.5;
  EXPECT_DOUBLE_EQ(run(OpKind::kMul, {{z1, {k1}}, {z2, {k2}}}).k,
                   2 + 2 * k1 * z2 + 2 * k2 * z1);
  EXPECT_DOUBLE_EQ(run(OpKind::kSquare, {{z1, {k1}}}).k, 2 + 4 * k1 * z1);
  EXPECT_DOUBLE_EQ(run(OpKind::kExp, {{2.5, {k1}}}).k, 2.5 * (7 * k1 + 8.5) / 2);
  EXPECT_DOUBLE_EQ(run(OpKind::kDiv, {{z1, {k1}}, {z2, {k2}}}).k,
                   6 * (2 + 2 * k1 * z2 + 2 * k2 * z1) / (z2 * z2) +
                       (2 * (4 + 8 * k2 * z2) * (2 * z1 * z2 + 1) + 2) /
                           (z2 * z2 * z2 * z2));
  EXPECT_DOUBLE_EQ(run(OpKind::kSqrt, {{0.25, {k1}}}).k, k1 / 0.5);
}

TEST(PropagateError, Preconditions) {
  EXPECT_THROW(run(OpKind::kAdd, {{1, {1}}}), PreconditionViolated);
  EXPECT_THROW(run(OpKind::kSquare, {{1, {1}}, {1, {1}}}), PreconditionViolated);
  // k > 2^(P/2)
  EXPECT_THROW(run(OpKind::kSquare, {{1, {std::exp2(51.0)}}}, 100),
               PreconditionViolated);
  EXPECT_NO_THROW(run(OpKind::kSquare, {{1, {std::exp2(49.0)}}}, 100));
  // |z| < 2 k 2^-P
  EXPECT_THROW(run(OpKind::kSqrt, {{std::exp2(-99.5), {1}}}, 100),
               PreconditionViolated);
  EXPECT_THROW(run(OpKind::kDiv, {{1, {1}}, {std::exp2(-99.5), {1}}}, 100),
               PreconditionViolated);
  EXPECT_NO_THROW(run(OpKind::kSqrt, {{std::exp2(-99.0), {1}}}, 100));
  EXPECT_THROW(run(OpKind::kSqrt, {{0, {0}}}, 100), PreconditionViolated);
}

TEST(PropagateError, Monotone) {
  // Feeding a larger k never gives a smaller k'.
  for (OpKind op : {OpKind::kMul, OpKind::kSquare, OpKind::kExp, OpKind::kDiv,
                    OpKind::kSqrt, OpKind::kAdd}) {
    double prev = -1;
    for (double k = 0; k < 64; k += 4) {
      ErrorBudget b = (op == OpKind::kMul || op == OpKind::kDiv || op == OpKind::kAdd)
                          ? run(op, {{0.8, {k}}, {0.6, {k}}})
                          : run(op, {{0.8, {k}}});
      ASSERT_GE(b.k, prev);
      ASSERT_GE(b.k, 0);
      prev = b.k;
    }
  }
}

// Perturb exact inputs by at most k 2^-P, run the operation, and compare
// with the exact result.  mul, square, exp and div are rounded at P bits as
// in the clauses; add and sqrt are exact operations on the perturbed values.
TEST(PropagateError, EmpiricalSoundness) {
  const long P = 96;
  const prec_t hi = 400;
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> mag(0.1, 1.0), ang(0, 2 * M_PI),
      kd(0, 40), unit(0, 1);
  auto point = [&](double r) {
    const double a = ang(g);
    return Complex(r * std::cos(a), r * std::sin(a), P);
  };
  auto perturb = [&](const Complex& z, double k) {
    // |delta| <= k 2^-P
    const double r = k * unit(g), a = ang(g);
    Complex d(r * std::cos(a), r * std::sin(a), hi);
    Complex out = with_prec(z, hi);
    return out + scale2(d, -P);
  };
  auto part_err = [&](const Complex& a, const Complex& b) {
    Complex d = with_prec(a, hi) - with_prec(b, hi);
    Real re(hi), im(hi);
    mpfr_abs(re.get(), d.re.get(), MPFR_RNDU);
    mpfr_abs(im.get(), d.im.get(), MPFR_RNDU);
    return std::pair<double, double>{std::ldexp(re.to_double(), P),
                                     std::ldexp(im.to_double(), P)};
  };
  auto mod_err = [&](const Complex& a, const Complex& b) {
    return std::ldexp(abs_d(with_prec(a, hi) - with_prec(b, hi)), P);
  };
  const std::array<OpKind, 6> ops{OpKind::kAdd, OpKind::kMul, OpKind::kSquare,
                                  OpKind::kExp, OpKind::kDiv, OpKind::kSqrt};
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const OpKind op = ops[static_cast<size_t>(i) % ops.size()];
    const double k1 = kd(g), k2 = kd(g);
    Complex t1 = point(mag(g)), t2 = point(mag(g));  // computed operands
    if (op == OpKind::kExp) {
      // keep |exp| moderate
      t1 = Complex(-unit(g), 4 * unit(g) - 2, P);
    }
    Complex z1 = perturb(t1, k1), z2 = perturb(t2, k2);  // exact operands
    const double m1 = abs_d(z1), m2 = abs_d(z2);
    std::vector<Operand> args{{m1, {k1}}, {m2, {k2}}};
    switch (op) {
      case OpKind::kAdd: {
        auto [er, ei] = part_err(z1 + z2, with_prec(t1, hi) + with_prec(t2, hi));
        const double k = propagate_error(op, args, P).k;
        ASSERT_LE(er, k);
        ASSERT_LE(ei, k);
        break;
      }
      case OpKind::kMul: {
        auto [er, ei] = part_err(z1 * z2, t1 * t2);
        const double k = propagate_error(op, args, P).k;
        ASSERT_LE(er, k);
        ASSERT_LE(ei, k);
        break;
      }
      case OpKind::kSquare: {
        args.resize(1);
        auto [er, ei] = part_err(square(z1), square(t1));
        const double k = propagate_error(op, args, P).k;
        ASSERT_LE(er, k);
        ASSERT_LE(ei, k);
        break;
      }
      case OpKind::kExp: {
        Complex e = exp_c(z1);
        std::vector<Operand> a{{abs_d(e), {k1}}};
        ASSERT_LE(mod_err(e, exp_c(t1)), propagate_error(op, a, P).k);
        break;
      }
      case OpKind::kDiv: {
        auto [er, ei] = part_err(z1 / z2, t1 / t2);
        const double k = propagate_error(op, args, P).k;
        ASSERT_LE(er, k);
        ASSERT_LE(ei, k);
        break;
      }
      case OpKind::kSqrt: {
        args.resize(1);
        ASSERT_LE(mod_err(sqrt_principal(z1), sqrt_principal(with_prec(t1, hi))),
                  propagate_error(op, args, P).k);
        break;
      }
    }
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}
