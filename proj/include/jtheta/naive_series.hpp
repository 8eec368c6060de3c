#pragma once

// Partial sums of the theta series, using three-term recurrences so that
// no large exponential exp(-2 i pi n z) is ever formed.

#include <utility>

#include "jtheta/mpcx.hpp"
#include "jtheta/types.hpp"

namespace jtheta {

// Smallest Im(tau) accepted by the series code.
inline constexpr double kNaiveMinImTau = 0.35;

struct NaiveOptions {
  // Re-derive q^n, q^(n^2) and v_n by exponentiation at each step and
  // compare with the recurrence (slow).
  bool check_invariants = false;
  // Terms summed beyond the bound B.
  long extra_terms = 0;
};

// B = ceil(sqrt((P + 2) / (pi Im(tau) log2 e))) + 1.
long series_bound(long P, const Complex& tau);
long series_bound(long P, double im_tau);

// P + ceil(log2 B) + 7.
PrecisionPlan naive_plan(long P, const Complex& tau);

// theta_00 and theta_01 at z and at 0; th10/th11 are left empty.
// Requires Im(tau) >= 0.35 and |Im z| <= Im(tau)/2.
ThetaBundle theta_naive(const Complex& z, const Complex& tau, long P,
                        const NaiveOptions& opts = {});

// (theta_10(z, tau), theta_10(0, tau)).
std::pair<Complex, Complex> theta10_naive(const Complex& z, const Complex& tau,
                                          long P);

Complex theta11_naive(const Complex& z, const Complex& tau, long P);

// All six values plus theta_11(z).
ThetaBundle theta_naive_full(const Complex& z, const Complex& tau, long P);

// Term-by-term summation of sum_n exp(i pi tau (n + a/2)^2
// + 2 i pi (n + a/2)(z + b/2)) for a, b in {0, 1}, for arbitrary z and any
// tau in the upper half plane, to absolute precision about bits.  Meant
// for low-precision probes.
struct DirectSum {
  Complex value;
  // log2 of an upper bound on the absolute error.
  double log2_err = 0;
  // log2 of the largest term magnitude.
  double log2_max_term = 0;
};
DirectSum theta_direct(int a, int b, const Complex& z, const Complex& tau,
                       long bits);

}  // namespace jtheta
