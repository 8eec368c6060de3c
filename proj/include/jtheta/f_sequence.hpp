#pragma once

// Complex AGM with good sign choices, the F map on quadruples (x, y, z, t),
// and its homogenized limit F^infinity.

#include <utility>

#include "jtheta/mpcx.hpp"

namespace jtheta {

// su = sqrt_principal(u) and sv = +-sqrt_principal(v), signed so that
// Re(sv/su) >= 0, or Re(sv/su) = 0 and Im(sv/su) > 0.
std::pair<Complex, Complex> good_sqrt_pair(const Complex& u, const Complex& v);

struct AgmResult {
  Complex value;
  long iterations = 0;
};

// Limit of the optimal AGM sequence to absolute precision P (for values of
// moderate size).  Throws NonConvergence past log2(P) + 64 steps.
AgmResult agm_optimal(const Complex& a, const Complex& b, long P);

struct FState {
  Complex x, y, z, t;
  long n = 0;
};

// One step of F with good choices:
//   x' = ((sx+sy)(sz+st) + (sx-sy)(sz-st))/4
//   y' = ((sx+sy)(sz+st) - (sx-sy)(sz-st))/4
//   z' = ((sz+st)^2 + (sz-st)^2)/4
//   t' = ((sz+st)^2 - (sz-st)^2)/4
FState F_step(const FState& s);

struct FOptions {
  long c1 = 55;
  // Working precision; 0 selects P + c1 + 2 ceil(log2 P) + 16.
  long work_bits = 0;
};

struct FInfinityResult {
  Complex lambda, mu;
  // Number of F steps applied.
  long iterations = 0;
  long work_bits = 0;
};

long f_infinity_work_bits(long P, const FOptions& opts = {});

// (lambda, mu) = F^infinity(x, y, z, t) to absolute precision P.  Iterates
// F until |z_n - t_n| <= 2^(-P-n-c1), applies F once more, and returns
// ((x/z)^(2^(n+1)) z, z).
FInfinityResult f_infinity(const Complex& x, const Complex& y,
                           const Complex& z, const Complex& t, long P,
                           const FOptions& opts = {});

// Iteration cap shared by agm_optimal and f_infinity.
long iteration_cap(long P);

}  // namespace jtheta
