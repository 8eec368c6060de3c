#pragma once

// Quasi-linear evaluation: the map frak_F from theta quotients back to
// (z, tau), its Newton inversion, and the uniform algorithm built on tau-
// and z-duplication.

#include <optional>
#include <utility>
#include <vector>

#include "jtheta/f_sequence.hpp"
#include "jtheta/mpcx.hpp"
#include "jtheta/types.hpp"

namespace jtheta {

// Lower bound on Im(tau) (and on Im(-1/tau)) for which the good sign
// choices are known to match theta values.
inline constexpr double kGoodChoiceMinImTau = 0.345;

// Left-hand side of the inequality that makes the good choices match theta
// values, as a function of |q| = exp(-pi Im tau); it must be <= 1.
double good_choice_ratio(double im_tau);
// |q|^(1/2) + |q| + ... bound that keeps Re(theta_00) > 0; needs < 1.
double real_part_bound(double im_tau);

struct QuotientPair {
  Complex s;  // theta_01^2(z)/theta_00^2(z)
  Complex t;  // theta_01^2(0)/theta_00^2(0)
};

struct FrakResult {
  Complex z;  // z, or z^2 for frak_F_squared
  Complex tau;
  long f_iterations = 0;  // largest F^infinity iteration count
};

// (z, tau) from the quotients (s, t); the z root has Im > 0 (Re >= 0 on
// ties).  Works at the F^infinity precision for target P.
FrakResult frak_F(const Complex& s, const Complex& t, long P,
                  const FOptions& fopts = {});
// Same with z^2 in place of z, which avoids the sign choice.
FrakResult frak_F_squared(const Complex& s, const Complex& t, long P,
                          const FOptions& fopts = {});

struct NewtonOptions {
  long P0 = 256;
  long delta = 4;
  // A step aiming at g accurate bits works at g + G ceil(log2 g) + H bits.
  long G = 2;
  long H = 16;
  FOptions f;
};

struct NewtonStepInfo {
  long goal_bits = 0;
  long work_bits = 0;
  double correction_log2 = 0;  // log2 of the larger correction |ds|, |dt|
  double bits_lost = 0;        // 2k - k' for this step, 0 if not measurable
};

struct NewtonReport {
  long seed_bits = 0;
  std::vector<NewtonStepInfo> steps;
  double quotient_bits = 0;  // estimated accuracy of the final quotients
  long f_iterations_max = 0;
};

long newton_work_bits(long goal, const NewtonOptions& opts);

// One Newton step on (s, t) -> (z^2, tau) aiming at goal_bits accuracy.
QuotientPair newton_step(const QuotientPair& st, const Complex& z,
                         const Complex& tau, long goal_bits,
                         const NewtonOptions& opts = {},
                         NewtonStepInfo* info = nullptr);

// Quotients to absolute precision P, seeded by the series at P0 bits.
QuotientPair newton_quotients(const Complex& z, const Complex& tau, long P,
                              const NewtonOptions& opts = {},
                              NewtonReport* report = nullptr);

struct ThetaSquares {
  Complex th00_z, th01_z, th00_0, th01_0;
};

// theta_00^2, theta_01^2 at z and 0: Newton quotients followed by
// F^infinity(1, s, 1, t).
ThetaSquares newton_squares(const Complex& z, const Complex& tau, long P,
                            const NewtonOptions& opts = {},
                            NewtonReport* report = nullptr);

struct DoubledSquares {
  Complex th00_z, th01_z, th10_z, th00_0, th01_0, th10_0;
};

// Squares at (z, 2 tau) from squares at (z, tau); roots taken with good
// choices.
DoubledSquares tau_duplicate(const ThetaSquares& sq);

struct ZDoubled {
  Complex th00, th01;
  std::optional<Complex> th10;
};

// theta_{00,01}(z) from squares at z/2 and constants; theta_10(z) too when
// c10 is given.  Throws DomainError if a constant is implausibly small.
ZDoubled z_duplicate(const Complex& sq00_half, const Complex& sq01_half,
                     const Complex& sq10_half, const Complex& c00,
                     const Complex& c01, const Complex* c10 = nullptr);

struct UniformOptions {
  NewtonOptions newton;
  // Working precision; 0 selects 2P.
  long work_bits = 0;
  bool with_theta11 = false;
  // Use the series whenever P <= ratio * Im(tau).
  double naive_threshold_ratio = 25;
};

struct UniformReport {
  bool used_naive = false;
  long s_split = 0;
  long work_bits = 0;
  NewtonReport newton;
};

// theta_{00,01,10} at (z, tau) and (0, tau) to absolute precision P for
// tau in the fundamental domain and |Re z| <= 1/2, 0 <= Im z <= Im(tau)/2.
ThetaBundle theta_uniform(const Complex& z, const Complex& tau, long P,
                          const UniformOptions& opts = {},
                          UniformReport* report = nullptr);

// theta_11(z) from a bundle via
//   theta_11^2 = (theta_01^2(z) theta_10^2(0) - theta_10^2(z) theta_01^2(0))
//                / theta_00^2(0),
// with the sign taken from a low-precision direct summation.
Complex theta11_fast(const ThetaBundle& bundle, const Complex& z,
                     const Complex& tau);

}  // namespace jtheta
