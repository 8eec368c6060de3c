#pragma once

// Reduction of (z, tau) to tau in the fundamental domain, |Re z| <= 1/2,
// 0 <= Im z <= Im(tau)/2, and lifting of theta values back.

#include <array>
#include <cstdint>

#include "jtheta/mpcx.hpp"
#include "jtheta/types.hpp"

namespace jtheta {

// Theta indices used by Sigma and the zeta exponents.
enum ThetaIndex { k00 = 0, k01 = 1, k10 = 2, k11 = 3 };

struct SL2Z {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  static SL2Z S() { return {0, -1, 1, 0}; }
  static SL2Z T(std::int64_t n) { return {1, n, 0, 1}; }
  // Overflow-checked product.
  SL2Z operator*(const SL2Z& o) const;
  bool operator==(const SL2Z&) const = default;
  // -gamma when c < 0, or c = 0 and d < 0.
  SL2Z normalized() const;
  // gamma . tau = (a tau + b)/(c tau + d)
  Complex act(const Complex& tau) const;
};

// sigma[i] = j means theta_i(., gamma tau) is a multiple of theta_j(., tau).
using Sigma = std::array<int, 3>;
Sigma sigma_of(const SL2Z& g);
// (second o first)(i) = second[first[i]]
Sigma compose(const Sigma& first, const Sigma& second);

struct TauReduction {
  Complex tau_red;
  SL2Z matrix;  // normalized, tau_red = matrix . tau
};
TauReduction reduce_tau(const Complex& tau);

struct ZReduction {
  Complex z_red;
  std::int64_t shift_a = 0, shift_b = 0;
  bool negated_z = false;
};
// z_red = +-(z - shift_a tau - shift_b).  tau should be reduced already.
ZReduction reduce_z(const Complex& z, const Complex& tau);

struct ReductionCertificate {
  SL2Z matrix;
  std::int64_t shift_a = 0, shift_b = 0;
  bool negated_z = false;
  Complex z, tau;          // original arguments
  Complex z_mid;           // z / (c tau + d)
  Complex z_red, tau_red;  // reduced arguments
};

// Computes the certificate at precision prec (>= the input precisions).
ReductionCertificate reduce(const Complex& z, const Complex& tau, prec_t prec);

// Bits by which values at the reduced point must exceed the target absolute
// precision so that the lift keeps it.
long lift_guard_bits(const ReductionCertificate& cert);

// log2 of the largest lift factor |theta(orig)| / |theta(reduced)|.
double lift_log2_factor(const ReductionCertificate& cert);

// Values at the original (z, tau) from values at (z_red, tau_red), which
// must include th10_z and th10_0 (and th11_z if wanted).  The eighth roots of
// unity are fixed by low-precision direct summation; their exponents k
// (zeta = exp(i pi k / 4)) go to zeta_out if given.
ThetaBundle lift_theta(const ThetaBundle& reduced,
                       const ReductionCertificate& cert,
                       const PrecisionPlan& plan,
                       std::array<int, 4>* zeta_out = nullptr);

}  // namespace jtheta
