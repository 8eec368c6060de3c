#include "jtheta/argument_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "jtheta/errors.hpp"
#include "jtheta/naive_series.hpp"

namespace jtheta {
namespace {

constexpr double kLog2e = 1.4426950408889634;

std::int64_t checked_mul_add(std::int64_t x, std::int64_t y, std::int64_t u,
                             std::int64_t v) {
  std::int64_t p = 0, q = 0, r = 0;
  if (__builtin_mul_overflow(x, y, &p) || __builtin_mul_overflow(u, v, &q) ||
      __builtin_add_overflow(p, q, &r)) {
    throw DomainError("argument reduction: matrix entries overflow");
  }
  return r;
}

Real to_real(std::int64_t n, prec_t p) {
  Real r(p);
  mpfr_set_si(r.get(), static_cast<long>(n), MPFR_RNDN);
  return r;
}

std::int64_t floor_half_up(const Real& x) {
  Real t(x.prec() + 2);
  mpfr_add_d(t.get(), x.get(), 0.5, MPFR_RNDN);
  mpfr_floor(t.get(), t.get());
  if (!mpfr_fits_slong_p(t.get(), MPFR_RNDN)) {
    throw DomainError("argument reduction: shift does not fit in 64 bits");
  }
  return mpfr_get_si(t.get(), MPFR_RNDN);
}

// Characteristic (a, b) of theta_ab for an index 00, 01, 10, 11.
std::pair<int, int> characteristic(int index) {
  switch (index) {
    case k00: return {0, 0};
    case k01: return {0, 1};
    case k10: return {1, 0};
    default: return {1, 1};
  }
}

Complex eighth_root(int k, prec_t p) {
  k = ((k % 8) + 8) % 8;
  Complex r(p);
  if (k % 2 == 0) {
    static constexpr int re[4] = {1, 0, -1, 0};
    static constexpr int im[4] = {0, 1, 0, -1};
    mpfr_set_si(r.re.get(), re[k / 2], MPFR_RNDN);
    mpfr_set_si(r.im.get(), im[k / 2], MPFR_RNDN);
    return r;
  }
  Real h(p);
  mpfr_set_ui(h.get(), 1, MPFR_RNDN);
  mpfr_div_2ui(h.get(), h.get(), 1, MPFR_RNDN);
  mpfr_sqrt(h.get(), h.get(), MPFR_RNDN);
  const bool re_neg = (k == 3 || k == 5);
  const bool im_neg = (k == 5 || k == 7);
  mpfr_set(r.re.get(), h.get(), MPFR_RNDN);
  mpfr_set(r.im.get(), h.get(), MPFR_RNDN);
  if (re_neg) mpfr_neg(r.re.get(), r.re.get(), MPFR_RNDN);
  if (im_neg) mpfr_neg(r.im.get(), r.im.get(), MPFR_RNDN);
  return r;
}

// Exponent k with x = exp(i pi k/4) y, where y comes from a direct
// summation probe.  When |x| is below the target precision any k will do.
int pick_zeta(const Complex& x, long P,
              const std::function<DirectSum(long)>& probe) {
  const double lx = log2_abs(x);
  if (lx < -static_cast<double>(P) - 2) return 0;
  const long base = std::max(0L, static_cast<long>(std::ceil(-lx)));
  for (long extra : {32L, 64L, 128L}) {
    const long bits = base + extra;
    DirectSum y = probe(bits);
    const prec_t p = bits + 16;
    double d[8];
    for (int k = 0; k < 8; ++k) {
      Complex zy = eighth_root(k, p) * with_prec(y.value, p);
      d[k] = std::exp2(log2_abs_diff(with_prec(x, p), zy) - lx);
    }
    const double err = std::exp2(y.log2_err - lx);
    int best = 0;
    for (int k = 1; k < 8; ++k) {
      if (d[k] < d[best]) best = k;
    }
    double second = INFINITY;
    for (int k = 0; k < 8; ++k) {
      if (k != best) second = std::min(second, d[k]);
    }
    if (second - d[best] > 4 * err && d[best] < 0.25) return best;
  }
  throw PrecisionExhausted("lift_theta: sign probe cannot determine zeta");
}

}  // namespace

SL2Z SL2Z::operator*(const SL2Z& o) const {
  return {checked_mul_add(a, o.a, b, o.c), checked_mul_add(a, o.b, b, o.d),
          checked_mul_add(c, o.a, d, o.c), checked_mul_add(c, o.b, d, o.d)};
}

SL2Z SL2Z::normalized() const {
  if (c < 0 || (c == 0 && d < 0)) return {-a, -b, -c, -d};
  return *this;
}

Complex SL2Z::act(const Complex& tau) const {
  const prec_t p = tau.prec();
  Complex num(p), den(p);
  mul_real(num, tau, to_real(a, p));
  mpfr_add_si(num.re.get(), num.re.get(), static_cast<long>(b), MPFR_RNDN);
  mul_real(den, tau, to_real(c, p));
  mpfr_add_si(den.re.get(), den.re.get(), static_cast<long>(d), MPFR_RNDN);
  return num / den;
}

Sigma sigma_of(const SL2Z& g) {
  const int a = static_cast<int>(g.a & 1), b = static_cast<int>(g.b & 1);
  const int c = static_cast<int>(g.c & 1), d = static_cast<int>(g.d & 1);
  const int key = a << 3 | b << 2 | c << 1 | d;
  switch (key) {
    case 0b1001: return {k00, k01, k10};
    case 0b1101: return {k01, k00, k10};
    case 0b1011: return {k10, k01, k00};
    case 0b0110: return {k00, k10, k01};
    case 0b1110: return {k10, k00, k01};
    case 0b0111: return {k01, k10, k00};
    default:
      throw DomainError("sigma_of: matrix is not in SL2(Z)");
  }
}

Sigma compose(const Sigma& first, const Sigma& second) {
  return {second[first[0]], second[first[1]], second[first[2]]};
}

TauReduction reduce_tau(const Complex& tau) {
  if (tau.im.sign() <= 0) throw DomainError("Im(tau) must be positive");
  const prec_t p = tau.prec();
  Complex t = tau;
  SL2Z m;
  Real n2(p);
  Complex one(1.0, 0.0, p);
  for (int iter = 0;; ++iter) {
    if (iter > 100000) {
      throw NonConvergence("reduce_tau: too many reduction steps");
    }
    const std::int64_t n = floor_half_up(t.re);
    if (n != 0) {
      mpfr_sub_si(t.re.get(), t.re.get(), static_cast<long>(n), MPFR_RNDN);
      m = SL2Z::T(-n) * m;
    }
    mpfr_fmma(n2.get(), t.re.get(), t.re.get(), t.im.get(), t.im.get(),
              MPFR_RNDN);
    if (mpfr_cmp_ui(n2.get(), 1) >= 0) break;
    t = -(one / t);
    m = SL2Z::S() * m;
  }
  // On the unit circle prefer Re <= 0.
  mpfr_fmma(n2.get(), t.re.get(), t.re.get(), t.im.get(), t.im.get(),
            MPFR_RNDN);
  if (mpfr_cmp_ui(n2.get(), 1) == 0 && t.re.sign() > 0) {
    m = SL2Z::S() * m;
  }
  m = m.normalized();
  return {m.act(tau), m};
}

ZReduction reduce_z(const Complex& z, const Complex& tau) {
  const prec_t p = std::max(z.prec(), tau.prec());
  Real ratio(p);
  mpfr_div(ratio.get(), z.im.get(), tau.im.get(), MPFR_RNDN);
  ZReduction r;
  r.shift_a = floor_half_up(ratio);
  Complex w(p);
  mul_real(w, tau, to_real(r.shift_a, p));
  sub(w, z, w);
  r.shift_b = floor_half_up(w.re);
  mpfr_sub_si(w.re.get(), w.re.get(), static_cast<long>(r.shift_b), MPFR_RNDN);
  if (w.im.sign() < 0) {
    w = -w;
    r.negated_z = true;
  }
  r.z_red = std::move(w);
  return r;
}

ReductionCertificate reduce(const Complex& z, const Complex& tau,
                            prec_t prec) {
  prec = std::max({prec, z.prec(), tau.prec()});
  Complex zp = with_prec(z, prec), tp = with_prec(tau, prec);
  TauReduction tr = reduce_tau(tp);
  Complex ctd(prec);
  mul_real(ctd, tp, to_real(tr.matrix.c, prec));
  mpfr_add_si(ctd.re.get(), ctd.re.get(), static_cast<long>(tr.matrix.d),
              MPFR_RNDN);
  Complex z_mid = zp / ctd;
  ZReduction zr = reduce_z(z_mid, tr.tau_red);
  ReductionCertificate cert{tr.matrix, zr.shift_a,   zr.shift_b,
                            zr.negated_z, std::move(zp), std::move(tp),
                            std::move(z_mid), std::move(zr.z_red),
                            std::move(tr.tau_red)};
  return cert;
}

double lift_log2_factor(const ReductionCertificate& cert) {
  const double a = static_cast<double>(cert.shift_a);
  const double eps = cert.negated_z ? -1.0 : 1.0;
  const double c = static_cast<double>(cert.matrix.c);
  const double d = static_cast<double>(cert.matrix.d);
  const double tr = cert.tau.re.to_double(), ti = cert.tau.im.to_double();
  // c tau + d and z^2/(c tau + d) in doubles.
  const double wr = c * tr + d, wi = c * ti;
  const double zr = cert.z.re.to_double(), zi = cert.z.im.to_double();
  const double z2r = zr * zr - zi * zi, z2i = 2 * zr * zi;
  const double den = wr * wr + wi * wi;
  const double im_q = (z2i * wr - z2r * wi) / den;
  const double log2_inv_r = -0.25 * std::log2(den);
  const double log2_e = M_PI * kLog2e *
                        (a * a * cert.tau_red.im.to_double() +
                         2 * a * eps * cert.z_red.im.to_double());
  const double log2_inv_f = M_PI * kLog2e * c * im_q;
  return std::max(log2_e + log2_inv_f + log2_inv_r, log2_inv_r);
}

long lift_guard_bits(const ReductionCertificate& cert) {
  return std::max(0L, static_cast<long>(std::ceil(lift_log2_factor(cert)))) +
         4;
}

ThetaBundle lift_theta(const ThetaBundle& reduced,
                       const ReductionCertificate& cert,
                       const PrecisionPlan& plan,
                       std::array<int, 4>* zeta_out) {
  if (!reduced.th10_z || !reduced.th10_0) {
    throw PreconditionViolated("lift_theta needs theta_10 values");
  }
  const SL2Z& g = cert.matrix;
  const bool identity = g == SL2Z{} && cert.shift_a == 0 &&
                        cert.shift_b == 0 && !cert.negated_z;
  if (identity) {
    if (zeta_out) *zeta_out = {0, 0, 0, 0};
    return reduced;
  }

  const double lf = lift_log2_factor(cert);
  prec_t in_prec = reduced.th00_z.prec();
  // Exponent arguments may be large; keep their absolute accuracy.
  const double arg_bits = std::log2(
      1 + std::fabs(lf) + std::fabs(static_cast<double>(cert.shift_a)) *
                              (1 + std::fabs(cert.tau_red.im.to_double())));
  const prec_t w = in_prec + std::max(0L, static_cast<long>(std::ceil(lf))) +
                   static_cast<long>(std::ceil(arg_bits)) + 16;
  Real pi = pi_const(w);

  // Quasi-periodicity at the reduced tau: z' = eps z_red + a tau' + b.
  const long a = static_cast<long>(cert.shift_a);
  const long b = static_cast<long>(cert.shift_b);
  Complex tau_r = with_prec(cert.tau_red, w);
  Complex zr = with_prec(cert.z_red, w);
  if (cert.negated_z) zr = -zr;
  Complex arg(w);
  // -i pi (a^2 tau' + 2 a eps z_red)
  {
    Complex s(w), t(w);
    mul_real(s, tau_r, Real(a * a, w));
    mul_real(t, zr, Real(2 * a, w));
    add(s, s, t);
    mul_real(s, s, pi);
    arg = -mul_i(s);
  }
  Complex e = exp_c(arg);
  const int sign[4] = {1, (a & 1) ? -1 : 1, (b & 1) ? -1 : 1,
                       ((a + b) & 1) ? -1 : 1};
  const int parity[4] = {1, 1, 1, cert.negated_z ? -1 : 1};

  // Modular factor at the original arguments.
  Complex tw = with_prec(cert.tau, w), zw = with_prec(cert.z, w);
  Complex ctd(w);
  mul_real(ctd, tw, Real(static_cast<long>(g.c), w));
  mpfr_add_si(ctd.re.get(), ctd.re.get(), static_cast<long>(g.d), MPFR_RNDN);
  Complex root = sqrt_principal(ctd);
  Complex fz(w);
  {
    Complex q = square(zw) / ctd;
    mul_real(q, q, Real(static_cast<long>(g.c), w));
    mul_real(q, q, pi);
    fz = exp_c(mul_i(q));
  }
  Complex rf = root * fz;

  const Complex* at_z[4] = {&reduced.th00_z, &reduced.th01_z,
                            &*reduced.th10_z,
                            reduced.th11_z ? &*reduced.th11_z : nullptr};
  const Complex* at_0[3] = {&reduced.th00_0, &reduced.th01_0,
                            &*reduced.th10_0};
  const Sigma sigma = sigma_of(g);
  const long P = plan.P;
  std::array<int, 4> zeta{0, 0, 0, 0};
  Complex out_z[4] = {Complex(w), Complex(w), Complex(w), Complex(w)};
  Complex out_0[3] = {Complex(w), Complex(w), Complex(w)};
  const Complex orig_tau = cert.tau;
  const Complex orig_z = cert.z;
  for (int i = 0; i < 4; ++i) {
    if (at_z[i] == nullptr) continue;
    Complex v = e * with_prec(*at_z[i], w);
    if (sign[i] * parity[i] < 0) v = -v;
    Complex xz = v / rf;
    const int target = i < 3 ? sigma[i] : k11;
    if (i < 3) {
      Complex x0 = with_prec(*at_0[i], w) / root;
      auto [ca, cb] = characteristic(target);
      zeta[i] = pick_zeta(x0, P, [&](long bits) {
        return theta_direct(ca, cb, Complex(0.0, 0.0, 64), orig_tau, bits);
      });
      Complex inv = eighth_root(-zeta[i], w);
      out_0[target] = x0 * inv;
    } else {
      zeta[i] = pick_zeta(xz, P, [&](long bits) {
        return theta_direct(1, 1, orig_z, orig_tau, bits);
      });
    }
    out_z[target] = xz * eighth_root(-zeta[i], w);
  }

  ThetaBundle out{std::move(out_z[k00]), std::move(out_z[k01]),
                  std::move(out_0[k00]), std::move(out_0[k01])};
  out.th10_z = std::move(out_z[k10]);
  out.th10_0 = std::move(out_0[k10]);
  if (at_z[3] != nullptr) out.th11_z = std::move(out_z[k11]);
  const long lost = std::max(0L, static_cast<long>(std::ceil(lf))) + 2;
  out.achieved_bits = reduced.achieved_bits - lost;
  out.guard_bits_used = reduced.guard_bits_used + lost;
  if (zeta_out) *zeta_out = zeta;
  return out;
}

}  // namespace jtheta
