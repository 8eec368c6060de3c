#include "jtheta/fast_theta.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "jtheta/errors.hpp"
#include "jtheta/naive_series.hpp"

namespace jtheta {
namespace {

constexpr double kLog2e = 1.4426950408889634;

long ceil_log2(long n) {
  long r = 0;
  while ((1L << r) < n) ++r;
  return r;
}

// log2(2^a + 2^b)
double lse(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1 + std::exp2(lo - hi));
}

// A value with a first-order bound on its absolute error (log2).
struct TV {
  Complex v;
  double err = kNegInf;
};

double mag(const TV& a) { return log2_abs(a.v); }

void rounding(TV& r) {
  r.err = lse(r.err, mag(r) - static_cast<double>(r.v.prec()) + 1);
}

TV tv_add(const TV& a, const TV& b) {
  TV r{a.v + b.v, lse(a.err, b.err)};
  rounding(r);
  return r;
}

TV tv_sub(const TV& a, const TV& b) {
  TV r{a.v - b.v, lse(a.err, b.err)};
  rounding(r);
  return r;
}

TV tv_mul(const TV& a, const TV& b) {
  TV r{a.v * b.v, lse(a.err + mag(b), b.err + mag(a))};
  rounding(r);
  return r;
}

TV tv_sqr(const TV& a) {
  TV r{square(a.v), a.err + 1 + mag(a)};
  rounding(r);
  return r;
}

TV tv_div(const TV& a, const TV& b) {
  const double mb = mag(b);
  TV r{a.v / b.v, lse(a.err - mb, b.err + mag(a) - 2 * mb)};
  rounding(r);
  return r;
}

TV tv_half(const TV& a) { return {scale2(a.v, -1), a.err - 1}; }

TV tv_sqrt(const TV& a) {
  TV r{sqrt_principal(a.v), a.err - 1 - mag(a) / 2};
  rounding(r);
  return r;
}

// Roots (su, sv) with good choices, carrying errors.
std::pair<TV, TV> tv_good_sqrt_pair(const TV& u, const TV& v) {
  auto [su, sv] = good_sqrt_pair(u.v, v.v);
  TV a{std::move(su), u.err - 1 - mag(u) / 2};
  TV b{std::move(sv), v.err - 1 - mag(v) / 2};
  rounding(a);
  rounding(b);
  return {std::move(a), std::move(b)};
}

TV tv_pow4(const TV& sq) { return tv_sqr(sq); }

void check_constant(const Complex& c, double floor_log2, const char* what) {
  if (log2_abs(c) < floor_log2) {
    throw DomainError(std::string("z_duplicate: ") + what +
                      " is below its theoretical lower bound");
  }
}

// Expected size of theta_10(0, tau) is about 2 |q|^(1/4).
double theta10_const_floor(double im_tau) {
  return -M_PI * kLog2e * im_tau / 4 - 3;
}

}  // namespace

double good_choice_ratio(double im_tau) {
  const double q = std::exp(-M_PI * im_tau);
  const double num = 2 * std::sqrt(q) + 2 * q +
                     2 * std::pow(q, 9) / (1 - std::pow(q, 16)) +
                     2 * std::pow(q, 7.5) / (1 - std::pow(q, 19));
  const double den = 2 - (2 * std::pow(q, 3) + 2 * std::pow(q, 4) +
                          2 * std::pow(q, 16) / (1 - std::pow(q, 20)) +
                          2 * std::pow(q, 14) / (1 - std::pow(q, 19)));
  return num / den;
}

double real_part_bound(double im_tau) {
  const double q = std::exp(-M_PI * im_tau);
  return std::sqrt(q) + q + std::pow(q, 3) + std::pow(q, 4) +
         std::pow(q, 3.5) + std::pow(q, 9) +
         2 * std::pow(q, 14) / (1 - q * q);
}

FrakResult frak_F_squared(const Complex& s, const Complex& t, long P,
                          const FOptions& fopts) {
  const prec_t w = f_infinity_work_bits(P, fopts);
  Complex sw = with_prec(s, w), tw = with_prec(t, w);
  Complex one(1.0, 0.0, w);
  Complex b2 = one - square(tw);
  if (b2.is_zero()) throw DomainError("frak_F: 1 - t^2 = 0");
  Complex b = sqrt_principal(b2);
  Complex a = (one - sw * tw) / b;
  FInfinityResult xy = f_infinity(one, a, one, b, P, fopts);
  FInfinityResult q12 = f_infinity(one, sw, one, tw, P, fopts);
  const Complex& x = xy.lambda;
  const Complex& y = xy.mu;
  const Complex& q1 = q12.lambda;
  const Complex& q2 = q12.mu;
  Complex q2_over_y = q2 / y;
  Complex l = log_c((q2 * x) / (q1 * y));
  Real two_pi = pi_const(w);
  mpfr_mul_2ui(two_pi.get(), two_pi.get(), 1, MPFR_RNDN);
  mpfr_neg(two_pi.get(), two_pi.get(), MPFR_RNDN);
  Complex z2 = l * q2_over_y;
  mpfr_div(z2.re.get(), z2.re.get(), two_pi.get(), MPFR_RNDN);
  mpfr_div(z2.im.get(), z2.im.get(), two_pi.get(), MPFR_RNDN);
  return {std::move(z2), mul_i(q2_over_y),
          std::max(xy.iterations, q12.iterations)};
}

FrakResult frak_F(const Complex& s, const Complex& t, long P,
                  const FOptions& fopts) {
  FrakResult r = frak_F_squared(s, t, P, fopts);
  Complex z = sqrt_principal(r.z);
  // sqrt_principal has Re >= 0; flip into Im > 0 unless Im = 0.
  if (z.im.sign() < 0) z = -z;
  r.z = std::move(z);
  return r;
}

long newton_work_bits(long goal, const NewtonOptions& opts) {
  return goal + opts.G * ceil_log2(std::max(goal, 2L)) + opts.H;
}

QuotientPair newton_step(const QuotientPair& st, const Complex& z,
                         const Complex& tau, long goal_bits,
                         const NewtonOptions& opts, NewtonStepInfo* info) {
  const long p = newton_work_bits(goal_bits, opts);
  const prec_t w = f_infinity_work_bits(p, opts.f);
  Complex s = with_prec(st.s, w), t = with_prec(st.t, w);
  Complex zw = with_prec(z, w);
  Complex target_z2 = square(zw);
  Complex target_tau = with_prec(tau, w);

  FrakResult g0 = frak_F_squared(s, t, p, opts.f);
  // Forward differences with h = 2^(-p/2).
  Complex h(w);
  mpfr_set_ui_2exp(h.re.get(), 1, -(p / 2), MPFR_RNDN);
  FrakResult gs = frak_F_squared(s + h, t, p, opts.f);
  FrakResult gt = frak_F_squared(s, t + h, p, opts.f);
  Complex a11 = scale2(gs.z - g0.z, p / 2);
  Complex a12 = scale2(gt.z - g0.z, p / 2);
  Complex a22 = scale2(gt.tau - g0.tau, p / 2);
  if (a11.is_zero() || a22.is_zero()) {
    throw NonConvergence("newton_step: singular Jacobian");
  }
  Complex r1 = g0.z - target_z2;
  Complex r2 = g0.tau - target_tau;
  Complex dt = r2 / a22;
  Complex ds = (r1 - a12 * dt) / a11;
  if (info) {
    info->goal_bits = goal_bits;
    info->work_bits = p;
    info->correction_log2 = std::max(log2_abs(ds), log2_abs(dt));
  }
  return {s - ds, t - dt};
}

QuotientPair newton_quotients(const Complex& z, const Complex& tau, long P,
                              const NewtonOptions& opts,
                              NewtonReport* report) {
  const long P0 = std::max(opts.P0, 16L);
  const long seed_prec = std::min(P, P0);
  ThetaBundle seed = theta_naive(z, tau, seed_prec);
  const prec_t sp = seed.th00_z.prec();
  QuotientPair st{square(seed.th01_z) / square(seed.th00_z),
                  square(seed.th01_0) / square(seed.th00_0)};
  // Division by theta_00^2 >= 0.45 and squaring cost a few bits.
  const long seed_bits = seed_prec - 4;
  NewtonReport rep;
  rep.seed_bits = seed_bits;
  rep.quotient_bits = seed_bits;
  if (P <= P0) {
    st.s.set_prec(std::max<prec_t>(sp, P + 8));
    st.t.set_prec(std::max<prec_t>(sp, P + 8));
    if (report) *report = rep;
    return st;
  }
  // Accuracy goals: a_k = 2 a_{k-1} - delta, ending exactly at P.
  std::vector<long> goals{P};
  while ((goals.back() + opts.delta + 1) / 2 > seed_bits) {
    goals.push_back((goals.back() + opts.delta + 1) / 2);
  }
  std::reverse(goals.begin(), goals.end());

  int stalls = 0;
  double prev_corr = kNegInf;
  long prev_goal = 0;
  for (long goal : goals) {
    NewtonStepInfo info;
    st = newton_step(st, z, tau, goal, opts, &info);
    // k = agreement of the previous pair of iterates, k' of this pair.
    // The iterate measured by k' came out of the previous step, so the
    // quadratic bound only applies below that step's goal.
    if (prev_corr != kNegInf) {
      const double k = -prev_corr, k2 = -info.correction_log2;
      if (2 * k < static_cast<double>(prev_goal)) {
        info.bits_lost = std::max(0.0, 2 * k - k2);
      }
      if (info.correction_log2 >= prev_corr) {
        if (++stalls >= 3) {
          throw NonConvergence("newton_quotients: correction not contracting");
        }
      } else {
        stalls = 0;
      }
    }
    prev_corr = info.correction_log2;
    prev_goal = goal;
    rep.steps.push_back(info);
  }
  // The last correction measures the error of the previous iterate; the
  // final one is quadratically better, capped by the goal.
  double lost = static_cast<double>(opts.delta);
  for (const auto& s : rep.steps) lost = std::max(lost, s.bits_lost);
  rep.quotient_bits = std::min(static_cast<double>(P),
                               -2 * rep.steps.back().correction_log2 - lost);
  if (rep.steps.back().correction_log2 == kNegInf) {
    rep.quotient_bits = static_cast<double>(P);
  }
  if (report) *report = rep;
  return st;
}

ThetaSquares newton_squares(const Complex& z, const Complex& tau, long P,
                            const NewtonOptions& opts, NewtonReport* report) {
  NewtonReport rep;
  QuotientPair st = newton_quotients(z, tau, P, opts, &rep);
  FInfinityResult ab = f_infinity(Complex(1.0, 0.0, st.s.prec()), st.s,
                                  Complex(1.0, 0.0, st.t.prec()), st.t, P,
                                  opts.f);
  const prec_t w = ab.work_bits;
  Complex one(1.0, 0.0, w);
  Complex a = one / ab.lambda;
  Complex b = one / ab.mu;
  rep.f_iterations_max = std::max(rep.f_iterations_max, ab.iterations);
  if (report) *report = rep;
  ThetaSquares out{a, with_prec(st.s, w) * a, b, with_prec(st.t, w) * b};
  return out;
}

DoubledSquares tau_duplicate(const ThetaSquares& sq) {
  auto [x00, x01] = good_sqrt_pair(sq.th00_z, sq.th01_z);
  auto [c00, c01] = good_sqrt_pair(sq.th00_0, sq.th01_0);
  Complex p = x00 * c00, m = x01 * c01;
  DoubledSquares out{scale2(p + m, -1),
                     scale2(x00 * c01 + x01 * c00, -1),
                     scale2(p - m, -1),
                     scale2(sq.th00_0 + sq.th01_0, -1),
                     c00 * c01,
                     scale2(sq.th00_0 - sq.th01_0, -1)};
  return out;
}

ZDoubled z_duplicate(const Complex& sq00_half, const Complex& sq01_half,
                     const Complex& sq10_half, const Complex& c00,
                     const Complex& c01, const Complex* c10) {
  check_constant(c00, -1, "theta_00(0)");
  check_constant(c01, -1, "theta_01(0)");
  Complex f00 = square(sq00_half), f01 = square(sq01_half);
  Complex f10 = square(sq10_half);
  ZDoubled out{(f01 + f10) / (square(c00) * c00),
               (f00 - f10) / (square(c01) * c01), std::nullopt};
  if (c10 != nullptr) {
    if (c10->is_zero()) throw DomainError("z_duplicate: theta_10(0) = 0");
    out.th10 = (f00 - f01) / (square(*c10) * *c10);
  }
  return out;
}

ThetaBundle theta_uniform(const Complex& z, const Complex& tau, long P,
                          const UniformOptions& opts, UniformReport* report) {
  const double im_tau = tau.im.to_double();
  UniformReport rep;
  if (static_cast<double>(P) <= opts.naive_threshold_ratio * im_tau) {
    rep.used_naive = true;
    ThetaBundle b = theta_naive(z, tau, P);
    auto [t10z, t100] = theta10_naive(z, tau, P);
    b.th10_z = std::move(t10z);
    b.th10_0 = std::move(t100);
    if (opts.with_theta11) b.th11_z = theta11_naive(z, tau, P);
    rep.work_bits = naive_plan(P, tau).work_bits;
    if (report) *report = rep;
    return b;
  }

  const long W = opts.work_bits > 0 ? opts.work_bits : 2 * P;
  rep.work_bits = W;
  const prec_t wp = W + 8;
  // s with 1 <= |tau|/2^s < 2.
  Real atau = abs(with_prec(tau, 64));
  const long s = std::max(0L, static_cast<long>(mpfr_get_exp(atau.get())) - 1);
  rep.s_split = s;
  Complex tau1 = scale2(with_prec(tau, wp), -s);
  Complex z1 = scale2(with_prec(z, wp), -s);
  Complex z2 = scale2(z1, -2);
  Complex tau2 = scale2(tau1, -1);

  // Squares at (z2, tau2).
  ThetaSquares sq = newton_squares(z2, tau2, W + 8, opts.newton, &rep.newton);
  const double sq_err = -rep.newton.quotient_bits + 4;
  auto tv = [&](const Complex& c, double err) {
    return TV{with_prec(c, wp), err};
  };
  TV X00 = tv(sq.th00_z, sq_err), X01 = tv(sq.th01_z, sq_err);
  TV K00 = tv(sq.th00_0, sq_err), K01 = tv(sq.th01_0, sq_err);

  // Up to tau1.
  auto [x00, x01] = tv_good_sqrt_pair(X00, X01);
  auto [k00, k01] = tv_good_sqrt_pair(K00, K01);
  TV p = tv_mul(x00, k00), m = tv_mul(x01, k01);
  TV H00 = tv_half(tv_add(p, m));
  TV H01 = tv_half(tv_add(tv_mul(x00, k01), tv_mul(x01, k00)));
  TV H10 = tv_half(tv_sub(p, m));
  TV C00sq = tv_half(tv_add(K00, K01));
  TV C01sq = tv_mul(k00, k01);

  // Constants at tau1.
  TV c00 = tv_sqrt(C00sq), c01 = tv_sqrt(C01sq);
  TV c10;
  if (s == 0) c10 = tv_sqrt(tv_half(tv_sub(K00, K01)));

  // theta_{00,01}(z1/2, tau1).
  auto zdup = [&](const TV& s00, const TV& s01, const TV& s10, const TV& a00,
                  const TV& a01) {
    check_constant(a00.v, -1, "theta_00(0)");
    check_constant(a01.v, -1, "theta_01(0)");
    // Im(tau1) >= sqrt(3)/2 here, where both constants lie in [0.859, 1.2].
    assert(abs_d(a00.v) >= 0.859 && abs_d(a00.v) <= 1.2);
    assert(abs_d(a01.v) >= 0.859 && abs_d(a01.v) <= 1.2);
    TV f00 = tv_pow4(s00), f01 = tv_pow4(s01), f10 = tv_pow4(s10);
    TV n00 = tv_add(f01, f10), n01 = tv_sub(f00, f10);
    TV d00 = tv_mul(tv_sqr(a00), a00), d01 = tv_mul(tv_sqr(a01), a01);
    return std::pair<TV, TV>{tv_div(n00, d00), tv_div(n01, d01)};
  };
  auto [h00, h01] = zdup(H00, H01, H10, c00, c01);

  for (long i = 1; i <= s; ++i) {
    TV A00sq = tv_half(tv_add(tv_sqr(c00), tv_sqr(c01)));
    TV A01sq = tv_mul(c00, c01);
    TV hp = tv_mul(h00, c00), hm = tv_mul(h01, c01);
    TV G00 = tv_half(tv_add(hp, hm));
    TV G01 = tv_half(tv_add(tv_mul(h00, c01), tv_mul(h01, c00)));
    if (i == s) {
      c10 = tv_sqrt(tv_half(tv_sub(tv_sqr(c00), tv_sqr(c01))));
    }
    TV G10 = tv_half(tv_sub(hp, hm));
    c00 = tv_sqrt(A00sq);
    c01 = tv_sqrt(A01sq);
    std::tie(h00, h01) = zdup(G00, G01, G10, c00, c01);
  }
  check_constant(c10.v, theta10_const_floor(im_tau), "theta_10(0)");

  // theta_10^2(z/2, tau) from the variety equation.
  TV h00sq = tv_sqr(h00), h01sq = tv_sqr(h01);
  TV c10sq = tv_sqr(c10);
  TV h10sq = tv_div(
      tv_sub(tv_mul(h00sq, tv_sqr(c00)), tv_mul(h01sq, tv_sqr(c01))), c10sq);

  // Final z-duplication.
  auto [t00, t01] = zdup(h00sq, h01sq, h10sq, c00, c01);
  TV f00 = tv_pow4(h00sq), f01 = tv_pow4(h01sq);
  TV t10 = tv_div(tv_sub(f00, f01), tv_mul(c10sq, c10));

  double err = kNegInf;
  for (const TV* v : {&t00, &t01, &t10, &c00, &c01, &c10}) {
    err = lse(err, v->err);
  }
  // Guard consumption relative to the working precision W, with 2 bits of
  // slack for the first-order approximation.
  const long used = static_cast<long>(std::ceil(err + W)) + 2;
  ThetaBundle out{std::move(t00.v), std::move(t01.v), std::move(c00.v),
                  std::move(c01.v)};
  out.th10_z = std::move(t10.v);
  out.th10_0 = std::move(c10.v);
  out.guard_bits_used = std::max(0L, used);
  out.achieved_bits = W - out.guard_bits_used;
  if (out.achieved_bits < P) {
    throw PrecisionExhausted("theta_uniform: guard budget exceeded (" +
                             std::to_string(out.guard_bits_used) +
                             " bits used of " + std::to_string(W - P) + ")");
  }
  if (opts.with_theta11) out.th11_z = theta11_fast(out, z, tau);
  if (report) *report = rep;
  return out;
}

Complex theta11_fast(const ThetaBundle& b, const Complex& z,
                     const Complex& tau) {
  if (!b.th10_z || !b.th10_0) {
    throw PreconditionViolated("theta11_fast needs theta_10 values");
  }
  if (z.is_zero()) return Complex(b.th00_z.prec());
  Complex sq = (square(b.th01_z) * square(*b.th10_0) -
                square(*b.th10_z) * square(b.th01_0)) /
               square(b.th00_0);
  Complex r = sqrt_principal(sq);
  const double lr = log2_abs(r);
  if (lr < -static_cast<double>(b.achieved_bits)) return r;
  // Sign from direct summation, with enough bits to see r.
  const long bits = 32 + std::max(0L, static_cast<long>(std::ceil(-lr)));
  DirectSum probe = theta_direct(1, 1, z, tau, bits);
  const double dp = log2_abs_diff(with_prec(r, bits + 16), probe.value);
  const double dm = log2_abs_diff(with_prec(-r, bits + 16), probe.value);
  if (std::min(dp, dm) > lr - 2) {
    throw PrecisionExhausted("theta11_fast: sign probe is ambiguous");
  }
  return dp <= dm ? r : -r;
}

}  // namespace jtheta
