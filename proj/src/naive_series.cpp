#include "jtheta/naive_series.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "jtheta/errors.hpp"

namespace jtheta {
namespace {

constexpr double kLog2e = 1.4426950408889634;

long ceil_log2(long n) {
  long r = 0;
  while ((1L << r) < n) ++r;
  return r;
}

void check_domain(const Complex& z, const Complex& tau) {
  const double im_tau = tau.im.to_double();
  if (!(im_tau >= kNaiveMinImTau)) {
    throw DomainError("series evaluation needs Im(tau) >= 0.35, got " +
                      std::to_string(im_tau));
  }
  // Compare |Im z| <= Im(tau)/2 exactly.
  Real half(tau.im.prec() + 1);
  mpfr_div_2ui(half.get(), tau.im.get(), 1, MPFR_RNDN);
  if (mpfr_cmpabs(z.im.get(), half.get()) > 0) {
    throw DomainError("series evaluation needs |Im z| <= Im(tau)/2");
  }
}

// i*pi*w at precision p.
Complex i_pi(const Complex& w, const Real& pi, prec_t p) {
  Complex r(p);
  mpfr_mul(r.re.get(), w.im.get(), pi.get(), MPFR_RNDN);
  mpfr_neg(r.re.get(), r.re.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), w.re.get(), pi.get(), MPFR_RNDN);
  return r;
}

bool bounded_by_4(const Complex& s) {
  return mpfr_cmpabs_ui(s.re.get(), 4) <= 0 &&
         mpfr_cmpabs_ui(s.im.get(), 4) <= 0;
}

// q and v1 = exp(2 i pi (z + tau/2)) + exp(-2 i pi (z - tau/2)).
struct SeriesSeed {
  Complex q, v1;
};

SeriesSeed series_seed(const Complex& z, const Complex& tau, prec_t w) {
  Real pi = pi_const(w);
  Complex zw = with_prec(z, w), tw = with_prec(tau, w);
  Complex half_tau = scale2(tw, -1);
  SeriesSeed s{exp_c(i_pi(tw, pi, w)), Complex(w)};
  Complex a = scale2(i_pi(zw + half_tau, pi, w), 1);
  Complex b = scale2(i_pi(half_tau - zw, pi, w), 1);
  add(s.v1, exp_c(a), exp_c(b));
  return s;
}

// log2 of the extra headroom theta_10/theta_11 need at z: their size can
// reach exp(pi (|Im z| - Im(tau)/4)).
long theta10_extra_bits(const Complex& z, const Complex& tau) {
  const double e = M_PI * kLog2e *
                   (std::fabs(z.im.to_double()) - tau.im.to_double() / 4);
  return std::max(0L, static_cast<long>(std::ceil(e))) + 2;
}

// Sum over n >= 0 of u_n = q^((n+1/2)^2) (w^(2n+1) + eps w^-(2n+1)), with
// signs (-1)^n if alternate is set.  Also returns 2 q^(1/4) sum q^(n(n+1))
// when want_const is set.
std::pair<Complex, Complex> odd_series(const Complex& z, const Complex& tau,
                                       long terms, prec_t w, int eps,
                                       bool alternate, bool want_const) {
  Real pi = pi_const(w);
  Complex zw = with_prec(z, w), tw = with_prec(tau, w);
  SeriesSeed seed = series_seed(zw, tw, w);
  const Complex& q = seed.q;
  const Complex& v1 = seed.v1;
  Complex quarter_tau = scale2(tw, -2);
  // u0 = exp(i pi (tau/4 + z)) + eps exp(i pi (tau/4 - z))
  Complex e_plus = exp_c(i_pi(quarter_tau + zw, pi, w));
  Complex e_minus = exp_c(i_pi(quarter_tau - zw, pi, w));
  Complex u_prev(w), u(w);
  if (eps > 0) {
    add(u, e_plus, e_minus);
  } else {
    sub(u, e_plus, e_minus);
  }
  Complex q2 = square(q);
  Complex sum = u;
  // q^(1/4) and the constant series.
  Complex q14 = exp_c(i_pi(quarter_tau, pi, w));
  Complex csum(1.0, 0.0, w), r(1.0, 0.0, w);
  Complex p = q;  // q^(2n+1)
  Complex t1(w), t2(w), pq(w);
  for (long n = 0; n + 1 < terms; ++n) {
    Complex u_next(w);
    if (n == 0) {
      mul(t1, q, v1);
      mul(u_next, t1, u);
      mul(t2, q2, u);
      if (eps > 0) {
        sub(u_next, u_next, t2);
      } else {
        add(u_next, u_next, t2);
      }
    } else {
      // u_{n+1} = q^(2n+1) v1 u_n - q^(4n+2) u_{n-1}
      mul(t1, p, v1);
      mul(u_next, t1, u);
      sqr(t2, p);
      mul(t1, t2, u_prev);
      sub(u_next, u_next, t1);
    }
    if (want_const) {
      // r_{n+1} = r_n q^(2n+2)
      mul(pq, p, q);
      mul(r, r, pq);
      add(csum, csum, r);
    }
    if (alternate && (n % 2 == 0)) {
      sub(sum, sum, u_next);
    } else {
      add(sum, sum, u_next);
    }
    mul(p, p, q2);
    std::swap(u_prev, u);
    std::swap(u, u_next);
  }
  Complex c(w);
  if (want_const) {
    mul(c, q14, csum);
    mul_2si(c, c, 1);
  }
  return {sum, c};
}

}  // namespace

long series_bound(long P, double im_tau) {
  if (!(im_tau >= kNaiveMinImTau)) {
    throw DomainError("series_bound needs Im(tau) >= 0.35");
  }
  const double x = (static_cast<double>(P) + 2) / (M_PI * im_tau * kLog2e);
  long b = static_cast<long>(std::ceil(std::sqrt(x))) + 1;
  return std::max(b, 2L);
}

long series_bound(long P, const Complex& tau) {
  return series_bound(P, tau.im.to_double());
}

PrecisionPlan naive_plan(long P, const Complex& tau) {
  PrecisionPlan plan;
  plan.P = P;
  plan.B = series_bound(P, tau);
  plan.guard_bits = ceil_log2(plan.B) + 7;
  plan.work_bits = P + plan.guard_bits;
  return plan;
}

ThetaBundle theta_naive(const Complex& z, const Complex& tau, long P,
                        const NaiveOptions& opts) {
  check_domain(z, tau);
  const PrecisionPlan plan = naive_plan(P, tau);
  // Values are bounded by 4, so 3 extra mantissa bits turn relative
  // rounding into absolute precision work_bits.
  const prec_t w = plan.work_bits + 3;
  SeriesSeed seed = series_seed(z, tau, w);
  const Complex& q = seed.q;
  const Complex& v1 = seed.v1;

  Complex th0z(1.0, 0.0, w), th1z(1.0, 0.0, w);
  Complex th00(1.0, 0.0, w), th10(1.0, 0.0, w);
  Complex q1 = q, q2 = q;
  Complex v = v1, vp(2.0, 0.0, w);
  Complex q1sq(w), t(w), t2(w), two_q2(w), vn(w);

  Real pi_chk(64);
  Complex z_chk(64), tau_chk(64);
  if (opts.check_invariants) {
    pi_chk = pi_const(64);
    z_chk = with_prec(z, 64);
    tau_chk = with_prec(tau, 64);
  }

  const long terms = plan.B + std::max(0L, opts.extra_terms);
  for (long n = 1; n <= terms; ++n) {
    if (opts.check_invariants) {
      // q1 = q^n, q2 = q^(n^2), v = v_n at 64 bits.
      Complex ipt = i_pi(tau_chk, pi_chk, 64);
      Real nn(static_cast<long>(n), 64), n2(static_cast<long>(n * n), 64);
      Complex e1(64), e2(64);
      mul_real(e1, ipt, nn);
      mul_real(e2, ipt, n2);
      Complex expect_q1 = exp_c(e1), expect_q2 = exp_c(e2);
      Complex ipz = i_pi(z_chk, pi_chk, 64);
      Complex a(64);
      mul_real(a, ipz, Real(static_cast<long>(2 * n), 64));
      Complex expect_v = expect_q2 * (exp_c(a) + exp_c(-a));
      auto near = [](const Complex& x, const Complex& y) {
        return log2_abs_diff(x, y) <= std::max(log2_abs(y), 0.0) - 40;
      };
      if (!near(q1, expect_q1) || !near(q2, expect_q2) || !near(v, expect_v)) {
        throw NonConvergence("naive series loop invariant broken at n = " +
                             std::to_string(n));
      }
    }
    add(th0z, th0z, v);
    mul_2si(two_q2, q2, 1);
    add(th00, th00, two_q2);
    if (n % 2 == 1) {
      sub(th1z, th1z, v);
      sub(th10, th10, two_q2);
    } else {
      add(th1z, th1z, v);
      add(th10, th10, two_q2);
    }
    assert(bounded_by_4(th0z) && bounded_by_4(th1z) && bounded_by_4(th00) &&
           bounded_by_4(th10));
    if (n == plan.B) break;
    // q2 <- q2 q1^2 q, then v_{n+1} = q^(2n) v1 v_n - q^(4n) v_{n-1}, and
    // only then q1 <- q1 q.
    sqr(q1sq, q1);
    mul(t, q2, q1sq);
    mul(q2, t, q);
    mul(t, q1sq, v1);
    mul(vn, t, v);
    sqr(t, q1sq);
    mul(t2, t, vp);
    sub(vn, vn, t2);
    std::swap(vp, v);
    std::swap(v, vn);
    mul(q1, q1, q);
  }

  ThetaBundle out{std::move(th0z), std::move(th1z), std::move(th00),
                  std::move(th10)};
  out.achieved_bits = P;
  out.guard_bits_used = plan.guard_bits;
  return out;
}

std::pair<Complex, Complex> theta10_naive(const Complex& z, const Complex& tau,
                                          long P) {
  check_domain(z, tau);
  const long extra = theta10_extra_bits(z, tau);
  const long terms = series_bound(P + extra, tau) + 1;
  const prec_t w = P + extra + ceil_log2(terms) + 10;
  return odd_series(z, tau, terms, w, +1, false, true);
}

Complex theta11_naive(const Complex& z, const Complex& tau, long P) {
  check_domain(z, tau);
  const long extra = theta10_extra_bits(z, tau);
  const long terms = series_bound(P + extra, tau) + 1;
  const prec_t w = P + extra + ceil_log2(terms) + 10;
  Complex s = odd_series(z, tau, terms, w, -1, true, false).first;
  return mul_i(s);
}

ThetaBundle theta_naive_full(const Complex& z, const Complex& tau, long P) {
  ThetaBundle b = theta_naive(z, tau, P);
  auto [t10z, t100] = theta10_naive(z, tau, P);
  b.th10_z = std::move(t10z);
  b.th10_0 = std::move(t100);
  b.th11_z = theta11_naive(z, tau, P);
  return b;
}

DirectSum theta_direct(int a, int b, const Complex& z, const Complex& tau,
                       long bits) {
  const double im_tau = tau.im.to_double();
  if (!(im_tau > 0)) throw DomainError("theta_direct needs Im(tau) > 0");
  const double alpha = a ? 0.5 : 0.0;
  const double im_z = z.im.to_double();
  // log2 |term| = -pi log2e (Im tau m^2 + 2 m Im z), m = n + alpha.
  const double m0 = -im_z / im_tau;
  const double c = M_PI * kLog2e;
  const double l_max = c * im_z * im_z / im_tau;
  const double half_width =
      std::sqrt((bits + 20.0 + l_max) / (c * im_tau)) + 2;
  const long n_lo = static_cast<long>(std::floor(m0 - alpha - half_width));
  const long n_hi = static_cast<long>(std::ceil(m0 - alpha + half_width));
  const double arg_size =
      std::fabs(M_PI * std::hypot(tau.re.to_double(), im_tau)) *
          std::pow(std::fabs(m0) + half_width + 1, 2) +
      2 * M_PI * (std::fabs(m0) + half_width + 1) *
          (std::hypot(z.re.to_double(), im_z) + 1);
  const prec_t w =
      bits + 16 + static_cast<long>(std::ceil(std::log2(arg_size + 1))) +
      static_cast<long>(std::ceil(std::max(l_max, 0.0)));

  Real pi = pi_const(w);
  Complex zb = with_prec(z, w);
  if (b) mpfr_add_d(zb.re.get(), zb.re.get(), 0.5, MPFR_RNDN);
  Complex tw = with_prec(tau, w);
  Complex sum(w), e(w), m_tau(w), inner(w);
  for (long n = n_lo; n <= n_hi; ++n) {
    Real m(static_cast<double>(n) + alpha, w);
    // i pi m (m tau + 2 (z + b/2))
    mul_real(m_tau, tw, m);
    Complex two_z = scale2(zb, 1);
    add(inner, m_tau, two_z);
    mul_real(inner, inner, m);
    Complex arg = i_pi(inner, pi, w);
    add(sum, sum, exp_c(arg));
  }
  DirectSum out{std::move(sum), 0, l_max};
  const double nterms = static_cast<double>(n_hi - n_lo + 1);
  // w covers the largest term and the argument size, so each term is off
  // by less than 2^(-bits-8) in absolute terms; the tail is smaller still.
  out.log2_err = std::log2(nterms) + 1 - static_cast<double>(bits + 8);
  return out;
}

}  // namespace jtheta
