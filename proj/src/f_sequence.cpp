#include "jtheta/f_sequence.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "jtheta/errors.hpp"

namespace jtheta {
namespace {

long ceil_log2(long n) {
  long r = 0;
  while ((1L << r) < n) ++r;
  return r;
}

// Sign of Re(v conj(u)) and Im(v conj(u)).
std::pair<int, int> ratio_signs(const Complex& u, const Complex& v) {
  prec_t w = std::max(u.prec(), v.prec()) + 4;
  Real re(w), im(w);
  mpfr_fmma(re.get(), v.re.get(), u.re.get(), v.im.get(), u.im.get(),
            MPFR_RNDN);
  mpfr_fmms(im.get(), v.im.get(), u.re.get(), v.re.get(), u.im.get(),
            MPFR_RNDN);
  return {re.sign(), im.sign()};
}

bool good_pair(const Complex& u, const Complex& v) {
  auto [re, im] = ratio_signs(u, v);
  return re > 0 || (re == 0 && im > 0) || v.is_zero();
}

void negate(Complex& a) {
  mpfr_neg(a.re.get(), a.re.get(), MPFR_RNDN);
  mpfr_neg(a.im.get(), a.im.get(), MPFR_RNDN);
}

}  // namespace

long iteration_cap(long P) { return ceil_log2(std::max(P, 2L)) + 64; }

std::pair<Complex, Complex> good_sqrt_pair(const Complex& u,
                                           const Complex& v) {
  if (u.is_zero()) throw DomainError("good_sqrt_pair: u = 0");
  Complex su = sqrt_principal(u);
  Complex sv = sqrt_principal(v);
  if (!good_pair(su, sv)) negate(sv);
  return {std::move(su), std::move(sv)};
}

AgmResult agm_optimal(const Complex& a0, const Complex& b0, long P) {
  if (a0.is_zero() || b0.is_zero()) throw DomainError("agm_optimal: zero");
  {
    auto [re, im] = ratio_signs(a0, b0);
    if (re < 0 && im == 0) {
      throw DomainError("agm_optimal: b/a is a negative real");
    }
  }
  const prec_t w = P + 2 * ceil_log2(std::max(P, 2L)) + 16;
  Complex a = with_prec(a0, w), b = with_prec(b0, w);
  Complex an(w), bn(w);
  const long cap = iteration_cap(P);
  long n = 0;
  while (true) {
    // |a - b| <= 2^-(w-4) |a|
    if (log2_abs_diff(a, b) <= log2_abs(a) - static_cast<double>(w - 4)) {
      break;
    }
    if (++n > cap) throw NonConvergence("agm_optimal: iteration cap reached");
    add(an, a, b);
    mul_2si(an, an, -1);
    mul(bn, a, b);
    bn = sqrt_principal(bn);
    if (!good_pair(an, bn)) negate(bn);
    assert(log2_abs_diff(an, bn) <= log2_abs(an + bn) + 1e-9);
    std::swap(a, an);
    std::swap(b, bn);
  }
  return {std::move(a), n};
}

FState F_step(const FState& s) {
  prec_t w = std::max({s.x.prec(), s.y.prec(), s.z.prec(), s.t.prec()});
  auto [sx, sy] = good_sqrt_pair(s.x, s.y);
  auto [sz, st] = good_sqrt_pair(s.z, s.t);
  Complex p(w), m(w), pz(w), mz(w), A(w), Bm(w);
  add(p, sx, sy);
  sub(m, sx, sy);
  add(pz, sz, st);
  sub(mz, sz, st);
  mul(A, p, pz);
  mul(Bm, m, mz);
  FState out{Complex(w), Complex(w), Complex(w), Complex(w), s.n + 1};
  add(out.x, A, Bm);
  sub(out.y, A, Bm);
  mul_2si(out.x, out.x, -2);
  mul_2si(out.y, out.y, -2);
  sqr(A, pz);
  sqr(Bm, mz);
  add(out.z, A, Bm);
  sub(out.t, A, Bm);
  mul_2si(out.z, out.z, -2);
  mul_2si(out.t, out.t, -2);
  return out;
}

long f_infinity_work_bits(long P, const FOptions& opts) {
  if (opts.work_bits > 0) return opts.work_bits;
  return P + opts.c1 + 2 * ceil_log2(std::max(P, 2L)) + 16;
}

FInfinityResult f_infinity(const Complex& x, const Complex& y,
                           const Complex& z, const Complex& t, long P,
                           const FOptions& opts) {
  const long w = f_infinity_work_bits(P, opts);
  if (w < P + opts.c1 + 8) {
    throw PrecisionExhausted("f_infinity: working precision " +
                             std::to_string(w) + " cannot hold c1 guard bits");
  }
  const double floor_log2 = -static_cast<double>(w) / 4;
  auto check_size = [&](const FState& s) {
    for (const Complex* v : {&s.x, &s.y, &s.z, &s.t}) {
      if (log2_abs(*v) < floor_log2) {
        throw DomainError("f_infinity: quadruple entry below 2^(-work/4)");
      }
    }
  };
  FState s{with_prec(x, w), with_prec(y, w), with_prec(z, w), with_prec(t, w),
           0};
  check_size(s);
  const long cap = iteration_cap(P);
  long n = 0;
  while (log2_abs_diff(s.z, s.t) >
         -static_cast<double>(P + n + opts.c1)) {
    if (++n > cap) throw NonConvergence("f_infinity: iteration cap reached");
    s = F_step(s);
    check_size(s);
  }
  s = F_step(s);
  Complex r = s.x / s.z;
  for (long k = 0; k <= n; ++k) sqr(r, r);
  FInfinityResult out{r * s.z, std::move(s.z), n + 1, w};
  return out;
}

}  // namespace jtheta
