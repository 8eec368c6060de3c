#include "jtheta/mpcx.hpp"

#include <limits>
#include <string>

#include "jtheta/errors.hpp"

namespace jtheta {
namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n'; }

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!is_space(c)) out.push_back(c);
  }
  return out;
}

// Parses one real at s[pos..], advancing pos.  A bare sign followed by 'i'
// is taken as a unit coefficient.
bool parse_component(const std::string& s, std::size_t& pos, Real& out) {
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-') &&
      pos + 1 < s.size() && s[pos + 1] == 'i') {
    mpfr_set_si(out.get(), s[pos] == '-' ? -1 : 1, kRnd);
    pos += 1;
    return true;
  }
  if (pos < s.size() && s[pos] == 'i') {
    mpfr_set_si(out.get(), 1, kRnd);
    return true;
  }
  const char* begin = s.c_str() + pos;
  char* end = nullptr;
  mpfr_strtofr(out.get(), begin, &end, 0, kRnd);
  if (end == begin) return false;
  if (!mpfr_number_p(out.get())) return false;
  pos += static_cast<std::size_t>(end - begin);
  return true;
}

}  // namespace

Real Real::parse(std::string_view text, prec_t prec) {
  std::string s = strip(text);
  Real r(prec);
  std::size_t pos = 0;
  if (s.empty() || s[0] == 'i' || !parse_component(s, pos, r) ||
      pos != s.size()) {
    throw ParseError("cannot parse real number '" + std::string(text) + "'");
  }
  return r;
}

double Real::log2_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, kRnd);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

Complex Complex::parse(std::string_view text, prec_t prec) {
  std::string s = strip(text);
  auto fail = [&]() {
    return ParseError("cannot parse complex number '" + std::string(text) +
                      "'");
  };
  if (s.empty()) throw fail();
  Complex c(prec);
  Real first(prec);
  std::size_t pos = 0;
  if (!parse_component(s, pos, first)) throw fail();
  if (pos == s.size()) {
    c.re = std::move(first);
    return c;
  }
  if (s[pos] == 'i' && pos + 1 == s.size()) {
    c.im = std::move(first);
    return c;
  }
  if (s[pos] != '+' && s[pos] != '-') throw fail();
  Real second(prec);
  if (!parse_component(s, pos, second)) throw fail();
  if (pos + 1 != s.size() || s[pos] != 'i') throw fail();
  c.re = std::move(first);
  c.im = std::move(second);
  return c;
}

void add(Complex& r, const Complex& a, const Complex& b) {
  mpfr_add(r.re.get(), a.re.get(), b.re.get(), kRnd);
  mpfr_add(r.im.get(), a.im.get(), b.im.get(), kRnd);
}

void sub(Complex& r, const Complex& a, const Complex& b) {
  mpfr_sub(r.re.get(), a.re.get(), b.re.get(), kRnd);
  mpfr_sub(r.im.get(), a.im.get(), b.im.get(), kRnd);
}

void mul(Complex& r, const Complex& a, const Complex& b) {
  if (&r == &a || &r == &b) {
    Complex t(r.prec());
    mul(t, a, b);
    std::swap(r, t);
    return;
  }
  mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), kRnd);
}

void sqr(Complex& r, const Complex& a) {
  if (&r == &a) {
    Complex t(r.prec());
    sqr(t, a);
    std::swap(r, t);
    return;
  }
  mpfr_fmms(r.re.get(), a.re.get(), a.re.get(), a.im.get(), a.im.get(), kRnd);
  mpfr_mul(r.im.get(), a.re.get(), a.im.get(), kRnd);
  mpfr_mul_2ui(r.im.get(), r.im.get(), 1, kRnd);
}

void div(Complex& r, const Complex& a, const Complex& b) {
  if (b.is_zero()) throw DomainError("complex division by zero");
  prec_t w = r.prec() + 8;
  Real n(w), x(w), y(w);
  mpfr_fmma(n.get(), b.re.get(), b.re.get(), b.im.get(), b.im.get(), kRnd);
  mpfr_fmma(x.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_fmms(y.get(), a.im.get(), b.re.get(), a.re.get(), b.im.get(), kRnd);
  mpfr_div(r.re.get(), x.get(), n.get(), kRnd);
  mpfr_div(r.im.get(), y.get(), n.get(), kRnd);
}

void mul_2si(Complex& r, const Complex& a, long k) {
  mpfr_mul_2si(r.re.get(), a.re.get(), k, kRnd);
  mpfr_mul_2si(r.im.get(), a.im.get(), k, kRnd);
}

void mul_real(Complex& r, const Complex& a, const Real& x) {
  mpfr_mul(r.re.get(), a.re.get(), x.get(), kRnd);
  mpfr_mul(r.im.get(), a.im.get(), x.get(), kRnd);
}

Complex operator+(const Complex& a, const Complex& b) {
  Complex r(std::max(a.prec(), b.prec()));
  add(r, a, b);
  return r;
}

Complex operator-(const Complex& a, const Complex& b) {
  Complex r(std::max(a.prec(), b.prec()));
  sub(r, a, b);
  return r;
}

Complex operator*(const Complex& a, const Complex& b) {
  Complex r(std::max(a.prec(), b.prec()));
  mul(r, a, b);
  return r;
}

Complex operator/(const Complex& a, const Complex& b) {
  Complex r(std::max(a.prec(), b.prec()));
  div(r, a, b);
  return r;
}

Complex operator-(const Complex& a) {
  Complex r(a.prec());
  mpfr_neg(r.re.get(), a.re.get(), kRnd);
  mpfr_neg(r.im.get(), a.im.get(), kRnd);
  return r;
}

Complex scale2(const Complex& a, long k) {
  Complex r(a.prec());
  mul_2si(r, a, k);
  return r;
}

Complex square(const Complex& a) {
  Complex r(a.prec());
  sqr(r, a);
  return r;
}

Complex conj(const Complex& a) {
  Complex r = a;
  mpfr_neg(r.im.get(), r.im.get(), kRnd);
  return r;
}

Complex mul_i(const Complex& a) {
  Complex r(a.prec());
  mpfr_neg(r.re.get(), a.im.get(), kRnd);
  mpfr_set(r.im.get(), a.re.get(), kRnd);
  return r;
}

Complex with_prec(const Complex& a, prec_t prec) {
  Complex r(prec);
  mpfr_set(r.re.get(), a.re.get(), kRnd);
  mpfr_set(r.im.get(), a.im.get(), kRnd);
  return r;
}

Complex sqrt_principal(const Complex& a) {
  prec_t p = a.prec();
  Complex r(p);
  if (a.is_zero()) return r;
  prec_t w = p + 8;
  Real h(w), u(w), v(w);
  mpfr_hypot(h.get(), a.re.get(), a.im.get(), kRnd);
  if (mpfr_sgn(a.re.get()) >= 0) {
    // u = sqrt((|a| + x)/2), v = y/(2u)
    mpfr_add(u.get(), h.get(), a.re.get(), kRnd);
    mpfr_div_2ui(u.get(), u.get(), 1, kRnd);
    mpfr_sqrt(u.get(), u.get(), kRnd);
    mpfr_div(v.get(), a.im.get(), u.get(), kRnd);
    mpfr_div_2ui(v.get(), v.get(), 1, kRnd);
  } else {
    // |v| = sqrt((|a| - x)/2), u = |y|/(2|v|), sign(v) = sign(y)
    mpfr_sub(v.get(), h.get(), a.re.get(), kRnd);
    mpfr_div_2ui(v.get(), v.get(), 1, kRnd);
    mpfr_sqrt(v.get(), v.get(), kRnd);
    mpfr_abs(u.get(), a.im.get(), kRnd);
    mpfr_div(u.get(), u.get(), v.get(), kRnd);
    mpfr_div_2ui(u.get(), u.get(), 1, kRnd);
    if (mpfr_signbit(a.im.get()) && !mpfr_zero_p(a.im.get())) {
      mpfr_neg(v.get(), v.get(), kRnd);
    }
  }
  mpfr_set(r.re.get(), u.get(), kRnd);
  mpfr_set(r.im.get(), v.get(), kRnd);
  if (mpfr_zero_p(r.re.get())) mpfr_abs(r.re.get(), r.re.get(), kRnd);
  if (mpfr_zero_p(r.re.get())) mpfr_abs(r.im.get(), r.im.get(), kRnd);
  return r;
}

Complex exp_c(const Complex& a) {
  prec_t p = a.prec();
  prec_t w = p + 10;
  Real m(w), s(w), c(w);
  mpfr_exp(m.get(), a.re.get(), kRnd);
  mpfr_sin_cos(s.get(), c.get(), a.im.get(), kRnd);
  Complex r(p);
  mpfr_mul(r.re.get(), m.get(), c.get(), kRnd);
  mpfr_mul(r.im.get(), m.get(), s.get(), kRnd);
  if (!mpfr_number_p(r.re.get()) || !mpfr_number_p(r.im.get())) {
    throw DomainError("exp_c overflow");
  }
  return r;
}

Complex log_c(const Complex& a) {
  if (a.is_zero()) throw DomainError("log_c(0)");
  prec_t p = a.prec();
  Complex r(p);
  Real h(p + 10);
  mpfr_hypot(h.get(), a.re.get(), a.im.get(), kRnd);
  mpfr_log(r.re.get(), h.get(), kRnd);
  if (mpfr_zero_p(a.im.get())) {
    // Negative zero imaginary part still lands on +pi.
    if (mpfr_sgn(a.re.get()) < 0) {
      mpfr_const_pi(r.im.get(), kRnd);
    } else {
      mpfr_set_zero(r.im.get(), 1);
    }
  } else {
    mpfr_atan2(r.im.get(), a.im.get(), a.re.get(), kRnd);
  }
  return r;
}

Real pi_const(prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), kRnd);
  return r;
}

Real abs(const Complex& a) {
  Real r(a.prec());
  mpfr_hypot(r.get(), a.re.get(), a.im.get(), kRnd);
  return r;
}

double log2_abs(const Complex& a) {
  Real h(64);
  mpfr_hypot(h.get(), a.re.get(), a.im.get(), kRnd);
  return h.log2_abs();
}

double log2_abs_diff(const Complex& a, const Complex& b) {
  prec_t w = std::max(a.prec(), b.prec()) + 2;
  Complex d(w);
  sub(d, a, b);
  return log2_abs(d);
}

double abs_d(const Complex& a) { return std::exp2(log2_abs(a)); }

}  // namespace jtheta
