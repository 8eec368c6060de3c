#pragma once

// Multiprecision complex arithmetic on top of MPFR.
//
// Each part of a Complex is an MPFR float rounded to nearest-even.  The
// transcendental helpers (exp_c, log_c, sqrt_principal) evaluate with a few
// extra bits and round once, so every part is within 1 ulp of the exact
// result at the output precision; kUlpBound is what error budgets should use.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

namespace jtheta {

using prec_t = mpfr_prec_t;

inline constexpr double kUlpBound = 1.0;
// log2 of zero, as returned by log2_abs and log2_abs_diff.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Real {
 public:
  explicit Real(prec_t prec = 53) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double x, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    *v_ = *other.v_;
    other.v_->_mpfr_d = nullptr;
  }
  Real& operator=(const Real& other) {
    if (this == &other) return *this;
    if (v_->_mpfr_d == nullptr) {
      mpfr_init2(v_, mpfr_get_prec(other.v_));
    } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    }
    mpfr_set(v_, other.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    std::swap(*v_, *other.v_);
    return *this;
  }
  ~Real() {
    if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
  }

  // Parses decimal ("1.5e-3") or hex-float ("0x1.8p-2") text.
  static Real parse(std::string_view text, prec_t prec);

  prec_t prec() const { return mpfr_get_prec(v_); }
  // Changes the precision, rounding the current value.
  void set_prec(prec_t prec) { mpfr_prec_round(v_, prec, MPFR_RNDN); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // log2|x|, -inf for zero.
  double log2_abs() const;

 private:
  mpfr_t v_;
};

class Complex {
 public:
  explicit Complex(prec_t prec = 53) : re(prec), im(prec) {}
  Complex(double re_part, double im_part, prec_t prec)
      : re(re_part, prec), im(im_part, prec) {}
  Complex(Real re_part, Real im_part)
      : re(std::move(re_part)), im(std::move(im_part)) {}

  // Accepts "a", "bi", "a+bi", "a-bi", "i", "-i" with decimal or hex-float
  // components.  Throws ParseError.
  static Complex parse(std::string_view text, prec_t prec);

  prec_t prec() const { return std::max(re.prec(), im.prec()); }
  void set_prec(prec_t prec) {
    re.set_prec(prec);
    im.set_prec(prec);
  }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Real re;
  Real im;
};

// In-place kernels.  r may alias a or b.
void add(Complex& r, const Complex& a, const Complex& b);
void sub(Complex& r, const Complex& a, const Complex& b);
void mul(Complex& r, const Complex& a, const Complex& b);
void sqr(Complex& r, const Complex& a);
void div(Complex& r, const Complex& a, const Complex& b);
void mul_2si(Complex& r, const Complex& a, long k);
void mul_real(Complex& r, const Complex& a, const Real& x);

// Value forms; the result precision is the larger operand precision.
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator-(const Complex& a);
Complex scale2(const Complex& a, long k);
Complex square(const Complex& a);
Complex conj(const Complex& a);
Complex mul_i(const Complex& a);
Complex with_prec(const Complex& a, prec_t prec);

Complex sqrt_principal(const Complex& a);
Complex exp_c(const Complex& a);
Complex log_c(const Complex& a);
Real pi_const(prec_t prec);
Real abs(const Complex& a);

// Fast double-precision diagnostics.
double log2_abs(const Complex& a);
double log2_abs_diff(const Complex& a, const Complex& b);
double abs_d(const Complex& a);

}  // namespace jtheta
