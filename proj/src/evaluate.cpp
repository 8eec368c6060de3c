#include "jtheta/evaluate.hpp"

#include <cmath>

#include "jtheta/errors.hpp"
#include "jtheta/naive_series.hpp"

namespace jtheta {

const char* method_name(Method m) {
  switch (m) {
    case Method::kAuto: return "auto";
    case Method::kNaive: return "naive";
    case Method::kFast: return "fast";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "auto") return Method::kAuto;
  if (s == "naive") return Method::kNaive;
  if (s == "fast") return Method::kFast;
  throw ParseError("unknown method '" + s + "'");
}

EvalResult evaluate(const Complex& z, const Complex& tau, long P,
                    const EvalOptions& opts) {
  if (P < 8) throw DomainError("precision must be at least 8 bits");
  if (tau.im.sign() <= 0) throw DomainError("Im(tau) must be positive");
  // Headroom for |z| and |tau| so the reduced arguments keep P bits.
  const double size = std::max(0.0, std::max(log2_abs(z), log2_abs(tau)));
  prec_t in_prec = std::max({z.prec(), tau.prec(),
                             static_cast<prec_t>(P + 64 + 2 * size)});
  EvalResult r;
  r.cert = reduce(z, tau, in_prec);
  long guard = lift_guard_bits(r.cert);
  if (guard > 32) {
    r.cert = reduce(z, tau, in_prec + guard);
  }
  r.reduced_P = P + guard;
  const Complex& zr = r.cert.z_red;
  const Complex& tr = r.cert.tau_red;

  ThetaBundle reduced;
  if (opts.method == Method::kNaive) {
    reduced = opts.with_theta11 ? theta_naive_full(zr, tr, r.reduced_P)
                                : theta_naive(zr, tr, r.reduced_P);
    if (!opts.with_theta11) {
      auto [a, b] = theta10_naive(zr, tr, r.reduced_P);
      reduced.th10_z = std::move(a);
      reduced.th10_0 = std::move(b);
    }
    r.used = Method::kNaive;
    r.report.used_naive = true;
  } else {
    UniformOptions uo = opts.uniform;
    uo.with_theta11 = opts.with_theta11;
    if (opts.method == Method::kFast) uo.naive_threshold_ratio = 0;
    reduced = theta_uniform(zr, tr, r.reduced_P, uo, &r.report);
    r.used = r.report.used_naive ? Method::kNaive : Method::kFast;
  }
  PrecisionPlan plan{r.reduced_P, 0, reduced.achieved_bits,
                     reduced.achieved_bits - r.reduced_P};
  plan.P = P;
  r.bundle = lift_theta(reduced, r.cert, plan, &r.zeta);
  if (r.bundle.achieved_bits < P) {
    throw PrecisionExhausted("evaluate: lift left fewer than P bits");
  }
  return r;
}

}  // namespace jtheta
