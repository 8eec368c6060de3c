#include <cmath>
#include <cstdio>
#include <sstream>

#include "jtheta/bench.hpp"
#include "jtheta/errors.hpp"
#include "jtheta/f_sequence.hpp"
#include "jtheta/naive_series.hpp"

namespace jtheta {
namespace {

std::string fmt(double x) {
  if (!std::isfinite(x)) return x < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

}  // namespace

SelftestReport run_selftest(const SelftestConfig& cfg) {
  SelftestReport rep;
  std::ostringstream out;
  std::mt19937_64 rng(cfg.seed);
  out << "selftest seed=" << cfg.seed << " cases=" << cfg.cases << '\n';
  for (int i = 0; i < cfg.cases; ++i) {
    const long P = cfg.prec_bits[static_cast<size_t>(i) % cfg.prec_bits.size()];
    SamplePoint pt = random_reduced_point(rng, 0.9, 20, 64);
    out << "case " << i << " P=" << P << " tau_im=" << fmt(pt.tau.im.to_double());
    std::vector<std::string> failed;
    try {
      ThetaBundle ref = theta_naive_full(pt.z, pt.tau, P + 64);
      UniformOptions uo;
      uo.newton = cfg.newton;
      uo.naive_threshold_ratio = 0;
      uo.with_theta11 = true;
      UniformReport ur;
      ThetaBundle b = theta_uniform(pt.z, pt.tau, P, uo, &ur);

      double oracle = kNegInf;
      oracle = std::max(oracle, log2_abs_diff(b.th00_z, ref.th00_z));
      oracle = std::max(oracle, log2_abs_diff(b.th01_z, ref.th01_z));
      oracle = std::max(oracle, log2_abs_diff(*b.th10_z, *ref.th10_z));
      oracle = std::max(oracle, log2_abs_diff(b.th00_0, ref.th00_0));
      oracle = std::max(oracle, log2_abs_diff(b.th01_0, ref.th01_0));
      oracle = std::max(oracle, log2_abs_diff(*b.th10_0, *ref.th10_0));
      oracle = std::max(oracle, log2_abs_diff(*b.th11_z, *ref.th11_z));
      if (oracle > -P) failed.push_back("oracle");

      if (cfg.inject_fault) {
        Real& r = b.th00_0.re;
        Real ulp(1.0, r.prec());
        mpfr_mul_2si(ulp.get(), ulp.get(), mpfr_get_exp(r.get()) - P, MPFR_RNDN);
        mpfr_add(r.get(), r.get(), ulp.get(), MPFR_RNDN);
      }
      const double tol = -static_cast<double>(b.achieved_bits) + 8;
      Complex c00 = square(b.th00_0), c01 = square(b.th01_0),
              c10 = square(*b.th10_0);
      const double jacobi =
          log2_abs_diff(square(c00), square(c01) + square(c10));
      if (jacobi > tol) failed.push_back("jacobi");
      const double variety =
          log2_abs_diff(square(b.th00_z) * c00,
                        square(b.th01_z) * c01 + square(*b.th10_z) * c10);
      if (variety > tol) failed.push_back("variety");
      const long cap = iteration_cap(P);
      if (ur.newton.f_iterations_max > cap) failed.push_back("iterations");
      if (b.guard_bits_used > P) failed.push_back("guard");

      out << " oracle=" << fmt(oracle) << " jacobi=" << fmt(jacobi)
          << " variety=" << fmt(variety) << " tol=" << fmt(tol)
          << " f_iter=" << ur.newton.f_iterations_max
          << " guard=" << b.guard_bits_used;
    } catch (const Error& e) {
      failed.push_back(std::string("exception: ") + e.what());
    }
    if (failed.empty()) {
      out << " : ok\n";
    } else {
      ++rep.failures;
      out << " : FAIL";
      for (const auto& f : failed) out << ' ' << f;
      out << '\n';
    }
  }
  if (rep.failures) {
    out << "failed " << rep.failures << " of " << cfg.cases << '\n';
  } else {
    out << "passed " << cfg.cases << " of " << cfg.cases << '\n';
  }
  rep.text = out.str();
  return rep;
}

}  // namespace jtheta
