// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "jtheta/bench.hpp"
#include "jtheta/errors.hpp"
#include "jtheta/evaluate.hpp"
#include "jtheta/f_sequence.hpp"
#include "jtheta/fast_theta.hpp"
#include "jtheta/naive_series.hpp"

using namespace jtheta;

namespace {

int g_failures = 0;
std::map<int, std::string> g_lines;

void report(int n, bool ok, const std::string& detail) {
  g_lines[n] = "criterion " + std::to_string(n) + ": " + (ok ? "PASS " : "FAIL ") + detail;
  std::fprintf(stderr, "%s\n", g_lines[n].c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Complex pow4(const Complex& a) { return square(square(a)); }
Complex cube(const Complex& a) { return square(a) * a; }

// A point of the compact region the Newton step works on:
// sqrt(3)/4 <= Im tau <= 1, |Re tau| <= 1/4, |Re z| <= 1/8,
// 0 <= Im z <= Im(tau)/4.
struct Point {
  Complex z, tau;
};

Point inner_point(std::mt19937_64& g, prec_t prec) {
  std::uniform_real_distribution<double> u(0, 1);
  const double ti = std::sqrt(3.0) / 4 + u(g) * (1 - std::sqrt(3.0) / 4);
  const double tr = (u(g) - 0.5) / 2;
  const double zr = (u(g) - 0.5) / 4;
  const double zi = u(g) * ti / 4;
  return {Complex(zr, zi, prec), Complex(tr, ti, prec)};
}

QuotientPair reference_quotients(const Point& p, long bits) {
  ThetaBundle b = theta_naive(p.z, p.tau, bits);
  return {square(b.th01_z) / square(b.th00_z), square(b.th01_0) / square(b.th00_0)};
}

// Criteria 1, 2, 3 (in part) and 9 share the same runs.
void oracle_identities_guard() {
  const std::vector<long> precs{256, 1024, 4096, 16384};
  const int cases = 50;
  std::mt19937_64 rng(20240601);
  std::vector<SamplePoint> pts;
  for (int i = 0; i < cases; ++i) {
    pts.push_back(random_reduced_point(rng, 0.9, 20, precs.back() + 128));
  }

  double worst_oracle = kNegInf;  // max over cases of log2 err + P
  double worst_jacobi = kNegInf, worst_variety = kNegInf;
  double worst_quasi = kNegInf, worst_zdup = kNegInf;  // all relative to -P
  long worst_guard_excess = std::numeric_limits<long>::min();
  double worst_agm = kNegInf;
  int failures1 = 0, failures2 = 0, failures9 = 0;
  std::string errors;

  for (long P : precs) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < cases; ++i) {
      const Complex& z = pts[i].z;
      const Complex& tau = pts[i].tau;
      UniformOptions uo;
      uo.naive_threshold_ratio = 0;  // always the fast path
      try {
        UniformReport rep;
        ThetaBundle b = theta_uniform(z, tau, P, uo, &rep);

        // 1: against the series at P + 64.
        ThetaBundle ref = theta_naive(z, tau, P + 64);
        auto [r10z, r100] = theta10_naive(z, tau, P + 64);
        const double e1 = std::max({log2_abs_diff(b.th00_z, ref.th00_z),
                                    log2_abs_diff(b.th01_z, ref.th01_z),
                                    log2_abs_diff(*b.th10_z, r10z),
                                    log2_abs_diff(b.th00_0, ref.th00_0),
                                    log2_abs_diff(b.th01_0, ref.th01_0),
                                    log2_abs_diff(*b.th10_0, r100)}) + P;
        worst_oracle = std::max(worst_oracle, e1);
        if (e1 > 0) ++failures1;

        // 2: identities.
        const Complex &c00 = b.th00_0, &c01 = b.th01_0, &c10 = *b.th10_0;
        const double jac = log2_abs_diff(pow4(c00), pow4(c01) + pow4(c10)) + P;
        const double var =
            log2_abs_diff(square(b.th00_z) * square(c00),
                          square(b.th01_z) * square(c01) +
                              square(*b.th10_z) * square(c10)) + P;

        // Quasi-periodicity: theta(z + tau + 1) through reduction and lift,
        // divided by exp(-i pi tau - 2 i pi z).
        const prec_t hp = P + 320;
        Complex zs = with_prec(z, hp) + with_prec(tau, hp) + Complex(1.0, 0.0, hp);
        EvalOptions eo;
        eo.method = Method::kFast;
        eo.with_theta11 = false;
        EvalResult sh = evaluate(zs, with_prec(tau, hp), P, eo);
        Complex pi_i(Real(0L, hp), pi_const(hp));
        Complex e = exp_c(pi_i * (with_prec(tau, hp) + scale2(with_prec(z, hp), 1)));
        const double quasi =
            std::max({log2_abs_diff(sh.bundle.th00_z * e, b.th00_z),
                      log2_abs_diff(sh.bundle.th01_z * e, -b.th01_z),
                      log2_abs_diff(*sh.bundle.th10_z * e, -*b.th10_z)}) + P;

        // z-duplication: the values at z against fourth powers at z/2, in
        // multiplied-out form.
        ThetaBundle h = theta_uniform(scale2(z, -1), tau, P, uo);
        Complex h00 = pow4(h.th00_z), h01 = pow4(h.th01_z), h10 = pow4(*h.th10_z);
        const double zdup =
            std::max({log2_abs_diff(b.th00_z * cube(c00), h01 + h10),
                      log2_abs_diff(b.th01_z * cube(c01), h00 - h10),
                      log2_abs_diff(*b.th10_z * cube(c10), h00 - h01)}) + P;

        worst_jacobi = std::max(worst_jacobi, jac);
        worst_variety = std::max(worst_variety, var);
        worst_quasi = std::max(worst_quasi, quasi);
        worst_zdup = std::max(worst_zdup, zdup);
        if (std::max({jac, var, quasi, zdup}) > 8) ++failures2;

        // 9: guard consumption at the default working precision 2P.
        if (rep.work_bits != 2 * P) ++failures9;
        worst_guard_excess = std::max(worst_guard_excess, b.guard_bits_used - P);
        if (b.guard_bits_used > P) ++failures9;

        // 3 uses the constants at P = 1024.
        if (P == 1024) {
          AgmResult a = agm_optimal(square(c00), square(c01), P);
          worst_agm = std::max(worst_agm,
                               log2_abs_diff(a.value, Complex(1.0, 0.0, P)) + P);
        }
      } catch (const Error& ex) {
        ++failures1;
        ++failures2;
        ++failures9;
        errors += " [P=" + std::to_string(P) + " case " + std::to_string(i) +
                  ": " + ex.what() + "]";
      }
    }
    std::fprintf(stderr, "P=%ld: %d cases in %.1fs\n", P, cases, seconds_since(t0));
  }

  report(1, failures1 == 0,
         fmt("200 runs, worst log2|err| = -P%+.1f (bound -P)", worst_oracle) +
             (failures1 ? " failures=" + std::to_string(failures1) : "") + errors);
  report(2, failures2 == 0,
         fmt("worst residuals -P%+.1f jacobi, -P%+.1f variety, -P%+.1f quasi-periodicity, ",
             worst_jacobi, worst_variety, worst_quasi) +
             fmt("-P%+.1f z-duplication (bound -P+8)", worst_zdup) +
             (failures2 ? " failures=" + std::to_string(failures2) : ""));

  // 3: extra samples down to the bottom corners of the domain.
  std::mt19937_64 g3(31);
  for (int i = 0; i < 10; ++i) {
    SamplePoint p = random_reduced_point(g3, 0.8661, 3, 1100);
    ThetaBundle b = theta_naive(Complex(0.0, 0.0, 1100), p.tau, 1040);
    AgmResult a = agm_optimal(square(b.th00_0), square(b.th01_0), 1024);
    worst_agm = std::max(worst_agm,
                         log2_abs_diff(a.value, Complex(1.0, 0.0, 1024)) + 1024);
  }
  report(3, worst_agm <= 8,
         fmt("60 tau, P=1024, worst log2|AGM - 1| = -P%+.1f (bound -P+8)", worst_agm));

  report(9, failures9 == 0,
         fmt("work 2P, worst guard_bits_used - P = %.0f (bound 0)",
             static_cast<double>(worst_guard_excess)));
}

void homogeneity() {
  const long P = 1024;
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> mod(0.5, 2), arg(-M_PI, M_PI);
  Point p = inner_point(g, P + 128);
  ThetaBundle b = theta_naive(p.z, p.tau, P + 64);
  Complex x = square(b.th00_z), y = square(b.th01_z);
  Complex zz = square(b.th00_0), t = square(b.th01_0);
  FInfinityResult r = f_infinity(x, y, zz, t, P);
  double worst = kNegInf;
  for (int i = 0; i < 20; ++i) {
    const double m1 = mod(g), a1 = arg(g), m2 = mod(g), a2 = arg(g);
    Complex l0(m1 * std::cos(a1), m1 * std::sin(a1), P + 64);
    Complex m0(m2 * std::cos(a2), m2 * std::sin(a2), P + 64);
    FInfinityResult q = f_infinity(l0 * x, l0 * y, m0 * zz, m0 * t, P);
    worst = std::max({worst, log2_abs_diff(q.lambda, l0 * r.lambda) + P,
                      log2_abs_diff(q.mu, m0 * r.mu) + P});
  }
  report(4, worst <= 16,
         fmt("20 scalings, P=1024, worst log2 residual = -P%+.1f (bound -P+16)", worst));
}

void iteration_counts() {
  // Exact double inputs keep the setup cheap at a million bits.
  Complex one(1.0, 0.0, 64);
  Complex y(0.9, 0.1, 64), t(0.8, 0.05, 64);
  std::vector<long> fc, ac;
  bool ok = true;
  std::string detail = "P=2^6..2^20 f_infinity/agm:";
  for (int k = 6; k <= 20; ++k) {
    const long P = 1L << k;
    FInfinityResult f = f_infinity(one, y, one, t, P);
    AgmResult a = agm_optimal(one, t, P);
    fc.push_back(f.iterations);
    ac.push_back(a.iterations);
    if (f.iterations > k + 64 || a.iterations > k + 64) ok = false;
    detail += " " + std::to_string(f.iterations) + "/" + std::to_string(a.iterations);
  }
  for (size_t i = 1; i < fc.size(); ++i) {
    const long df = fc[i] - fc[i - 1], da = ac[i] - ac[i - 1];
    if (df < 0 || df > 2 || da < 0 || da > 2) ok = false;
  }
  // Once P dominates the stopping offset the step is exactly 1.
  const long last = static_cast<long>(fc.size()) - 1;
  if (fc[last] - fc[last - 4] != 4 || ac[last] - ac[last - 4] != 4) ok = false;
  report(5, ok, detail);
}

void frak_round_trip() {
  const long P = 2048;
  std::mt19937_64 g(6);
  double worst = kNegInf;
  for (int i = 0; i < 20; ++i) {
    Point p = inner_point(g, P + 128);
    QuotientPair q = reference_quotients(p, P + 64);
    FrakResult r = frak_F(q.s, q.t, P);
    worst = std::max({worst, log2_abs_diff(r.z, p.z) + P, log2_abs_diff(r.tau, p.tau) + P});
  }
  report(6, worst <= 64,
         fmt("20 points, P=2048, measured g = %.1f (bound 64)", worst));
}

void newton_contraction() {
  NewtonOptions o;
  std::mt19937_64 g(8);
  bool ok = true;
  std::string detail;
  for (long p : {256L, 512L, 1024L}) {
    double worst = 1e9;
    for (int i = 0; i < 5; ++i) {
      Point pt = inner_point(g, 2 * p + 256);
      QuotientPair ref = reference_quotients(pt, 2 * p + 64);
      // Error of exactly 2^-p in the larger component.
      Complex e(2 * p + 128);
      mpfr_set_ui_2exp(e.re.get(), 1, -p, MPFR_RNDN);
      mpfr_set_ui_2exp(e.im.get(), 1, -p - 1 - i, MPFR_RNDN);
      Complex e2 = i % 2 ? -e : conj(e);
      QuotientPair st{ref.s + e, ref.t + e2};
      QuotientPair n = newton_step(st, pt.z, pt.tau, 2 * p, o);
      const double bits =
          -std::max(log2_abs_diff(n.s, ref.s), log2_abs_diff(n.t, ref.t));
      worst = std::min(worst, bits);
    }
    const double need = 2 * p - o.delta - 2;
    if (worst < need) ok = false;
    detail += fmt("p=%.0f: %.1f bits (need %.0f); ", static_cast<double>(p), worst, need);
  }
  report(7, ok, detail);
}

void crossover_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  BenchConfig cfg;
  cfg.prec_bits = {16384, 32768, 65536, 131072, 262144};
  cfg.repetitions = 5;
  BenchResult r = run_bench(cfg, [](const BenchRecord& rec) {
    std::fprintf(stderr, "bench %s P=%ld %.3fs\n", rec.method.c_str(),
                 rec.precision_bits, rec.wall_time);
  });
  const double elapsed = seconds_since(t0);
  std::vector<double> tn, tf;
  for (const BenchRecord& rec : r.records) {
    (rec.method == "naive" ? tn : tf).push_back(rec.wall_time);
  }
  bool ok = tn.size() == cfg.prec_bits.size() && tf.size() == tn.size();
  std::string ratios;
  for (size_t i = 0; ok && i < tn.size(); ++i) {
    ratios += fmt(i ? ",%.3f" : "%.3f", tn[i] / tf[i]);
    if (i > 0 && !(tn[i] / tf[i] > tn[i - 1] / tf[i - 1])) ok = false;
  }
  const size_t k = tn.size() - 1;
  const double sn = std::log2(tn[k] / tn[k - 1]);
  const double sf = std::log2(tf[k] / tf[k - 1]);
  if (!(sf <= sn - 0.3)) ok = false;
  if (elapsed > 1800) ok = false;
  report(8, ok,
         "P=2^14..2^18 naive/fast ratios " + ratios +
             fmt("; top slopes naive %.2f fast %.2f; %.0fs", sn, sf, elapsed));
}

}  // namespace

int main() {
  oracle_identities_guard();
  homogeneity();
  iteration_counts();
  frak_round_trip();
  newton_contraction();
  crossover_trend();
  for (const auto& [n, line] : g_lines) std::printf("%s\n", line.c_str());
  std::printf("%s\n", g_failures ? "acceptance: FAIL" : "acceptance: PASS");
  return g_failures ? 1 : 0;
}
