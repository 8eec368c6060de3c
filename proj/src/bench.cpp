#include "jtheta/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "jtheta/argument_reduction.hpp"
#include "jtheta/io.hpp"
#include "jtheta/naive_series.hpp"

namespace jtheta {
namespace {

double seconds(std::chrono::steady_clock::time_point t0,
               std::chrono::steady_clock::time_point t1) {
  return std::chrono::duration<double>(t1 - t0).count();
}

double median(std::vector<double> t) {
  std::sort(t.begin(), t.end());
  const size_t n = t.size();
  return n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
}

double jacobi_residual_log2(const ThetaBundle& b) {
  Complex a4 = square(square(b.th00_0));
  Complex rhs = square(square(b.th01_0)) + square(square(*b.th10_0));
  return log2_abs_diff(a4, rhs);
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg,
                      const std::function<void(const BenchRecord&)>& progress) {
  BenchResult out;
  for (long P : cfg.prec_bits) {
    const prec_t in = static_cast<prec_t>(P + 64);
    ReductionCertificate cert =
        reduce(Complex::parse(cfg.z, in), Complex::parse(cfg.tau, in), in);
    const Complex& z = cert.z_red;
    const Complex& tau = cert.tau_red;

    UniformOptions uo;
    uo.newton = cfg.newton;
    uo.naive_threshold_ratio = 0;
    UniformReport rep;
    ThetaBundle nb, fb;
    // The two methods alternate so that drift in machine speed hits both.
    std::vector<double> vn, vf;
    for (int i = 0; i < std::max(cfg.repetitions, 1); ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      nb = theta_naive(z, tau, P);
      const auto t1 = std::chrono::steady_clock::now();
      fb = theta_uniform(z, tau, P, uo, &rep);
      const auto t2 = std::chrono::steady_clock::now();
      vn.push_back(seconds(t0, t1));
      vf.push_back(seconds(t1, t2));
    }
    const double tn = median(vn), tf = median(vf);

    double diff = kNegInf;
    diff = std::max(diff, log2_abs_diff(nb.th00_z, fb.th00_z));
    diff = std::max(diff, log2_abs_diff(nb.th01_z, fb.th01_z));
    diff = std::max(diff, log2_abs_diff(nb.th00_0, fb.th00_0));
    diff = std::max(diff, log2_abs_diff(nb.th01_0, fb.th01_0));

    BenchRecord rn{P, bits_to_digits(P), "naive", tn, series_bound(P, tau),
                   nb.guard_bits_used, diff};
    BenchRecord rf{P, bits_to_digits(P), "fast", tf, rep.newton.f_iterations_max,
                   fb.guard_bits_used, jacobi_residual_log2(fb)};
    out.records.push_back(rn);
    if (progress) progress(rn);
    out.records.push_back(rf);
    if (progress) progress(rf);
    if (!out.crossover_bits && tf < tn) out.crossover_bits = P;
  }
  return out;
}

std::string bench_csv(const BenchResult& r) {
  std::ostringstream s;
  s << "precision_bits,precision_digits,method,wall_time,iterations,"
       "guard_bits_used,residual_log2\n";
  for (const auto& x : r.records) {
    s << x.precision_bits << ',' << x.precision_digits << ',' << x.method << ','
      << x.wall_time << ',' << x.iterations << ',' << x.guard_bits_used << ','
      << x.residual_log2 << '\n';
  }
  s << "# crossover_bits," << (r.crossover_bits ? std::to_string(*r.crossover_bits) : "none")
    << '\n';
  return s.str();
}

std::string bench_json(const BenchResult& r) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& x : r.records) {
    // -inf residuals (exact agreement) are written as null.
    nlohmann::json res = std::isfinite(x.residual_log2)
                             ? nlohmann::json(x.residual_log2)
                             : nlohmann::json(nullptr);
    recs.push_back({{"precision_bits", x.precision_bits},
                    {"precision_digits", x.precision_digits},
                    {"method", x.method},
                    {"wall_time", x.wall_time},
                    {"iterations", x.iterations},
                    {"guard_bits_used", x.guard_bits_used},
                    {"residual_log2", res}});
  }
  nlohmann::json j{{"schema", "jtheta.bench/1"}, {"records", recs}};
  j["crossover_bits"] = r.crossover_bits ? nlohmann::json(*r.crossover_bits)
                                         : nlohmann::json(nullptr);
  return j.dump(2) + "\n";
}

SamplePoint random_reduced_point(std::mt19937_64& rng, double im_lo,
                                 double im_hi, prec_t prec) {
  std::uniform_real_distribution<double> half(-0.5, 0.5);
  std::uniform_real_distribution<double> im(im_lo, im_hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double tr = 0, ti = 0;
  do {
    tr = half(rng);
    ti = im(rng);
  } while (tr * tr + ti * ti < 1.0);
  const double zr = half(rng);
  const double zi = unit(rng) * ti / 2;
  return {Complex(zr, zi, prec), Complex(tr, ti, prec)};
}

}  // namespace jtheta
