// jtheta: evaluate Jacobi theta functions, benchmark, self-test.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jtheta/bench.hpp"
#include "jtheta/errors.hpp"
#include "jtheta/evaluate.hpp"
#include "jtheta/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitPrecision = 3;

struct Common {
  long prec_bits = 0;
  double prec_digits = 0;
  long p0 = 256;
  long c1 = 55;
  std::string format = "json";
  std::string out;
};

long resolve_prec(const Common& c, long fallback) {
  if (c.prec_bits > 0) return c.prec_bits;
  if (c.prec_digits > 0) return jtheta::digits_to_bits(c.prec_digits);
  return fallback;
}

jtheta::NewtonOptions newton_options(const Common& c) {
  jtheta::NewtonOptions n;
  n.P0 = c.p0;
  n.f.c1 = c.c1;
  return n;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw jtheta::ParseError("cannot open " + c.out);
  f << text;
}

void add_common(CLI::App* app, Common& c, bool with_prec) {
  if (with_prec) {
    auto* b = app->add_option("--prec-bits", c.prec_bits, "Absolute precision in bits");
    auto* d = app->add_option("--prec-digits", c.prec_digits,
                              "Absolute precision in decimal digits");
    b->excludes(d);
  }
  app->add_option("--p0", c.p0, "Precision of the series seed for Newton")
      ->check(CLI::Range(16L, 1L << 30));
  app->add_option("--c1", c.c1, "Extra bits in the F-sequence stopping test")
      ->check(CLI::Range(1L, 4096L));
  app->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "plain"}));
  app->add_option("--out", c.out, "Write output to FILE");
}

int run_compute(const Common& c, const std::string& z_text,
                const std::string& tau_text, const std::string& method,
                const std::string& outputs, long input_prec) {
  const long P = resolve_prec(c, 128);
  if (P < 8) throw jtheta::ParseError("precision must be at least 8 bits");
  const jtheta::prec_t in = input_prec > 0 ? input_prec : P + 64;
  jtheta::Complex z = jtheta::Complex::parse(z_text, in);
  jtheta::Complex tau = jtheta::Complex::parse(tau_text, in);
  auto outs = jtheta::parse_outputs(outputs);
  jtheta::EvalOptions opts;
  opts.method = jtheta::parse_method(method);
  opts.uniform.newton = newton_options(c);
  jtheta::EvalResult r = jtheta::evaluate(z, tau, P, opts);
  if (c.format == "json") {
    emit(c, jtheta::bundle_json(r, P, outs, z_text, tau_text).dump(2) + "\n");
  } else if (c.format == "csv") {
    emit(c, jtheta::bundle_csv(r, P, outs));
  } else {
    emit(c, jtheta::bundle_plain(r, P, outs));
  }
  return kExitOk;
}

std::vector<long> parse_list(const std::string& s, bool digits) {
  std::vector<long> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const double x = std::stod(item);
      v.push_back(digits ? jtheta::digits_to_bits(x) : static_cast<long>(x));
    } catch (const std::exception&) {
      throw jtheta::ParseError("bad precision '" + item + "'");
    }
  }
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) throw jtheta::ParseError("precision list must ascend");
  }
  if (v.empty()) throw jtheta::ParseError("empty precision list");
  return v;
}

int run_bench(const Common& c, const jtheta::BenchConfig& base,
              const std::string& list, bool list_digits) {
  jtheta::BenchConfig cfg = base;
  cfg.prec_bits = parse_list(list, list_digits);
  cfg.newton = newton_options(c);
  auto progress = [](const jtheta::BenchRecord& r) {
    std::cerr << r.method << " P=" << r.precision_bits << " t=" << r.wall_time
              << "s\n";
  };
  jtheta::BenchResult r = jtheta::run_bench(cfg, progress);
  emit(c, c.format == "json" ? jtheta::bench_json(r) : jtheta::bench_csv(r));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi theta functions in arbitrary precision"};
  app.require_subcommand(1);

  Common cc;
  std::string z = "0", tau = "i", method = "auto", outputs = "all";
  long input_prec = 0;
  auto* compute = app.add_subcommand("compute", "Evaluate theta at (z, tau)");
  add_common(compute, cc, true);
  compute->add_option("--z", z, "z, e.g. 0.1+0.2i or 0x1p-3");
  compute->add_option("--tau", tau, "tau with Im(tau) > 0");
  compute->add_option("--method", method, "Method")
      ->check(CLI::IsMember({"auto", "naive", "fast"}));
  compute->add_option("--outputs", outputs,
                      "Comma list from 00,01,10,11,constants,all");
  compute->add_option("--input-prec", input_prec,
                      "Bits used to parse z and tau (default P + 64)");

  Common bc;
  bc.format = "csv";
  jtheta::BenchConfig bcfg;
  std::string list = "4096,8192,16384,32768";
  bool list_digits = false;
  auto* bench = app.add_subcommand("bench", "Time the series against the fast method");
  add_common(bench, bc, false);
  bench->add_option("--prec-list", list, "Ascending comma list of precisions");
  bench->add_flag("--digits", list_digits, "Read --prec-list as decimal digits");
  bench->add_option("--z", bcfg.z, "Benchmark z");
  bench->add_option("--tau", bcfg.tau, "Benchmark tau");
  bench->add_option("--reps", bcfg.repetitions, "Repetitions (median is kept)")
      ->check(CLI::Range(1, 1000));

  Common sc;
  jtheta::SelftestConfig scfg;
  std::string st_list = "256,1024";
  auto* selftest = app.add_subcommand("selftest", "Randomized invariant checks");
  add_common(selftest, sc, false);
  selftest->add_option("--seed", scfg.seed, "RNG seed");
  selftest->add_option("--cases", scfg.cases, "Number of random points")
      ->check(CLI::Range(1, 100000));
  selftest->add_option("--prec-list", st_list, "Precisions cycled over cases");
  selftest->add_flag("--inject-fault", scfg.inject_fault,
                     "Corrupt theta_00(0) by one ulp before the identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compute) return run_compute(cc, z, tau, method, outputs, input_prec);
    if (*bench) return run_bench(bc, bcfg, list, list_digits);
    if (*selftest) {
      scfg.prec_bits = parse_list(st_list, false);
      scfg.newton = newton_options(sc);
      jtheta::SelftestReport r = jtheta::run_selftest(scfg);
      emit(sc, r.text);
      return r.failures ? kExitPrecision : kExitOk;
    }
  } catch (const jtheta::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const jtheta::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const jtheta::PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const jtheta::NonConvergence& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const jtheta::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecision;
  }
  return kExitUsage;
}
