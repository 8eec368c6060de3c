#pragma once

// Timing harness for the series against the uniform algorithm, and the
// randomized self-test.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jtheta/fast_theta.hpp"
#include "jtheta/mpcx.hpp"

namespace jtheta {

struct BenchRecord {
  long precision_bits = 0;
  double precision_digits = 0;
  std::string method;  // "naive" or "fast"
  double wall_time = 0;  // seconds, median of repetitions
  long iterations = 0;   // series bound B, or the largest F^infinity count
  long guard_bits_used = 0;
  // naive: log2 |naive - fast| over theta_{00,01} at z and 0;
  // fast: log2 of the Jacobi quartic residual.
  double residual_log2 = 0;
};

struct BenchConfig {
  std::vector<long> prec_bits;
  std::string z = "0.123456789+0.123456789i";
  std::string tau = "0.23456789+1.23456789i";
  int repetitions = 3;
  NewtonOptions newton;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  // First precision at which the fast method beat the series.
  std::optional<long> crossover_bits;
};

// Runs the ladder in order.  progress is called after each record.
BenchResult run_bench(const BenchConfig& cfg,
                      const std::function<void(const BenchRecord&)>& progress = {});

std::string bench_csv(const BenchResult& r);
std::string bench_json(const BenchResult& r);

// A random point with tau in the fundamental domain, Im(tau) in
// [im_lo, im_hi], |Re z| <= 1/2 and 0 <= Im z <= Im(tau)/2.  The parts are
// doubles, so the point is exact at any precision >= 53.
struct SamplePoint {
  Complex z, tau;
};
SamplePoint random_reduced_point(std::mt19937_64& rng, double im_lo,
                                 double im_hi, prec_t prec);

struct SelftestConfig {
  std::uint64_t seed = 1;
  int cases = 12;
  std::vector<long> prec_bits{256, 1024};
  NewtonOptions newton;
  // Perturb theta_00(0) by one ulp at P bits before the identity checks.
  bool inject_fault = false;
};

struct SelftestReport {
  std::string text;
  int failures = 0;
};

SelftestReport run_selftest(const SelftestConfig& cfg);

}  // namespace jtheta
