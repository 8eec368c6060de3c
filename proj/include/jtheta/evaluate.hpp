#pragma once

// Evaluation at arbitrary (z, tau): reduce, evaluate at the reduced point,
// lift back.

#include <array>
#include <string>

#include "jtheta/argument_reduction.hpp"
#include "jtheta/fast_theta.hpp"
#include "jtheta/types.hpp"

namespace jtheta {

enum class Method { kAuto, kNaive, kFast };

const char* method_name(Method m);
Method parse_method(const std::string& s);

struct EvalOptions {
  Method method = Method::kAuto;
  UniformOptions uniform;
  bool with_theta11 = true;
};

struct EvalResult {
  ThetaBundle bundle;
  ReductionCertificate cert;
  std::array<int, 4> zeta{0, 0, 0, 0};
  Method used = Method::kNaive;
  long reduced_P = 0;  // precision requested at the reduced point
  UniformReport report;
};

// All theta values at (z, tau) to absolute precision P.  z and tau are
// taken as exact at their own precision.
EvalResult evaluate(const Complex& z, const Complex& tau, long P,
                    const EvalOptions& opts = {});

}  // namespace jtheta
