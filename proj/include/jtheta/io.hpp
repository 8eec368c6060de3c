#pragma once

// Text forms of numbers and bundles.

#include <string>
#include <vector>

#include <json.hpp>

#include "jtheta/evaluate.hpp"
#include "jtheta/mpcx.hpp"

namespace jtheta {

inline constexpr const char* kBundleSchema = "jtheta.bundle/1";

// Decimal "d.ddde[+-]X" with enough digits to round-trip at x.prec().
std::string to_decimal(const Real& x);
// Decimal with a fixed number of significant digits.
std::string to_decimal(const Real& x, long digits);
// Exact hex float, e.g. "0x1.8p-2".
std::string to_hex(const Real& x);
std::string to_string(const Complex& c, long digits);

// Bits for decimal digits: ceil(digits * log2(10)).
long digits_to_bits(double digits);
double bits_to_digits(long bits);

// Names of the bundle entries: theta00_z, ..., theta10_0.
enum class Output { k00, k01, k10, k11, kConstants };
std::vector<Output> parse_outputs(const std::string& list);

// Rounds v to absolute precision P (plus a few bits) for output.
Complex round_for_output(const Complex& v, long P);

nlohmann::json complex_json(const Complex& c);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json bundle_json(const EvalResult& r, long P,
                           const std::vector<Output>& outputs,
                           const std::string& z_text,
                           const std::string& tau_text);
std::string bundle_csv(const EvalResult& r, long P,
                       const std::vector<Output>& outputs);
std::string bundle_plain(const EvalResult& r, long P,
                         const std::vector<Output>& outputs);

}  // namespace jtheta
