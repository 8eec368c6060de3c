#include "jtheta/io.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "jtheta/errors.hpp"

namespace jtheta {
namespace {

using nlohmann::json;

std::vector<std::pair<std::string, const Complex*>> selected(
    const ThetaBundle& b, const std::vector<Output>& outputs) {
  std::vector<std::pair<std::string, const Complex*>> v;
  auto has = [&](Output o) {
    for (Output x : outputs) {
      if (x == o) return true;
    }
    return false;
  };
  if (has(Output::k00)) v.emplace_back("theta00_z", &b.th00_z);
  if (has(Output::k01)) v.emplace_back("theta01_z", &b.th01_z);
  if (has(Output::k10) && b.th10_z) v.emplace_back("theta10_z", &*b.th10_z);
  if (has(Output::k11) && b.th11_z) v.emplace_back("theta11_z", &*b.th11_z);
  if (has(Output::kConstants)) {
    v.emplace_back("theta00_0", &b.th00_0);
    v.emplace_back("theta01_0", &b.th01_0);
    if (b.th10_0) v.emplace_back("theta10_0", &*b.th10_0);
  }
  return v;
}

}  // namespace

std::string to_decimal(const Real& x, long digits) {
  if (x.is_zero()) return mpfr_signbit(x.get()) ? "-0e+0" : "0e+0";
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits),
                         x.get(), MPFR_RNDN);
  std::string digs(s);
  mpfr_free_str(s);
  std::string sign;
  if (!digs.empty() && digs[0] == '-') {
    sign = "-";
    digs.erase(0, 1);
  }
  std::ostringstream out;
  out << sign << digs[0];
  if (digs.size() > 1) out << '.' << digs.substr(1);
  const long exp10 = static_cast<long>(e) - 1;
  out << 'e' << (exp10 < 0 ? '-' : '+') << std::labs(exp10);
  return out.str();
}

std::string to_decimal(const Real& x) {
  return to_decimal(x, static_cast<long>(mpfr_get_str_ndigits(10, x.prec())));
}

std::string to_hex(const Real& x) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Ra", x.get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string to_string(const Complex& c, long digits) {
  std::string im = to_decimal(c.im, digits);
  if (im[0] != '-') im = "+" + im;
  return to_decimal(c.re, digits) + im + "i";
}

long digits_to_bits(double digits) {
  return static_cast<long>(std::ceil(digits * std::log2(10.0)));
}

double bits_to_digits(long bits) {
  return static_cast<double>(bits) * std::log10(2.0);
}

std::vector<Output> parse_outputs(const std::string& list) {
  std::vector<Output> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "00") out.push_back(Output::k00);
    else if (item == "01") out.push_back(Output::k01);
    else if (item == "10") out.push_back(Output::k10);
    else if (item == "11") out.push_back(Output::k11);
    else if (item == "constants") out.push_back(Output::kConstants);
    else if (item == "all") {
      out = {Output::k00, Output::k01, Output::k10, Output::k11,
             Output::kConstants};
    } else {
      throw ParseError("unknown output '" + item + "'");
    }
  }
  if (out.empty()) throw ParseError("empty output list");
  return out;
}

Complex round_for_output(const Complex& v, long P) {
  const double l = log2_abs(v);
  const long head = std::isfinite(l) ? std::max(0L, static_cast<long>(std::ceil(l))) : 0;
  return with_prec(v, P + 4 + head);
}

json complex_json(const Complex& c) {
  return json{{"re", to_decimal(c.re)},
              {"im", to_decimal(c.im)},
              {"re_hex", to_hex(c.re)},
              {"im_hex", to_hex(c.im)},
              {"prec", c.prec()}};
}

Complex complex_from_json(const json& j) {
  const prec_t p = j.at("prec").get<prec_t>();
  return Complex(Real::parse(j.at("re").get<std::string>(), p),
                 Real::parse(j.at("im").get<std::string>(), p));
}

json bundle_json(const EvalResult& r, long P,
                 const std::vector<Output>& outputs, const std::string& z_text,
                 const std::string& tau_text) {
  json values = json::object();
  for (const auto& [name, v] : selected(r.bundle, outputs)) {
    values[name] = complex_json(round_for_output(*v, P));
  }
  const auto& c = r.cert;
  json red{{"matrix", {c.matrix.a, c.matrix.b, c.matrix.c, c.matrix.d}},
           {"shift_a", c.shift_a},
           {"shift_b", c.shift_b},
           {"negated_z", c.negated_z},
           {"z_red", complex_json(round_for_output(c.z_red, P))},
           {"tau_red", complex_json(round_for_output(c.tau_red, P))},
           {"zeta_exponents", r.zeta}};
  return json{{"schema", kBundleSchema},
              {"input", {{"z", z_text}, {"tau", tau_text}}},
              {"prec_bits", P},
              {"method", method_name(r.used)},
              {"achieved_bits", r.bundle.achieved_bits},
              {"guard_bits_used", r.bundle.guard_bits_used},
              {"values", values},
              {"reduction", red}};
}

std::string bundle_csv(const EvalResult& r, long P,
                       const std::vector<Output>& outputs) {
  std::ostringstream out;
  out << "name,re,im,prec\n";
  for (const auto& [name, v] : selected(r.bundle, outputs)) {
    Complex c = round_for_output(*v, P);
    out << name << ',' << to_decimal(c.re) << ',' << to_decimal(c.im) << ','
        << c.prec() << '\n';
  }
  return out.str();
}

std::string bundle_plain(const EvalResult& r, long P,
                         const std::vector<Output>& outputs) {
  std::ostringstream out;
  const long digits = static_cast<long>(std::ceil(bits_to_digits(P)));
  for (const auto& [name, v] : selected(r.bundle, outputs)) {
    out << name << " = " << to_string(*v, std::max(digits, 2L)) << '\n';
  }
  out << "achieved_bits = " << r.bundle.achieved_bits << " (" << method_name(r.used)
      << ")\n";
  return out.str();
}

}  // namespace jtheta
