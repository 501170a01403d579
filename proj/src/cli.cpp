#include "jinv/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <ostream>
#include <regex>

#include "jinv/cm.hpp"
#include "jinv/fundamental_domain.hpp"
#include "jinv/invert.hpp"
#include "jinv/modular_forms.hpp"
#include "jinv/phi2.hpp"
#include "jinv/telemetry.hpp"

namespace jinv::cli {

using Json = nlohmann::ordered_json;

namespace {

constexpr long kMaxExactExponent = 100000;

std::string normalize_minus(std::string_view text) {
  std::string s(text);
  const std::string minus = "\xE2\x88\x92";
  for (std::size_t pos; (pos = s.find(minus)) != std::string::npos;) s.replace(pos, minus.size(), "-");
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
}

long decimal_digits(long bits) { return static_cast<long>(std::ceil(bits * std::log10(2.0))) + 2; }

std::string decimal(const Real& x, long bits) { return x.to_decimal(decimal_digits(bits)); }

Json telemetry_json(const OpTally& t) {
  Json by_prec = Json::object();
  for (const auto& [prec, n] : t.mul_equivalents_by_prec) by_prec[std::to_string(prec)] = n;
  return Json{{"muls", t.muls},
              {"divs", t.divs},
              {"sqrts", t.sqrts},
              {"transcendentals", t.transcendentals},
              {"cost", t.cost},
              {"mul_equivalents_by_prec", by_prec}};
}

long default_precision() {
  const char* env = std::getenv(kPrecisionEnv);
  if (!env || !*env) return kDefaultPrecision;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v <= 0) throw std::invalid_argument(std::string(kPrecisionEnv) + " is not a positive integer");
  return v;
}

Complex complex_at(const Literal& re, const Literal& im, long prec) { return Complex(re.to_real(prec), im.to_real(prec)); }

// precision a pair of literals actually carries; 0 means exact
long carried_bits(const Literal& re, const Literal& im) {
  if (re.exact && im.exact) return 0;
  if (re.exact) return im.inferred_bits;
  if (im.exact) return re.inferred_bits;
  return std::min(re.inferred_bits, im.inferred_bits);
}

struct Common {
  long prec_bits = 0;
  std::string format = "json";
  bool telemetry = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--prec-bits", c.prec_bits, "working precision in bits (default $" + std::string(kPrecisionEnv) +
                                                   " or " + std::to_string(kDefaultPrecision) + ")");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json"}));
  sub->add_flag("--telemetry", c.telemetry, "append operation counts to the record");
}

Json cmd_eval_j(const Literal& re, const Literal& im, long prec, const std::string& method) {
  const long w = prec + kGuardBits;
  Complex tau = complex_at(re, im, w);
  if (!(tau.im().sign() > 0)) throw DomainError("Im(tau) must be positive");
  FundamentalPoint fp = reduce_to_F(ApproxComplex(tau), PrecBits(w));
  ApproxComplex j;
  if (method == "theta")
    j = j_theta(fp.tau, PrecBits(prec));
  else if (method == "fast")
    j = j_fast(fp.tau, PrecBits(prec));
  else
    j = j_qseries(fp.tau, PrecBits(prec));
  return Json{{"j_re", decimal(j.value.re(), prec)},
              {"j_im", decimal(j.value.im(), prec)},
              {"prec_bits", prec},
              {"method", method}};
}

Json cmd_invert(const Literal& re, const Literal& im, long prec) {
  Complex j = complex_at(re, im, prec + kGuardBits);
  InversionResult r = invert(ApproxComplex(j), PrecBits(prec));
  const long q = r.achieved_bits.bits;
  const Complex& t = r.tau.tau.value;
  Json steps = r.newton_steps;
  return Json{{"tau_re", decimal(t.re(), q)},
              {"tau_im", decimal(t.im(), q)},
              {"achieved_bits", q},
              {"precision_kind", std::string(to_string(r.kind))},
              {"regime", std::string(to_string(r.regime))},
              {"doublings", r.doublings},
              {"newton_steps", steps},
              {"secant_iterations", r.secant_iterations}};
}

Json cmd_cm(const Literal& re, const Literal& im, long degree, const Literal& height, long input_bits) {
  const Real h = height.to_real(128);
  const long req = required_precision(degree, h).bits;
  long bits = carried_bits(re, im);
  if (input_bits > 0) bits = input_bits;
  if (bits == 0) bits = req;  // exact input, approximate to what is needed
  if (bits < req)
    throw PrecisionError("input carries " + std::to_string(bits) + " bits, " + std::to_string(req) + " are required");
  const long w = std::max(bits, req) + kGuardBits;
  AlgebraicInput in{ApproxComplex(complex_at(re, im, w), PrecisionClaim{PrecisionKind::Relative, PrecBits(bits)}),
                    degree, h};
  CMResult r = is_cm(in);
  Json out{{"is_cm", r.is_cm}};
  if (r.form) {
    out["discriminant"] = r.form->D.get_str();
    out["form_a"] = r.form->a.get_str();
    out["form_b"] = r.form->b.get_str();
    out["form_c"] = r.form->c.get_str();
  } else {
    out["discriminant"] = nullptr;
    out["form_a"] = nullptr;
    out["form_b"] = nullptr;
    out["form_c"] = nullptr;
  }
  if (r.tau) {
    const Complex& t = r.tau->tau.value;
    out["tau_re"] = decimal(t.re(), 128);
    out["tau_im"] = decimal(t.im(), 128);
  } else {
    out["tau_re"] = nullptr;
    out["tau_im"] = nullptr;
  }
  out["required_bits"] = r.required_bits;
  out["rule"] = r.certificate.rule;
  out["rule_lhs"] = r.certificate.lhs.to_decimal(8);
  out["rule_rhs"] = r.certificate.rhs.to_decimal(8);
  return out;
}

Json cmd_phi2_root(const Literal& jre, const Literal& jim, const Literal& sre, const Literal& sim, long steps,
                   long prec) {
  const long w = prec + kGuardBits;
  ApproxComplex j(complex_at(jre, jim, w));
  ApproxComplex start(complex_at(sre, sim, w));
  std::vector<Real> residuals;
  ApproxComplex z = newton_solve(specialize(j, w), start, steps, PrecBits(prec), &residuals);
  Json res = Json::array();
  for (const Real& r : residuals) res.push_back(r.to_decimal(8));
  return Json{{"z_re", decimal(z.value.re(), prec)},
              {"z_im", decimal(z.value.im(), prec)},
              {"steps", steps},
              {"prec_bits", prec},
              {"residuals", res}};
}

Json error_record(const std::string& kind, const std::string& message, int code) {
  return Json{{"error", kind}, {"message", message}, {"exit_code", code}};
}

}  // namespace

Real Literal::to_real(long prec) const {
  if (exact) return Real(*exact, prec);
  return Real::parse(text, prec);
}

Literal parse_literal(std::string_view raw) {
  const std::string s = normalize_minus(raw);
  Literal lit;
  lit.text = s;
  static const std::regex rational(R"(^([+-]?\d+)/(\d+)$)");
  static const std::regex dec(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
  std::smatch m;
  if (std::regex_match(s, m, rational)) {
    mpz_class den(m[2].str());
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    mpq_class q(mpz_class(m[1].str()), den);
    q.canonicalize();
    lit.exact = q;
    return lit;
  }
  if (!std::regex_match(s, m, dec) || (m[2].length() == 0 && m[3].length() == 0))
    throw std::invalid_argument("not a number: '" + std::string(raw) + "'");
  const std::string int_part = m[2].str();
  const std::string frac = m[3].str();
  const long exp10 = m[4].matched ? std::stol(m[4].str()) : 0;
  if (!m[3].matched && exp10 >= 0 && exp10 <= kMaxExactExponent) {
    mpz_class v(int_part.empty() ? "0" : int_part);
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10));
    v *= p10;
    if (m[1].str() == "-") v = -v;
    lit.exact = mpq_class(v);
    return lit;
  }
  std::string digits = int_part + frac;
  const auto nz = digits.find_first_not_of('0');
  const long significant = nz == std::string::npos ? 1 : static_cast<long>(digits.size() - nz);
  lit.inferred_bits = static_cast<long>(std::ceil(significant * std::log2(10.0)));
  return lit;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modular j-function evaluation, inversion and CM testing"};
  app.require_subcommand(1);

  Common common;
  std::string method = "qseries";
  std::vector<std::string> eval_args, invert_args, cm_args, phi2_args;
  long degree = 1;
  std::string height;
  long input_bits = 0;
  long steps = 20;

  CLI::App* eval = app.add_subcommand("eval-j", "evaluate j(tau); args: TAU_RE TAU_IM");
  add_common(eval, common);
  eval->add_option("--method", method)->check(CLI::IsMember({"qseries", "theta", "fast"}));
  eval->add_option("values", eval_args)->expected(2)->required();

  CLI::App* inv = app.add_subcommand("invert", "find tau in F with j(tau) = J; args: J_RE [J_IM]");
  add_common(inv, common);
  inv->add_option("values", invert_args)->expected(1, 2)->required();

  CLI::App* cm = app.add_subcommand("cm", "decide whether J is a singular modulus; args: J_RE [J_IM]");
  add_common(cm, common);
  cm->add_option("--degree", degree, "degree bound d")->check(CLI::PositiveNumber);
  cm->add_option("--height", height, "height bound H >= e^e (Mahler measure <= H^d)")->required();
  cm->add_option("--input-bits", input_bits, "override the precision inferred from decimal input");
  cm->add_option("values", cm_args)->expected(1, 2)->required();

  CLI::App* phi2 = app.add_subcommand("phi2-root", "Newton on Phi_2(J, z); args: J_RE J_IM START_RE START_IM");
  add_common(phi2, common);
  phi2->add_option("--steps", steps)->check(CLI::NonNegativeNumber);
  phi2->add_option("values", phi2_args)->expected(4)->required();

  for (auto* sub : {eval, inv, cm, phi2}) sub->positionals_at_end(false);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n";
    out << error_record("parse", e.what(), kParseError).dump() << "\n";
    return kParseError;
  }

  auto lit = [](const std::vector<std::string>& v, std::size_t i) {
    return i < v.size() ? parse_literal(v[i]) : parse_literal("0");
  };
  try {
    const long prec = common.prec_bits > 0 ? common.prec_bits : default_precision();
    OpTally tally;
    Json record;
    {
      std::optional<TelemetryScope> scope;
      if (common.telemetry) scope.emplace(tally);
      if (eval->parsed()) {
        record = cmd_eval_j(lit(eval_args, 0), lit(eval_args, 1), prec, method);
      } else if (inv->parsed()) {
        record = cmd_invert(lit(invert_args, 0), lit(invert_args, 1), prec);
      } else if (cm->parsed()) {
        record = cmd_cm(lit(cm_args, 0), lit(cm_args, 1), degree, parse_literal(height), input_bits);
      } else {
        record = cmd_phi2_root(lit(phi2_args, 0), lit(phi2_args, 1), lit(phi2_args, 2), lit(phi2_args, 3), steps,
                               prec);
      }
    }
    if (common.telemetry) record["telemetry"] = telemetry_json(tally);
    out << record.dump() << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    out << error_record("parse", e.what(), kParseError).dump() << "\n";
    return kParseError;
  } catch (const DomainError& e) {
    err << e.what() << "\n";
    out << error_record("domain", e.what(), kDomainError).dump() << "\n";
    return kDomainError;
  } catch (const NumericalError& e) {
    err << e.what() << "\n";
    out << error_record("numerical", e.what(), kDomainError).dump() << "\n";
    return kDomainError;
  } catch (const PrecisionError& e) {
    err << e.what() << "\n";
    out << error_record("precision", e.what(), kInsufficientPrecision).dump() << "\n";
    return kInsufficientPrecision;
  } catch (const Error& e) {
    err << e.what() << "\n";
    out << error_record("certification", e.what(), kCertificationError).dump() << "\n";
    return kCertificationError;
  }
}

}  // namespace jinv::cli
