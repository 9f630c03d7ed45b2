#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "liesym/liesym.hpp"

using json = nlohmann::ordered_json;
using namespace liesym;

namespace {

struct Config {
  int n = 2;
  std::string theta_text = "sym";
  std::optional<Rational> theta;
  std::uint64_t seed = 1;
  int trials = 100;
  int degree = 2;
  std::string output = "text";
  int jobs = 1;
  bool timing = false;
};

struct Outcome {
  json results = json::array();
  bool ok = true;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadParams("cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_rational_literal(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (digits == 0) return false;
  if (i == s.size()) return true;
  if (s[i] != '/') return false;
  ++i;
  digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  return digits > 0 && i == s.size();
}

Rational parse_rational(const std::string& s, const std::string& what) {
  if (!is_rational_literal(s)) throw BadParams(what + " must be an exact rational p/q, got '" + s + "'");
  Rational r = Rational::parse(s);
  return r;
}

Rational json_rational(const json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>(), what);
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw BadParams(what + " must be an integer or a \"p/q\" string");
}

std::vector<Rational> json_vector(const json& obj, const char* key, int n) {
  if (!obj.contains(key)) return std::vector<Rational>(n, Rational(0));
  const json& a = obj.at(key);
  if (!a.is_array() || static_cast<int>(a.size()) != n) {
    throw BadParams(std::string("element field '") + key + "' must be an array of N entries");
  }
  std::vector<Rational> v;
  for (const auto& e : a) v.push_back(json_rational(e, key));
  return v;
}

RationalMatrix json_matrix(const json& obj, const char* key, int n) {
  if (!obj.contains(key)) return RationalMatrix::identity(n);
  const json& a = obj.at(key);
  if (!a.is_array() || static_cast<int>(a.size()) != n) {
    throw BadParams(std::string("element field '") + key + "' must be an N x N array");
  }
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!a[i].is_array() || static_cast<int>(a[i].size()) != n) {
      throw BadParams(std::string("element field '") + key + "' must be an N x N array");
    }
    for (int j = 0; j < n; ++j) m(i, j) = json_rational(a[i][j], key);
  }
  return m;
}

json reals(const RealVector& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(real_str(r));
  return a;
}

json env_json(const Env& env) {
  std::map<Atom, Rational> sorted(env.begin(), env.end());
  json o = json::object();
  for (const auto& [a, v] : sorted) o[a.str()] = v.str();
  return o;
}

std::string error_type(const std::exception& e) {
  if (auto p = dynamic_cast<const ParseError*>(&e)) return p->kind();
  if (dynamic_cast<const JetInCoefficient*>(&e)) return "JetInCoefficient";
  if (dynamic_cast<const BadParams*>(&e)) return "BadParams";
  if (dynamic_cast<const MissingAtom*>(&e)) return "MissingAtom";
  if (dynamic_cast<const NonSquare*>(&e)) return "NonSquare";
  if (dynamic_cast<const DivisorZero*>(&e)) return "DivisorZero";
  if (dynamic_cast<const UnsupportedOrder*>(&e)) return "UnsupportedOrder";
  if (dynamic_cast<const OrderTooLow*>(&e)) return "OrderTooLow";
  if (dynamic_cast<const SamplingExhausted*>(&e)) return "SamplingExhausted";
  if (dynamic_cast<const NotAffine*>(&e)) return "NotAffine";
  if (dynamic_cast<const DetNotOne*>(&e)) return "DetNotOne";
  if (dynamic_cast<const Singular*>(&e)) return "Singular";
  if (dynamic_cast<const PNotAllowed*>(&e)) return "PNotAllowed";
  if (dynamic_cast<const NotInvertibleHere*>(&e)) return "NotInvertibleHere";
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return "JsonError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

PdeSystem make_system(const std::string& eq, const Config& cfg, const std::string& equation_text) {
  if (eq == "ma") return build_monge_ampere(cfg.n);
  if (eq == "am") return build_affine_maximal(cfg.n, cfg.theta);
  if (eq == "custom") {
    if (equation_text.empty()) throw BadParams("--eq custom needs --equation");
    std::ifstream probe(equation_text);
    std::string text = probe ? read_file(equation_text) : equation_text;
    return build_custom(cfg.n, parse_expression(text, cfg.n));
  }
  throw BadParams("unknown equation '" + eq + "' (expected ma, am or custom)");
}

Regime regime_for(const std::string& eq, const Config& cfg) {
  if (eq == "ma") return Regime::MA;
  if (cfg.theta && *cfg.theta == Rational(cfg.n + 1, cfg.n + 2)) return Regime::AMSpecial;
  return Regime::AMGeneric;
}

// ---------------------------------------------------------------------------

Outcome cmd_prolong(const Config& cfg, const std::string& field_path, int order, bool explicit_too) {
  VectorField v = parse_vector_field(read_file(field_path), cfg.n);
  ProlongedField rec = prolong_recursive(v, order);
  std::optional<ProlongedField> ex;
  if (explicit_too) ex = prolong_explicit(v, order);
  Outcome out;
  for (const auto& [j, c] : rec.coeffs) {
    json r;
    r["J"] = j.str();
    r["order"] = j.order();
    r["phi_J"] = c.str();
    if (ex) {
      const Polynomial& e = ex->at(j);
      r["explicit"] = e.str();
      r["match"] = e == c;
      if (!(e == c)) {
        out.ok = false;
        r["difference"] = (c - e).str();
      }
    }
    out.results.push_back(r);
  }
  return out;
}

Outcome cmd_check(const Config& cfg, const std::string& eq, const std::string& equation_text,
                  const std::string& field_path, const std::string& basis_name) {
  PdeSystem sys = make_system(eq, cfg, equation_text);
  GeneratorBasis fields{cfg.n, Regime::MA, {}, {}};
  if (!field_path.empty()) fields.add(field_path, parse_vector_field(read_file(field_path), cfg.n));
  if (!basis_name.empty()) {
    GeneratorBasis b = basis_for(parse_regime(basis_name), cfg.n);
    for (std::size_t k = 0; k < b.size(); ++k) fields.add(b.names[k], b.fields[k]);
  }
  if (fields.size() == 0) throw BadParams("check needs --field or --basis");
  Outcome out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    CheckReport rep = infinitesimal_check(sys, fields.fields[k], cfg.trials, cfg.seed, cfg.jobs);
    json r;
    r["name"] = fields.names[k];
    r["field"] = fields.fields[k].str();
    r["equation"] = sys.name();
    if (sys.kind == EquationKind::Custom) r["unverified_equation"] = sys.f.str();
    r["verdict"] = verdict_name(rep.verdict);
    r["passed"] = rep.passed();
    r["samples_passed"] = rep.samples_passed;
    if (rep.multiplier) r["multiplier"] = rep.multiplier->str();
    if (rep.residual) r["residual"] = rep.residual->str();
    if (rep.witness) {
      r["witness_index"] = rep.witness_index;
      r["witness"] = env_json(rep.witness->env);
    }
    if (cfg.timing) r["elapsed_ms"] = rep.elapsed_ms;
    out.ok = out.ok && rep.passed();
    out.results.push_back(r);
  }
  return out;
}

std::size_t expected_dimension(const std::string& eq, const Config& cfg) {
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  if (eq == "ma") return (n + 1) * (n + 1);
  return regime_for(eq, cfg) == Regime::AMSpecial ? n * n + 3 * n + 2 : n * n + 2 * n + 2;
}

Outcome cmd_classify(const Config& cfg, const std::string& eq) {
  if (eq != "ma" && eq != "am") throw BadParams("classify supports --eq ma or am");
  PdeSystem sys = make_system(eq, cfg, "");
  AnsatzResult res = ansatz_dimension(sys, cfg.degree);
  GeneratorBasis builtin = basis_for(regime_for(eq, cfg), cfg.n);
  const std::size_t expected = expected_dimension(eq, cfg);
  const bool span = same_span(res.basis, builtin.fields);
  // u'' = 1 is an ODE whose algebra is larger; only containment is meaningful there.
  const bool ode = eq == "ma" && cfg.n == 1;
  bool contained = true;
  for (const auto& v : builtin.fields) contained = contained && span_coefficients(res.basis, v).has_value();
  json r;
  r["equation"] = sys.name();
  r["regime"] = regime_name(builtin.regime);
  r["degree"] = cfg.degree;
  r["ansatz_unknowns"] = res.unknowns;
  r["dimension"] = res.dimension;
  r["expected"] = expected;
  r["match"] = res.dimension == expected;
  r["same_span_as_builtin"] = span;
  r["builtin_contained"] = contained;
  if (ode) r["note"] = "N=1 Monge-Ampere is an ODE; the built-in family is a proper subalgebra";
  json basis = json::array();
  for (const auto& v : res.basis) basis.push_back(v.str());
  r["basis"] = basis;
  Outcome out;
  out.ok = ode ? contained : res.dimension == expected && span;
  out.results.push_back(r);
  return out;
}

Outcome cmd_determining(const Config& cfg, const std::string& eq, const std::string& equation_text, int truncate) {
  PdeSystem sys = make_system(eq, cfg, equation_text);
  DerivativeOptions opt;
  opt.max_partial_order = truncate;
  DeterminingSystem ds = extract_determining(sys, opt);
  json r;
  r["equation"] = sys.name();
  r["max_partial_order"] = ds.max_partial_order;
  r["raw_equations"] = ds.raw_equations;
  json unknowns = json::array();
  for (Atom a : ds.unknowns) unknowns.push_back(a.str());
  r["unknowns"] = unknowns;
  json eqs = json::array();
  for (const auto& e : ds.equations) eqs.push_back(e.str());
  r["equations"] = eqs;
  Outcome out;
  out.results.push_back(r);
  return out;
}

Outcome cmd_bracket_table(const Config& cfg, const std::string& basis_name) {
  GeneratorBasis basis = basis_for(parse_regime(basis_name), cfg.n);
  json r;
  r["basis"] = regime_name(basis.regime);
  r["dimension"] = basis.size();
  json gens = json::array();
  for (std::size_t k = 0; k < basis.size(); ++k) gens.push_back({{"name", basis.names[k]}, {"field", basis.fields[k].str()}});
  r["generators"] = gens;
  Outcome out;
  try {
    StructureConstants sc = closure_check(basis);
    json consts = json::array();
    for (std::size_t a = 0; a < sc.dim; ++a) {
      for (std::size_t b = a + 1; b < sc.dim; ++b) {
        for (std::size_t k = 0; k < sc.dim; ++k) {
          if (!sc.at(a, b, k).is_zero()) consts.push_back({{"i", a}, {"j", b}, {"k", k}, {"c", sc.at(a, b, k).str()}});
        }
      }
    }
    r["closed"] = true;
    r["structure_constants"] = consts;
  } catch (const NotClosed& e) {
    r["closed"] = false;
    r["first"] = e.first();
    r["second"] = e.second();
    r["message"] = e.what();
    out.ok = false;
  }
  out.results.push_back(r);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// paraboloid[:N] | quadratic:m11,m12,... (row-major) | am1d:theta,a,b
SolutionSample parse_solution(const std::string& spec, int n, bool unit_det, std::optional<Rational>& family_theta) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "paraboloid") {
    if (!params.empty() && std::to_string(n) != params) throw BadParams("paraboloid dimension differs from --dim");
    return paraboloid(n);
  }
  if (name == "quadratic") {
    auto parts = split(params, ',');
    if (static_cast<int>(parts.size()) != n * n) throw BadParams("quadratic needs N*N matrix entries");
    RationalMatrix m(n, n);
    for (int i = 0; i < n * n; ++i) m(i / n, i % n) = parse_rational(parts[i], "quadratic entry");
    return quadratic_solution(m, {}, Rational(0), unit_det);
  }
  if (name == "am1d") {
    auto parts = split(params, ',');
    if (parts.size() != 3) throw BadParams("am1d needs theta,a,b");
    if (n != 1) throw BadParams("am1d is a one-dimensional family; use --dim 1");
    family_theta = parse_rational(parts[0], "am1d theta");
    return am_one_dim_family(*family_theta, parse_rational(parts[1], "a"), parse_rational(parts[2], "b"));
  }
  throw BadParams("unknown solution family '" + name + "'");
}

Outcome cmd_orbit(Config cfg, const std::string& eq, const std::string& element_path, const std::string& solution_spec,
                  int points) {
  if (eq != "ma" && eq != "am") throw BadParams("orbit supports --eq ma or am");
  if (points < 1) throw BadParams("--points must be at least 1");
  std::optional<Rational> family_theta;
  SolutionSample s = parse_solution(solution_spec, cfg.n, eq == "ma", family_theta);
  json el = json::parse(read_file(element_path));
  const std::string type = el.value("type", "");
  if (eq == "am" && !cfg.theta) {
    if (family_theta) {
      cfg.theta = family_theta;
    } else if (type == "am" && el.value("regime", std::string()) == "am-special") {
      cfg.theta = Rational(cfg.n + 1, cfg.n + 2);
    } else {
      throw BadParams("orbit on the affine maximal equation needs a rational --theta");
    }
  }
  PdeSystem sys = make_system(eq, cfg, "");
  const Regime regime = regime_for(eq, cfg);

  json r;
  r["equation"] = sys.name();
  r["solution"] = s.description;
  SolutionSample t;
  if (type == "ma") {
    GroupElement g = make_ma_element(json_rational(el.value("lambda", json(1)), "lambda"), json_matrix(el, "Abar", cfg.n),
                                     json_vector(el, "B", cfg.n), json_vector(el, "D", cfg.n),
                                     json_rational(el.value("d", json(0)), "d"));
    r["member"] = eq == "ma" ? is_ma_element(g) : is_am_element(g, regime);
    t = act(g, s);
  } else if (type == "am") {
    Regime er = parse_regime(el.value("regime", std::string("am-generic")));
    GroupElement g = make_am_element(json_matrix(el, "Q", cfg.n), json_vector(el, "P", cfg.n),
                                     json_vector(el, "D", cfg.n), json_rational(el.value("c", json(1)), "c"),
                                     json_vector(el, "R", cfg.n), json_rational(el.value("d", json(0)), "d"), er);
    r["member"] = eq == "ma" ? is_ma_element(g) : is_am_element(g, regime);
    t = act(g, s);
  } else if (type == "flow") {
    VectorField v = parse_vector_field(el.at("generator").get<std::string>(), cfg.n);
    Exponential ex = exponentiate(v, json_rational(el.at("epsilon"), "epsilon"));
    r["member"] = span_coefficients(basis_for(regime, cfg.n).fields, v).has_value();
    r["exact_exponential"] = ex.exact;
    if (!ex.exact) r["exponential_error_bound"] = real_str(ex.error_bound, 6);
    t = ex.exact ? act(*ex.exact_element, s) : act_numeric(ex.element, s);
  } else {
    throw BadParams("element file needs \"type\": \"ma\", \"am\" or \"flow\"");
  }
  r["local"] = t.local;
  Outcome out;
  if (t.is_polynomial()) {
    Polynomial rp = residual_polynomial(t, [&] {
      PdeSystem pinned = sys;
      if (sys.theta_symbolic()) pinned.f = substitute(sys.f, Atom::theta(), Polynomial(*cfg.theta));
      return pinned;
    }());
    r["transformed"] = t.poly.str();
    r["exact"] = true;
    r["residual_polynomial"] = rp.str();
    r["tolerance"] = "0";
    r["passed"] = rp.is_zero();
    out.ok = rp.is_zero();
  } else {
    const Real tol = t.local ? Real("1e-6") : Real("1e-8");
    auto vals = residual(t, sys, domain_points(t, points), cfg.theta);
    Real worst = 0;
    json pts = json::array();
    for (const auto& v : vals) {
      worst = std::max(worst, Real(abs(v.value)));
      pts.push_back({{"point", reals(v.point)}, {"value", real_str(v.value, 6)}, {"error", real_str(v.error, 3)}});
    }
    r["exact"] = false;
    r["points"] = pts;
    r["max_abs_residual"] = real_str(worst, 6);
    r["tolerance"] = real_str(tol, 1);
    r["passed"] = worst < tol;
    out.ok = worst < tol;
  }
  out.results.push_back(r);
  return out;
}

Outcome cmd_sample(const Config& cfg, const std::string& eq, const std::string& equation_text, int count) {
  if (count < 1) throw BadParams("--count must be at least 1");
  PdeSystem sys = make_system(eq, cfg, equation_text);
  auto pts = sample_on_variety(sys, cfg.seed, count);
  Outcome out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Rational fval = evaluate(sys.f, pts[k].env);
    out.results.push_back({{"index", k}, {"F", fval.str()}, {"values", env_json(pts[k].env)}});
    out.ok = out.ok && fval.is_zero();
  }
  return out;
}

// ---------------------------------------------------------------------------

void print_text(const std::string& command, const Outcome& out) {
  for (const auto& r : out.results) {
    if (command == "prolong") {
      std::cout << "phi^(" << r["J"].get<std::string>() << ") = " << r["phi_J"].get<std::string>() << "\n";
      if (r.contains("match") && !r["match"].get<bool>()) {
        std::cout << "  explicit path differs by " << r["difference"].get<std::string>() << "\n";
      }
    } else if (command == "check") {
      std::cout << r["name"].get<std::string>() << ": " << r["verdict"].get<std::string>();
      if (r.contains("multiplier")) std::cout << " (multiplier " << r["multiplier"].get<std::string>() << ")";
      if (r.contains("residual")) {
        std::cout << " (sample " << r["witness_index"].get<int>() << ", residual " << r["residual"].get<std::string>()
                  << ")";
      }
      std::cout << "\n";
    } else if (command == "classify") {
      std::cout << r["equation"].get<std::string>() << " degree " << r["degree"].get<int>() << ": dimension "
                << r["dimension"].get<std::size_t>() << " (expected " << r["expected"].get<std::size_t>() << ")"
                << (r["match"].get<bool>() ? "" : " MISMATCH")
                << (r["same_span_as_builtin"].get<bool>() ? "" : " span differs from built-in basis") << "\n";
      if (r.contains("note")) std::cout << "  note: " << r["note"].get<std::string>() << "\n";
      for (const auto& b : r["basis"]) std::cout << "  " << b.get<std::string>() << "\n";
    } else if (command == "determining") {
      std::cout << r["equations"].size() << " equations (" << r["raw_equations"].get<std::size_t>()
                << " before reduction) in " << r["unknowns"].size() << " unknowns\n";
      for (const auto& e : r["equations"]) std::cout << "  " << e.get<std::string>() << " = 0\n";
    } else if (command == "bracket-table") {
      const auto& g = r["generators"];
      if (!r["closed"].get<bool>()) {
        std::cout << "not closed: " << r["message"].get<std::string>() << "\n";
        continue;
      }
      std::cout << r["basis"].get<std::string>() << ": " << r["dimension"].get<std::size_t>() << " generators, closed\n";
      std::map<std::pair<std::size_t, std::size_t>, std::string> rows;
      for (const auto& c : r["structure_constants"]) {
        std::string& row = rows[{c["i"].get<std::size_t>(), c["j"].get<std::size_t>()}];
        row += (row.empty() ? " (" : " + (") + c["c"].get<std::string>() + ") " +
               g[c["k"].get<std::size_t>()]["name"].get<std::string>();
      }
      for (const auto& [ij, row] : rows) {
        std::cout << "  [" << g[ij.first]["name"].get<std::string>() << ", " << g[ij.second]["name"].get<std::string>()
                  << "] =" << row << "\n";
      }
    } else if (command == "orbit") {
      std::cout << r["solution"].get<std::string>() << " under the element: ";
      if (r["exact"].get<bool>()) {
        std::cout << r["transformed"].get<std::string>() << "\n  residual " << r["residual_polynomial"].get<std::string>();
      } else {
        std::cout << (r["local"].get<bool>() ? "local " : "") << "numeric\n  max |residual| "
                  << r["max_abs_residual"].get<std::string>() << " (tolerance " << r["tolerance"].get<std::string>()
                  << ")";
      }
      std::cout << (r["passed"].get<bool>() ? "  pass" : "  FAIL") << "\n";
    } else if (command == "sample") {
      std::cout << "#" << r["index"].get<std::size_t>() << ":";
      for (const auto& [k, v] : r["values"].items()) std::cout << " " << k << "=" << v.get<std::string>();
      std::cout << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie point symmetries of Monge-Ampere and affine maximal type equations"};
  app.fallthrough();
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--dim,-N", cfg.n, "number of independent variables")->check(CLI::Range(1, kMaxDim));
  app.add_option("--theta", cfg.theta_text, "theta as p/q or sym");
  app.add_option("--seed", cfg.seed, "random seed")->envname("LIESYM_SEED");
  app.add_option("--trials", cfg.trials, "samples per sampling check")->check(CLI::PositiveNumber);
  app.add_option("--degree", cfg.degree, "ansatz degree")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--timing", cfg.timing, "report wall-clock time");

  std::string eq, field, basis, equation, element, solution;
  int order = 2, truncate = -1, points = 10, count = 5;
  bool explicit_too = false;

  auto* prolong = app.add_subcommand("prolong", "prolongation coefficients of a vector field");
  prolong->add_option("--field", field, "vector field file")->required();
  prolong->add_option("--order", order, "prolongation order")->required()->check(CLI::Range(1, 8));
  prolong->add_flag("--explicit", explicit_too, "also compute the closed-form coefficients and compare");

  auto* check = app.add_subcommand("check", "infinitesimal symmetry check");
  check->add_option("--eq", eq, "ma, am or custom")->required();
  check->add_option("--field", field, "vector field file");
  check->add_option("--basis", basis, "check every generator of a built-in basis");
  check->add_option("--equation", equation, "custom equation (expression or file)");

  auto* classify = app.add_subcommand("classify", "polynomial ansatz for the symmetry algebra");
  classify->add_option("--eq", eq, "ma or am")->required();

  auto* determining = app.add_subcommand("determining", "determining equations");
  determining->add_option("--eq", eq, "ma, am or custom")->required();
  determining->add_option("--equation", equation, "custom equation (expression or file)");
  determining->add_option("--truncate", truncate, "drop partials above this order (-1: none)");

  auto* brackets = app.add_subcommand("bracket-table", "structure constants of a built-in basis");
  brackets->add_option("--basis", basis, "ma, am-generic or am-special")->required();

  auto* orbit = app.add_subcommand("orbit", "act on a solution and report the residual");
  orbit->add_option("--eq", eq, "ma or am")->required();
  orbit->add_option("--element", element, "group element JSON file")->required();
  orbit->add_option("--solution", solution, "paraboloid[:N] | quadratic:<entries> | am1d:theta,a,b")->required();
  orbit->add_option("--points", points, "number of evaluation points");

  auto* sample = app.add_subcommand("sample", "random rational points on the solution variety");
  sample->add_option("--eq", eq, "ma, am or custom")->required();
  sample->add_option("--equation", equation, "custom equation (expression or file)");
  sample->add_option("--count", count, "number of points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  json report;
  report["schema"] = 1;
  report["command"] = command;
  report["config"] = {{"N", cfg.n},           {"theta", cfg.theta_text}, {"seed", cfg.seed},
                      {"trials", cfg.trials}, {"degree", cfg.degree},    {"output", cfg.output}};
  try {
    if (cfg.theta_text != "sym") {
      cfg.theta = parse_rational(cfg.theta_text, "--theta");
      if (cfg.theta->sign() <= 0) throw BadParams("--theta must be positive");
    }
    Outcome out;
    if (command == "prolong") {
      out = cmd_prolong(cfg, field, order, explicit_too);
    } else if (command == "check") {
      out = cmd_check(cfg, eq, equation, field, basis);
    } else if (command == "classify") {
      out = cmd_classify(cfg, eq);
    } else if (command == "determining") {
      out = cmd_determining(cfg, eq, equation, truncate);
    } else if (command == "bracket-table") {
      out = cmd_bracket_table(cfg, basis);
    } else if (command == "orbit") {
      out = cmd_orbit(cfg, eq, element, solution, points);
    } else {
      out = cmd_sample(cfg, eq, equation, count);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report["passed"] = out.ok;
    report["results"] = out.results;
    if (cfg.timing) report["timing_ms"] = ms;
    if (cfg.output == "json") {
      std::cout << report.dump(2) << "\n";
    } else {
      print_text(command, out);
      std::cout << (out.ok ? "PASS" : "FAIL");
      if (cfg.timing) std::cout << " (" << ms << " ms)";
      std::cout << "\n";
    }
    return out.ok ? 0 : 1;
  } catch (const std::exception& e) {
    json err{{"type", error_type(e)}, {"message", e.what()}};
    if (auto p = dynamic_cast<const ParseError*>(&e)) {
      err["line"] = p->line();
      err["column"] = p->column();
    }
    if (cfg.output == "json") {
      report["passed"] = false;
      report["error"] = err;
      std::cout << report.dump(2) << "\n";
    } else {
      std::cerr << "error (" << err["type"].get<std::string>() << "): " << e.what() << "\n";
    }
    return 2;
  }
}
