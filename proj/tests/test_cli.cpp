#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "json.hpp"

#include "support.hpp"

using namespace liesym;
using namespace liesym::testing;

namespace {

Polynomial x(int i) { return Polynomial::x(i); }
Polynomial u(std::initializer_list<int> j) { return Polynomial::jet(MultiIndex(j)); }

ParseError parse_failure(const std::string& text, int n = 0) {
  try {
    parse_expression(text, n);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for " << text;
  return ParseError("none", "", 0, 0);
}

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(LIESYM_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(LIESYM_SAMPLES) + "/" + name; }

nlohmann::json run_json(const std::string& args, int expected_status) {
  CliRun r = run_cli("--output json " + args);
  EXPECT_EQ(r.status, expected_status) << args << "\n" << r.out;
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST(Parser, Expressions) {
  EXPECT_EQ(parse_expression("u[2,1]"), u({1, 2}));
  EXPECT_EQ(parse_expression("x1^2 - 3/4*u + 2"), x(1) * x(1) - Polynomial::u() * Rational(3, 4) + 2);
  EXPECT_EQ(parse_expression("-(x1 - x2)*(x1 + x2)"), x(2) * x(2) - x(1) * x(1));
  EXPECT_EQ(parse_expression("u[1,1]*u[2,2] - u[1,2]^2 - 1", 2).str(), build_monge_ampere(2).f.str());
  EXPECT_EQ(parse_expression("theta*u[1,1,1]^2 - u[1,1]*u[1,1,1,1] + u[1,1,1]^2", 1), build_affine_maximal(1).f);
  EXPECT_EQ(parse_expression("  # leading comment\n x1 # trailing\n"), x(1));
}

TEST(Parser, RoundTripsPrintedPolynomials) {
  for (const auto& f : {build_monge_ampere(3).f, build_affine_maximal(2).f, build_affine_maximal(2, Rational(3, 4)).f}) {
    EXPECT_EQ(parse_expression(f.str()), f);
  }
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial p = random_polynomial(rng, xu_atoms(3), 6, 3);
    EXPECT_EQ(parse_expression(p.str(), 3), p) << p.str();
  }
}

TEST(Parser, VectorFields) {
  VectorField v = parse_vector_field("xi1 = 2*x1; xi2 = 0; phi = 2*u", 2);
  EXPECT_EQ(v, gen::ma_dilation(2, 1));
  VectorField w = parse_vector_field("# rotation\nphi = x1\nxi1 = -u\n", 1);
  EXPECT_EQ(w.xi(1), Polynomial::u() * Rational(-1));
  EXPECT_EQ(w.phi(), x(1));
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    VectorField f = random_field(rng, 2);
    EXPECT_EQ(parse_vector_field(f.str(), 2), f) << f.str();
  }
  EXPECT_EQ(parse_vector_field("", 2), gen::field(2, 1, Polynomial(), Polynomial()));
}

TEST(Parser, Errors) {
  EXPECT_THROW(parse_vector_field("phi = u[1,1]", 2), JetInCoefficient);
  EXPECT_THROW(parse_vector_field("xi3 = 1", 2), ParseError);
  EXPECT_THROW(parse_vector_field("phi = 1; phi = 2", 2), ParseError);
  EXPECT_THROW(parse_vector_field("phi = 1", 0), Error);

  ParseError div = parse_failure("x1/2");
  EXPECT_EQ(div.kind(), "DivisionNotSupported");
  EXPECT_EQ(div.line(), 1);
  EXPECT_EQ(div.column(), 3);
  EXPECT_EQ(parse_failure("u[1,3]", 2).kind(), "IndexOutOfRange");
  EXPECT_EQ(parse_failure("x0").kind(), "IndexOutOfRange");
  EXPECT_EQ(parse_failure("0.5*x1").kind(), "SyntaxError");
  EXPECT_EQ(parse_failure("x1 +").kind(), "SyntaxError");
  EXPECT_EQ(parse_failure("(x1").kind(), "SyntaxError");
  EXPECT_EQ(parse_failure("y1").kind(), "SyntaxError");
  ParseError second_line = parse_failure("x1 +\n  $");
  EXPECT_EQ(second_line.line(), 2);
  EXPECT_EQ(second_line.column(), 3);
}

TEST(Cli, CheckVerdictsAndExitCodes) {
  nlohmann::json ok = run_json("--dim 2 check --eq ma --field " + sample("v5.vf"), 0);
  EXPECT_EQ(ok["schema"], 1);
  EXPECT_EQ(ok["command"], "check");
  EXPECT_TRUE(ok["passed"].get<bool>());
  EXPECT_FALSE(ok.contains("timing_ms"));
  ASSERT_EQ(ok["results"].size(), 1u);
  EXPECT_EQ(ok["results"][0]["verdict"], "identically-zero");

  nlohmann::json bad = run_json("--dim 2 --theta 1 check --eq am --field " + sample("v6.vf"), 1);
  EXPECT_FALSE(bad["passed"].get<bool>());
  EXPECT_EQ(bad["results"][0]["verdict"], "fails");
  EXPECT_TRUE(bad["results"][0].contains("witness"));

  nlohmann::json special = run_json("--dim 2 --theta 3/4 check --eq am --field " + sample("v6.vf"), 0);
  EXPECT_EQ(special["results"][0]["verdict"], "multiplier-found");

  nlohmann::json perturbed = run_json("--dim 2 check --eq ma --field " + sample("perturbed.vf"), 1);
  EXPECT_EQ(perturbed["results"][0]["verdict"], "fails");
}

TEST(Cli, StructuredErrors) {
  nlohmann::json e = run_json("--dim 2 --theta 0.75 check --eq am --basis am-generic", 2);
  EXPECT_FALSE(e["passed"].get<bool>());
  EXPECT_EQ(e["error"]["type"], "BadParams");
  EXPECT_TRUE(e.contains("config"));

  CliRun missing = run_cli("--dim 2 check --eq ma --field /nonexistent.vf");
  EXPECT_EQ(missing.status, 2);
  CliRun unknown = run_cli("frobnicate");
  EXPECT_EQ(unknown.status, 2);
  CliRun range = run_cli("--dim 9 classify --eq ma");
  EXPECT_EQ(range.status, 2);
}

TEST(Cli, BasisCheckIsIndependentOfJobs) {
  const std::string args = "--dim 2 --theta sym check --eq am --basis am-generic --seed 7";
  CliRun one = run_cli("--output json --jobs 1 " + args);
  CliRun four = run_cli("--output json --jobs 4 " + args);
  EXPECT_EQ(one.status, 0);
  EXPECT_EQ(one.out, four.out);
  nlohmann::json j = nlohmann::json::parse(one.out);
  EXPECT_EQ(j["results"].size(), 10u);
  EXPECT_EQ(j["config"]["seed"], 7);
}

TEST(Cli, SeedChangesSamplesButNotVerdicts) {
  CliRun a = run_cli("--output json --dim 2 --seed 1 sample --eq ma --count 3");
  CliRun b = run_cli("--output json --dim 2 --seed 2 sample --eq ma --count 3");
  CliRun c = run_cli("--output json --dim 2 --seed 1 sample --eq ma --count 3");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NE(a.out, b.out);
}

TEST(Cli, Classify) {
  nlohmann::json j = run_json("--dim 2 --theta 3/4 classify --eq am", 0);
  EXPECT_EQ(j["results"][0]["dimension"], 12);
  EXPECT_TRUE(j["results"][0]["same_span_as_builtin"].get<bool>());
  nlohmann::json ma = run_json("--dim 2 classify --eq ma", 0);
  EXPECT_EQ(ma["results"][0]["dimension"], 9);
}

TEST(Cli, BracketTableAndDetermining) {
  nlohmann::json t = run_json("--dim 2 bracket-table --basis ma", 0);
  EXPECT_TRUE(t["passed"].get<bool>());
  nlohmann::json d = run_json("--dim 2 determining --eq ma", 0);
  EXPECT_EQ(d["results"][0]["equations"].size(), 18u);
}

TEST(Cli, OrbitSamples) {
  for (const auto& [element, solution, n] :
       {std::tuple<std::string, std::string, int>{"shear.json", "paraboloid", 2}, {"scaling-1d.json", "am1d:1/2,1,1", 1},
        {"rotation.json", "paraboloid", 2}, {"dilation-flow.json", "paraboloid", 2}}) {
    const std::string eq = element == "shear.json" || element == "dilation-flow.json" ? "ma" : "am";
    nlohmann::json j = run_json("--dim " + std::to_string(n) + " orbit --eq " + eq + " --element " + sample(element) +
                                    " --solution " + solution,
                                0);
    EXPECT_TRUE(j["passed"].get<bool>()) << element;
  }
}

TEST(Cli, ProlongAgreesWithExplicit) {
  CliRun a = run_cli("--output json --dim 2 prolong --field " + sample("v5.vf") + " --order 3");
  CliRun b = run_cli("--output json --dim 2 prolong --field " + sample("v5.vf") + " --order 3 --explicit");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(b.status, 0);
  auto ja = nlohmann::json::parse(a.out);
  auto jb = nlohmann::json::parse(b.out);
  ASSERT_EQ(ja["results"].size(), jb["results"].size());
  for (std::size_t k = 0; k < ja["results"].size(); ++k) EXPECT_EQ(ja["results"][k]["phi_J"], jb["results"][k]["phi_J"]);
}

TEST(Cli, TimingOnlyOnRequest) {
  nlohmann::json j = run_json("--timing --dim 1 classify --eq ma", 0);
  EXPECT_TRUE(j.contains("timing_ms"));
}
