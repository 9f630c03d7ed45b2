// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "support.hpp"

using namespace liesym;
using namespace liesym::testing;

namespace {

constexpr int kTrials = 100;
constexpr std::uint64_t kSeed = 1;

int jobs() { return static_cast<int>(std::max(1U, std::min(8U, std::thread::hardware_concurrency()))); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "first failure: ";
      else detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  std::string tolerance;
  double budget_s;
  std::function<void(Outcome&)> body;
};

RationalMatrix diag(std::initializer_list<Rational> d) {
  RationalMatrix m(d.size(), d.size());
  std::size_t i = 0;
  for (const auto& v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

RationalMatrix random_sl(std::mt19937_64& rng, int n) {
  RationalMatrix m = RationalMatrix::identity(n);
  for (int step = 0; step < 3 * n; ++step) {
    int i = static_cast<int>(rng() % n);
    int j = static_cast<int>(rng() % n);
    if (i == j) continue;
    RationalMatrix e = RationalMatrix::identity(n);
    e(i, j) = random_rational(rng, 3, 2);
    m = m * e;
  }
  return m;
}

RationalMatrix random_unit_spd(std::mt19937_64& rng, int n) {
  RationalMatrix d = RationalMatrix::identity(n);
  Rational prod(1);
  for (int i = 0; i + 1 < n; ++i) {
    d(i, i) = Rational(static_cast<int>(rng() % 5) + 1, static_cast<int>(rng() % 3) + 1);
    prod *= d(i, i);
  }
  d(n - 1, n - 1) = prod.inverse();
  RationalMatrix s = random_sl(rng, n);
  return s.transpose() * d * s;
}

Real max_residual(const SolutionSample& s, const PdeSystem& sys, int points, Real fraction = Real("0.5")) {
  Real worst = 0;
  for (const auto& r : residual(s, sys, domain_points(s, points, fraction))) worst = std::max(worst, Real(abs(r.value)));
  return worst;
}

std::string sci(const Real& r) { return real_str(r, 2); }

void prolongation_oracle(Outcome& o) {
  std::mt19937_64 rng(101);
  int fields = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 2; k <= 4; ++k) {
      for (int trial = 0; trial < 50; ++trial) {
        VectorField v = random_field(rng, n, 5, 3);
        ProlongedField a = prolong_explicit(v, k);
        ProlongedField b = prolong_recursive(v, k);
        bool same = a.coeffs.size() == b.coeffs.size();
        for (const auto& [j, c] : b.coeffs) same = same && a.coeffs.count(j) && a.at(j) == c;
        o.require(same, "N=" + std::to_string(n) + " k=" + std::to_string(k) + " field " + v.str());
        ++fields;
      }
    }
  }
  o.detail << fields << " fields over 9 configurations";
}

void ma_basis_annihilates(Outcome& o) {
  for (int n = 2; n <= 3; ++n) {
    GeneratorBasis b = ma_basis(n);
    o.require(b.size() == static_cast<std::size_t>((n + 1) * (n + 1)), "basis size at N=" + std::to_string(n));
    PdeSystem ma = build_monge_ampere(n);
    for (std::size_t k = 0; k < b.size(); ++k) {
      o.require(apply_prolonged(b.fields[k], ma.f, 2).is_zero(), b.names[k] + " at N=" + std::to_string(n));
    }
  }
  o.detail << "9 + 16 generators";
}

void am_basis_passes(Outcome& o) {
  int counts[4] = {0, 0, 0, 0};
  auto run = [&](const PdeSystem& sys, const GeneratorBasis& b, const std::string& label) {
    auto reports = check_generator_basis(sys, b, kTrials, kSeed, jobs());
    for (std::size_t k = 0; k < reports.size(); ++k) {
      ++counts[static_cast<int>(reports[k].verdict)];
      o.require(reports[k].passed(), b.names[k] + " " + label);
    }
  };
  run(build_affine_maximal(2), am_generic_basis(2), "(theta symbolic)");
  run(build_affine_maximal(2, Rational(3, 4)), am_special_basis(2), "(theta = 3/4)");
  o.detail << counts[0] << " identically-zero, " << counts[2] << " multiplier-found, " << counts[1]
           << " zero-on-variety, " << counts[3] << " failing";
}

void theta_dichotomy(Outcome& o) {
  for (int n = 2; n <= 3; ++n) {
    VectorField v6 = gen::udx(n, 1);
    CheckReport off = infinitesimal_check(build_affine_maximal(n, Rational(1)), v6, kTrials, kSeed, jobs());
    o.require(!off.passed() && off.residual && !off.residual->is_zero(),
              "u d/dx1 should fail at N=" + std::to_string(n) + ", theta=1");
    Rational special(n + 1, n + 2);
    CheckReport on = infinitesimal_check(build_affine_maximal(n, special), v6, kTrials, kSeed, jobs());
    o.require(on.passed(), "u d/dx1 should pass at N=" + std::to_string(n) + ", theta=" + special.str());
    o.detail << "N=" << n << ": theta=1 witness residual " << (off.residual ? off.residual->str() : "none")
             << ", theta=" << special.str() << " " << verdict_name(on.verdict) << "; ";
  }
}

void ansatz_counts(Outcome& o) {
  struct Case {
    std::string label;
    PdeSystem sys;
    int degree;
    std::size_t expected;
  };
  std::vector<Case> cases{{"MA N=2", build_monge_ampere(2), 2, 9},
                          {"MA N=3", build_monge_ampere(3), 2, 16},
                          {"AM N=2 theta=1", build_affine_maximal(2, Rational(1)), 2, 10},
                          {"AM N=2 theta=3/4", build_affine_maximal(2, Rational(3, 4)), 2, 12},
                          {"MA N=2 degree 3", build_monge_ampere(2), 3, 9},
                          {"MA N=2 degree 4", build_monge_ampere(2), 4, 9}};
  for (const auto& c : cases) {
    std::size_t got = ansatz_dimension(c.sys, c.degree).dimension;
    o.require(got == c.expected, c.label + " gave " + std::to_string(got));
    o.detail << c.label << "=" << got << " ";
  }
}

void determining_fidelity(Outcome& o) {
  const int n = 2;
  DeterminingSystem ds = extract_determining(build_monge_ampere(n));
  // Family xi = A x + B, phi = D x + c u + d with trace A = N c / 2, built from its parameters.
  std::mt19937_64 rng(106);
  int members = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Rational a[2][2], b[2], dv[2];
    for (int i = 0; i < 2; ++i) {
      b[i] = random_rational(rng);
      dv[i] = random_rational(rng);
      for (int j = 0; j < 2; ++j) a[i][j] = random_rational(rng);
    }
    Rational c = random_rational(rng);
    a[1][1] = Rational(n) * c / Rational(2) - a[0][0];
    std::vector<Polynomial> xi(n);
    for (int i = 0; i < n; ++i) xi[i] = Polynomial::x(1) * a[i][0] + Polynomial::x(2) * a[i][1] + b[i];
    Polynomial phi = Polynomial::x(1) * dv[0] + Polynomial::x(2) * dv[1] + Polynomial::u() * c + random_rational(rng);
    VectorField v(n, xi, phi);
    o.require(ds.satisfied_by(v), "family member " + v.str());
    ++members;
  }
  VectorField bad = gen::field(n, 1, Polynomial::x(1) * Polynomial::x(1), Polynomial());
  o.require(!ds.satisfied_by(bad), "x1^2 d/dx1 accepted");
  VectorField off_trace = gen::xdx(n, 1, 1);
  o.require(!ds.satisfied_by(off_trace), "x1 d/dx1 accepted");
  o.detail << ds.equations.size() << " equations in " << ds.unknowns.size() << " unknowns; " << members
           << " family members accepted";
}

void closure(Outcome& o) {
  for (Regime r : {Regime::MA, Regime::AMGeneric, Regime::AMSpecial}) {
    for (int n = 1; n <= 3; ++n) {
      GeneratorBasis b = basis_for(r, n);
      try {
        StructureConstants sc = closure_check(b);
        (void)sc;
      } catch (const NotClosed& e) {
        o.require(false, regime_name(r) + " N=" + std::to_string(n) + ": " + e.what());
      }
    }
  }
  o.detail << "ma, am-generic, am-special for N=1..3";
}

void transport(Outcome& o) {
  std::mt19937_64 rng(108);
  int exact = 0;
  for (int n = 2; n <= 3; ++n) {
    PdeSystem ma = build_monge_ampere(n);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> b(n), d(n);
      for (int i = 0; i < n; ++i) {
        b[i] = random_rational(rng);
        d[i] = random_rational(rng);
      }
      Rational lambda(static_cast<int>(rng() % 4) + 1, static_cast<int>(rng() % 3) + 1);
      GroupElement g = make_ma_element(lambda, random_sl(rng, n), b, d, random_rational(rng));
      SolutionSample s = quadratic_solution(random_unit_spd(rng, n), {}, Rational(0), true);
      SolutionSample t = act(g, s);
      o.require(t.is_polynomial() && residual_polynomial(t, ma).is_zero(), "MA element on " + s.description);
      ++exact;
    }
  }
  PdeSystem am1 = build_affine_maximal(1, Rational(1, 2));
  Real worst_family = 0;
  for (int trial = 0; trial < 5; ++trial) {
    Rational q(static_cast<int>(rng() % 5) + 1, static_cast<int>(rng() % 3) + 2);
    GroupElement g = make_am_element(diag({q}), {Rational(0)}, {random_rational(rng, 2, 4)},
                                     Rational(static_cast<int>(rng() % 4) + 1, 2), {random_rational(rng, 1, 10)},
                                     random_rational(rng), Regime::AMGeneric);
    SolutionSample t = act(g, am_one_dim_family(Rational(1, 2), Rational(1), Rational(1)));
    worst_family = std::max(worst_family, max_residual(t, am1, 10));
  }
  o.require(worst_family < Real("1e-8"), "closed-form family residual " + sci(worst_family));
  Real worst_rotation = 0;
  for (int n = 1; n <= 2; ++n) {
    RationalMatrix q = RationalMatrix::identity(n);
    q(0, 0) = Rational(99, 101);
    std::vector<Rational> p(n, Rational(0)), d(n, Rational(0));
    p[0] = Rational(-20, 101);
    d[0] = Rational(20, 101);
    GroupElement rot = make_am_element(q, p, d, Rational(99, 101), std::vector<Rational>(n, Rational(0)), Rational(0),
                                       Regime::AMSpecial);
    SolutionSample t = act(rot, paraboloid(n));
    worst_rotation = std::max(worst_rotation,
                              max_residual(t, build_affine_maximal(n, Rational(n + 1, n + 2)), 6, Real("0.2")));
  }
  o.require(worst_rotation < Real("1e-6"), "rotation residual " + sci(worst_rotation));
  o.detail << exact << " exact MA transports; family max residual " << sci(worst_family)
           << "; rotation max residual " << sci(worst_rotation);
}

VectorField perturbed(const VectorField& v) {
  return v + gen::field(v.dim(), 0, Polynomial(), Polynomial::u() * Polynomial::u());
}

void negative_controls(Outcome& o) {
  int failures = 0;
  auto expect_fail = [&](const PdeSystem& sys, const GeneratorBasis& b, const std::string& label) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      CheckReport r = infinitesimal_check(sys, perturbed(b.fields[k]), kTrials, kSeed, jobs());
      bool exact_nonzero = !r.passed() && r.residual && !r.residual->is_zero();
      o.require(exact_nonzero, "perturbed " + b.names[k] + " passed " + label);
      failures += exact_nonzero;
    }
  };
  expect_fail(build_monge_ampere(2), ma_basis(2), "on MA");
  expect_fail(build_affine_maximal(2, Rational(1)), am_generic_basis(2), "on AM");
  SolutionSample x4 = SolutionSample::polynomial(1, pow(Polynomial::x(1), 4), "x1^4");
  Real r = max_residual(x4, build_affine_maximal(1, Rational(1, 2)), 10);
  o.require(r > Real("1e-3"), "x1^4 residual " + sci(r));
  o.detail << failures << " perturbed generators fail with exact nonzero witnesses; x1^4 max residual " << sci(r);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "prolongation oracle equivalence", "exact", 120, prolongation_oracle},
      {2, "Monge-Ampere basis annihilates the equation", "exact", 60, ma_basis_annihilates},
      {3, "affine maximal bases pass the infinitesimal check", "exact", 600, am_basis_passes},
      {4, "theta dichotomy for u d/dx1", "exact", 600, theta_dichotomy},
      {5, "degree-2 ansatz dimension counts", "exact", 900, ansatz_counts},
      {6, "determining system fidelity", "exact", 60, determining_fidelity},
      {7, "Lie algebra closure", "exact", 60, closure},
      {8, "finite-action transport", "exact / 1e-8 / 1e-6", 120, transport},
      {9, "negative controls", "exact nonzero / > 1e-3", 60, negative_controls},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs <= c.budget_s, "over the time budget");
    all = all && o.ok;
    std::string detail = o.detail.str();
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", secs, c.budget_s);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << " (tolerance " << c.tolerance << ", "
              << timing << "): " << detail << std::endl;
  }
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
