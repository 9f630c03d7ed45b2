#include <gtest/gtest.h>

#include "support.hpp"

using namespace liesym;
using namespace liesym::testing;

namespace {

constexpr int kTrials = 100;
constexpr std::uint64_t kSeed = 20240917;

VectorField perturbed(const VectorField& v) {
  return v + gen::field(v.dim(), 0, Polynomial(), Polynomial::u() * Polynomial::u());
}

// A generic member of the Monge-Ampere family: xi = A x + B, phi = D.x + c u + d
// with tr A = N c / 2.
VectorField ma_family_member(std::mt19937_64& rng, int n) {
  std::vector<Polynomial> xi(n);
  Rational trace(0);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = random_rational(rng);
  }
  for (int i = 0; i < n; ++i) trace += a[i][i];
  Rational c = Rational(2) * trace / Rational(n);
  Polynomial phi = Polynomial::u() * c + random_rational(rng);
  for (int i = 0; i < n; ++i) {
    xi[i] = Polynomial(random_rational(rng));
    for (int j = 0; j < n; ++j) xi[i] = xi[i] + Polynomial::x(j + 1) * a[i][j];
    phi = phi + Polynomial::x(i + 1) * random_rational(rng);
  }
  return VectorField(n, xi, phi);
}

}  // namespace

TEST(InfinitesimalCheck, MongeAmpereExamples) {
  PdeSystem ma = build_monge_ampere(2);
  EXPECT_EQ(infinitesimal_check(ma, gen::du(2), kTrials, kSeed).verdict, Verdict::IdenticallyZero);
  EXPECT_EQ(infinitesimal_check(ma, gen::ma_dilation(2, 1), kTrials, kSeed).verdict, Verdict::IdenticallyZero);
}

TEST(InfinitesimalCheck, MultiplierPath) {
  // x1 d/dx1 scales det D^2u by -2; on the variety -2 det = -2 (F + 1) is not
  // a multiple of F, so the check falls through to sampling and fails.
  PdeSystem ma = build_monge_ampere(2);
  CheckReport r = infinitesimal_check(ma, gen::xdx(2, 1, 1), kTrials, kSeed);
  EXPECT_EQ(r.verdict, Verdict::Fails);
  ASSERT_TRUE(r.residual);
  EXPECT_EQ(*r.residual, Rational(-2));

  // u d/du on the affine maximal equation multiplies F by a constant.
  PdeSystem am = build_affine_maximal(2);
  CheckReport s = infinitesimal_check(am, gen::udu(2), kTrials, kSeed);
  EXPECT_TRUE(s.passed());
  if (s.verdict == Verdict::MultiplierFound) {
    ASSERT_TRUE(s.multiplier);
    EXPECT_EQ(*s.multiplier * am.f, apply_prolonged(gen::udu(2), am.f, 4));
  }
}

TEST(InfinitesimalCheck, ZeroOnVarietyPath) {
  // F = x1 (u11 - 1): pr v F = u11 - 1 for v = d/dx1 vanishes wherever F does
  // (x1 != 0) but is not a polynomial multiple of F.
  PdeSystem s = build_custom(1, Polynomial::x(1) * (Polynomial::jet({1, 1}) - 1));
  CheckReport r = infinitesimal_check(s, gen::dx(1, 1), kTrials, kSeed);
  EXPECT_EQ(r.verdict, Verdict::ZeroOnVariety);
  EXPECT_EQ(r.samples_passed, kTrials);
  EXPECT_TRUE(r.passed());
}

TEST(InfinitesimalCheck, FailureCarriesExactWitness) {
  PdeSystem am = build_affine_maximal(2, Rational(1));
  VectorField v = gen::udx(2, 1);
  CheckReport r = infinitesimal_check(am, v, kTrials, kSeed);
  ASSERT_EQ(r.verdict, Verdict::Fails);
  ASSERT_TRUE(r.witness && r.residual);
  EXPECT_FALSE(r.residual->is_zero());
  EXPECT_TRUE(evaluate(am.f, r.witness->env).is_zero());
  EXPECT_EQ(evaluate(apply_prolonged(v, am.f, 4), r.witness->env), *r.residual);
  EXPECT_EQ(r.witness->env, sample_point(am, derive_seed(kSeed, r.witness_index)).env);
}

TEST(InfinitesimalCheck, VerdictIndependentOfJobs) {
  PdeSystem am = build_affine_maximal(2, Rational(1));
  CheckReport a = infinitesimal_check(am, gen::udx(2, 2), 40, kSeed, 1);
  CheckReport b = infinitesimal_check(am, gen::udx(2, 2), 40, kSeed, 4);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.witness_index, b.witness_index);
  ASSERT_TRUE(a.residual && b.residual);
  EXPECT_EQ(*a.residual, *b.residual);
}

TEST(InfinitesimalCheck, RejectsBadArguments) {
  EXPECT_THROW(infinitesimal_check(build_monge_ampere(2), gen::du(2), 0, kSeed), Error);
  EXPECT_THROW(infinitesimal_check(build_monge_ampere(2), gen::du(3), 1, kSeed), Error);
}

TEST(GeneratorBasis, SizesAndIndependence) {
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(ma_basis(n).size(), static_cast<std::size_t>((n + 1) * (n + 1)));
    EXPECT_EQ(am_generic_basis(n).size(), static_cast<std::size_t>(n * n + 2 * n + 2));
    EXPECT_EQ(am_special_basis(n).size(), static_cast<std::size_t>(n * n + 3 * n + 2));
    for (auto r : {Regime::MA, Regime::AMGeneric, Regime::AMSpecial}) {
      EXPECT_TRUE(linearly_independent(basis_for(r, n).fields));
    }
  }
  EXPECT_EQ(parse_regime("am-special"), Regime::AMSpecial);
  EXPECT_THROW(parse_regime("xx"), Error);
}

TEST(GeneratorBasis, MongeAmpereAnnihilatesExactly) {
  for (int n = 1; n <= 3; ++n) {
    PdeSystem ma = build_monge_ampere(n);
    for (const auto& v : ma_basis(n).fields) EXPECT_TRUE(apply_prolonged(v, ma.f, 2).is_zero()) << v.str();
    for (const auto& r : check_generator_basis(ma, ma_basis(n), kTrials, kSeed)) {
      EXPECT_EQ(r.verdict, Verdict::IdenticallyZero);
    }
  }
}

TEST(GeneratorBasis, AffineMaximalGenericWithSymbolicTheta) {
  for (int n = 1; n <= 2; ++n) {
    PdeSystem am = build_affine_maximal(n);
    GeneratorBasis b = am_generic_basis(n);
    auto reports = check_generator_basis(am, b, kTrials, kSeed);
    for (std::size_t k = 0; k < b.size(); ++k) EXPECT_TRUE(reports[k].passed()) << b.names[k];
  }
}

TEST(GeneratorBasis, AffineMaximalSpecialRegime) {
  for (int n = 1; n <= 2; ++n) {
    PdeSystem am = build_affine_maximal(n, Rational(n + 1, n + 2));
    GeneratorBasis b = am_special_basis(n);
    auto reports = check_generator_basis(am, b, kTrials, kSeed);
    for (std::size_t k = 0; k < b.size(); ++k) EXPECT_TRUE(reports[k].passed()) << "N=" << n << " " << b.names[k];
  }
}

TEST(Dichotomy, RotationGeneratorDependsOnTheta) {
  EXPECT_TRUE(infinitesimal_check(build_affine_maximal(2, Rational(3, 4)), gen::udx(2, 1), kTrials, kSeed).passed());
  EXPECT_FALSE(infinitesimal_check(build_affine_maximal(2, Rational(1)), gen::udx(2, 1), kTrials, kSeed).passed());
  EXPECT_FALSE(infinitesimal_check(build_affine_maximal(2), gen::udx(2, 1), kTrials, kSeed).passed());
  EXPECT_TRUE(infinitesimal_check(build_affine_maximal(1, Rational(2, 3)), gen::udx(1, 1), kTrials, kSeed).passed());
  EXPECT_FALSE(infinitesimal_check(build_affine_maximal(1, Rational(1, 2)), gen::udx(1, 1), kTrials, kSeed).passed());
}

TEST(NegativeControl, QuadraticPerturbationFails) {
  PdeSystem ma = build_monge_ampere(2);
  PdeSystem am = build_affine_maximal(2, Rational(3, 4));
  for (const auto& v : {gen::du(2), gen::xdx(2, 2, 1), gen::ma_dilation(2, 2)}) {
    EXPECT_FALSE(infinitesimal_check(ma, perturbed(v), kTrials, kSeed).passed()) << v.str();
  }
  for (const auto& v : {gen::du(2), gen::udu(2), gen::udx(2, 1)}) {
    EXPECT_FALSE(infinitesimal_check(am, perturbed(v), kTrials, kSeed).passed()) << v.str();
  }
}

TEST(LieBracket, Examples) {
  EXPECT_EQ(lie_bracket(gen::dx(2, 1), gen::xdu(2, 1)), gen::du(2));
  EXPECT_EQ(lie_bracket(gen::udu(2), gen::xdu(2, 1)), -1 * gen::xdu(2, 1));
  EXPECT_EQ(lie_bracket(gen::dx(2, 1), gen::xdx(2, 1, 1)), gen::dx(2, 1));
}

TEST(LieBracket, AntisymmetryAndJacobi) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    VectorField a = random_field(rng, 2, 3, 2);
    VectorField b = random_field(rng, 2, 3, 2);
    VectorField c = random_field(rng, 2, 3, 2);
    EXPECT_EQ(lie_bracket(a, b), -1 * lie_bracket(b, a));
    VectorField jacobi = lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) +
                         lie_bracket(c, lie_bracket(a, b));
    EXPECT_EQ(jacobi, VectorField(2, {Polynomial(), Polynomial()}, Polynomial()));
  }
}

TEST(Closure, ClassifiedBasesClose) {
  for (int n = 1; n <= 3; ++n) {
    for (auto r : {Regime::MA, Regime::AMGeneric, Regime::AMSpecial}) {
      GeneratorBasis b = basis_for(r, n);
      StructureConstants sc = closure_check(b);
      EXPECT_EQ(sc.dim, b.size());
      // Reconstruct every bracket from the structure constants.
      for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          VectorField rebuilt(n, std::vector<Polynomial>(n), Polynomial());
          for (std::size_t k = 0; k < b.size(); ++k) rebuilt = rebuilt + sc.at(i, j, k) * b.fields[k];
          EXPECT_EQ(rebuilt, lie_bracket(b.fields[i], b.fields[j]));
        }
      }
    }
  }
}

TEST(Closure, QuadraticFieldEscapesTheSpan) {
  GeneratorBasis b{1, Regime::MA, {}, {}};
  b.add("d/dx1", gen::dx(1, 1));
  b.add("x1^2 d/dx1", gen::field(1, 1, Polynomial::x(1) * Polynomial::x(1), Polynomial()));
  try {
    closure_check(b);
    FAIL() << "expected NotClosed";
  } catch (const NotClosed& e) {
    EXPECT_EQ(e.first(), 0u);
    EXPECT_EQ(e.second(), 1u);
  }
}

TEST(Determining, MongeAmpereFamilyAndRejection) {
  DeterminingSystem ds = extract_determining(build_monge_ampere(2));
  EXPECT_LT(ds.max_partial_order, 0);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) EXPECT_TRUE(ds.satisfied_by(ma_family_member(rng, 2)));
  VectorField quad = gen::field(2, 1, Polynomial::x(1) * Polynomial::x(1), Polynomial());
  EXPECT_FALSE(ds.satisfied_by(quad));
  // Breaking the trace condition is rejected too.
  EXPECT_FALSE(ds.satisfied_by(gen::xdx(2, 1, 1)));
  for (const auto& e : ds.equations) {
    for (Atom a : e.atoms()) EXPECT_TRUE(a.is(Atom::Kind::FuncPartial));
    EXPECT_EQ(e.total_degree(), 1u);
  }
}

TEST(Determining, AffineMaximalAtThetaOne) {
  DeterminingSystem ds = extract_determining(build_affine_maximal(2, Rational(1)));
  EXPECT_FALSE(ds.satisfied_by(gen::udx(2, 1)));
  EXPECT_TRUE(ds.satisfied_by(gen::udu(2)));
  for (const auto& v : am_generic_basis(2).fields) EXPECT_TRUE(ds.satisfied_by(v)) << v.str();
  DeterminingSystem special = extract_determining(build_affine_maximal(2, Rational(3, 4)));
  EXPECT_TRUE(special.satisfied_by(gen::udx(2, 1)));
}

TEST(Ansatz, DimensionCounts) {
  EXPECT_EQ(ansatz_dimension(build_monge_ampere(2), 2).dimension, 9u);
  EXPECT_EQ(ansatz_dimension(build_affine_maximal(2, Rational(1)), 2).dimension, 10u);
  EXPECT_EQ(ansatz_dimension(build_affine_maximal(2, Rational(3, 4)), 2).dimension, 12u);
  EXPECT_EQ(ansatz_dimension(build_affine_maximal(2), 2).dimension, 10u);
  // u'' = 1 is an ODE: its point symmetries form sl(3); six have quadratic coefficients.
  EXPECT_EQ(ansatz_dimension(build_monge_ampere(1), 2).dimension, 6u);
}

TEST(Ansatz, StableInDegreeAndSpansBuiltinBasis) {
  std::size_t previous = 0;
  for (int d = 1; d <= 4; ++d) {
    AnsatzResult r = ansatz_dimension(build_monge_ampere(2), d);
    EXPECT_GE(r.dimension, previous);
    previous = r.dimension;
    EXPECT_EQ(r.dimension, 9u) << "d=" << d;
    EXPECT_TRUE(same_span(r.basis, ma_basis(2).fields));
  }
  EXPECT_TRUE(same_span(ansatz_dimension(build_affine_maximal(2, Rational(3, 4)), 2).basis, am_special_basis(2).fields));
  EXPECT_TRUE(same_span(ansatz_dimension(build_affine_maximal(2, Rational(1)), 2).basis, am_generic_basis(2).fields));
}

TEST(Ansatz, FullSystemAgreesWithTruncated) {
  DeterminingSystem full = extract_determining(build_monge_ampere(2));
  EXPECT_EQ(solve_ansatz(full, 2).dimension, 9u);
  EXPECT_EQ(solve_ansatz(full, 3).dimension, 9u);
  DerivativeOptions opt;
  opt.max_partial_order = 2;
  EXPECT_THROW(solve_ansatz(extract_determining(build_monge_ampere(2), opt), 3), Error);
}

TEST(Ansatz, MonomialCount) {
  EXPECT_EQ(xu_monomials(2, 2).size(), 10u);
  EXPECT_EQ(xu_monomials(3, 3).size(), 35u);
}
