#include <gtest/gtest.h>

#include <random>

#include "ptlat/formulas.hpp"
#include "support.hpp"

using namespace ptlat;
using testing_support::random_coupling;
using testing_support::random_rational;

namespace {

using Expected = std::vector<std::pair<std::string, Rational>>;

void expect_elements(const FormulaElements<Rational>& f, const Expected& want) {
  ASSERT_EQ(f.values.size(), want.size());
  for (const auto& [name, value] : want) EXPECT_EQ(f[name], value) << name;
}

}  // namespace

// Frozen values from an independent symbolic solve of the banded ansatz
// (exact rational nullspace with the centre entry fixed to 1).
TEST(FormulaElements, OneParameterAtOneThird) {
  expect_elements(formula_elements(FormulaModel::one_param, std::vector<Rational>{Rational(1, 3)}),
                  {{"r", Rational(2, 3)}, {"s", Rational(1)}, {"v", Rational(3, 4)}, {"t", Rational(5, 6)}, {"w", Rational(11, 12)}});
}

TEST(FormulaElements, TwoParameterAtHalfAndThird) {
  expect_elements(formula_elements(FormulaModel::two_param, std::vector<Rational>{Rational(1, 2), Rational(1, 3)}),
                  {{"r", Rational(24, 53)}, {"s", Rational(48, 53)}, {"v", Rational(36, 53)}, {"t", Rational(45, 53)}, {"w", Rational(49, 53)}});
}

TEST(FormulaElements, ThreeParameterAtThirdFifthSeventh) {
  expect_elements(formula_elements(FormulaModel::three_param, std::vector<Rational>{Rational(1, 3), Rational(1, 5), Rational(1, 7)}),
                  {{"r", Rational(135, 247)},
                   {"s", Rational(405, 494)},
                   {"p", Rational(675, 988)},
                   {"v", Rational(1575, 1976)},
                   {"t", Rational(375, 494)},
                   {"q", Rational(1813, 1976)},
                   {"w", Rational(3229, 3458)},
                   {"m", Rational(6691, 6916)},
                   {"u", Rational(13607, 13832)}});
}

TEST(FormulaElements, ZeroParametersGiveOnes) {
  for (FormulaModel m : {FormulaModel::one_param, FormulaModel::two_param, FormulaModel::three_param}) {
    const auto f = formula_elements(m, std::vector<Rational>(parameter_count(m), Rational(0)));
    for (const auto& [name, value] : f.values) EXPECT_EQ(value, Rational(1)) << to_string(m) << " " << name;
  }
}

TEST(FormulaElements, WrongParameterCountThrows) {
  EXPECT_THROW(formula_elements(FormulaModel::two_param, std::vector<Rational>{Rational(1)}), std::invalid_argument);
  EXPECT_THROW(formula_elements(FormulaModel::one_param, std::vector<double>{0.1, 0.2}), std::invalid_argument);
}

TEST(FormulaElements, FloatPathMatchesExact) {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Rational> pr = {random_rational(gen, 9, 7), random_rational(gen, 9, 7), random_rational(gen, 9, 7)};
    const std::vector<double> pd = {to_float(pr[0]), to_float(pr[1]), to_float(pr[2])};
    const auto exact = formula_elements(FormulaModel::three_param, pr);
    const auto approx = formula_elements(FormulaModel::three_param, pd);
    for (const auto& [name, value] : exact.values) EXPECT_NEAR(approx[name], to_float(value), 1e-13) << name;
  }
}

TEST(FormulaElements, ModelNames) {
  EXPECT_EQ(parse_formula_model("one"), FormulaModel::one_param);
  EXPECT_EQ(parse_formula_model("two"), FormulaModel::two_param);
  EXPECT_EQ(parse_formula_model("three"), FormulaModel::three_param);
  EXPECT_ANY_THROW(parse_formula_model("four"));
  EXPECT_EQ(to_string(FormulaModel::two_param), "two");
}

TEST(VerifyFormulas, OneParameterPoints) {
  for (const Rational& l : {Rational(1, 3), Rational(-2, 5), Rational(9, 10)}) {
    const VerificationReport rep = verify_formulas(FormulaModel::one_param, {l}, 11, 6);
    EXPECT_TRUE(rep.match) << l.str();
    EXPECT_TRUE(rep.mismatches.empty());
    EXPECT_TRUE(rep.dieudonne_residual.is_zero());
    EXPECT_EQ(rep.elements.size(), 5u);
    ASSERT_EQ(rep.identities.size(), 2u);
    for (const auto& id : rep.identities) EXPECT_TRUE(id.holds) << id.name;
    EXPECT_NO_THROW(rep.require_match());
  }
}

TEST(VerifyFormulas, TwoAndThreeParameterPoints) {
  EXPECT_TRUE(verify_formulas(FormulaModel::two_param, {Rational(1, 2), Rational(1, 3)}, 11, 6).match);
  const auto rep3 = verify_formulas(FormulaModel::three_param, {Rational(1, 3), Rational(1, 5), Rational(1, 7)}, 13, 7);
  EXPECT_TRUE(rep3.match);
  EXPECT_EQ(rep3.elements.size(), 9u);
}

TEST(VerifyFormulas, RandomRationalPoints) {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 6; ++trial) {
    EXPECT_TRUE(verify_formulas(FormulaModel::one_param, {random_coupling(gen)}).match);
    EXPECT_TRUE(verify_formulas(FormulaModel::two_param, {random_coupling(gen), random_coupling(gen)}).match);
    EXPECT_TRUE(verify_formulas(FormulaModel::three_param, {random_coupling(gen), random_coupling(gen), random_coupling(gen)}).match);
  }
}

TEST(VerifyFormulas, LayoutMustMatchModel) {
  EXPECT_THROW(verify_formulas(FormulaModel::one_param, {Rational(1, 3)}, 13, 7), std::invalid_argument);
  EXPECT_THROW(verify_formulas(FormulaModel::three_param, {Rational(1, 3), Rational(0), Rational(0)}, 11, 6), std::invalid_argument);
}

TEST(VerifyFormulas, MismatchIsReportedForAWrongCatalogue) {
  // Solve the two-parameter ansatz at mu != lambda and compare against the
  // one-parameter closed forms: the report must not match.
  const Rational l(1, 2), m(1, 3);
  const auto h = build_hamiltonian(11, CouplingVector<Rational>({l, m}));
  const auto p = banded_pseudometric(h, 6);
  const auto one = formula_elements(FormulaModel::one_param, std::vector<Rational>{l});
  const auto names = layout_names(display_layout(FormulaModel::one_param));
  int differing = 0;
  for (const auto& [pos, name] : names) {
    if (name == "1") continue;
    differing += p.entries(static_cast<Eigen::Index>(pos.first), static_cast<Eigen::Index>(pos.second)) != one[name];
  }
  EXPECT_GT(differing, 0);
}

TEST(VerifyFormulas, MismatchErrorCarriesPosition) {
  VerificationReport rep;
  rep.mismatches.push_back({3, 4, "v", Rational(1, 2), Rational(1, 3)});
  try {
    rep.require_match();
    FAIL() << "expected Mismatch";
  } catch (const Mismatch& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.col(), 4u);
  }
}

TEST(Reduction, TwoToOneAndThreeToTwoAtRandomPoints) {
  std::mt19937_64 gen(59);
  for (int trial = 0; trial < 5; ++trial) {
    const Rational l = random_rational(gen, 15, 11), m = random_rational(gen, 15, 11);
    const auto a = reduction_identity(FormulaModel::two_param, {l, l}, FormulaModel::one_param);
    EXPECT_TRUE(a.condition_met);
    EXPECT_TRUE(a.holds);
    EXPECT_EQ(a.elements.size(), 5u);
    const auto b = reduction_identity(FormulaModel::three_param, {l, m, Rational(0)}, FormulaModel::two_param);
    EXPECT_TRUE(b.condition_met);
    EXPECT_TRUE(b.holds);
    EXPECT_EQ(b.elements.size(), 5u);
  }
}

TEST(Reduction, ExactSolvesAgreeAcrossModels) {
  // The solved two-parameter pseudometric at mu = lambda equals the one-parameter one entrywise.
  std::mt19937_64 gen(61);
  for (int trial = 0; trial < 5; ++trial) {
    const Rational l = random_coupling(gen);
    const auto h = build_hamiltonian(11, model_couplings(FormulaModel::two_param, std::vector<Rational>{l, l}));
    const auto h1 = build_hamiltonian(11, model_couplings(FormulaModel::one_param, std::vector<Rational>{l}));
    EXPECT_EQ(h, h1);
    EXPECT_EQ(banded_pseudometric(h, 6).entries, banded_pseudometric(h1, 6).entries);
  }
}

TEST(Reduction, FailsOffTheReductionLocus) {
  const auto r = reduction_identity(FormulaModel::two_param, {Rational(1, 2), Rational(1, 3)}, FormulaModel::one_param);
  EXPECT_FALSE(r.condition_met);
  EXPECT_FALSE(r.holds);
  EXPECT_THROW(reduction_identity(FormulaModel::one_param, {Rational(1, 2)}, FormulaModel::two_param), std::invalid_argument);
}

TEST(Denominators, NeverBelowOne) {
  std::mt19937_64 gen(67);
  for (int trial = 0; trial < 100; ++trial) {
    const Rational l = random_rational(gen), m = random_rational(gen), nu = random_rational(gen);
    // v = 1/den in every model, so den >= 1 is v <= 1.
    EXPECT_LE(formula_elements(FormulaModel::one_param, std::vector<Rational>{l})["v"], Rational(1));
    EXPECT_LE(formula_elements(FormulaModel::two_param, std::vector<Rational>{l, m})["v"], Rational(1));
    EXPECT_LE(formula_elements(FormulaModel::three_param, std::vector<Rational>{l, m, nu})["v"], Rational(1));
    EXPECT_GT(formula_elements(FormulaModel::three_param, std::vector<Rational>{l, m, nu})["v"], Rational(0));
  }
}
