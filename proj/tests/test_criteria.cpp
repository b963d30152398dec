#include <gtest/gtest.h>

#include <cmath>

#include "specrange/criteria.hpp"

using namespace specrange;

namespace {

const cplx I{0.0, 1.0};

PotentialSpec im_power(double amp, double exponent, Parity p = Parity::all) {
  return PotentialSpec(DecayPowerPotential{amp * I, exponent, p});
}

const CriterionResult* find(const CriteriaReport& r, const std::string& id, const std::string& target) {
  for (const auto& e : r.entries)
    if (e.id == id && to_string(e.target) == target) return &e;
  return nullptr;
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-2.5), "-2.5");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(to_string(Target::real_part(-2.5, 1.0)), "real_part=-2.5,imag_part=1");
}

TEST(LevelSet, PowerDecayNeverHitsPositiveB) {
  CriteriaContext c(im_power(1.0, 2.0), 1, 50);
  // Im d = 1/(1+n^2) equals 1 at n = 0 and 0.5 at n = +-1
  EXPECT_FALSE(check_level_set_empty(c, 1.0).absent());
  EXPECT_FALSE(check_level_set_empty(c, 0.5).absent());
  const auto r = check_level_set_empty(c, 0.3);
  EXPECT_TRUE(r.absent()) << r.witness;
  // zero is the limit: no uniform gap
  EXPECT_FALSE(check_level_set_empty(c, 0.0).absent());
  // below zero there is a gap of |b|
  EXPECT_TRUE(check_level_set_empty(c, -0.1).absent());
}

TEST(Halfspace, StepBelowBoundsLevelSetFromAbove) {
  CriteriaContext c(PotentialSpec(StepPotential{I, 0, 0, StepSide::below}), 1, 20);
  // Im d = 1 for n <= 0
  const auto sup = check_halfspace_support(c, 1.0, 0, HalfspaceSide::sup_finite);
  EXPECT_TRUE(sup.absent()) << sup.witness;
  ASSERT_TRUE(sup.witness_site);
  EXPECT_EQ(*sup.witness_site, 0);
  EXPECT_FALSE(check_halfspace_support(c, 1.0, 0, HalfspaceSide::inf_finite).absent());
  EXPECT_THROW(check_halfspace_support(c, 1.0, 1, HalfspaceSide::sup_finite), Error);
}

TEST(Decay, DirectionAndFull) {
  CriteriaContext dec(im_power(1.0, 1.0), 2, 5);
  EXPECT_TRUE(check_full_decay(dec).absent());
  EXPECT_TRUE(check_direction_decay(dec, 1, -1).absent());

  CriteriaContext step(PotentialSpec(StepPotential{I, 0, 0, StepSide::below}), 1, 20);
  EXPECT_FALSE(check_full_decay(step).absent());
  EXPECT_TRUE(check_direction_decay(step, 0, 1).absent());
  EXPECT_FALSE(check_direction_decay(step, 0, -1).absent());

  CriteriaContext cst(PotentialSpec(ConstantPotential{I}), 1, 20);
  EXPECT_FALSE(check_full_decay(cst).absent());
}

TEST(PairCondition, SmallestWitness) {
  CriteriaContext c(PotentialSpec(TablePotential{{{{0}, I}}}), 1, 20);
  auto r = check_pair_condition(c, 1.0);
  EXPECT_TRUE(r.absent());
  ASSERT_TRUE(r.witness_site);
  EXPECT_EQ(*r.witness_site, 1);
  // b = 0 fails everywhere except around 0
  EXPECT_FALSE(check_pair_condition(c, 0.0).absent());
  // the alternating pattern (0, 1) meets every b in {0, 1} on every pair
  CriteriaContext alt(PotentialSpec(Alternating1DPotential{0.0, 1.0}), 1, 20);
  EXPECT_FALSE(check_pair_condition(alt, 0.0).absent());
  EXPECT_FALSE(check_pair_condition(alt, 1.0).absent());
  EXPECT_TRUE(check_pair_condition(alt, 0.5).absent());
}

TEST(Alternating, PatternIsRecognised) {
  CriteriaContext alt(PotentialSpec(Alternating1DPotential{0.0, 1.0}), 1, 20);
  EXPECT_TRUE(check_alternating(alt).absent());
  CriteriaContext flat(PotentialSpec(Alternating1DPotential{0.5, 0.5}), 1, 20);
  EXPECT_FALSE(check_alternating(flat).absent());
  CriteriaContext mixed(sum({PotentialSpec(Alternating1DPotential{0.0, 1.0}), im_power(0.1, 2.0)}), 1, 20);
  EXPECT_FALSE(check_alternating(mixed).absent());
  // a real decaying perturbation leaves Im d alternating
  CriteriaContext re(sum({PotentialSpec(Alternating1DPotential{0.0, 1.0}), PotentialSpec(DecayPowerPotential{1.0, 2.0})}), 1, 20);
  EXPECT_TRUE(check_alternating(re).absent());
}

TEST(RealWindow, OutsideBand) {
  auto d = sum({PotentialSpec(TablePotential{{{{0}, -3.0}}}), im_power(0.5, 2.0, Parity::even)});
  CriteriaContext c(d, 1, 50);
  EXPECT_TRUE(check_real_window(c, -std::sqrt(13.0)).absent());
  EXPECT_FALSE(check_real_window(c, 1.0).absent());
  // Re d not decaying
  CriteriaContext cst(sum({PotentialSpec(ConstantPotential{1.0}), im_power(0.5, 2.0)}), 1, 50);
  EXPECT_FALSE(check_real_window(cst, 3.0).absent());
}

TEST(Summability, AllConditions) {
  auto good = sum({PotentialSpec(DecayPowerPotential{1.0, 4.0}), im_power(1.0, 2.0, Parity::even)});
  EXPECT_TRUE(check_summability(CriteriaContext(good, 1, 50)).absent());
  // exponent 2 on Re d: sum |k| / k^2 diverges
  auto slow = sum({PotentialSpec(DecayPowerPotential{1.0, 2.0}), im_power(1.0, 2.0, Parity::even)});
  EXPECT_FALSE(check_summability(CriteriaContext(slow, 1, 50)).absent());
  // Im d on both parities breaks (i)
  auto both = sum({PotentialSpec(DecayPowerPotential{1.0, 4.0}), im_power(1.0, 2.0)});
  EXPECT_FALSE(check_summability(CriteriaContext(both, 1, 50)).absent());
}

TEST(EvaluateAll, DecayingImaginaryPartExcludesAll) {
  CriteriaParams p;
  p.scan_radius = 100;
  auto rep = evaluate_all(im_power(1.0, 2.0), 1, p);
  EXPECT_TRUE(rep.summary.no_boundary_eigenvalues) << rep.summary.reason;
  EXPECT_TRUE(rep.excludes(Target::all()));
  for (std::size_t i = 1; i < rep.entries.size(); ++i) EXPECT_LE(rep.entries[i - 1].id, rep.entries[i].id);
}

TEST(EvaluateAll, SingleBumpOnlyExcludesNonReal) {
  CriteriaParams p;
  p.scan_radius = 100;
  auto rep = evaluate_all(PotentialSpec(TablePotential{{{{0}, I}}}), 1, p);
  EXPECT_FALSE(rep.summary.no_boundary_eigenvalues);
  EXPECT_TRUE(rep.excludes(Target::non_real()));
  EXPECT_FALSE(rep.excludes(Target::imag_part(0.0)));
  const auto* e = find(rep, "pair_condition", "imag_part=1");
  ASSERT_NE(e, nullptr);
  EXPECT_TRUE(e->absent());
}

TEST(EvaluateAll, ZeroPotentialIsHermitianAndInconclusive) {
  CriteriaParams p;
  p.scan_radius = 20;
  auto rep = evaluate_all(PotentialSpec(ConstantPotential{0.0}), 1, p);
  EXPECT_TRUE(rep.summary.hermitian);
  EXPECT_FALSE(rep.excludes(Target::imag_part(0.0)));
  EXPECT_TRUE(rep.excludes(Target::non_real()));
}

TEST(EvaluateAll, CandidatesAreAdded) {
  CriteriaParams p;
  p.scan_radius = 20;
  auto rep = evaluate_all(PotentialSpec(Alternating1DPotential{0.25, 0.75}), 1, p);
  EXPECT_EQ(rep.b_values, (std::vector<double>{0.0, 0.25, 0.75}));
  EXPECT_TRUE(rep.summary.no_boundary_eigenvalues);
  EXPECT_EQ(rep.summary.reason, "alternating");
}

TEST(EvaluateAll, TwoDimensionalDecay) {
  CriteriaParams p;
  p.scan_radius = 10;
  p.b_list = {0.5};
  auto rep = evaluate_all(PotentialSpec(DecayGeometricPotential{I, 0.5}), 2, p);
  EXPECT_TRUE(rep.excludes(Target::non_real()));
  EXPECT_TRUE(rep.excludes(Target::imag_part(0.5)));
  EXPECT_FALSE(rep.excludes(Target::imag_part(0.0)));
}

TEST(Context, RejectsBadInput) {
  EXPECT_THROW(CriteriaContext(PotentialSpec(ConstantPotential{0.0}), 0), Error);
  EXPECT_THROW(CriteriaContext(PotentialSpec(ConstantPotential{0.0}), 1, 0), Error);
  EXPECT_THROW(CriteriaContext(PotentialSpec(Alternating1DPotential{0.0, 1.0}), 2), Error);
}
