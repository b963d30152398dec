#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "specrange/operator.hpp"
#include "specrange/potential.hpp"

using namespace specrange;

namespace {

const cplx I{0.0, 1.0};

PotentialSpec zero() { return PotentialSpec(ConstantPotential{0.0}); }

// det(M) by cofactor expansion along the first row; small n only.
cplx cofactor_det(const Matrix& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  cplx det = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Matrix minor(n - 1, n - 1);
    for (Eigen::Index i = 1; i < n; ++i)
      for (Eigen::Index j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    det += (c % 2 == 0 ? 1.0 : -1.0) * m(0, c) * cofactor_det(minor);
  }
  return det;
}

}  // namespace

TEST(LatticeBox, RejectsInvertedRange) {
  EXPECT_THROW(LatticeBox({{3, 1}}), Error);
  EXPECT_THROW(LatticeBox(std::vector<Interval>{}), Error);
}

TEST(LatticeBox, CentredLine) {
  EXPECT_EQ(LatticeBox::centred_line(101).range(0), (Interval{-50, 50}));
  EXPECT_EQ(LatticeBox::centred_line(100).range(0), (Interval{-50, 49}));
}

TEST(LatticeBox, LastCoordinateRunsFastest) {
  LatticeBox box({{0, 1}, {5, 7}});
  ASSERT_EQ(box.site_count(), 6u);
  EXPECT_EQ(box.site(0), (Site{0, 5}));
  EXPECT_EQ(box.site(1), (Site{0, 6}));
  EXPECT_EQ(box.site(3), (Site{1, 5}));
  std::size_t n = 0;
  for_each_site(box, [&](const Site& k) {
    EXPECT_EQ(box.index(k), n);
    EXPECT_EQ(box.site(n), k);
    ++n;
  });
  EXPECT_EQ(n, box.site_count());
}

TEST(Potential, KindsEvaluate) {
  EXPECT_EQ(PotentialSpec(ConstantPotential{2.0 + 3.0 * I})(7), 2.0 + 3.0 * I);
  PotentialSpec power(DecayPowerPotential{1.0, 2.0});
  EXPECT_DOUBLE_EQ(power(3).real(), 0.1);
  PotentialSpec even(DecayPowerPotential{I, 2.0, Parity::even});
  EXPECT_EQ(even(1), cplx{});
  EXPECT_DOUBLE_EQ(even(2).imag(), 0.2);
  PotentialSpec geo(DecayGeometricPotential{1.0, -0.5});
  EXPECT_DOUBLE_EQ(geo(3).real(), -0.125);
  PotentialSpec alt(Alternating1DPotential{0.0, 1.0});
  EXPECT_EQ(alt(-2), cplx{});
  EXPECT_EQ(alt(-3), I);
  PotentialSpec step(StepPotential{I, 0, 2, StepSide::above});
  EXPECT_EQ(step(1), cplx{});
  EXPECT_EQ(step(2), I);
  PotentialSpec table(TablePotential{{{{4}, 1.5}}});
  EXPECT_EQ(table(4), 1.5);
  EXPECT_EQ(table(5), cplx{});
}

TEST(Potential, RejectsBadParameters) {
  EXPECT_THROW(PotentialSpec(DecayGeometricPotential{1.0, 1.0}), Error);
  EXPECT_THROW(PotentialSpec(DecayPowerPotential{1.0, 0.0}), Error);
  EXPECT_THROW(PotentialSpec(TablePotential{{{{0}, 1.0}, {{0, 1}, 1.0}}}), Error);
}

TEST(Potential, SeededRandomIsCounterBased) {
  SeededRandomPotential r{42, LatticeBox({{-3, 3}}), -1.0, 1.0, 0.0, 2.0};
  PotentialSpec a(r), b(r);
  for (std::int64_t n = -3; n <= 3; ++n) {
    EXPECT_EQ(a(n), b(n));
    EXPECT_GE(a(n).real(), -1.0);
    EXPECT_LE(a(n).real(), 1.0);
    EXPECT_GE(a(n).imag(), 0.0);
  }
  EXPECT_EQ(a(4), cplx{});
  const auto reseeded = with_seed(sum({a, zero()}), 43);
  EXPECT_NE(reseeded(0), a(0));
}

TEST(Potential, DerivedDecay) {
  EXPECT_FALSE(derived_decay(PotentialSpec(ConstantPotential{1.0})));
  auto fin = derived_decay(PotentialSpec(TablePotential{{{{-3}, 1.0}, {{2}, 1.0}}}));
  ASSERT_TRUE(fin);
  EXPECT_EQ(std::get<VanishesOutside>(*fin).radius, 3);
  auto pw = derived_decay(PotentialSpec(DecayPowerPotential{2.0, 3.0}));
  ASSERT_TRUE(pw);
  EXPECT_TRUE(std::holds_alternative<MonotoneBound>(*pw));
}

TEST(Potential, DeclaredDecayMustBeImplied) {
  EXPECT_NO_THROW(validate_decay(PotentialSpec(TablePotential{{{{2}, 1.0}}}, VanishesOutside{2})));
  EXPECT_THROW(validate_decay(PotentialSpec(TablePotential{{{{3}, 1.0}}}, VanishesOutside{2})), Error);
  EXPECT_THROW(validate_decay(PotentialSpec(DecayPowerPotential{1.0, 2.0}, MonotoneBound{1.0, MonotoneBound::Shape::geometric, 0.5})),
               Error);
}

TEST(Potential, BoundsOfConstant) {
  auto b = potential_bounds(PotentialSpec(ConstantPotential{2.0 + 3.0 * I}), LatticeBox::centred_line(5));
  EXPECT_EQ(b.re_min, 2.0);
  EXPECT_EQ(b.re_max, 2.0);
  EXPECT_EQ(b.im_min, 3.0);
  EXPECT_EQ(b.im_max, 3.0);
}

TEST(Potential, BoundsOfDecayIncludeTheLimit) {
  auto b = potential_bounds(PotentialSpec(DecayPowerPotential{1.0, 2.0}), LatticeBox::centred_line(11));
  EXPECT_EQ(b.re_max, 1.0);
  EXPECT_GE(b.re_min, 0.0);
  EXPECT_LE(b.re_min, 1.0 / 26.0);
  EXPECT_EQ(b.im_min, 0.0);
  EXPECT_EQ(b.im_max, 0.0);
}

TEST(Potential, BoundsOfAlternating) {
  auto b = potential_bounds(PotentialSpec(Alternating1DPotential{0.0, 1.0}), LatticeBox::centred_line(1));
  EXPECT_EQ(b.im_min, 0.0);
  EXPECT_EQ(b.im_max, 1.0);
}

TEST(Assemble, ThreeSiteLine) {
  auto a = assemble(LatticeBox({{0, 2}}), zero());
  Matrix want(3, 3);
  want << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  EXPECT_EQ(a.entries(), want);
  EXPECT_TRUE(a.hermitian());
}

TEST(Assemble, UnitSquareIsFourCycle) {
  auto a = assemble(LatticeBox({{0, 1}, {0, 1}}), zero());
  ASSERT_EQ(a.dim(), 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    EXPECT_EQ(a(i, i), cplx{});
    EXPECT_EQ(a.entries().row(i).cwiseAbs().sum(), 2.0);
  }
  // (0,0)-(1,1) are not neighbours
  EXPECT_EQ(a(0, 3), cplx{});
}

TEST(Assemble, DiagonalCarriesPotential) {
  LatticeBox box({{-2, 2}});
  PotentialSpec d(DecayPowerPotential{1.0 + I, 1.0});
  auto a = assemble(box, d);
  for (std::size_t i = 0; i < box.site_count(); ++i)
    EXPECT_EQ(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)), d(box.site(i)));
  EXPECT_FALSE(a.hermitian());
  ASSERT_TRUE(a.provenance());
  EXPECT_EQ(a.provenance()->box, box);
}

TEST(Assemble, FreeSpectrumMatchesCharacteristicPolynomial) {
  // det(J0 - 2cos(m pi/(N+1))) = 0 on N sites
  for (std::int64_t n = 1; n <= 8; ++n) {
    auto a = assemble(LatticeBox({{1, n}}), zero());
    for (std::int64_t m = 1; m <= n; ++m) {
      const double lambda = 2.0 * std::cos(static_cast<double>(m) * std::numbers::pi / static_cast<double>(n + 1));
      Matrix shifted = a.entries() - lambda * Matrix::Identity(n, n);
      EXPECT_LT(std::abs(cofactor_det(shifted)), 1e-12) << "n=" << n << " m=" << m;
    }
  }
}

TEST(Assemble, RefusesAboveCap) {
  try {
    assemble(LatticeBox({{1, 100}}), zero(), 50);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
    EXPECT_NE(std::string(e.what()).find("50"), std::string::npos);
  }
}

TEST(Assemble, DimensionMismatch) {
  EXPECT_THROW(assemble(LatticeBox({{0, 2}}), PotentialSpec(TablePotential{{{{0, 0}, 1.0}}})), Error);
  EXPECT_THROW(assemble(LatticeBox({{0, 2}}), PotentialSpec(StepPotential{1.0, 1, 0, StepSide::below})), Error);
  EXPECT_THROW(assemble(LatticeBox({{0, 2}, {0, 2}}), PotentialSpec(Alternating1DPotential{0.0, 1.0})), Error);
}

TEST(Parts, Hermitian) {
  auto a = assemble(LatticeBox({{0, 4}}), PotentialSpec(DecayPowerPotential{1.0, 2.0}));
  EXPECT_EQ(real_part(a).entries(), a.entries());
  EXPECT_EQ(imag_part(a).entries(), Matrix::Zero(5, 5));
}

TEST(Parts, ITimesIdentity) {
  OperatorMatrix a(Matrix(I * Matrix::Identity(3, 3)));
  EXPECT_EQ(real_part(a).entries(), Matrix::Zero(3, 3));
  EXPECT_EQ(imag_part(a).entries(), Matrix(Matrix::Identity(3, 3)));
}

TEST(Parts, SplitOfSchroedingerOperator) {
  LatticeBox box({{-3, 3}});
  PotentialSpec d(SumPotential{{PotentialSpec(DecayPowerPotential{2.0, 1.0}), PotentialSpec(Alternating1DPotential{0.5, -1.0})}});
  auto a = assemble(box, d);
  auto re = real_part(a);
  auto im = imag_part(a);
  EXPECT_TRUE(re.hermitian());
  EXPECT_TRUE(im.hermitian());
  for (std::size_t i = 0; i < box.site_count(); ++i) {
    const auto k = box.site(i);
    const auto ii = static_cast<Eigen::Index>(i);
    EXPECT_EQ(re(ii, ii), d(k).real());
    EXPECT_EQ(im(ii, ii), d(k).imag());
    if (i + 1 < box.site_count()) {
      EXPECT_EQ(re(ii, ii + 1), 1.0);
      EXPECT_EQ(im(ii, ii + 1), cplx{});
    }
  }
}
