#include <gtest/gtest.h>

#include <cmath>

#include "specrange/construct.hpp"

using namespace specrange;

TEST(TailRatio, SolvesQuadratic) {
  for (double a : {-2.5, 2.5, -7.0, 3.1}) {
    const double r = tail_ratio(a);
    EXPECT_LT(std::abs(r), 1.0);
    EXPECT_NEAR(r + 1.0 / r, a, 1e-13);
  }
  EXPECT_NEAR(tail_ratio(-2.5), -0.5, 1e-15);
  EXPECT_THROW(tail_ratio(0.0), Error);
  EXPECT_THROW(tail_ratio(2.0), Error);
}

TEST(Design, SingleZero) {
  auto u = design_eigenfunction(-2.5, {0}, -10, 10);
  EXPECT_EQ(u(0), cplx{});
  EXPECT_EQ(u(-1), -u(1));
  EXPECT_EQ(u.zeros, (std::vector<std::int64_t>{0}));
  // geometric tails continue outside the window
  EXPECT_NEAR(std::abs(u(15) / u(14) - cplx{-0.5}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(-15) / u(-14) - cplx{-0.5}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.c_plus() * std::pow(u.ratio_plus, 20.0) - u(20)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.c_minus() * std::pow(u.ratio_minus, 20.0) - u(-20)), 0.0, 1e-15);
}

TEST(Design, RejectsBadZeros) {
  EXPECT_THROW(design_eigenfunction(-2.5, {0, 1}, -10, 10), Error);
  EXPECT_THROW(design_eigenfunction(-2.5, {2, 2}, -10, 10), Error);
  EXPECT_THROW(design_eigenfunction(-2.5, {9}, -5, 5), Error);
  EXPECT_THROW(design_eigenfunction(1.0, {0}, -5, 5), Error);
}

TEST(RealPotential, SatisfiesEigenEquation) {
  const double a = 2.5;
  auto u = design_eigenfunction(a, {0, 4}, -12, 14);
  auto re = real_potential_from_eigenfunction(u, a);
  for (std::int64_t n = -40; n <= 40; ++n) {
    EXPECT_EQ(re(n).imag(), 0.0);
    EXPECT_NEAR(std::abs(u(n - 1) + re(n) * u(n) + u(n + 1) - a * u(n)), 0.0, 1e-12) << n;
  }
  // tails need no potential
  EXPECT_EQ(re(-12), cplx{});
  EXPECT_EQ(re(14), cplx{});
  ASSERT_TRUE(re.decay());
  EXPECT_TRUE(std::holds_alternative<VanishesOutside>(*re.decay()));
}

TEST(RealPotential, RejectsWrongTail) {
  auto u = design_eigenfunction(-2.5, {0}, -10, 10);
  EXPECT_THROW(real_potential_from_eigenfunction(u, -3.0), Error);
}

TEST(ImagPotential, ZerosCarryNoImaginaryPart) {
  auto u = design_eigenfunction(-2.5, {0, 3}, -10, 10);
  auto im = imag_potential_from_support(u, 1.0);
  EXPECT_FALSE(im.shifted_selfadjoint);
  for (std::int64_t n = -20; n <= 20; ++n) EXPECT_EQ(im.spec(n).imag(), (n == 0 || n == 3) ? 0.0 : 1.0) << n;
  EXPECT_THROW(imag_potential_from_support(u, 0.0), Error);
}

TEST(ImagPotential, NoZerosIsShiftedSelfadjoint) {
  auto u = design_eigenfunction(-2.5, {}, -5, 5);
  EXPECT_TRUE(imag_potential_from_support(u, 0.5).shifted_selfadjoint);
}

TEST(Counterexample, CertifiedBoundaryEigenvalue) {
  auto cx = build_counterexample(-2.5, 1.0, {0}, -10, 10, 100);
  const auto& c = cx.classes[cx.certified_index];
  EXPECT_NEAR(std::abs(c.pair.value - cplx{-2.5, 1.0}), 0.0, 1e-10);
  EXPECT_TRUE(c.is_boundary);
  EXPECT_TRUE(is_certified_boundary(cx.op, c));
  // Im d differs from Im lambda at the zero, outside the support
  EXPECT_EQ(cx.potential(0).imag(), 0.0);
  for (const auto& k : c.support_set) EXPECT_NE(k[0], 0);
  for (auto v : cx.hull.polygon) {
    EXPECT_GE(v.imag(), -cx.hull.tol_hull);
    EXPECT_LE(v.imag(), 1.0 + cx.hull.tol_hull);
  }
}

TEST(Counterexample, TwoZerosPositiveA) {
  auto cx = build_counterexample(2.5, 0.5, {0, 4}, -12, 16, 121);
  EXPECT_NEAR(std::abs(cx.classes[cx.certified_index].pair.value - cplx{2.5, 0.5}), 0.0, 1e-10);
}

TEST(Counterexample, ConvergesGeometricallyInBoxSize) {
  // truncation error shrinks by |r|^10 = 2^-10 per ten extra sites until rounding
  double prev = 0.0;
  for (std::int64_t n : {21, 31, 41}) {
    auto u = design_eigenfunction(-2.5, {0}, -10, 10);
    auto d = sum({real_potential_from_eigenfunction(u, -2.5), imag_potential_from_support(u, 1.0).spec});
    double err = 1e9;
    for (const auto& p : eig_general(assemble(LatticeBox::centred_line(n), d)))
      err = std::min(err, std::abs(p.value - cplx{-2.5, 1.0}));
    if (prev > 0.0) {
      EXPECT_LT(err, prev * 4e-3);
      EXPECT_GT(err, prev * 2.5e-4);
    }
    prev = err;
  }
}

TEST(Counterexample, WindowOutsideBoxIsInvalid) {
  try {
    build_counterexample(-2.5, 1.0, {0}, -10, 10, 11);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}
