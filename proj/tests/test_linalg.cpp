#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specrange/linalg.hpp"

using namespace specrange;

namespace {

Matrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {g(gen), g(gen)};
  return m;
}

Matrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
  Matrix m = random_matrix(n, seed);
  return Matrix(0.5 * (m + m.adjoint()));
}

// Characteristic polynomial by Faddeev-LeVerrier, evaluated at z.
cplx charpoly(const Matrix& a, cplx z) {
  const auto n = a.rows();
  std::vector<cplx> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1.0;
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * Matrix::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  cplx p = 0.0;
  for (Eigen::Index k = n; k >= 0; --k) p = p * z + c[static_cast<std::size_t>(k)];
  return p;
}

}  // namespace

TEST(EigGeneral, Diagonal) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  auto pairs = eig_general(d);
  ASSERT_EQ(pairs.size(), 3u);
  for (int m = 0; m < 3; ++m) {
    EXPECT_NEAR(pairs[m].value.real(), m + 1.0, 1e-14);
    EXPECT_LE(pairs[m].residual, 1e-14);
    EXPECT_NEAR(std::abs(pairs[m].vector(m == 0 ? 1 : m == 1 ? 2 : 0)), 1.0, 1e-14);
  }
}

TEST(EigGeneral, JordanBlock) {
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = 1.0;
  auto pairs = eig_general(j);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].value, cplx{});
  EXPECT_EQ(pairs[1].value, cplx{});
}

TEST(EigGeneral, RandomResidualsAndCharacteristicPolynomial) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix a = random_matrix(5, seed);
    const auto pairs = eig_general(a);
    const double scale = 1.0 + a.norm();
    for (const auto& p : pairs) {
      EXPECT_LE(p.residual, 1e-10 * scale);
      EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
      // |p(lambda)| relative to the size of the polynomial's terms near lambda
      EXPECT_LT(std::abs(charpoly(a, p.value)), 1e-9 * std::pow(scale, 5)) << "seed " << seed;
    }
    for (std::size_t i = 1; i < pairs.size(); ++i) EXPECT_LE(pairs[i - 1].value.real(), pairs[i].value.real());
  }
}

TEST(EigGeneral, RejectsNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(eig_general(a), Error);
}

TEST(EigHermitian, FreeLineOfThree) {
  Matrix j0 = Matrix::Zero(3, 3);
  j0(0, 1) = j0(1, 0) = j0(1, 2) = j0(2, 1) = 1.0;
  auto e = eig_hermitian(j0);
  EXPECT_NEAR(e.values(0), -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(e.values(1), 0.0, 1e-14);
  EXPECT_NEAR(e.values(2), std::sqrt(2.0), 1e-14);
}

TEST(EigHermitian, OneByOne) {
  Matrix a(1, 1);
  a(0, 0) = 5.0;
  EXPECT_EQ(eig_hermitian(a).values(0), 5.0);
}

TEST(EigHermitian, BoundStateBelowBand) {
  auto a = assemble(LatticeBox::centred_line(101), PotentialSpec(TablePotential{{{{0}, -3.0}}}));
  EXPECT_LT(eig_hermitian(a).values(0), -2.0);
}

TEST(EigHermitian, RejectsNonHermitian) {
  EXPECT_THROW(eig_hermitian(random_matrix(4, 3)), Error);
}

TEST(EigHermitian, OrthonormalAndRayleigh) {
  const Matrix h = random_hermitian(12, 9);
  auto e = eig_hermitian(h);
  EXPECT_LT((e.vectors.adjoint() * e.vectors - Matrix::Identity(12, 12)).norm(), 1e-12);
  // every Rayleigh quotient lies between the extreme eigenvalues
  std::mt19937_64 gen(5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    Vector f(12);
    for (auto& x : f) x = {g(gen), g(gen)};
    f /= f.norm();
    const double q = f.dot(h * f).real();
    EXPECT_GE(q, e.values(0) - 1e-12);
    EXPECT_LE(q, e.values(11) + 1e-12);
  }
}

TEST(TopEigenpair, TridiagonalFastPathMatchesDense) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 5 + trial * 7;
    Matrix t = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) t(i, i) = u(gen);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      t(i + 1, i) = cplx{u(gen), u(gen)};
      t(i, i + 1) = std::conj(t(i + 1, i));
    }
    auto [top, v] = top_eigenpair(t);
    const auto dense = eig_hermitian(t);
    EXPECT_NEAR(top, dense.values(n - 1), 1e-12);
    EXPECT_LT(residual_norm(t, top, v), 1e-9 * (1.0 + t.norm()));
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  }
}

TEST(TopEigenpair, DegenerateTop) {
  // two decoupled identical blocks: the top eigenvalue is double
  Matrix t = Matrix::Zero(6, 6);
  t(0, 1) = t(1, 0) = t(1, 2) = t(2, 1) = 1.0;
  t(3, 4) = t(4, 3) = t(4, 5) = t(5, 4) = 1.0;
  auto [top, v] = top_eigenpair(t);
  EXPECT_NEAR(top, std::sqrt(2.0), 1e-14);
  EXPECT_LT(residual_norm(t, top, v), 1e-12);
}

TEST(SpectralNorm, Jordan) {
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = 1.0;
  EXPECT_NEAR(spectral_norm(j), 1.0, 1e-15);
}
