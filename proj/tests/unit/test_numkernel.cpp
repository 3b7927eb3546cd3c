#include <cmath>

#include <gtest/gtest.h>

#include "metric_energy/error.hpp"
#include "metric_energy/numkernel.hpp"
#include "metric_energy/sampling.hpp"
#include "zoo.hpp"

namespace me = metric_energy;
namespace mt = metric_energy::testing;

namespace {

Eigen::MatrixXd random_symmetric(me::Sampler& s, Eigen::Index n) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = s.normal();
  }
  return 0.5 * (a + a.transpose());
}

void expect_valid(const me::SpectralDecomposition& dec, const Eigen::MatrixXd& s) {
  const Eigen::Index n = s.rows();
  const Eigen::MatrixXd& v = dec.eigenvectors;
  EXPECT_LE((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((dec.reconstruct() - s).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + dec.spectral_radius()));
  for (Eigen::Index i = 1; i < n; ++i) EXPECT_GE(dec.eigenvalues[i - 1], dec.eigenvalues[i]);
  EXPECT_LE(dec.residual, 1e-9 * (1.0 + dec.spectral_radius()));
}

}  // namespace

TEST(SymEig, IdentityTwo) {
  const auto dec = me::sym_eig(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_DOUBLE_EQ(dec.eigenvalues[0], 1.0);
  EXPECT_DOUBLE_EQ(dec.eigenvalues[1], 1.0);
  expect_valid(dec, Eigen::MatrixXd::Identity(2, 2));
}

TEST(SymEig, Reflection) {
  Eigen::MatrixXd s(2, 2);
  s << 0, 1, 1, 0;
  const auto dec = me::sym_eig(s);
  EXPECT_NEAR(dec.eigenvalues[0], 1.0, 1e-15);
  EXPECT_NEAR(dec.eigenvalues[1], -1.0, 1e-15);
  expect_valid(dec, s);
}

TEST(SymEig, CenteredTwoPointForm) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  const Eigen::MatrixXd p = me::mass_zero_projection(2);
  const Eigen::MatrixXd pdp = p * d * p;
  const auto dec = me::sym_eig(pdp);
  EXPECT_NEAR(dec.eigenvalues[0], 0.0, 1e-15);
  EXPECT_NEAR(dec.eigenvalues[1], -1.0, 1e-15);
  const Eigen::Vector2d v = dec.eigenvectors.col(1);
  EXPECT_NEAR(std::abs(v[0] + v[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[0]), 1.0 / std::sqrt(2.0), 1e-15);

  const auto [hi, lo] = mt::char_poly_2x2(pdp);
  EXPECT_NEAR(dec.eigenvalues[0], hi, 1e-14);
  EXPECT_NEAR(dec.eigenvalues[1], lo, 1e-14);
}

TEST(SymEig, SingleEntry) {
  Eigen::MatrixXd s(1, 1);
  s << -3.5;
  const auto dec = me::sym_eig(s);
  EXPECT_EQ(dec.eigenvalues[0], -3.5);
  EXPECT_EQ(dec.eigenvectors(0, 0), 1.0);
}

TEST(SymEig, MatchesIndependentSolversOnRandomMatrices) {
  me::Sampler s(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 1 + s.index(12);
    const Eigen::MatrixXd a = random_symmetric(s, n);
    const auto dec = me::sym_eig(a);
    expect_valid(dec, a);
    const Eigen::VectorXd lib = mt::eigen_library_eigenvalues(a);
    const Eigen::VectorXd bis = mt::inertia_eigenvalues(a);
    EXPECT_LE((dec.eigenvalues - lib).cwiseAbs().maxCoeff(), 1e-12 * (1 + dec.spectral_radius()));
    EXPECT_LE((dec.eigenvalues - bis).cwiseAbs().maxCoeff(), 1e-10 * (1 + dec.spectral_radius()));
  }
}

TEST(SymEig, DistanceMatricesOfTheZoo) {
  for (const auto& [name, space] : mt::zoo()) {
    SCOPED_TRACE(name);
    const auto dec = me::sym_eig(space.dist());
    expect_valid(dec, space.dist());
    const Eigen::VectorXd lib = mt::eigen_library_eigenvalues(space.dist());
    EXPECT_LE((dec.eigenvalues - lib).cwiseAbs().maxCoeff(), 1e-11 * (1 + dec.spectral_radius()));
  }
}

TEST(SymEig, DegenerateSpectrumIsDeterministic) {
  // Repeated eigenvalues: the eigenbasis is not unique, the output must be.
  const auto space = me::circle_grid(16);
  const auto a = me::sym_eig(space.dist());
  const auto b = me::sym_eig(space.dist());
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
  expect_valid(a, space.dist());
}

TEST(SymEig, SignNormalisation) {
  me::Sampler s(9);
  const Eigen::MatrixXd a = random_symmetric(s, 7);
  const auto dec = me::sym_eig(a);
  for (Eigen::Index k = 0; k < 7; ++k) {
    const Eigen::VectorXd v = dec.eigenvectors.col(k);
    for (Eigen::Index i = 0; i < 7; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        EXPECT_GT(v[i], 0.0);
        break;
      }
    }
  }
}

TEST(SymEig, RejectsAsymmetry) {
  Eigen::MatrixXd s(2, 2);
  s << 0, 1, 1 + 1e-9, 0;
  try {
    me::sym_eig(s);
    FAIL();
  } catch (const me::Error& e) {
    EXPECT_EQ(e.code(), me::ErrorCode::NotSymmetric);
  }
  // within 1e-12 relative is accepted
  s(1, 0) = 1.0 + 1e-14;
  EXPECT_NO_THROW(me::sym_eig(s));
}

TEST(SymEig, RejectsNonSquare) {
  EXPECT_THROW(me::sym_eig(Eigen::MatrixXd::Zero(2, 3)), me::Error);
}

TEST(SymEig, ReportsNoConvergence) {
  me::Sampler s(4);
  me::ToleranceConfig tol;
  tol.max_jacobi_sweeps = 1;
  try {
    me::sym_eig(random_symmetric(s, 20), tol);
    FAIL();
  } catch (const me::Error& e) {
    EXPECT_EQ(e.code(), me::ErrorCode::NoConvergence);
  }
}

TEST(SymEig, ThresholdAndRank) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s.diagonal() << 4.0, 1e-10, -2.0;
  const auto dec = me::sym_eig(s);
  EXPECT_DOUBLE_EQ(dec.zero_threshold, 4e-9);
  EXPECT_EQ(dec.rank(), 2);
  const auto neg = dec.negated();
  EXPECT_DOUBLE_EQ(neg.eigenvalues[0], 2.0);
  EXPECT_DOUBLE_EQ(neg.eigenvalues[2], -4.0);
  EXPECT_EQ(neg.zero_threshold, dec.zero_threshold);
}

TEST(Tolerance, Validation) {
  me::ToleranceConfig tol;
  EXPECT_NO_THROW(tol.validate());
  EXPECT_DOUBLE_EQ(tol.zero_threshold(0.0), 1e-12);
  EXPECT_DOUBLE_EQ(tol.zero_threshold(10.0), 1e-8);
  tol.rel_eig_zero = 0.0;
  EXPECT_THROW(tol.validate(), me::Error);
  tol = {};
  tol.abs_floor = -1.0;
  EXPECT_THROW(tol.validate(), me::Error);
  tol = {};
  tol.max_jacobi_sweeps = 0;
  EXPECT_THROW(tol.validate(), me::Error);
}

TEST(PinvApply, DiagonalInRange) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(0, 0) = 2.0;
  const auto sol = me::pinv_apply(me::sym_eig(s), Eigen::Vector2d(4.0, 0.0));
  EXPECT_NEAR(sol.x[0], 2.0, 1e-15);
  EXPECT_NEAR(sol.x[1], 0.0, 1e-15);
  EXPECT_TRUE(sol.in_range);
  EXPECT_NEAR(sol.residual, 0.0, 1e-14);
}

TEST(PinvApply, PureNullSpace) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(0, 0) = 2.0;
  const auto sol = me::pinv_apply(me::sym_eig(s), Eigen::Vector2d(0.0, 3.0));
  EXPECT_NEAR(sol.x.norm(), 0.0, 1e-15);
  EXPECT_FALSE(sol.in_range);
}

TEST(PinvApply, CenteredTwoPoint) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  const Eigen::MatrixXd p = me::mass_zero_projection(2);
  const Eigen::MatrixXd pdp = p * d * p;
  const auto sol = me::pinv_apply(me::sym_eig(pdp), Eigen::Vector2d(1.0, -1.0));
  // PDP has eigenvalue -1 on (1, -1)/sqrt(2), so x = -(1, -1)
  EXPECT_NEAR(sol.x[0], -1.0, 1e-15);
  EXPECT_NEAR(sol.x[1], 1.0, 1e-15);
  EXPECT_TRUE(sol.in_range);
  // direct solve on the range: (pdp) x = g
  EXPECT_LE((pdp * sol.x - Eigen::Vector2d(1.0, -1.0)).norm(), 1e-14);
}

TEST(PinvApply, RecoversRangeComponent) {
  me::Sampler s(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + s.index(9);
    // rank-deficient symmetric matrix
    Eigen::MatrixXd b(n, n / 2 + 1);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = s.normal();
    const Eigen::MatrixXd a = b * b.transpose() - 0.5 * (b.col(0) * b.col(0).transpose());
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    const auto dec = me::sym_eig(sym);
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g[i] = s.normal();
    const auto sol = me::pinv_apply(dec, g);
    Eigen::VectorXd null_part = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(dec.eigenvalues[k]) <= dec.zero_threshold) {
        null_part += dec.eigenvectors.col(k).dot(g) * dec.eigenvectors.col(k);
      }
    }
    EXPECT_LE((sym * sol.x - (g - null_part)).norm(), 1e-8 * (1.0 + g.norm()));
    EXPECT_EQ(sol.in_range, null_part.norm() <= dec.zero_threshold * (1.0 + g.norm()));
  }
}

TEST(MassZeroProjection, Examples) {
  EXPECT_EQ(me::mass_zero_projection(1)(0, 0), 0.0);
  const Eigen::MatrixXd p2 = me::mass_zero_projection(2);
  EXPECT_DOUBLE_EQ(p2(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(p2(0, 1), -0.5);
  EXPECT_DOUBLE_EQ(p2(1, 0), -0.5);
  EXPECT_DOUBLE_EQ(p2(1, 1), 0.5);
  const Eigen::Vector3d w(2, -1, -1);
  EXPECT_LE((me::mass_zero_projection(3) * w - w).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MassZeroProjection, ProjectorIdentities) {
  for (Eigen::Index n : {1, 2, 3, 7, 40}) {
    const Eigen::MatrixXd p = me::mass_zero_projection(n);
    EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((p * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MassZeroBasis, OrthonormalAndMassZero) {
  for (Eigen::Index n : {1, 2, 5, 33}) {
    const Eigen::MatrixXd q = me::mass_zero_basis(n);
    ASSERT_EQ(q.rows(), n);
    ASSERT_EQ(q.cols(), n - 1);
    if (n == 1) continue;
    EXPECT_LE((q.transpose() * q - Eigen::MatrixXd::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff(),
              1e-14);
    EXPECT_LE((q.transpose() * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE((q * q.transpose() - me::mass_zero_projection(n)).cwiseAbs().maxCoeff(), 1e-14);
  }
}
