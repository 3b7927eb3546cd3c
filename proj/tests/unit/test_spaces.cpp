#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "metric_energy/error.hpp"
#include "metric_energy/spaces.hpp"
#include "zoo.hpp"

namespace me = metric_energy;
namespace mt = metric_energy::testing;

namespace {

me::ErrorCode code_of(const auto& f) {
  try {
    f();
  } catch (const me::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return me::ErrorCode::Io;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(ValidateMetric, TwoPoint) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 1, 0;
  const auto space = me::validate_metric(m);
  EXPECT_EQ(space.size(), 2);
  EXPECT_EQ(space.diameter(), 1.0);
  EXPECT_EQ(space.provenance().kind(), me::SpaceKind::matrix);
  ASSERT_EQ(space.labels().size(), 2u);
}

TEST(ValidateMetric, Asymmetric) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 2, 0;
  try {
    me::validate_metric(m);
    FAIL();
  } catch (const me::Error& e) {
    EXPECT_EQ(e.code(), me::ErrorCode::NotSymmetric);
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{0, 1}));
  }
}

TEST(ValidateMetric, SymmetryIsExact) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, std::nextafter(1.0, 2.0), 0;
  EXPECT_EQ(code_of([&] { me::validate_metric(m); }), me::ErrorCode::NotSymmetric);
}

TEST(ValidateMetric, TriangleViolationCarriesDistances) {
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, 3, 1, 0, 1, 3, 1, 0;
  try {
    me::validate_metric(m);
    FAIL();
  } catch (const me::Error& e) {
    EXPECT_EQ(e.code(), me::ErrorCode::TriangleViolation);
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{0, 2, 1}));
    EXPECT_EQ(e.values(), (std::vector<double>{3.0, 1.0, 1.0}));
  }
}

TEST(ValidateMetric, TriangleSlack) {
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, 2 + 5e-13, 1, 0, 1, 2 + 5e-13, 1, 0;
  EXPECT_NO_THROW(me::validate_metric(m));
  m(0, 2) = m(2, 0) = 2 + 1e-11;
  EXPECT_EQ(code_of([&] { me::validate_metric(m); }), me::ErrorCode::TriangleViolation);
}

TEST(ValidateMetric, OtherAxioms) {
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 1, 1, 0;
  EXPECT_EQ(code_of([&] { me::validate_metric(m); }), me::ErrorCode::NonzeroDiagonal);
  m << 0, 0, 0, 0;
  EXPECT_EQ(code_of([&] { me::validate_metric(m); }), me::ErrorCode::NonpositiveOffDiagonal);
  m << 0, -1, -1, 0;
  EXPECT_EQ(code_of([&] { me::validate_metric(m); }), me::ErrorCode::NonpositiveOffDiagonal);
  m << 0, NAN, NAN, 0;
  EXPECT_THROW(me::validate_metric(m), me::Error);
  EXPECT_EQ(code_of([&] { me::validate_metric(Eigen::MatrixXd::Zero(2, 3)); }),
            me::ErrorCode::NotSquare);
}

TEST(ValidateMetric, Labels) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 1, 0;
  const auto space = me::validate_metric(m, {"x", "y"});
  EXPECT_EQ(space.labels()[1], "y");
  EXPECT_THROW(me::validate_metric(m, {"only-one"}), me::Error);
}

TEST(IntervalGrid, Examples) {
  const auto three = me::interval_grid(0, 1, 3);
  EXPECT_EQ(three.dist(0, 1), 0.5);
  EXPECT_EQ(three.dist(0, 2), 1.0);
  EXPECT_EQ(three.labels()[1], "0.5");

  const auto two = me::interval_grid(0, 1, 2);
  EXPECT_EQ(two.size(), 2);
  EXPECT_EQ(two.dist(0, 1), 1.0);

  EXPECT_EQ(me::interval_grid(2, 4, 5).diameter(), 2.0);
}

TEST(IntervalGrid, ClosedForm) {
  const auto space = me::interval_grid(-1.0, 3.0, 41);
  for (Eigen::Index i = 0; i < 41; ++i) {
    for (Eigen::Index j = 0; j < 41; ++j) {
      EXPECT_NEAR(space.dist(i, j), std::abs(i - j) * 0.1, 1e-12);
    }
  }
}

TEST(IntervalGrid, BadRange) {
  EXPECT_EQ(code_of([] { me::interval_grid(1, 1, 3); }), me::ErrorCode::BadRange);
  EXPECT_EQ(code_of([] { me::interval_grid(2, 1, 3); }), me::ErrorCode::BadRange);
  EXPECT_THROW(me::interval_grid(0, 1, 1), me::Error);
}

TEST(CircleGrid, FourPoints) {
  const auto space = me::circle_grid(4);
  EXPECT_NEAR(space.dist(0, 1), kPi / 2, 1e-15);
  EXPECT_NEAR(space.dist(0, 2), kPi, 1e-15);
  EXPECT_NEAR(space.dist(1, 3), kPi, 1e-15);
  EXPECT_EQ(space.diameter(), space.dist(0, 2));
}

TEST(CircleGrid, TwoPoints) {
  const auto space = me::circle_grid(2);
  EXPECT_NEAR(space.dist(0, 1), kPi, 1e-15);
}

TEST(CircleGrid, SixPointsDistanceSet) {
  const auto space = me::circle_grid(6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      if (i == j) continue;
      const double d = space.dist(i, j);
      const bool in_set = std::abs(d - kPi / 3) < 1e-12 || std::abs(d - 2 * kPi / 3) < 1e-12 ||
                          std::abs(d - kPi) < 1e-12;
      EXPECT_TRUE(in_set) << d;
    }
  }
}

TEST(CircleGrid, MatchesChordAngles) {
  for (int n : {3, 5, 8, 13, 64}) {
    const auto space = me::circle_grid(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(space.dist(i, j), mt::chord_angle_distance(i, j, n), 1e-12);
      }
    }
    if (n % 2 == 0) {
      EXPECT_NEAR(space.diameter(), kPi, 1e-15);
    }
  }
}

TEST(SphereGrid, ValidAndBounded) {
  for (int n : {2, 3, 10, 100}) {
    const auto space = me::sphere_grid(n);
    EXPECT_EQ(space.size(), n);
    EXPECT_LE(space.diameter(), kPi);
  }
  EXPECT_THROW(me::sphere_grid(10, 3), me::Error);
  EXPECT_THROW(me::sphere_grid(1), me::Error);
}

TEST(SphereGrid, PolesAreAntipodal) {
  const auto space = me::great_circle_space({{0, 0, 1}, {0, 0, -2}});
  EXPECT_NEAR(space.dist(0, 1), kPi, 1e-15);
}

TEST(LpCloud, ThreeFourFive) {
  const std::vector<std::vector<double>> pts{{0, 0}, {3, 4}};
  EXPECT_NEAR(me::lp_cloud(pts, 2.0).dist(0, 1), 5.0, 1e-15);
  EXPECT_NEAR(me::lp_cloud(pts, 1.0).dist(0, 1), 7.0, 1e-15);
  EXPECT_NEAR(me::lp_cloud(pts, me::kInfinity).dist(0, 1), 4.0, 1e-15);
  EXPECT_NEAR(me::lp_cloud(pts, 3.0).dist(0, 1), std::cbrt(27.0 + 64.0), 1e-13);
}

TEST(LpCloud, Errors) {
  EXPECT_EQ(code_of([] { me::lp_cloud({{1, 2}, {0, 0}, {1, 2}}, 2.0); }),
            me::ErrorCode::DuplicatePoints);
  EXPECT_THROW(me::lp_cloud({{0, 0}, {1, 1}}, 0.5), me::Error);
  EXPECT_THROW(me::lp_cloud({{0, 0}, {1}}, 2.0), me::Error);
  EXPECT_THROW(me::lp_cloud({}, 2.0), me::Error);
}

TEST(RandomMetric, RangeAndReproducibility) {
  const auto a = me::random_metric(4, 7);
  const auto b = me::random_metric(4, 7);
  EXPECT_TRUE(a.same_as(b));
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_FALSE(a.same_as(me::random_metric(4, 8)));
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (i == j) continue;
      EXPECT_GE(a.dist(i, j), 1.0);
      EXPECT_LE(a.dist(i, j), 2.0);
    }
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_NO_THROW(me::random_metric(2, seed));
  EXPECT_THROW(me::random_metric(1, 0), me::Error);
}

TEST(GeneratorOutputs, RevalidateCleanly) {
  for (const auto& [name, space] : mt::zoo()) {
    SCOPED_TRACE(name);
    EXPECT_NO_THROW(me::validate_metric(space.dist()));
  }
}

TEST(BuildSpace, FollowsDescriptor) {
  const auto space = me::build_space({me::IntervalParams{0.0, 2.0, 5}});
  EXPECT_TRUE(space.same_as(me::interval_grid(0.0, 2.0, 5)));
  EXPECT_EQ(space.provenance().kind(), me::SpaceKind::interval);
  EXPECT_TRUE(me::build_space({me::CircleParams{6}}).same_as(me::circle_grid(6)));
  EXPECT_TRUE(me::build_space({me::RandomParams{5, 3}}).same_as(me::random_metric(5, 3)));
  EXPECT_TRUE(me::build_space({me::MatrixParams{{{0, 1}, {1, 0}}, {}}}).same_as(mt::two_point()));
}

TEST(MetricSpace, RestrictAndScale) {
  const auto space = me::interval_grid(0, 1, 5);
  const auto sub = space.restrict_to({4, 0});
  EXPECT_EQ(sub.size(), 2);
  EXPECT_EQ(sub.dist(0, 1), 1.0);
  EXPECT_EQ(sub.labels()[0], "1");
  EXPECT_THROW(space.restrict_to({0, 0}), me::Error);
  EXPECT_THROW(space.restrict_to({9}), me::Error);

  const auto big = space.scaled(3.0);
  EXPECT_NEAR(big.diameter(), 3.0, 1e-15);
  EXPECT_THROW(space.scaled(0.0), me::Error);
}

TEST(MetricSpace, DiameterPairAndHash) {
  const auto space = me::interval_grid(0, 1, 7);
  const auto [i, j] = space.diameter_pair();
  EXPECT_EQ(space.dist(i, j), space.diameter());
  EXPECT_EQ(space.hash().size(), 16u);
  EXPECT_NE(space.hash(), me::interval_grid(0, 1, 8).hash());
  EXPECT_EQ(mt::single_point().diameter(), 0.0);
}
