#include <cmath>

#include <gtest/gtest.h>

#include "metric_energy/energy.hpp"
#include "metric_energy/error.hpp"
#include "metric_energy/negtype.hpp"
#include "metric_energy/sampling.hpp"
#include "zoo.hpp"

namespace me = metric_energy;
namespace mt = metric_energy::testing;

TEST(Classify, TwoPoint) {
  const auto r = me::classify_negative_type(mt::two_point());
  EXPECT_TRUE(r.is_qhm);
  ASSERT_TRUE(r.is_strict.has_value());
  EXPECT_TRUE(*r.is_strict);
  ASSERT_EQ(r.projected_eigenvalues.size(), 1);
  EXPECT_NEAR(r.projected_eigenvalues[0], -1.0, 1e-15);
  EXPECT_FALSE(r.violation_witness.has_value());
  EXPECT_EQ(r.f_dim, 0);
}

TEST(Classify, SinglePointIsTrivial) {
  const auto r = me::classify_negative_type(mt::single_point());
  EXPECT_TRUE(r.is_qhm);
  EXPECT_TRUE(*r.is_strict);
  EXPECT_EQ(r.f_dim, 0);
  EXPECT_EQ(r.projected_eigenvalues.size(), 0);
}

TEST(Classify, CircleFourIsNotStrict) {
  const auto r = me::classify_negative_type(me::circle_grid(4));
  EXPECT_TRUE(r.is_qhm);
  EXPECT_FALSE(*r.is_strict);
  ASSERT_EQ(r.f_dim, 1);
  const Eigen::Vector4d expected = Eigen::Vector4d(1, -1, 1, -1) / 2.0;
  const Eigen::VectorXd f = r.f_basis.col(0);
  EXPECT_NEAR(std::abs(f.dot(expected)), 1.0, 1e-12);
  EXPECT_NEAR(r.constant_potentials[0].value, 0.0, 1e-12);
  EXPECT_LE(r.constant_potentials[0].residual, 1e-12);
}

TEST(Classify, LinfCloudFoundBySearchIsNotQhm) {
  const auto space = mt::find_linf_non_qhm(7);
  ASSERT_TRUE(space.has_value());
  const auto r = me::classify_negative_type(*space);
  EXPECT_FALSE(r.is_qhm);
  EXPECT_FALSE(r.is_strict.has_value());
  ASSERT_TRUE(r.violation_witness.has_value());
  const Eigen::VectorXd& w = *r.violation_witness;
  EXPECT_LE(std::abs(w.sum()), 1e-12);
  EXPECT_NEAR(w.norm(), 1.0, 1e-12);
  EXPECT_GT(w.dot(space->dist() * w), r.zero_threshold);
}

TEST(Classify, K23GraphWitness) {
  const auto space = mt::k23_graph();
  const auto r = me::classify_negative_type(space);
  ASSERT_FALSE(r.is_qhm);
  const Eigen::VectorXd& w = *r.violation_witness;
  // the top direction puts equal weight on each part
  EXPECT_NEAR(w[0], w[1], 1e-12);
  EXPECT_NEAR(w[2], w[3], 1e-12);
  EXPECT_GT(w[0], 0.0);
  EXPECT_NEAR(w.dot(space.dist() * w), r.max_projected_eigenvalue(), 1e-12);
}

TEST(Classify, ReportInvariantsAcrossZoo) {
  for (const auto& [name, space] : mt::zoo()) {
    SCOPED_TRACE(name);
    const auto r = me::classify_negative_type(space);
    const Eigen::Index n = space.size();
    EXPECT_EQ(r.is_qhm, r.max_projected_eigenvalue() <= r.zero_threshold);
    EXPECT_EQ(r.is_strict.has_value(), r.is_qhm);
    if (r.is_qhm) {
      EXPECT_EQ(*r.is_strict, r.f_dim == 0);
    }
    EXPECT_EQ(r.violation_witness.has_value(), !r.is_qhm);
    ASSERT_EQ(r.f_basis.cols(), r.f_dim);
    ASSERT_EQ(r.constant_potentials.size(), static_cast<std::size_t>(r.f_dim));
    if (r.f_dim > 0) {
      EXPECT_LE((r.f_basis.transpose() * r.f_basis -
                 Eigen::MatrixXd::Identity(r.f_dim, r.f_dim)).cwiseAbs().maxCoeff(), 1e-10);
    }
    const Eigen::MatrixXd p = me::mass_zero_projection(n);
    const Eigen::MatrixXd pdp = p * space.dist() * p;
    for (Eigen::Index k = 0; k < r.f_dim; ++k) {
      const Eigen::VectorXd v = r.f_basis.col(k);
      EXPECT_LE(std::abs(v.sum()), 1e-10);
      EXPECT_LE((pdp * v).norm(), r.zero_threshold * (1 + space.dist().norm()));
    }
    for (Eigen::Index i = 1; i < r.projected_eigenvalues.size(); ++i) {
      EXPECT_GE(r.projected_eigenvalues[i - 1], r.projected_eigenvalues[i]);
    }
  }
}

TEST(Classify, ProjectedSpectrumMatchesCenteredForm) {
  // The Helmert-restricted spectrum is P D P's spectrum minus the forced
  // zero along the ones direction.
  for (const auto& [name, space] : mt::zoo()) {
    const Eigen::Index n = space.size();
    if (n < 2 || n > 40) continue;
    SCOPED_TRACE(name);
    const auto r = me::classify_negative_type(space);
    const Eigen::MatrixXd p = me::mass_zero_projection(n);
    Eigen::VectorXd full = mt::eigen_library_eigenvalues(p * space.dist() * p);
    // remove the eigenvalue closest to zero belonging to ones: the multiset
    // {projected} + {0} must equal the full spectrum.
    Eigen::VectorXd with_zero(n);
    with_zero << r.projected_eigenvalues, 0.0;
    std::sort(with_zero.data(), with_zero.data() + n, std::greater<>());
    EXPECT_LE((with_zero - full).cwiseAbs().maxCoeff(), 1e-11 * (1 + space.dist().norm()));
  }
}

TEST(Classify, EuclideanCloudsAreStrict) {
  me::Sampler s(101);
  for (int t = 0; t < 20; ++t) {
    const int k = 2 + static_cast<int>(s.index(20));
    const int dim = 1 + static_cast<int>(s.index(5));
    const auto space = me::lp_cloud(mt::random_cloud(s, k, dim), 2.0);
    const auto r = me::classify_negative_type(space);
    EXPECT_TRUE(r.is_qhm);
    EXPECT_TRUE(r.is_strict.value_or(false));
  }
}

TEST(Classify, FourPointSpacesAreQhm) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const auto r = me::classify_negative_type(me::random_metric(n, seed));
    EXPECT_TRUE(r.is_qhm) << "seed " << seed;
  }
}

TEST(Classify, SphereIsQhm) {
  const auto r = me::classify_negative_type(me::sphere_grid(100));
  EXPECT_TRUE(r.is_qhm);
}

TEST(Classify, ConstantPotentialVectorsLieInF) {
  // On even circle grids every antipodal difference measure has constant
  // (zero) potential; each must lie in span(F).
  for (int n : {4, 8, 16}) {
    const auto space = me::circle_grid(n);
    const auto r = me::classify_negative_type(space);
    for (int a = 0; a < n / 2; ++a) {
      for (int b = a + 1; b < n / 2; ++b) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v[a] = v[a + n / 2] = 1.0;
        v[b] = v[b + n / 2] = -1.0;
        const Eigen::VectorXd dv = space.dist() * v;
        ASSERT_LE((dv.array() - dv.mean()).abs().maxCoeff(), 1e-12);
        const Eigen::VectorXd proj = r.f_basis * (r.f_basis.transpose() * v);
        EXPECT_LE((proj - v).norm(), 1e-9 * v.norm()) << n << " " << a << " " << b;
      }
    }
    // and every F vector has constant potential
    for (const auto& cp : r.constant_potentials) EXPECT_LE(cp.residual, 1e-10);
  }
}

TEST(Classify, BipyramidNullDirectionHasNonzeroConstant) {
  const auto space = mt::bipyramid();
  const auto r = me::classify_negative_type(space);
  ASSERT_TRUE(r.is_qhm);
  ASSERT_EQ(r.f_dim, 1);
  EXPECT_GT(std::abs(r.constant_potentials[0].value), 0.1);
  EXPECT_LE(r.constant_potentials[0].residual, 1e-12);
}

TEST(Embed, TwoPoint) {
  const auto e = me::schoenberg_embed(mt::two_point());
  ASSERT_EQ(e.r, 1);
  EXPECT_NEAR(std::abs(e.coords(0, 0)), 0.5, 1e-15);
  EXPECT_NEAR(e.coords(0, 0), -e.coords(1, 0), 1e-15);
  EXPECT_LE(e.max_roundtrip_error, 1e-12);
}

TEST(Embed, Equilateral) {
  const auto space = mt::equilateral(3);
  const auto e = me::schoenberg_embed(space);
  EXPECT_EQ(e.r, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      EXPECT_NEAR((e.coords.row(i) - e.coords.row(j)).squaredNorm(), 1.0, 1e-14);
    }
  }
}

TEST(Embed, RankDeficientCircle) {
  const auto e = me::schoenberg_embed(me::circle_grid(4));
  EXPECT_EQ(e.r, 2);
  EXPECT_LE(e.max_roundtrip_error, 1e-8);
}

TEST(Embed, RefusesNonQhm) {
  try {
    me::schoenberg_embed(mt::k23_graph());
    FAIL();
  } catch (const me::Error& e) {
    EXPECT_EQ(e.code(), me::ErrorCode::NotQuasihypermetric);
    ASSERT_EQ(e.values().size(), 1u);
    EXPECT_LT(e.values()[0], 0.0);
  }
}

TEST(Embed, SucceedsExactlyOnQhmSpaces) {
  for (const auto& [name, space] : mt::zoo()) {
    SCOPED_TRACE(name);
    const auto r = me::classify_negative_type(space);
    if (r.is_qhm) {
      const auto e = me::schoenberg_embed(space, r);
      EXPECT_LE(e.max_roundtrip_error, 1e-8 * (1 + space.diameter()));
      EXPECT_LE(e.r, std::max<Eigen::Index>(space.size() - 1, 0));
      // r counts the Gram eigenvalues above threshold
      Eigen::Index positive = 0;
      for (Eigen::Index i = 0; i < r.projected_eigenvalues.size(); ++i) {
        if (-0.5 * r.projected_eigenvalues[i] > e.zero_threshold) ++positive;
      }
      EXPECT_EQ(e.r, positive);
    } else {
      EXPECT_THROW(me::schoenberg_embed(space, r), me::Error);
    }
  }
}

TEST(TOperator, TwoPoint) {
  const auto t = me::t_operator_report(mt::two_point());
  EXPECT_EQ(t.rank_d, 2);
  EXPECT_TRUE(t.t_injective);
  EXPECT_TRUE(t.im_t_dense);
}

TEST(TOperator, CircleEightIsRankDeficient) {
  const auto t = me::t_operator_report(me::circle_grid(8));
  EXPECT_LE(t.rank_d, 5);
  EXPECT_FALSE(t.t_injective);
  EXPECT_FALSE(t.im_t_dense);
  // rank oracle from an independent solver
  const Eigen::VectorXd ev = mt::eigen_library_eigenvalues(me::circle_grid(8).dist());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) rank += std::abs(ev[i]) > t.zero_threshold;
  EXPECT_EQ(t.rank_d, rank);
}

TEST(TOperator, PointEvaluationsAreIsometric) {
  for (int n : {2, 5, 33}) {
    EXPECT_LE(me::t_operator_report(me::interval_grid(0, 1, n)).embedding_max_deviation, 1e-12);
  }
  for (const auto& [name, space] : mt::zoo()) {
    EXPECT_LE(me::t_operator_report(space).embedding_max_deviation, 1e-12 * (1 + space.diameter()))
        << name;
  }
}

TEST(Battery, IntervalAllPass) {
  const auto b = me::qhm_equivalence_battery(me::interval_grid(0, 1, 10), 1, 500);
  EXPECT_TRUE(b.all_pass);
  EXPECT_TRUE(b.failed_conditions.empty());
  ASSERT_EQ(b.conditions.size(), static_cast<std::size_t>(me::kQhmConditionCount));
  for (const auto& c : b.conditions) {
    EXPECT_EQ(c.passes, 500) << me::condition_label(c.condition);
    EXPECT_GE(c.worst_margin, -1e-10) << me::condition_label(c.condition);
  }
}

TEST(Battery, WitnessFailsEnergyCondition) {
  const auto space = mt::find_linf_non_qhm(7);
  ASSERT_TRUE(space.has_value());
  const auto r = me::classify_negative_type(*space);
  const auto b = me::qhm_equivalence_battery(*space, 2, 100, r.violation_witness);
  EXPECT_FALSE(b.all_pass);
  ASSERT_TRUE(b.witness_fails_condition3.has_value());
  EXPECT_TRUE(*b.witness_fails_condition3);
  EXPECT_GT(*b.witness_energy, 0.0);
  EXPECT_NE(std::find(b.failed_conditions.begin(), b.failed_conditions.end(), "3"),
            b.failed_conditions.end());
}

TEST(Battery, DegenerateTupleHasZeroMargin) {
  const auto space = me::random_metric(6, 3);
  const std::vector<Eigen::Index> xs{0, 2, 2, 5};
  EXPECT_EQ(me::tuple_condition_margin(space, xs, xs), 0.0);
  EXPECT_THROW(me::tuple_condition_margin(space, {0}, {0, 1}), me::Error);
}

TEST(Battery, Labels) {
  EXPECT_EQ(me::condition_label(me::QhmCondition::tuples), "2");
  EXPECT_EQ(me::condition_label(me::QhmCondition::convex_prob), "8'");
}

TEST(Battery, AgreesWithClassifier) {
  for (const auto& [name, space] : mt::zoo()) {
    SCOPED_TRACE(name);
    const auto r = me::classify_negative_type(space);
    const auto b = me::qhm_equivalence_battery(space, 5, 200, r.violation_witness);
    if (r.is_qhm) {
      EXPECT_TRUE(b.all_pass);
    } else {
      EXPECT_TRUE(b.witness_fails_condition3.value_or(false));
    }
  }
}

TEST(Battery, EnergyConditionOnManySamples) {
  // classifier vs. 1000 sampled mass-zero measures per qhm space
  for (const auto& [name, space] : mt::zoo()) {
    const auto r = me::classify_negative_type(space);
    if (!r.is_qhm) continue;
    me::Sampler s(77);
    const double thr = 1e-9 * space.diameter();
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
      const Eigen::VectorXd w = s.mass_zero(space.size());
      const double tv = w.cwiseAbs().sum();
      bad += w.dot(space.dist() * w) > thr * tv * tv;
    }
    EXPECT_EQ(bad, 0) << name;
  }
}

TEST(Battery, Deterministic) {
  const auto space = me::sphere_grid(12);
  const auto a = me::qhm_equivalence_battery(space, 9, 50);
  const auto b = me::qhm_equivalence_battery(space, 9, 50);
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    EXPECT_EQ(a.conditions[i].worst_margin, b.conditions[i].worst_margin);
  }
}
