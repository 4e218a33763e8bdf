#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cliqueloop/correspondence.hpp"
#include "cliqueloop/error.hpp"
#include "cliqueloop/geometry.hpp"
#include "test_support.hpp"

using namespace cliqueloop;
using namespace cliqueloop::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

}  // namespace

TEST(SolveRigid, IdentityOnEqualSets) {
  NPointSet pts{NPoint(0, 0, 0), NPoint(1, 0, 0), NPoint(0, 2, 1)};
  const RigidTransform t = solve_rigid(pts, pts);
  EXPECT_LT(max_abs(t.rotation() - Eigen::Matrix3d::Identity()), 1e-12);
  EXPECT_LT(t.translation().norm(), 1e-12);
}

TEST(SolveRigid, RecoversPlantedTransform3d) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const NPointSet src = random_points(rng, 3, 10);
    const RigidTransform truth = random_transform(rng, 3);
    const RigidTransform est = solve_rigid(src, apply(truth, src));
    EXPECT_LT(rotation_geodesic_error(est, truth), 1e-9);
    EXPECT_LT((est.translation() - truth.translation()).norm(), 1e-9);
  }
}

TEST(SolveRigid, TwoPointPlanarQuarterTurn) {
  NPointSet src{NPoint(0, 0), NPoint(1, 0)};
  NPointSet dst{NPoint(0, 0), NPoint(0, 1)};
  const RigidTransform t = solve_rigid(src, dst);
  Eigen::Matrix2d expected;
  expected << 0, -1, 1, 0;
  EXPECT_LT(max_abs(t.rotation() - expected), 1e-12);
  EXPECT_LT(t.translation().norm(), 1e-12);
}

TEST(SolveRigid, MirroredInputStillProper) {
  std::mt19937_64 rng(5);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const NPointSet src = random_points(rng, dim, 12);
      NPointSet mirrored(dim);
      for (const auto& p : src) {
        mirrored.push_back(dim == 2 ? NPoint(-p[0], p[1]) : NPoint(-p[0], p[1], p[2]));
      }
      const Eigen::MatrixXd r = solve_rigid(src, mirrored).rotation();
      EXPECT_LT(max_abs(r.transpose() * r - Eigen::MatrixXd::Identity(dim, dim)), 1e-9);
      EXPECT_NEAR(r.determinant(), 1.0, 1e-9);
    }
  }
}

TEST(SolveRigid, TranslationEquivariance) {
  std::mt19937_64 rng(8);
  const NPointSet src = random_points(rng, 3, 15);
  const RigidTransform truth = random_transform(rng, 3);
  const NPointSet dst = apply(truth, src);
  const Eigen::Vector3d shift(3.5, -1.25, 7.0);
  NPointSet shifted(3);
  for (const auto& p : dst) shifted.push_back(NPoint(p[0] + shift.x(), p[1] + shift.y(), p[2] + shift.z()));

  const RigidTransform a = solve_rigid(src, dst);
  const RigidTransform b = solve_rigid(src, shifted);
  EXPECT_LT(max_abs(a.rotation() - b.rotation()), 1e-9);
  EXPECT_LT((b.translation() - a.translation() - shift).norm(), 1e-9);
}

TEST(SolveRigid, NoiseFreeResidualIsZero) {
  std::mt19937_64 rng(21);
  for (int dim : {2, 3}) {
    const NPointSet src = random_points(rng, dim, 30);
    const RigidTransform truth = random_transform(rng, dim);
    const CorrespondenceSet corr = planted(src, truth);
    const RigidTransform est = solve_rigid(src, apply(truth, src));
    EXPECT_LT(residual_rmse(est, corr), 1e-9);
  }
}

TEST(SolveRigid, Errors) {
  NPointSet three{NPoint(0, 0, 0), NPoint(1, 0, 0), NPoint(0, 1, 0)};
  NPointSet two{NPoint(0, 0, 0), NPoint(1, 0, 0)};
  EXPECT_EQ(code_of([&] { solve_rigid(three, two); }), ErrorCode::SizeMismatch);
  EXPECT_EQ(code_of([&] { solve_rigid(two, two); }), ErrorCode::Underdetermined);

  NPointSet collinear{NPoint(0, 0, 0), NPoint(1, 1, 1), NPoint(2, 2, 2), NPoint(-3, -3, -3)};
  EXPECT_EQ(code_of([&] { solve_rigid(collinear, collinear); }), ErrorCode::Degenerate);

  NPointSet coincident3{NPoint(4, 4, 4), NPoint(4, 4, 4), NPoint(4, 4, 4)};
  EXPECT_EQ(code_of([&] { solve_rigid(coincident3, coincident3); }), ErrorCode::Degenerate);

  NPointSet coincident2{NPoint(1, 2), NPoint(1, 2), NPoint(1, 2)};
  EXPECT_EQ(code_of([&] { solve_rigid(coincident2, coincident2); }), ErrorCode::Degenerate);

  // Collinear is fine in 2D.
  NPointSet line2{NPoint(0, 0), NPoint(1, 1), NPoint(2, 2)};
  EXPECT_NO_THROW(solve_rigid(line2, line2));
}

TEST(Apply, IdentityAndOrigin) {
  std::mt19937_64 rng(2);
  const NPointSet pts = random_points(rng, 3, 5);
  EXPECT_EQ(apply(RigidTransform::identity(3), pts), pts);

  const RigidTransform t = random_transform(rng, 3);
  const NPointSet origin{NPoint(0, 0, 0)};
  const NPoint out = apply(t, origin)[0];
  for (int k = 0; k < 3; ++k) EXPECT_EQ(out[k], t.translation()(k));
}

TEST(Apply, InverseRoundTrip) {
  std::mt19937_64 rng(3);
  for (int dim : {2, 3}) {
    const NPointSet pts = random_points(rng, dim, 20);
    const RigidTransform t = random_transform(rng, dim);
    const NPointSet back = apply(t.inverse(), apply(t, pts));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_LT(distance(back[i], pts[i]), 1e-12);
    }
  }
}

TEST(Apply, PreservesPairwiseDistances) {
  std::mt19937_64 rng(4);
  for (int dim : {2, 3}) {
    const NPointSet pts = random_points(rng, dim, 25);
    const NPointSet moved = apply(random_transform(rng, dim), pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        EXPECT_NEAR(distance(pts[i], pts[j]), distance(moved[i], moved[j]), 1e-9);
      }
    }
  }
}

TEST(Apply, DimMismatch) {
  NPointSet pts{NPoint(1, 2)};
  EXPECT_EQ(code_of([&] { apply(RigidTransform::identity(3), pts); }), ErrorCode::DimMismatch);
}

TEST(ResidualRmse, UniformOffset) {
  std::mt19937_64 rng(6);
  const NPointSet src = random_points(rng, 3, 10);
  const double d = 0.75;
  CorrespondenceSet corr(3);
  for (const auto& p : src) corr.push_back({p, NPoint(p[0], p[1] + d, p[2]), 0, 0, 0});
  EXPECT_NEAR(residual_rmse(RigidTransform::identity(3), corr), d, 1e-12);
}

TEST(ResidualRmse, MatchesDirectSum) {
  std::mt19937_64 rng(7);
  const CorrespondenceSet corr = random_correspondences(rng, 3, 40);
  const RigidTransform t = random_transform(rng, 3);
  const Eigen::MatrixXd r = t.rotation();
  const Eigen::VectorXd tr = t.translation();
  double sum = 0.0;
  for (const auto& c : corr) {
    Eigen::Vector3d m(c.m[0], c.m[1], c.m[2]);
    Eigen::Vector3d q(c.q[0], c.q[1], c.q[2]);
    sum += (q - r * m - tr).squaredNorm();
  }
  EXPECT_NEAR(residual_rmse(t, corr), std::sqrt(sum / corr.size()), 1e-12);
}

TEST(ResidualRmse, EmptySet) {
  EXPECT_EQ(code_of([] { residual_rmse(RigidTransform::identity(3), CorrespondenceSet(3)); }),
            ErrorCode::EmptySet);
}

TEST(GeodesicError, KnownAngles) {
  const auto id = RigidTransform::identity(3);
  EXPECT_EQ(rotation_geodesic_error(id, id), 0.0);
  const auto half_turn = RigidTransform::axis_angle({0, 0, 1}, M_PI, Eigen::Vector3d::Zero());
  EXPECT_NEAR(rotation_geodesic_error(id, half_turn), M_PI, 1e-12);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Vector3d axis(n(rng), n(rng), n(rng));
    const auto r = RigidTransform::axis_angle(axis, 0.3, Eigen::Vector3d::Zero());
    EXPECT_NEAR(rotation_geodesic_error(id, r), 0.3, 1e-9);
  }

  EXPECT_NEAR(rotation_geodesic_error(RigidTransform::planar(3.0, 0, 0),
                                      RigidTransform::planar(-3.0, 0, 0)),
              2 * M_PI - 6.0, 1e-12);
  EXPECT_EQ(code_of([&] { rotation_geodesic_error(id, RigidTransform::identity(2)); }),
            ErrorCode::DimMismatch);
}

TEST(RigidTransform, RejectsNonRotations) {
  Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(3, 3);
  reflect(0, 0) = -1;
  EXPECT_THROW(RigidTransform(reflect, Eigen::VectorXd::Zero(3)), Error);
  Eigen::MatrixXd scaled = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(RigidTransform(scaled, Eigen::VectorXd::Zero(2)), Error);
}

TEST(NPoint, RejectsNonFinite) {
  EXPECT_EQ(code_of([] { NPoint(1.0, NAN); }), ErrorCode::NonFiniteValue);
  NPointSet set(3);
  EXPECT_EQ(code_of([&] { set.push_back(NPoint(1, 2)); }), ErrorCode::DimMismatch);
}
