#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cliqueloop/clique.hpp"
#include "cliqueloop/compat_graph.hpp"
#include "cliqueloop/error.hpp"
#include "test_support.hpp"

using namespace cliqueloop;
using namespace cliqueloop::testing;

namespace {

Correspondence pair_at(NPoint m, NPoint q) { return {m, q, 0, 0, 0}; }

}  // namespace

TEST(Consistent, PureTranslationAlwaysConsistent) {
  const auto a = pair_at(NPoint(0, 0, 0), NPoint(5, 5, 5));
  const auto b = pair_at(NPoint(1, 2, 3), NPoint(6, 7, 8));
  for (double eps : {1e-9, 0.1, 10.0}) EXPECT_TRUE(consistent(a, b, eps));
}

TEST(Consistent, DistanceGapBeyondEpsilon) {
  // ||m_a - m_b|| = 5.0, ||q_a - q_b|| = 6.5
  const auto a = pair_at(NPoint(0, 0, 0), NPoint(0, 0, 0));
  const auto b = pair_at(NPoint(3, 4, 0), NPoint(6.5, 0, 0));
  EXPECT_FALSE(consistent(a, b, 1.0));
  EXPECT_TRUE(consistent(a, b, 1.6));
}

TEST(Consistent, StrictAtBoundary) {
  const double eps = 0.5;
  const auto a = pair_at(NPoint(0, 0), NPoint(0, 0));
  const auto b = pair_at(NPoint(5, 0), NPoint(5.5, 0));  // gap exactly eps
  EXPECT_FALSE(consistent(a, b, eps));
  EXPECT_TRUE(consistent(a, b, std::nextafter(eps, 1.0)));
}

TEST(Consistent, Errors) {
  const auto a = pair_at(NPoint(0, 0), NPoint(0, 0));
  const auto b = pair_at(NPoint(1, 0, 0), NPoint(1, 0, 0));
  try {
    consistent(a, a, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveEpsilon);
  }
  try {
    consistent(a, b, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
  }
}

TEST(BuildGraph, ExactTransformGivesCompleteGraph) {
  std::mt19937_64 rng(1);
  const auto corr = planted(random_points(rng, 3, 30, 40.0), random_transform(rng, 3));
  const auto g = build_graph(corr, 1e-6);
  EXPECT_EQ(g.adjacency.edge_count(), 30u * 29u / 2u);
}

TEST(BuildGraph, FiveCliqueWithTwoOutliers) {
  const RigidTransform t = RigidTransform::axis_angle({0, 0, 1}, 0.4, {2, -1, 0.5});
  CorrespondenceSet corr(3);
  const NPoint inliers[] = {NPoint(0, 0, 0), NPoint(4, 0, 0), NPoint(0, 5, 0),
                            NPoint(1, 1, 6), NPoint(7, 3, 2)};
  corr.push_back(pair_at(NPoint(30, 30, 30), NPoint(-40, 10, 0)));
  for (const auto& p : inliers) corr.push_back(pair_at(p, t(p)));
  corr.push_back(pair_at(NPoint(-25, 60, 5), NPoint(90, -70, 20)));

  const auto g = build_graph(corr, 1.0);
  const auto clique = max_clique(g);
  EXPECT_EQ(clique.vertices, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(brute_force_max_clique(g.adjacency).vertices, clique.vertices);
}

TEST(BuildGraph, MatchesDoubleLoopOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto corr = random_correspondences(rng, trial % 2 ? 2 : 3, 50);
    const double eps = 0.25 + 0.1 * (trial % 7);
    const auto g = build_graph(corr, eps);
    for (std::size_t i = 0; i < corr.size(); ++i) {
      for (std::size_t j = 0; j < corr.size(); ++j) {
        const bool expected = i != j && naive_consistent(corr[i], corr[j], eps);
        ASSERT_EQ(g.adjacency.adjacent(i, j), expected) << i << "," << j;
      }
    }
  }
}

TEST(BuildGraph, SymmetricAndLoopFree) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = build_graph(random_correspondences(rng, 3, 100), 1.0);
    EXPECT_TRUE(g.adjacency.well_formed());
  }
}

TEST(BuildGraph, MonotoneInEpsilon) {
  std::mt19937_64 rng(4);
  const auto corr = random_correspondences(rng, 3, 80);
  const auto small = build_graph(corr, 0.3);
  const auto large = build_graph(corr, 0.9);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    for (std::size_t j = 0; j < corr.size(); ++j) {
      if (small.adjacency.adjacent(i, j)) {
        EXPECT_TRUE(large.adjacency.adjacent(i, j));
      }
    }
  }
}

TEST(BuildGraph, InvariantUnderCommonRigidMotion) {
  std::mt19937_64 rng(5);
  for (int dim : {2, 3}) {
    const auto corr = random_correspondences(rng, dim, 60);
    const RigidTransform a = random_transform(rng, dim);
    const RigidTransform b = random_transform(rng, dim);
    CorrespondenceSet moved(dim);
    for (const auto& c : corr) moved.push_back({a(c.m), b(c.q), c.m_idx, c.q_idx, 0});
    // Pairs far from the boundary must agree; ties at eps are measure-zero.
    const auto g1 = build_graph(corr, 1.0);
    const auto g2 = build_graph(moved, 1.0);
    for (std::size_t i = 0; i < corr.size(); ++i) {
      for (std::size_t j = i + 1; j < corr.size(); ++j) {
        const double gap =
            std::abs(distance(corr[i].m, corr[j].m) - distance(corr[i].q, corr[j].q));
        if (std::abs(gap - 1.0) > 1e-9) {
          EXPECT_EQ(g1.adjacency.adjacent(i, j), g2.adjacency.adjacent(i, j));
        }
      }
    }
  }
}

TEST(BuildGraph, NoisyInliersStayConsistent) {
  std::mt19937_64 rng(6);
  const double delta = 0.2;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const NPointSet src = random_points(rng, 3, 40, 30.0);
    const RigidTransform t = random_transform(rng, 3);
    CorrespondenceSet corr(3);
    for (const auto& p : src) {
      Eigen::Vector3d n(u(rng), u(rng), u(rng));
      n *= delta * u(rng) / n.norm();  // ||noise|| <= delta
      const NPoint q = t(p);
      corr.push_back(pair_at(p, NPoint(q[0] + n.x(), q[1] + n.y(), q[2] + n.z())));
    }
    const auto g = build_graph(corr, 2 * delta + 1e-9);
    EXPECT_EQ(g.adjacency.edge_count(), 40u * 39u / 2u);
  }
}

TEST(BuildGraph, ThreadCountDoesNotChangeBits) {
  std::mt19937_64 rng(7);
  const auto corr = random_correspondences(rng, 3, 300);
  const auto serial = build_graph(corr, 1.0, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    EXPECT_EQ(build_graph(corr, 1.0, threads).adjacency, serial.adjacency);
  }
}

TEST(BuildGraph, Errors) {
  try {
    build_graph(CorrespondenceSet(3), -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveEpsilon);
  }
  EXPECT_EQ(build_graph(CorrespondenceSet(3), 1.0).adjacency.size(), 0u);
}

TEST(GraphDump, Format) {
  BitGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 3);
  g.add_edge(2, 3);
  std::ostringstream out;
  write_graph_dump(out, g);
  EXPECT_EQ(out.str(), "vertices: 4\n0: 1,3\n1: 0\n2: 3\n3: 0,2\n");
}
