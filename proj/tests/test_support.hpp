#pragma once

// Generators shared by the unit and acceptance suites. Everything here is
// independent of the code paths under test.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "cliqueloop/compat_graph.hpp"
#include "cliqueloop/correspondence.hpp"
#include "cliqueloop/geometry.hpp"

namespace cliqueloop::testing {

inline Eigen::Matrix3d random_rotation3(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline RigidTransform random_transform(std::mt19937_64& rng, int dim, double extent = 20.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  if (dim == 2) {
    std::uniform_real_distribution<double> a(-M_PI, M_PI);
    return RigidTransform::planar(a(rng), u(rng), u(rng));
  }
  Eigen::MatrixXd r = random_rotation3(rng);
  Eigen::VectorXd t(3);
  t << u(rng), u(rng), u(rng);
  return RigidTransform(r, t);
}

inline NPoint random_point(std::mt19937_64& rng, int dim, double extent = 10.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  return dim == 2 ? NPoint(u(rng), u(rng)) : NPoint(u(rng), u(rng), u(rng));
}

inline NPointSet random_points(std::mt19937_64& rng, int dim, std::size_t n,
                               double extent = 10.0) {
  NPointSet out(dim);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_point(rng, dim, extent));
  return out;
}

/// Correspondences m_i -> t(m_i) with indices i.
inline CorrespondenceSet planted(const NPointSet& src, const RigidTransform& t) {
  CorrespondenceSet out(src.dim());
  for (std::size_t i = 0; i < src.size(); ++i) {
    Correspondence c;
    c.m = src[i];
    c.q = t(src[i]);
    c.m_idx = c.q_idx = static_cast<std::uint32_t>(i);
    out.push_back(c);
  }
  return out;
}

inline CorrespondenceSet random_correspondences(std::mt19937_64& rng, int dim, std::size_t n,
                                                double extent = 5.0) {
  CorrespondenceSet out(dim);
  for (std::size_t i = 0; i < n; ++i) {
    Correspondence c;
    c.m = random_point(rng, dim, extent);
    c.q = random_point(rng, dim, extent);
    c.m_idx = c.q_idx = static_cast<std::uint32_t>(i);
    out.push_back(c);
  }
  return out;
}

/// Erdos-Renyi G(n, p).
inline BitGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution edge(p);
  BitGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edge(rng)) g.add_edge(i, j);
    }
  }
  return g;
}

/// Pairwise distance check written out longhand over raw coordinates.
inline bool naive_consistent(const Correspondence& a, const Correspondence& b, double eps) {
  double dm = 0.0;
  double dq = 0.0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(a.m.dim()); ++k) {
    dm += (a.m[k] - b.m[k]) * (a.m[k] - b.m[k]);
    dq += (a.q[k] - b.q[k]) * (a.q[k] - b.q[k]);
  }
  return std::fabs(std::sqrt(dm) - std::sqrt(dq)) < eps;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace cliqueloop::testing
