#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace cliqueloop {

class CorrespondenceSet;

/// Numerical tolerances of the geometry core. Defaults are the module
/// constants; callers may pass their own.
struct GeometryTolerances {
  /// Max deviation of R^T R from I and of det(R) from +1.
  double orthonormality = 1e-9;
  /// Relative singular-value floor below which source points are degenerate.
  double degeneracy_ratio = 1e-12;
};

/// A point in R^2 or R^3. Storage is always three doubles; the unused third
/// coordinate of a 2D point is zero.
class NPoint {
 public:
  NPoint() = default;
  NPoint(double x, double y);
  NPoint(double x, double y, double z);
  /// Accepts 2 or 3 coordinates.
  explicit NPoint(std::span<const double> coords);

  int dim() const { return dim_; }
  double operator[](std::size_t i) const { return c_[i]; }

  /// Zero-padded 3-vector view, convenient for uniform 2D/3D arithmetic.
  Eigen::Vector3d embedded() const { return {c_[0], c_[1], c_[2]}; }
  static NPoint from_embedded(const Eigen::Vector3d& v, int dim);

  friend bool operator==(const NPoint&, const NPoint&) = default;

 private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
  int dim_ = 3;
};

double distance(const NPoint& a, const NPoint& b);

class NPointSet {
 public:
  explicit NPointSet(int dim);
  NPointSet(int dim, std::vector<NPoint> points);
  NPointSet(std::initializer_list<NPoint> points);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  const NPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<NPoint>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  void push_back(const NPoint& p);

  friend bool operator==(const NPointSet&, const NPointSet&) = default;

 private:
  int dim_;
  std::vector<NPoint> points_;
};

/// Proper rigid motion x -> R x + t in SO(n) x R^n, n in {2, 3}.
class RigidTransform {
 public:
  /// Validates orthonormality and det(R) = +1 within `tol`.
  RigidTransform(const Eigen::MatrixXd& rotation,
                 const Eigen::VectorXd& translation,
                 const GeometryTolerances& tol = {});

  static RigidTransform identity(int dim);
  /// Counterclockwise planar rotation by `angle` radians.
  static RigidTransform planar(double angle, double tx, double ty);
  static RigidTransform axis_angle(const Eigen::Vector3d& axis, double angle,
                                   const Eigen::Vector3d& translation);

  int dim() const { return dim_; }
  Eigen::MatrixXd rotation() const;
  Eigen::VectorXd translation() const;
  const Eigen::Matrix3d& embedded_rotation() const { return r_; }
  const Eigen::Vector3d& embedded_translation() const { return t_; }

  NPoint operator()(const NPoint& p) const;
  RigidTransform inverse() const;

 private:
  RigidTransform(int dim, const Eigen::Matrix3d& r, const Eigen::Vector3d& t);

  int dim_;
  // 2D transforms are embedded: the third row/column of `r_` is e_z and
  // t_.z() is zero.
  Eigen::Matrix3d r_;
  Eigen::Vector3d t_;
};

/// Closed-form least-squares rigid alignment of index-aligned point sets
/// (centroids, cross-covariance SVD, reflection correction).
///
/// Throws SizeMismatch, DimMismatch, Underdetermined (fewer than `dim`
/// points) or Degenerate (coincident points; collinear points in 3D).
RigidTransform solve_rigid(const NPointSet& src, const NPointSet& dst,
                           const GeometryTolerances& tol = {});

NPointSet apply(const RigidTransform& t, const NPointSet& points);

/// sqrt(mean ||q - R m - t||^2) over the correspondences.
double residual_rmse(const RigidTransform& t, const CorrespondenceSet& corr);

/// Angle in radians of the relative rotation a^T b.
double rotation_geodesic_error(const RigidTransform& a, const RigidTransform& b);

}  // namespace cliqueloop
