#include "cliqueloop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cliqueloop/correspondence.hpp"
#include "cliqueloop/error.hpp"

namespace cliqueloop {

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteValue, "point coordinate is not finite");
  }
}

void require_dim(int dim) {
  if (dim != 2 && dim != 3) {
    throw Error(ErrorCode::DimMismatch,
                "dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

template <int N>
RigidTransform solve_fixed(const NPointSet& src, const NPointSet& dst,
                           const GeometryTolerances& tol) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;

  const std::size_t count = src.size();
  auto head = [](const NPoint& p) -> Vec { return p.embedded().template head<N>(); };

  Vec src_mean = Vec::Zero();
  Vec dst_mean = Vec::Zero();
  for (std::size_t i = 0; i < count; ++i) {
    src_mean += head(src[i]);
    dst_mean += head(dst[i]);
  }
  src_mean /= static_cast<double>(count);
  dst_mean /= static_cast<double>(count);

  Mat cross = Mat::Zero();
  Mat src_cov = Mat::Zero();
  double scale = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Vec a = head(src[i]) - src_mean;
    const Vec b = head(dst[i]) - dst_mean;
    cross += a * b.transpose();
    src_cov += a * a.transpose();
    scale += head(src[i]).squaredNorm();
  }

  // A rotation is pinned down iff the centered source spans at least n-1
  // dimensions: any non-coincident pair in 2D, a non-collinear triple in 3D.
  // Eigenvalues of the PSD covariance are its singular values, ascending.
  const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(src_cov, Eigen::EigenvaluesOnly).eigenvalues();
  const double largest = ev(N - 1);
  const bool coincident =
      largest <= 1e-24 * std::max(1.0, scale) || largest == 0.0;
  if (coincident || ev(1) < tol.degeneracy_ratio * largest) {
    throw Error(ErrorCode::Degenerate,
                N == 2 ? "source points are coincident"
                       : "source points are collinear or coincident");
  }

  Eigen::JacobiSVD<Mat> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat u = svd.matrixU();
  const Mat v = svd.matrixV();
  Mat d = Mat::Identity();
  if ((v * u.transpose()).determinant() < 0.0) {
    d(N - 1, N - 1) = -1.0;
  }
  const Mat r = v * d * u.transpose();
  const Vec t = dst_mean - r * src_mean;
  return RigidTransform(Eigen::MatrixXd(r), Eigen::VectorXd(t), tol);
}

}  // namespace

NPoint::NPoint(double x, double y) : c_{x, y, 0.0}, dim_(2) {
  require_finite(x);
  require_finite(y);
}

NPoint::NPoint(double x, double y, double z) : c_{x, y, z}, dim_(3) {
  require_finite(x);
  require_finite(y);
  require_finite(z);
}

NPoint::NPoint(std::span<const double> coords) {
  require_dim(static_cast<int>(coords.size()));
  dim_ = static_cast<int>(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    require_finite(coords[i]);
    c_[i] = coords[i];
  }
}

NPoint NPoint::from_embedded(const Eigen::Vector3d& v, int dim) {
  return dim == 2 ? NPoint(v.x(), v.y()) : NPoint(v.x(), v.y(), v.z());
}

double distance(const NPoint& a, const NPoint& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

NPointSet::NPointSet(int dim) : dim_(dim) { require_dim(dim); }

NPointSet::NPointSet(int dim, std::vector<NPoint> points) : dim_(dim) {
  require_dim(dim);
  points_.reserve(points.size());
  for (const auto& p : points) push_back(p);
}

NPointSet::NPointSet(std::initializer_list<NPoint> points)
    : dim_(points.size() == 0 ? 3 : points.begin()->dim()) {
  for (const auto& p : points) push_back(p);
}

void NPointSet::push_back(const NPoint& p) {
  if (p.dim() != dim_) {
    throw Error(ErrorCode::DimMismatch, "point dimension " +
                                            std::to_string(p.dim()) +
                                            " in a set of dimension " +
                                            std::to_string(dim_));
  }
  points_.push_back(p);
}

RigidTransform::RigidTransform(const Eigen::MatrixXd& rotation,
                               const Eigen::VectorXd& translation,
                               const GeometryTolerances& tol)
    : dim_(static_cast<int>(rotation.rows())),
      r_(Eigen::Matrix3d::Identity()),
      t_(Eigen::Vector3d::Zero()) {
  require_dim(dim_);
  if (rotation.cols() != dim_ || translation.size() != dim_) {
    throw Error(ErrorCode::DimMismatch, "rotation/translation shape mismatch");
  }
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "transform has non-finite entries");
  }
  const Eigen::MatrixXd gram =
      rotation.transpose() * rotation - Eigen::MatrixXd::Identity(dim_, dim_);
  if (gram.cwiseAbs().maxCoeff() > tol.orthonormality) {
    throw Error(ErrorCode::DomainError, "rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > tol.orthonormality) {
    throw Error(ErrorCode::DomainError, "rotation determinant is not +1");
  }
  r_.topLeftCorner(dim_, dim_) = rotation;
  t_.head(dim_) = translation;
}

RigidTransform::RigidTransform(int dim, const Eigen::Matrix3d& r,
                               const Eigen::Vector3d& t)
    : dim_(dim), r_(r), t_(t) {}

RigidTransform RigidTransform::identity(int dim) {
  require_dim(dim);
  return {dim, Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()};
}

RigidTransform RigidTransform::planar(double angle, double tx, double ty) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r.topLeftCorner<2, 2>() = Eigen::Rotation2Dd(angle).toRotationMatrix();
  return {2, r, Eigen::Vector3d(tx, ty, 0.0)};
}

RigidTransform RigidTransform::axis_angle(const Eigen::Vector3d& axis,
                                          double angle,
                                          const Eigen::Vector3d& translation) {
  const Eigen::Matrix3d r =
      Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return {3, r, translation};
}

Eigen::MatrixXd RigidTransform::rotation() const {
  return r_.topLeftCorner(dim_, dim_);
}

Eigen::VectorXd RigidTransform::translation() const { return t_.head(dim_); }

NPoint RigidTransform::operator()(const NPoint& p) const {
  if (p.dim() != dim_) {
    throw Error(ErrorCode::DimMismatch, "point and transform dimensions differ");
  }
  return NPoint::from_embedded(r_ * p.embedded() + t_, dim_);
}

RigidTransform RigidTransform::inverse() const {
  const Eigen::Matrix3d rt = r_.transpose();
  return {dim_, rt, -(rt * t_)};
}

RigidTransform solve_rigid(const NPointSet& src, const NPointSet& dst,
                           const GeometryTolerances& tol) {
  if (src.size() != dst.size()) {
    throw Error(ErrorCode::SizeMismatch,
                std::to_string(src.size()) + " source vs " +
                    std::to_string(dst.size()) + " destination points");
  }
  if (src.dim() != dst.dim()) {
    throw Error(ErrorCode::DimMismatch, "source and destination dimensions differ");
  }
  if (src.size() < static_cast<std::size_t>(src.dim())) {
    throw Error(ErrorCode::Underdetermined,
                "need at least " + std::to_string(src.dim()) + " point pairs");
  }
  return src.dim() == 2 ? solve_fixed<2>(src, dst, tol)
                        : solve_fixed<3>(src, dst, tol);
}

NPointSet apply(const RigidTransform& t, const NPointSet& points) {
  if (t.dim() != points.dim()) {
    throw Error(ErrorCode::DimMismatch, "point set and transform dimensions differ");
  }
  std::vector<NPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(t(p));
  return {points.dim(), std::move(out)};
}

double residual_rmse(const RigidTransform& t, const CorrespondenceSet& corr) {
  if (corr.empty()) {
    throw Error(ErrorCode::EmptySet, "residual of an empty correspondence set");
  }
  if (corr.dim() != t.dim()) {
    throw Error(ErrorCode::DimMismatch, "correspondences and transform dimensions differ");
  }
  double sum = 0.0;
  for (const auto& c : corr) {
    const double d = distance(c.q, t(c.m));
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(corr.size()));
}

double rotation_geodesic_error(const RigidTransform& a, const RigidTransform& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "rotation dimensions differ");
  }
  const Eigen::MatrixXd rel = a.rotation().transpose() * b.rotation();
  if (a.dim() == 2) {
    return std::abs(std::atan2(rel(1, 0), rel(0, 0)));
  }
  // atan2(sin, cos) instead of a bare arccos of the trace: identical angle,
  // but keeps full precision near 0 and pi.
  const double cos_angle = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  const Eigen::Vector3d axis(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0),
                             rel(1, 0) - rel(0, 1));
  const double sin_angle = std::min(1.0, 0.5 * axis.norm());
  return std::atan2(sin_angle, cos_angle);
}

}  // namespace cliqueloop
