#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace semassoc {

/// Quadric that cannot be normalized or whose shape matrix is not positive
/// definite.
class DegenerateQuadric : public std::runtime_error {
 public:
  explicit DegenerateQuadric(const std::string& what) : std::runtime_error(what) {}
};

/// Stereo detection pair whose disparity is too small to triangulate.
class UntriangulatableDetection : public std::runtime_error {
 public:
  explicit UntriangulatableDetection(const std::string& what) : std::runtime_error(what) {}
};

/// An ellipsoid as a dual quadric: 4x4 symmetric Q normalized to
/// Q(3,3) = -1, with the derived center mu and positive-definite shape P.
/// The blocks satisfy Q.topLeft = P - mu*mu^T and Q.topRight = -mu.
struct Ellipsoid {
  Eigen::Matrix4d Q;
  Eigen::Vector3d mu;
  Eigen::Matrix3d P;

  static Ellipsoid from_dual_quadric(const Eigen::Matrix4d& Q);
  static Ellipsoid from_center_shape(const Eigen::Vector3d& mu, const Eigen::Matrix3d& P);
  static Ellipsoid from_center_radii(const Eigen::Vector3d& center, const Eigen::Vector3d& radii);

  /// Applies a homogeneous transform T: Q -> T Q T^T.
  Ellipsoid transformed(const Eigen::Matrix4d& T) const;
};

/// Normalizes Q (scale so Q(3,3) = -1) and extracts (mu, P). Throws
/// DegenerateQuadric when Q(3,3) is zero or P is not positive definite.
std::pair<Eigen::Vector3d, Eigen::Matrix3d> extract_center_shape(const Eigen::Matrix4d& Q);

/// Squared Mahalanobis-style distance between ellipsoids:
/// (mu_a - mu_b)^T (P_a + P_b)^{-1} (mu_a - mu_b). Symmetric, zero iff the
/// centers coincide, invariant under a common rigid transform.
double ellipsoid_distance(const Ellipsoid& a, const Ellipsoid& b);

/// Axis-aligned detection box in pixels.
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
};

/// Pinhole stereo rig: identical rectified cameras, baseline along +x.
struct CameraModel {
  double focal = 500.0;     // pixels
  double cx = 320.0;        // principal point, pixels
  double cy = 240.0;
  double baseline = 0.5;    // meters
  int width = 640;
  int height = 480;
};

/// Stereo triangulation of a detection pair into a measurement ellipsoid in
/// the left-camera frame. depth z = focal * baseline / disparity; box
/// extents back-project to the lateral radii and the unobservable depth
/// radius is their geometric mean. Throws UntriangulatableDetection when the
/// disparity is not above 0.5 px.
Ellipsoid triangulate_measurement(const BoundingBox& left, const BoundingBox& right,
                                  const CameraModel& camera);

}  // namespace semassoc
