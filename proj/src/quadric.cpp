#include "semassoc/quadric.hpp"

#include <cmath>

namespace semassoc {

std::pair<Eigen::Vector3d, Eigen::Matrix3d> extract_center_shape(const Eigen::Matrix4d& Q) {
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + Q.cwiseAbs().maxCoeff())) {
    throw DegenerateQuadric("extract_center_shape: Q is not symmetric");
  }
  double q33 = Q(3, 3);
  if (std::abs(q33) < 1e-300) {
    throw DegenerateQuadric("extract_center_shape: Q(3,3) is zero");
  }
  Eigen::Matrix4d Qn = Q * (-1.0 / q33);  // now Qn(3,3) == -1
  Eigen::Vector3d mu = -Qn.topRightCorner<3, 1>();
  Eigen::Matrix3d P = Qn.topLeftCorner<3, 3>() + mu * mu.transpose();
  P = 0.5 * (P + P.transpose());
  Eigen::LLT<Eigen::Matrix3d> llt(P);
  if (llt.info() != Eigen::Success) {
    throw DegenerateQuadric("extract_center_shape: shape matrix is not positive definite");
  }
  return {mu, P};
}

Ellipsoid Ellipsoid::from_dual_quadric(const Eigen::Matrix4d& Q) {
  auto [mu, P] = extract_center_shape(Q);
  Ellipsoid e;
  e.Q = Q * (-1.0 / Q(3, 3));
  e.Q = 0.5 * (e.Q + e.Q.transpose());
  e.mu = mu;
  e.P = P;
  return e;
}

Ellipsoid Ellipsoid::from_center_shape(const Eigen::Vector3d& mu, const Eigen::Matrix3d& P) {
  Ellipsoid e;
  e.mu = mu;
  e.P = 0.5 * (P + P.transpose());
  Eigen::LLT<Eigen::Matrix3d> llt(e.P);
  if (llt.info() != Eigen::Success) {
    throw DegenerateQuadric("from_center_shape: shape matrix is not positive definite");
  }
  e.Q.setZero();
  e.Q.topLeftCorner<3, 3>() = e.P - mu * mu.transpose();
  e.Q.topRightCorner<3, 1>() = -mu;
  e.Q.bottomLeftCorner<1, 3>() = -mu.transpose();
  e.Q(3, 3) = -1.0;
  return e;
}

Ellipsoid Ellipsoid::from_center_radii(const Eigen::Vector3d& center,
                                       const Eigen::Vector3d& radii) {
  return from_center_shape(center, radii.cwiseProduct(radii).asDiagonal());
}

Ellipsoid Ellipsoid::transformed(const Eigen::Matrix4d& T) const {
  return from_dual_quadric(T * Q * T.transpose());
}

double ellipsoid_distance(const Ellipsoid& a, const Ellipsoid& b) {
  Eigen::Matrix3d S = a.P + b.P;
  Eigen::Vector3d diff = a.mu - b.mu;
  Eigen::LDLT<Eigen::Matrix3d> ldlt(S);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw DegenerateQuadric("ellipsoid_distance: P_a + P_b is singular");
  }
  double d = diff.dot(ldlt.solve(diff));
  return d < 0.0 ? 0.0 : d;
}

Ellipsoid triangulate_measurement(const BoundingBox& left, const BoundingBox& right,
                                  const CameraModel& camera) {
  double disparity = left.cx - right.cx;
  if (!(disparity > 0.5)) {
    throw UntriangulatableDetection("triangulate_measurement: disparity " +
                                    std::to_string(disparity) + " px is below threshold");
  }
  double z = camera.focal * camera.baseline / disparity;
  Eigen::Vector3d center((left.cx - camera.cx) * z / camera.focal,
                         (left.cy - camera.cy) * z / camera.focal, z);
  double rx = 0.5 * left.w * z / camera.focal;
  double ry = 0.5 * left.h * z / camera.focal;
  if (!(rx > 0.0) || !(ry > 0.0)) {
    throw UntriangulatableDetection("triangulate_measurement: empty bounding box");
  }
  double rz = std::sqrt(rx * ry);  // depth extent is unobservable; convention
  return Ellipsoid::from_center_radii(center, {rx, ry, rz});
}

}  // namespace semassoc
