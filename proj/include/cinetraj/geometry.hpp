#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

namespace cinetraj {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrapAngle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// Blends two angles along the shortest angular path, result in (-pi, pi].
inline double blendAngleShortest(double a, double b, double t) {
  const double d = wrapAngle(b - a);
  return wrapAngle(a + t * d);
}

inline double degToRad(double deg) { return deg * kPi / 180.0; }
inline double radToDeg(double rad) { return rad * 180.0 / kPi; }

/// Orthonormal camera frame in world coordinates.
struct CameraBasis {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
};

/// Builds the camera frame from Euler angles (phi = yaw about world Z,
/// psi = pitch, chi = roll about the view axis). World Z is up.
inline CameraBasis basisFromEuler(const Vec3& euler) {
  const double phi = euler[0], psi = euler[1], chi = euler[2];
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double cpsi = std::cos(psi), spsi = std::sin(psi);
  const Vec3 forward(cpsi * cphi, cpsi * sphi, spsi);
  const Vec3 right0(sphi, -cphi, 0.0);
  const Vec3 up0(-spsi * cphi, -spsi * sphi, cpsi);
  const double cchi = std::cos(chi), schi = std::sin(chi);
  return CameraBasis{
      cchi * right0 - schi * up0,
      cchi * up0 + schi * right0,
      forward,
  };
}

/// Inverse of basisFromEuler. Near the poles (|forward.z| -> 1) yaw is taken
/// from the roll-free frame, which keeps the round trip consistent.
inline Vec3 eulerFromBasis(const CameraBasis& b) {
  const Vec3& f = b.forward;
  const double psi = std::asin(std::clamp(f.z(), -1.0, 1.0));
  const double phi = (std::abs(f.x()) + std::abs(f.y()) > 1e-15)
                         ? std::atan2(f.y(), f.x())
                         : 0.0;
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double spsi = std::sin(psi), cpsi = std::cos(psi);
  const Vec3 right0(sphi, -cphi, 0.0);
  const Vec3 up0(-spsi * cphi, -spsi * sphi, cpsi);
  const double chi = std::atan2(b.up.dot(right0), b.up.dot(up0));
  return Vec3(wrapAngle(phi), wrapAngle(psi), wrapAngle(chi));
}

/// Euler angles for a camera at `from` looking at `target`, roll fixed.
inline Vec3 lookAtEuler(const Vec3& from, const Vec3& target, double roll = 0.0) {
  const Vec3 d = (target - from).normalized();
  const double psi = std::asin(std::clamp(d.z(), -1.0, 1.0));
  const double phi = (std::abs(d.x()) + std::abs(d.y()) > 1e-15)
                         ? std::atan2(d.y(), d.x())
                         : 0.0;
  return Vec3(phi, psi, wrapAngle(roll));
}

/// Minimal rotation taking unit vector `a` onto unit vector `b`.
inline Mat3 minimalRotation(const Vec3& a, const Vec3& b) {
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  Vec3 axis = a.cross(b);
  const double s = axis.norm();
  if (s < 1e-15) {
    if (c > 0.0) return Mat3::Identity();
    // Antiparallel: rotate pi about any axis orthogonal to a.
    Vec3 ortho = std::abs(a.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    axis = (ortho - ortho.dot(a) * a).normalized();
    return Eigen::AngleAxisd(kPi, axis).toRotationMatrix();
  }
  axis /= s;
  return Eigen::AngleAxisd(std::atan2(s, c), axis).toRotationMatrix();
}

}  // namespace cinetraj
