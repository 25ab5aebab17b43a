#include "cinetraj/pose.hpp"

#include <algorithm>
#include <cmath>

namespace cinetraj {

namespace {

void requireFinite(const Vec3& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

CameraPose::CameraPose(const Vec3& pos, const Vec3& euler, double fov_rad)
    : position(pos),
      orientation(wrapAngle(euler[0]), wrapAngle(euler[1]), wrapAngle(euler[2])),
      fov(fov_rad) {
  requireFinite(pos, "camera position");
  requireFinite(euler, "camera orientation");
  if (!(fov_rad > 0.0 && fov_rad < kPi))
    throw std::invalid_argument("fov must lie in (0, pi)");
}

bool operator==(const CameraPose& a, const CameraPose& b) {
  return a.position == b.position && a.orientation == b.orientation && a.fov == b.fov;
}

bool operator==(const SubjectState& a, const SubjectState& b) {
  return a.center == b.center && a.dims == b.dims &&
         a.facing.forward == b.facing.forward && a.facing.right == b.facing.right &&
         a.facing.up == b.facing.up;
}

bool isStaticSubject(const SubjectTrajectory& subject) {
  if (subject.frames.empty()) return true;
  const SubjectState& first = subject.frames.front();
  return std::all_of(subject.frames.begin(), subject.frames.end(),
                     [&](const SubjectState& s) { return s == first; });
}

void validateSubjectState(const SubjectState& s) {
  requireFinite(s.center, "subject center");
  if (!(s.dims.array() > 0.0).all() || !s.dims.allFinite())
    throw std::invalid_argument("subject dims must be strictly positive");
  const Vec3& f = s.facing.forward;
  const Vec3& r = s.facing.right;
  const Vec3& u = s.facing.up;
  const double tol = 1e-6;
  if (std::abs(f.norm() - 1.0) > tol || std::abs(r.norm() - 1.0) > tol ||
      std::abs(u.norm() - 1.0) > tol || std::abs(f.dot(r)) > tol ||
      std::abs(f.dot(u)) > tol || std::abs(r.dot(u)) > tol)
    throw std::invalid_argument("subject facing vectors must be orthonormal");
}

void validateBoundingBox(const BoundingBox& b) {
  requireFinite(b.center, "box center");
  if (!(b.half_extents.array() > 0.0).all() || !b.half_extents.allFinite())
    throw std::invalid_argument("box half_extents must be strictly positive");
  const double tol = 1e-6;
  if ((b.axes * b.axes.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("box axes must be orthonormal");
}

Vec3 angleDirection(double theta, int axis_index) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  const double c = std::cos(theta), s = std::sin(theta);
  switch (axis_index) {
    case 1: return Vec3(0.0, c, s);
    case 2: return Vec3(s, 0.0, c);
    case 3: return Vec3(c, s, 0.0);
    default: throw std::invalid_argument("axis_index must be 1, 2 or 3");
  }
}

namespace {

double angularTermFromCos(double inner, double epsilon) {
  double arg = kPi / (4.0 + epsilon) + 1.0 - inner;
  arg = std::clamp(arg, 0.0, kPi / 2.0 - 1e-3);
  return std::tan(arg);
}

double checkedEpsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return epsilon;
}

double discrepancyImpl(const Vec3& dpos, const Vec3& ang, const Vec3& ang_hat,
                       const DiscrepancyParams& params) {
  checkedEpsilon(params.epsilon);
  double result = dpos.norm();
  for (int j = 0; j < 3; ++j)
    result += angularTermFromCos(std::cos(ang_hat[j] - ang[j]), params.epsilon);
  if (params.normalized)
    result -= 3.0 * angularTermFromCos(1.0, params.epsilon);
  return result;
}

}  // namespace

double angularTerm(double theta_hat, double theta, double epsilon) {
  checkedEpsilon(epsilon);
  return angularTermFromCos(std::cos(theta_hat - theta), epsilon);
}

double poseDiscrepancy(const CameraPose& c, const CameraPose& c_hat,
                       const DiscrepancyParams& params) {
  return discrepancyImpl(c.position - c_hat.position, c.orientation,
                         c_hat.orientation, params);
}

PoseDelta poseDelta(const CameraPose& a, const CameraPose& b) {
  return PoseDelta{a.position - b.position, a.orientation - b.orientation};
}

double deltaDiscrepancy(const PoseDelta& d, const PoseDelta& d_hat,
                        const DiscrepancyParams& params) {
  return discrepancyImpl(d.dposition - d_hat.dposition, d.dorientation,
                         d_hat.dorientation, params);
}

CameraBasis cameraBasis(const CameraPose& pose) {
  return basisFromEuler(pose.orientation);
}

Projected projectPoint(const CameraPose& pose, const Vec3& world_point) {
  const CameraBasis b = cameraBasis(pose);
  const Vec3 rel = world_point - pose.position;
  const double depth = rel.dot(b.forward);
  Projected out;
  out.depth = depth;
  if (depth > 0.0) {
    const double s = std::tan(pose.fov / 2.0);
    out.x = rel.dot(b.right) / (depth * s);
    out.y = rel.dot(b.up) / (depth * s);
  }
  return out;
}

}  // namespace cinetraj
