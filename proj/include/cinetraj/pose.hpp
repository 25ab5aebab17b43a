#pragma once

#include <stdexcept>
#include <vector>

#include "cinetraj/geometry.hpp"

namespace cinetraj {

inline constexpr double kDefaultFov = kPi / 4.0;  // 45 degrees, vertical

/// One 6-DoF camera sample: position, Euler orientation (phi, psi, chi) and
/// vertical field of view. Angles are normalized to (-pi, pi] on
/// construction; fov must lie in (0, pi).
struct CameraPose {
  Vec3 position{Vec3::Zero()};
  Vec3 orientation{Vec3::Zero()};
  double fov{kDefaultFov};

  CameraPose() = default;
  CameraPose(const Vec3& pos, const Vec3& euler, double fov_rad);
};

bool operator==(const CameraPose& a, const CameraPose& b);

struct CameraTrajectory {
  std::vector<CameraPose> frames;
  double frame_rate = 30.0;
};

/// Volumetric subject sample: center, (width, length, height) and an
/// orthonormal facing triple.
struct SubjectState {
  Vec3 center{Vec3::Zero()};
  Vec3 dims{0.5, 0.35, 1.7};
  struct Facing {
    Vec3 forward{Vec3::UnitX()};
    Vec3 right{-Vec3::UnitY()};
    Vec3 up{Vec3::UnitZ()};
  } facing;
};

bool operator==(const SubjectState& a, const SubjectState& b);

struct SubjectTrajectory {
  std::vector<SubjectState> frames;
};

/// Returns true when every frame is identical (the static-subset criterion).
bool isStaticSubject(const SubjectTrajectory& subject);

/// Oriented box; columns of `axes` are the (orthonormal) box axes.
struct BoundingBox {
  Vec3 center{Vec3::Zero()};
  Vec3 half_extents{0.5, 0.5, 0.5};
  Mat3 axes{Mat3::Identity()};
};

/// Throws std::invalid_argument when an invariant is violated.
void validateSubjectState(const SubjectState& s);
void validateBoundingBox(const BoundingBox& b);

struct DiscrepancyParams {
  double epsilon = 1.0;
  bool normalized = true;  // subtract the zero-error baseline 3*tan(pi/(4+eps))
};

/// Unit vector swept by rotating a canonical reference vector about the
/// indexed axis (1, 2 or 3). Inner products of two such vectors for the same
/// axis equal the cosine of the angle difference.
Vec3 angleDirection(double theta, int axis_index);

/// Per-component angular distance: tan(pi/(4+eps) + 1 - cos(theta_hat -
/// theta)) with the tangent argument clamped to [0, pi/2 - 1e-3].
double angularTerm(double theta_hat, double theta, double epsilon);

/// Composite pose discrepancy: Euclidean distance on position plus the three
/// angular terms. The normalized variant subtracts the zero-error baseline so
/// identical poses score 0. Field of view does not enter.
double poseDiscrepancy(const CameraPose& c, const CameraPose& c_hat,
                       const DiscrepancyParams& params = {});

/// Componentwise pose difference (position and Euler angles; fov dropped).
/// Angle deltas are kept raw -- the discrepancy only ever takes their cosine.
struct PoseDelta {
  Vec3 dposition{Vec3::Zero()};
  Vec3 dorientation{Vec3::Zero()};
};

PoseDelta poseDelta(const CameraPose& a, const CameraPose& b);

/// Discrepancy between two difference-poses, same formula as poseDiscrepancy.
double deltaDiscrepancy(const PoseDelta& d, const PoseDelta& d_hat,
                        const DiscrepancyParams& params = {});

// --- projection helpers (square image plane, vertical fov) ---

CameraBasis cameraBasis(const CameraPose& pose);

struct Projected {
  double x = 0.0;  // NDC, +right, [-1, 1] inside the frustum
  double y = 0.0;  // NDC, +up
  double depth = 0.0;  // camera-space forward distance; <= 0 means behind
};

/// Projects a world point through the pose's pinhole camera. `depth <= 0`
/// flags a point at or behind the camera plane; x/y are then meaningless.
Projected projectPoint(const CameraPose& pose, const Vec3& world_point);

inline bool insideFrustum(const Projected& p) {
  return p.depth > 0.0 && std::abs(p.x) <= 1.0 && std::abs(p.y) <= 1.0;
}

}  // namespace cinetraj
