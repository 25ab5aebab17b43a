#pragma once

#include <cstdint>

#include "cinetraj/compiler.hpp"
#include "cinetraj/pose.hpp"
#include "cinetraj/scl.hpp"

namespace cinetraj::sim {

using compiler::ConstraintSet;
using compiler::SimInstruction;
using scl::EasingKind;

/// Cubic easing curve; e(0)=0, e(1)=1, monotone. Throws std::domain_error
/// outside [0, 1].
double ease(double t, EasingKind kind);

/// Affine blend of positions and fov; Euler components blend along the
/// shortest angular path.
CameraPose linearInterp(const CameraPose& p0, const CameraPose& p1, double t);

/// Curved blend P0 + t(P1-P0) + alpha(1-t)t(d0-d1) with d0 = C - P0 taken at
/// the subject's start position and d1 = C - P1 at its end position; the
/// orientation re-aims at the subject position interpolated to t.
CameraPose subjectAwareInterp(const CameraPose& p0, const CameraPose& p1,
                              const Vec3& subject_start, const Vec3& subject_end,
                              double alpha, double t);

enum class ConstraintPass { StaticLocation, StaticDistance, Visibility, MaxAcceleration };

struct SimConfig {
  int max_accel_iterations = 2000;
  int clamp_sweeps_per_iteration = 8;
  double accel_slack = 1e-10;       // inner acceptance margin below a_max + 1e-9
  double visibility_margin = 1e-6;  // fraction of the frustum kept clear
};

/// Raised when a constraint cannot be satisfied within the iteration budget.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& pass, double residual)
      : std::runtime_error("constraint '" + pass + "' infeasible, residual " +
                           std::to_string(residual)),
        pass_(pass),
        residual_(residual) {}
  const std::string& pass() const { return pass_; }
  double residual() const { return residual_; }

 private:
  std::string pass_;
  double residual_;
};

/// Applies one constraint pass. Passes are idempotent projections:
///  - StaticLocation: positions snap to the first frame; orientations are
///    re-aimed so each frame keeps the NDC framing it had before the snap.
///  - StaticDistance: positions project radially onto the sphere of the
///    target radius about each frame's subject center.
///  - Visibility: orientations rotate minimally until the framed target is
///    inside the frustum; positions never change.
///  - MaxAcceleration: iterative second-difference clamping (endpoints
///    fixed) until the limit holds.
CameraTrajectory enforceConstraint(const CameraTrajectory& traj,
                                   const SubjectTrajectory& subject,
                                   ConstraintPass pass, const ConstraintSet& constraints,
                                   const SimConfig& config = {});

/// Executes an instruction: eased interpolation between the endpoint poses,
/// then constraint passes in order (static location, static distance,
/// visibility, max acceleration). The acceleration stage re-projects the
/// geometric constraints between clamp sweeps so both hold at exit, and the
/// geometric passes are re-checked once afterwards.
CameraTrajectory simulate(const SimInstruction& instr, const SubjectTrajectory& subject,
                          const SimConfig& config = {});

/// Parametric subject motion for the dynamic dataset half.
struct SubjectMotionModel {
  enum class Kind { Stationary, LineWalk, TurnInPlace, ArcWalk };
  Kind kind = Kind::Stationary;
  Vec3 start_center{0.0, 0.0, 0.85};
  Vec3 dims{0.5, 0.35, 1.7};
  double speed = 0.04;       // meters/frame, walk kinds
  double turn_rate = 0.05;   // radians/frame, turn in place
  double arc_radius = 2.0;   // meters, arc walk
  std::uint64_t seed = 0;
};

/// Deterministic given (model, seed); the seed draws the initial heading.
SubjectTrajectory generateSubjectMotion(const SubjectMotionModel& model, int frames);

}  // namespace cinetraj::sim
