#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "cinetraj/pose.hpp"
#include "cinetraj/scl.hpp"

namespace cinetraj::compiler {

/// Interpolation factor (ABox -> VBox blend) and frame scale per shot type.
struct ShotParams {
  double interp_factor;
  double scale;
};

/// The eight-row shot table; total over ShotType.
ShotParams shotParams(scl::ShotType shot);

using RoiBox = BoundingBox;

struct ConstraintSet {
  bool static_location = false;
  bool static_distance = false;
  /// Target radius for static_distance, meters. Unset means "derive from the
  /// first frame" when a pass runs standalone.
  std::optional<double> distance_radius;
  bool visibility = false;
  std::optional<double> max_acceleration;  // meters/frame^2
  /// Subject-local offset of the framed ROI center; visibility and re-aiming
  /// target subject.center + facing-basis * look_offset.
  Vec3 look_offset = Vec3::Zero();
};

enum class InterpolationMode { Linear, SubjectAware };

/// Compiled low-level plan executed by the simulator.
struct SimInstruction {
  CameraPose start_pose;
  CameraPose end_pose;
  InterpolationMode interpolation = InterpolationMode::Linear;
  double alpha = 0.5;  // subject-aware curve magnitude
  scl::EasingKind easing = scl::EasingKind::Linear;
  ConstraintSet constraints;
  int frames = 30;
};

struct CompilerConfig {
  /// Polar angle (degrees from zenith) per elevation category, in declaration
  /// order: worms_eye, low, eye_level, high, birds_eye.
  std::array<double, scl::kElevationCount> elevation_polar_deg{165.0, 120.0, 90.0, 60.0, 15.0};
  double azimuth_step_deg = 45.0;  // per side sector, front = subject forward
  double max_acceleration = 0.05;  // meters/frame^2
  double curve_alpha = 0.5;
  double default_fov = kDefaultFov;
  double ndc_tolerance = 0.02;
  double span_tolerance = 0.02;          // relative, micro fov fine-tune
  double orientation_budget_deg = 25.0;  // micro rotation budget before translating
  std::uint64_t seed = 0;
};

/// Shot-dependent region of interest: blend of ABox and VBox by
/// interp_factor, half extents then multiplied by scale. Boxes must share
/// axes (subject-aligned frames).
RoiBox roiFromBoxes(const BoundingBox& abox, const BoundingBox& vbox,
                    const ShotParams& params);

/// Places the camera on the sphere about roi.center -- azimuth measured from
/// the subject's forward direction, polar angle from the elevation table --
/// at the pinhole-fit distance r = (vertical extent / 2) / tan(fov/2),
/// looking at roi.center.
CameraPose macroAlign(const scl::CameraAngleSpec& angle, const RoiBox& roi,
                      const SubjectState& subject, double fov,
                      const CompilerConfig& config = {});

/// Rule-of-thirds framing: rotates the camera (translates instead once the
/// orientation budget is spent) until the ROI center projects at the cell
/// center, then fine-tunes fov so the projected vertical span of the ROI
/// matches what the input pose framed.
CameraPose microAlign(const CameraPose& pose, const RoiBox& roi,
                      scl::FramingCell cell, const CompilerConfig& config = {});

/// NDC center of a rule-of-thirds cell.
std::pair<double, double> framingCellCenter(scl::FramingCell cell);

/// Movement-kind to constraint-set mapping; every kind carries the default
/// acceleration limit.
ConstraintSet constraintsForMovement(scl::MovementKind kind,
                                     const CompilerConfig& config = {});

/// Lowers a description against a subject trajectory. The boxes are world
/// boxes aligned with the subject's first frame; the end endpoint is aligned
/// against the final frame. An absent end endpoint (non-static movements) is
/// drawn from the seeded plausible distribution: shot within one table row,
/// azimuth within two sectors, elevation and framing free.
SimInstruction compile(const scl::ScdRecord& scd, const SubjectTrajectory& subject,
                       const BoundingBox& abox, const BoundingBox& vbox,
                       const CompilerConfig& config = {});

class AlignmentError : public std::runtime_error {
 public:
  AlignmentError(const std::string& message, double residual = 0.0)
      : std::runtime_error(message), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace cinetraj::compiler
