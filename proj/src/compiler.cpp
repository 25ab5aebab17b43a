#include "cinetraj/compiler.hpp"

#include <cmath>

#include "cinetraj/rng.hpp"

namespace cinetraj::compiler {

using scl::FramingCell;
using scl::MovementKind;

ShotParams shotParams(scl::ShotType shot) {
  switch (shot) {
    case scl::ShotType::ECU: return {0.0, 0.5};
    case scl::ShotType::CU:  return {0.0, 1.0};
    case scl::ShotType::MCU: return {0.25, 1.0};
    case scl::ShotType::MS:  return {0.50, 1.0};
    case scl::ShotType::FS:  return {1.0, 1.0};
    case scl::ShotType::LS:  return {1.0, 1.5};
    case scl::ShotType::VLS: return {1.0, 2.0};
    case scl::ShotType::ELS: return {1.0, 3.0};
  }
  throw std::invalid_argument("unknown shot type");
}

RoiBox roiFromBoxes(const BoundingBox& abox, const BoundingBox& vbox,
                    const ShotParams& params) {
  validateBoundingBox(abox);
  validateBoundingBox(vbox);
  if ((abox.axes - vbox.axes).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("roiFromBoxes: boxes must share axes");
  const double f = params.interp_factor;
  RoiBox roi;
  roi.center = (1.0 - f) * abox.center + f * vbox.center;
  roi.half_extents = ((1.0 - f) * abox.half_extents + f * vbox.half_extents) * params.scale;
  roi.axes = abox.axes;
  return roi;
}

namespace {

/// Full extent of `box` measured along unit direction `dir`.
double extentAlong(const BoundingBox& box, const Vec3& dir) {
  double e = 0.0;
  for (int k = 0; k < 3; ++k)
    e += box.half_extents[k] * std::abs(box.axes.col(k).dot(dir));
  return 2.0 * e;
}

/// Box axis most aligned with world up; defines the ROI's vertical segment.
int verticalAxisIndex(const BoundingBox& box) {
  int best = 2;
  double best_dot = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double d = std::abs(box.axes.col(k).z());
    if (d > best_dot) {
      best_dot = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

CameraPose macroAlign(const scl::CameraAngleSpec& angle, const RoiBox& roi,
                      const SubjectState& subject, double fov,
                      const CompilerConfig& config) {
  if (!(fov > 0.0 && fov < kPi)) throw std::invalid_argument("fov must lie in (0, pi)");
  validateBoundingBox(roi);
  validateSubjectState(subject);

  const Vec3 fwd = subject.facing.forward;
  const Vec3 up = subject.facing.up;
  const Vec3 left = up.cross(fwd).normalized();

  const double polar = degToRad(config.elevation_polar_deg[static_cast<int>(angle.elevation)]);
  const double azim = degToRad(config.azimuth_step_deg) * static_cast<int>(angle.side);
  const Vec3 dir = std::sin(polar) * (std::cos(azim) * fwd + std::sin(azim) * left) +
                   std::cos(polar) * up;

  const double height = extentAlong(roi, up);
  if (height < 1e-12) throw AlignmentError("macroAlign: degenerate ROI extent");
  const double radius = (height / 2.0) / std::tan(fov / 2.0);

  const Vec3 position = roi.center + radius * dir;
  return CameraPose(position, lookAtEuler(position, roi.center), fov);
}

std::pair<double, double> framingCellCenter(FramingCell cell) {
  const int i = static_cast<int>(cell);
  const int col = i % 3;  // 0 left, 1 center, 2 right
  const int row = i / 3;  // 0 top, 1 middle, 2 bottom
  return {(col - 1) / 3.0, (1 - row) / 3.0};
}

namespace {

/// NDC y-span of the ROI's vertical segment as seen from `pose`.
double projectedVerticalSpan(const CameraPose& pose, const RoiBox& roi) {
  const int k = verticalAxisIndex(roi);
  const Vec3 offset = roi.half_extents[k] * roi.axes.col(k);
  const Projected top = projectPoint(pose, roi.center + offset);
  const Projected bottom = projectPoint(pose, roi.center - offset);
  if (top.depth <= 0.0 || bottom.depth <= 0.0)
    throw AlignmentError("microAlign: ROI extends behind the camera");
  return std::abs(top.y - bottom.y);
}

CameraPose withBasis(const CameraPose& pose, const CameraBasis& basis) {
  return CameraPose(pose.position, eulerFromBasis(basis), pose.fov);
}

}  // namespace

CameraPose microAlign(const CameraPose& pose, const RoiBox& roi, FramingCell cell,
                      const CompilerConfig& config) {
  validateBoundingBox(roi);
  {
    const Projected p = projectPoint(pose, roi.center);
    if (p.depth <= 0.0) throw AlignmentError("microAlign: ROI center behind camera");
  }
  const auto [target_x, target_y] = framingCellCenter(cell);
  const double target_span = projectedVerticalSpan(pose, roi);
  const double budget = degToRad(config.orientation_budget_deg);

  CameraPose current = pose;
  double rotation_spent = 0.0;
  constexpr int kMaxIterations = 60;
  constexpr double kCenterTol = 1e-10;
  constexpr double kSpanTol = 1e-10;

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Projected p = projectPoint(current, roi.center);
    if (p.depth <= 0.0) throw AlignmentError("microAlign: ROI center behind camera");
    const double span = projectedVerticalSpan(current, roi);
    const bool centered = std::hypot(p.x - target_x, p.y - target_y) <= kCenterTol;
    const bool spanned = std::abs(span / target_span - 1.0) <= kSpanTol;
    if (centered && spanned) break;

    if (!centered) {
      const CameraBasis basis = cameraBasis(current);
      const Vec3 world_dir = (roi.center - current.position).normalized();
      const Vec3 cam_dir(world_dir.dot(basis.right), world_dir.dot(basis.up),
                         world_dir.dot(basis.forward));
      const double s = std::tan(current.fov / 2.0);
      const Vec3 desired = Vec3(target_x * s, target_y * s, 1.0).normalized();
      const double step = std::acos(std::clamp(cam_dir.dot(desired), -1.0, 1.0));
      if (rotation_spent + step <= budget) {
        rotation_spent += step;
        const Mat3 rot = minimalRotation(cam_dir, desired);
        // New basis B' = B * R^T places the target at the desired direction.
        Mat3 b;
        b.col(0) = basis.right;
        b.col(1) = basis.up;
        b.col(2) = basis.forward;
        const Mat3 nb = b * rot.transpose();
        current = withBasis(current, CameraBasis{nb.col(0), nb.col(1), nb.col(2)});
      } else {
        // Orientation budget exhausted: slide the camera, keeping orientation
        // and the distance to the ROI center.
        const double depth_keep = (roi.center - current.position).norm();
        const Vec3 desired_world =
            desired.x() * basis.right + desired.y() * basis.up + desired.z() * basis.forward;
        current = CameraPose(roi.center - depth_keep * desired_world,
                             current.orientation, current.fov);
      }
    }

    const double span_now = projectedVerticalSpan(current, roi);
    const double tan_new = std::tan(current.fov / 2.0) * (span_now / target_span);
    if (tan_new > 1e-9 && std::isfinite(tan_new)) {
      const double fov_new = std::clamp(2.0 * std::atan(tan_new), 1e-6, kPi - 1e-6);
      current = CameraPose(current.position, current.orientation, fov_new);
    }
  }

  const Projected p = projectPoint(current, roi.center);
  const double center_residual = std::hypot(p.x - target_x, p.y - target_y);
  const double span_residual =
      std::abs(projectedVerticalSpan(current, roi) / target_span - 1.0);
  if (p.depth <= 0.0 || center_residual > config.ndc_tolerance ||
      span_residual > config.span_tolerance)
    throw AlignmentError("microAlign: framing unreachable",
                         std::max(center_residual, span_residual));
  return current;
}

ConstraintSet constraintsForMovement(MovementKind kind, const CompilerConfig& config) {
  ConstraintSet cs;
  cs.max_acceleration = config.max_acceleration;
  switch (kind) {
    case MovementKind::Pan:
    case MovementKind::Tilt:
      cs.static_location = true;
      break;
    case MovementKind::Orbit:
      cs.static_distance = true;
      cs.visibility = true;
      break;
    case MovementKind::Track:
    case MovementKind::PushIn:
    case MovementKind::PullOut:
    case MovementKind::Crane:
      cs.visibility = true;
      break;
    case MovementKind::Static:
      break;
  }
  return cs;
}

namespace {

Mat3 subjectBasis(const SubjectState& s) {
  Mat3 b;
  b.col(0) = s.facing.forward;
  b.col(1) = s.facing.up.cross(s.facing.forward).normalized();  // left
  b.col(2) = s.facing.up;
  return b;
}

/// Re-anchors a world box given relative to `from` onto the frame of `to`.
BoundingBox transportBox(const BoundingBox& box, const SubjectState& from,
                         const SubjectState& to) {
  const Mat3 bf = subjectBasis(from);
  const Mat3 bt = subjectBasis(to);
  const Mat3 relative = bt * bf.transpose();
  BoundingBox out;
  out.center = to.center + relative * (box.center - from.center);
  out.axes = relative * box.axes;
  out.half_extents = box.half_extents;
  return out;
}

scl::EndpointSpec randomPlausibleEnd(const scl::EndpointSpec& init, Rng& rng) {
  scl::EndpointSpec end;
  const int shot = static_cast<int>(init.shot);
  const int lo = std::max(0, shot - 1), hi = std::min(scl::kShotCount - 1, shot + 1);
  end.shot = static_cast<scl::ShotType>(rng.nextInt(lo, hi));
  const int side = static_cast<int>(init.angle.side);
  const int offset = rng.nextInt(-2, 2);
  end.angle.side = static_cast<scl::Side>(((side + offset) % scl::kSideCount + scl::kSideCount) %
                                          scl::kSideCount);
  end.angle.elevation = static_cast<scl::Elevation>(rng.nextInt(0, scl::kElevationCount - 1));
  end.framing = static_cast<scl::FramingCell>(rng.nextInt(0, scl::kFramingCount - 1));
  return end;
}

CameraPose alignEndpoint(const scl::EndpointSpec& ep, const RoiBox& roi,
                         const SubjectState& subject, const CompilerConfig& config) {
  const CameraPose macro = macroAlign(ep.angle, roi, subject, config.default_fov, config);
  return microAlign(macro, roi, ep.framing, config);
}

}  // namespace

SimInstruction compile(const scl::ScdRecord& scd, const SubjectTrajectory& subject,
                       const BoundingBox& abox, const BoundingBox& vbox,
                       const CompilerConfig& config) {
  const auto violations = validateScd(scd);
  if (!violations.empty()) {
    std::string msg = "compile: invalid SCD:";
    for (const auto& v : violations) msg += " [" + v.field + ": " + v.rule + "]";
    throw std::invalid_argument(msg);
  }
  if (subject.frames.empty())
    throw std::invalid_argument("compile: subject trajectory is empty");
  validateBoundingBox(abox);
  validateBoundingBox(vbox);

  const SubjectState& first = subject.frames.front();
  const SubjectState& last = subject.frames.back();

  const RoiBox start_roi = roiFromBoxes(abox, vbox, shotParams(scd.init.shot));
  const CameraPose start_pose = alignEndpoint(scd.init, start_roi, first, config);

  SimInstruction instr;
  instr.start_pose = start_pose;
  instr.easing = scd.movement.easing;
  instr.frames = scd.movement.duration_frames;
  instr.alpha = config.curve_alpha;
  instr.interpolation = (scd.movement.kind == MovementKind::Orbit ||
                         scd.movement.kind == MovementKind::Track)
                            ? InterpolationMode::SubjectAware
                            : InterpolationMode::Linear;

  if (scd.movement.kind == MovementKind::Static) {
    instr.end_pose = start_pose;
  } else {
    scl::EndpointSpec end_spec;
    if (scd.end) {
      end_spec = *scd.end;
    } else {
      Rng rng(mixSeed(config.seed, 0x5cd));
      end_spec = randomPlausibleEnd(scd.init, rng);
    }
    const BoundingBox end_abox = transportBox(abox, first, last);
    const BoundingBox end_vbox = transportBox(vbox, first, last);
    const RoiBox end_roi = roiFromBoxes(end_abox, end_vbox, shotParams(end_spec.shot));
    instr.end_pose = alignEndpoint(end_spec, end_roi, last, config);
  }

  instr.constraints = constraintsForMovement(scd.movement.kind, config);
  instr.constraints.look_offset =
      subjectBasis(first).transpose() * (start_roi.center - first.center);
  if (instr.constraints.static_distance)
    instr.constraints.distance_radius = (start_pose.position - first.center).norm();
  return instr;
}

}  // namespace cinetraj::compiler
