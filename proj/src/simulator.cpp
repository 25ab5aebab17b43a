#include "cinetraj/simulator.hpp"

#include <cmath>

#include "cinetraj/rng.hpp"

namespace cinetraj::sim {

double ease(double t, EasingKind kind) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("ease: t must lie in [0, 1]");
  switch (kind) {
    case EasingKind::Linear:
      return t;
    case EasingKind::EaseIn:
      return t * t * t;
    case EasingKind::EaseOut: {
      const double u = 1.0 - t;
      return 1.0 - u * u * u;
    }
    case EasingKind::EaseInOut:
      if (t < 0.5) return 4.0 * t * t * t;
      const double u = 1.0 - t;
      return 1.0 - 4.0 * u * u * u;
  }
  throw std::invalid_argument("unknown easing kind");
}

CameraPose linearInterp(const CameraPose& p0, const CameraPose& p1, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("linearInterp: t must lie in [0, 1]");
  Vec3 euler;
  for (int j = 0; j < 3; ++j)
    euler[j] = blendAngleShortest(p0.orientation[j], p1.orientation[j], t);
  return CameraPose((1.0 - t) * p0.position + t * p1.position, euler,
                    (1.0 - t) * p0.fov + t * p1.fov);
}

CameraPose subjectAwareInterp(const CameraPose& p0, const CameraPose& p1,
                              const Vec3& subject_start, const Vec3& subject_end,
                              double alpha, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("subjectAwareInterp: t must lie in [0, 1]");
  const Vec3 d0 = subject_start - p0.position;
  const Vec3 d1 = subject_end - p1.position;
  const Vec3 position = p0.position + t * (p1.position - p0.position) +
                        alpha * (1.0 - t) * t * (d0 - d1);
  const Vec3 aim = (1.0 - t) * subject_start + t * subject_end;
  const double roll = blendAngleShortest(p0.orientation[2], p1.orientation[2], t);
  const double fov = (1.0 - t) * p0.fov + t * p1.fov;
  if ((aim - position).norm() < 1e-12)
    return CameraPose(position, linearInterp(p0, p1, t).orientation, fov);
  return CameraPose(position, lookAtEuler(position, aim, roll), fov);
}

namespace {

Mat3 subjectBasis(const SubjectState& s) {
  Mat3 b;
  b.col(0) = s.facing.forward;
  b.col(1) = s.facing.up.cross(s.facing.forward).normalized();
  b.col(2) = s.facing.up;
  return b;
}

Vec3 aimTarget(const SubjectState& s, const ConstraintSet& constraints) {
  return s.center + subjectBasis(s) * constraints.look_offset;
}

/// Rotates the camera minimally so `target` projects at the given NDC point.
CameraPose aimAtNdc(const CameraPose& pose, const Vec3& target, double ndc_x,
                    double ndc_y) {
  const CameraBasis basis = cameraBasis(pose);
  const Vec3 world_dir = (target - pose.position).normalized();
  const Vec3 cam_dir(world_dir.dot(basis.right), world_dir.dot(basis.up),
                     world_dir.dot(basis.forward));
  const double s = std::tan(pose.fov / 2.0);
  const Vec3 desired = Vec3(ndc_x * s, ndc_y * s, 1.0).normalized();
  const Mat3 rot = minimalRotation(cam_dir, desired);
  Mat3 b;
  b.col(0) = basis.right;
  b.col(1) = basis.up;
  b.col(2) = basis.forward;
  const Mat3 nb = b * rot.transpose();
  return CameraPose(pose.position,
                    eulerFromBasis(CameraBasis{nb.col(0), nb.col(1), nb.col(2)}),
                    pose.fov);
}

void requireSameLength(const CameraTrajectory& traj, const SubjectTrajectory& subject) {
  if (traj.frames.size() != subject.frames.size())
    throw std::invalid_argument("camera and subject trajectories must have equal length");
}

CameraTrajectory passStaticLocation(const CameraTrajectory& traj,
                                    const SubjectTrajectory& subject,
                                    const ConstraintSet& constraints) {
  CameraTrajectory out = traj;
  if (traj.frames.empty()) return out;
  const Vec3 anchor = traj.frames.front().position;
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    const CameraPose& pose = traj.frames[i];
    const Vec3 target = aimTarget(subject.frames[i], constraints);
    const Projected before = projectPoint(pose, target);
    CameraPose moved(anchor, pose.orientation, pose.fov);
    if (before.depth > 0.0 && (target - anchor).norm() > 1e-12)
      moved = aimAtNdc(moved, target, before.x, before.y);
    out.frames[i] = moved;
  }
  return out;
}

CameraTrajectory passStaticDistance(const CameraTrajectory& traj,
                                    const SubjectTrajectory& subject,
                                    const ConstraintSet& constraints) {
  CameraTrajectory out = traj;
  if (traj.frames.empty()) return out;
  const double radius = constraints.distance_radius.value_or(
      (traj.frames.front().position - subject.frames.front().center).norm());
  if (!(radius > 0.0))
    throw InfeasibleError("static_distance", radius);
  Vec3 last_dir = Vec3::UnitX();
  bool have_dir = false;
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    const Vec3 center = subject.frames[i].center;
    Vec3 dir = traj.frames[i].position - center;
    const double n = dir.norm();
    if (n < 1e-12) {
      if (!have_dir) throw InfeasibleError("static_distance", 0.0);
      dir = last_dir;  // degenerate: keep the previous radial direction
    } else {
      dir /= n;
    }
    last_dir = dir;
    have_dir = true;
    out.frames[i] =
        CameraPose(center + radius * dir, traj.frames[i].orientation, traj.frames[i].fov);
  }
  return out;
}

CameraTrajectory passVisibility(const CameraTrajectory& traj,
                                const SubjectTrajectory& subject,
                                const ConstraintSet& constraints,
                                const SimConfig& config) {
  CameraTrajectory out = traj;
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    const CameraPose& pose = traj.frames[i];
    const Vec3 target = aimTarget(subject.frames[i], constraints);
    const Projected p = projectPoint(pose, target);
    if (p.depth > 0.0 && std::abs(p.x) <= 1.0 && std::abs(p.y) <= 1.0) continue;

    const CameraBasis basis = cameraBasis(pose);
    const Vec3 rel = target - pose.position;
    if (rel.norm() < 1e-12) continue;  // coincident: nothing to aim at
    const Vec3 cam_dir(rel.dot(basis.right), rel.dot(basis.up), rel.dot(basis.forward));
    const Vec3 unit = cam_dir.normalized();
    const double rho = std::hypot(unit.x(), unit.y());
    const double s = std::tan(pose.fov / 2.0);
    double ux = 0.0, uy = 1.0;
    if (rho > 1e-12) {
      ux = unit.x() / rho;
      uy = unit.y() / rho;
    }
    // Largest off-axis angle that keeps both NDC components inside the
    // frustum along this azimuth, with a small safety margin.
    const double theta_max =
        std::atan(s * (1.0 - config.visibility_margin) / std::max(std::abs(ux), std::abs(uy)));
    const double theta = std::atan2(rho, unit.z());
    if (theta <= theta_max) continue;
    const double st = std::sin(theta_max), ct = std::cos(theta_max);
    const Vec3 boundary(st * ux, st * uy, ct);
    const Mat3 rot = minimalRotation(unit, boundary);
    Mat3 b;
    b.col(0) = basis.right;
    b.col(1) = basis.up;
    b.col(2) = basis.forward;
    const Mat3 nb = b * rot.transpose();
    out.frames[i] = CameraPose(pose.position,
                               eulerFromBasis(CameraBasis{nb.col(0), nb.col(1), nb.col(2)}),
                               pose.fov);
  }
  return out;
}

double maxSecondDifference(const CameraTrajectory& traj) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.frames.size(); ++i) {
    const Vec3 a = traj.frames[i + 1].position - 2.0 * traj.frames[i].position +
                   traj.frames[i - 1].position;
    worst = std::max(worst, a.norm());
  }
  return worst;
}

void clampSweep(CameraTrajectory& traj, double target) {
  for (std::size_t i = 1; i + 1 < traj.frames.size(); ++i) {
    const Vec3 a = traj.frames[i + 1].position - 2.0 * traj.frames[i].position +
                   traj.frames[i - 1].position;
    const double n = a.norm();
    if (n > target)
      traj.frames[i] = CameraPose(
          traj.frames[i].position + ((n - target) / (2.0 * n)) * a,
          traj.frames[i].orientation, traj.frames[i].fov);
  }
}

/// Acceleration smoothing that keeps any active geometric constraints
/// projected between sweeps, so both hold simultaneously at exit. The clamp
/// aims slightly below the limit when geometry is active; re-projection
/// inflates accelerations a little, and the headroom absorbs it. If the loop
/// stalls the target tightens further.
CameraTrajectory passMaxAcceleration(const CameraTrajectory& traj,
                                     const SubjectTrajectory& subject,
                                     const ConstraintSet& constraints,
                                     const SimConfig& config, bool with_geometry) {
  if (!constraints.max_acceleration) return traj;
  const double a_max = *constraints.max_acceleration;
  if (!(a_max > 0.0)) throw std::invalid_argument("max_acceleration must be positive");

  CameraTrajectory current = traj;
  auto projectGeometry = [&](CameraTrajectory& t) {
    if (!with_geometry) return;
    if (constraints.static_location) t = passStaticLocation(t, subject, constraints);
    if (constraints.static_distance) t = passStaticDistance(t, subject, constraints);
    if (constraints.visibility) t = passVisibility(t, subject, constraints, config);
  };

  double target = with_geometry ? 0.99 * a_max : a_max;
  double residual = 0.0;
  for (int iter = 0; iter < config.max_accel_iterations; ++iter) {
    projectGeometry(current);
    residual = maxSecondDifference(current);
    if (residual <= a_max + config.accel_slack) return current;
    if (iter > 0 && iter % 100 == 0) target = std::max(0.5 * a_max, 0.98 * target);
    for (int sweep = 0; sweep < config.clamp_sweeps_per_iteration; ++sweep)
      clampSweep(current, target);
  }
  throw InfeasibleError("max_acceleration", residual);
}

}  // namespace

CameraTrajectory enforceConstraint(const CameraTrajectory& traj,
                                   const SubjectTrajectory& subject, ConstraintPass pass,
                                   const ConstraintSet& constraints,
                                   const SimConfig& config) {
  requireSameLength(traj, subject);
  switch (pass) {
    case ConstraintPass::StaticLocation:
      return passStaticLocation(traj, subject, constraints);
    case ConstraintPass::StaticDistance:
      return passStaticDistance(traj, subject, constraints);
    case ConstraintPass::Visibility:
      return passVisibility(traj, subject, constraints, config);
    case ConstraintPass::MaxAcceleration:
      return passMaxAcceleration(traj, subject, constraints, config,
                                 /*with_geometry=*/false);
  }
  throw std::invalid_argument("unknown constraint pass");
}

CameraTrajectory simulate(const SimInstruction& instr, const SubjectTrajectory& subject,
                          const SimConfig& config) {
  if (instr.frames < 1) throw std::invalid_argument("simulate: frames must be >= 1");
  if (static_cast<int>(subject.frames.size()) != instr.frames)
    throw std::invalid_argument("simulate: subject length must equal instruction frames");

  CameraTrajectory traj;
  traj.frames.reserve(instr.frames);
  const Vec3 subject_start = subject.frames.front().center;
  const Vec3 subject_end = subject.frames.back().center;
  for (int i = 0; i < instr.frames; ++i) {
    const double t =
        instr.frames > 1 ? ease(static_cast<double>(i) / (instr.frames - 1), instr.easing) : 0.0;
    if (instr.interpolation == compiler::InterpolationMode::SubjectAware)
      traj.frames.push_back(subjectAwareInterp(instr.start_pose, instr.end_pose,
                                               subject_start, subject_end, instr.alpha, t));
    else
      traj.frames.push_back(linearInterp(instr.start_pose, instr.end_pose, t));
  }

  const ConstraintSet& cs = instr.constraints;
  if (cs.static_location) traj = passStaticLocation(traj, subject, cs);
  if (cs.static_distance) traj = passStaticDistance(traj, subject, cs);
  if (cs.visibility) traj = passVisibility(traj, subject, cs, config);
  if (cs.max_acceleration)
    traj = passMaxAcceleration(traj, subject, cs, config, /*with_geometry=*/true);

  // Single geometric re-check after smoothing; the acceleration stage already
  // projects geometry between sweeps, so this cannot regress the limit.
  if (cs.static_location) traj = passStaticLocation(traj, subject, cs);
  if (cs.static_distance) traj = passStaticDistance(traj, subject, cs);
  if (cs.visibility) traj = passVisibility(traj, subject, cs, config);
  if (cs.max_acceleration) {
    const double residual = maxSecondDifference(traj);
    if (residual > *cs.max_acceleration + 1e-9)
      throw InfeasibleError("max_acceleration", residual);
  }
  return traj;
}

SubjectTrajectory generateSubjectMotion(const SubjectMotionModel& model, int frames) {
  if (frames < 1) throw std::invalid_argument("generateSubjectMotion: frames must be >= 1");
  if (!(model.speed >= 0.0) || !std::isfinite(model.speed))
    throw std::invalid_argument("generateSubjectMotion: invalid speed");
  if (!(model.dims.array() > 0.0).all())
    throw std::invalid_argument("generateSubjectMotion: dims must be positive");
  if (model.kind == SubjectMotionModel::Kind::ArcWalk && !(model.arc_radius > 0.0))
    throw std::invalid_argument("generateSubjectMotion: arc_radius must be positive");

  Rng rng(mixSeed(model.seed, 0x5b7));
  const double heading0 = rng.nextRange(-kPi, kPi);

  auto stateAt = [&](double heading, const Vec3& center) {
    SubjectState s;
    s.center = center;
    s.dims = model.dims;
    s.facing.forward = Vec3(std::cos(heading), std::sin(heading), 0.0);
    s.facing.up = Vec3::UnitZ();
    s.facing.right = s.facing.forward.cross(s.facing.up);
    return s;
  };

  SubjectTrajectory out;
  out.frames.reserve(frames);
  using Kind = SubjectMotionModel::Kind;
  switch (model.kind) {
    case Kind::Stationary: {
      const SubjectState s = stateAt(heading0, model.start_center);
      out.frames.assign(frames, s);
      break;
    }
    case Kind::LineWalk: {
      const Vec3 dir(std::cos(heading0), std::sin(heading0), 0.0);
      for (int i = 0; i < frames; ++i)
        out.frames.push_back(stateAt(heading0, model.start_center + i * model.speed * dir));
      break;
    }
    case Kind::TurnInPlace: {
      for (int i = 0; i < frames; ++i)
        out.frames.push_back(stateAt(heading0 + i * model.turn_rate, model.start_center));
      break;
    }
    case Kind::ArcWalk: {
      // Circle of radius R to the left of the initial heading; per-frame arc
      // step equals `speed` so chord speed never exceeds it.
      const double step = model.speed / model.arc_radius;
      const Vec3 left0(-std::sin(heading0), std::cos(heading0), 0.0);
      const Vec3 pivot = model.start_center + model.arc_radius * left0;
      for (int i = 0; i < frames; ++i) {
        const double heading = heading0 + i * step;
        const Vec3 radial(std::sin(heading), -std::cos(heading), 0.0);
        out.frames.push_back(stateAt(heading, pivot + model.arc_radius * radial));
      }
      break;
    }
  }
  return out;
}

}  // namespace cinetraj::sim
