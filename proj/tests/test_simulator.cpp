#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cinetraj/compiler.hpp"
#include "cinetraj/rng.hpp"
#include "cinetraj/simulator.hpp"

using namespace cinetraj;
using namespace cinetraj::sim;
using compiler::CompilerConfig;
using compiler::InterpolationMode;
using scl::EasingKind;

namespace {

SubjectState standingSubject() {
  SubjectState s;
  s.center = Vec3(0, 0, 0.85);
  return s;
}

SubjectTrajectory staticSubjectTrajectory(int frames) {
  SubjectTrajectory t;
  t.frames.assign(frames, standingSubject());
  return t;
}

BoundingBox personVBox() {
  BoundingBox b;
  b.center = Vec3(0, 0, 0.85);
  b.half_extents = Vec3(0.25, 0.175, 0.85);
  return b;
}

BoundingBox personABox() {
  BoundingBox b;
  b.center = Vec3(0, 0, 1.575);
  b.half_extents = Vec3(0.11, 0.13, 0.125);
  return b;
}

double maxSecondDiff(const CameraTrajectory& traj) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.frames.size(); ++i)
    worst = std::max(worst, (traj.frames[i + 1].position - 2.0 * traj.frames[i].position +
                             traj.frames[i - 1].position)
                                .norm());
  return worst;
}

double trajectoryDistance(const CameraTrajectory& a, const CameraTrajectory& b) {
  REQUIRE(a.frames.size() == b.frames.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    worst = std::max(worst, (a.frames[i].position - b.frames[i].position).norm());
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst,
                       std::abs(wrapAngle(a.frames[i].orientation[j] - b.frames[i].orientation[j])));
  }
  return worst;
}

}  // namespace

TEST_CASE("easing boundary and midpoint contract") {
  for (const EasingKind kind : {EasingKind::Linear, EasingKind::EaseIn, EasingKind::EaseOut,
                                EasingKind::EaseInOut}) {
    CHECK(ease(0.0, kind) == 0.0);
    CHECK(ease(1.0, kind) == 1.0);
    double prev = 0.0;
    for (double t = 0.0; t <= 1.0; t += 1.0 / 64) {
      const double v = ease(t, kind);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
  }
  CHECK(ease(0.5, EasingKind::Linear) == 0.5);
  CHECK(ease(0.5, EasingKind::EaseInOut) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(ease(-0.1, EasingKind::Linear), std::domain_error);
  CHECK_THROWS_AS(ease(1.1, EasingKind::Linear), std::domain_error);
}

TEST_CASE("linearInterp endpoints and midpoint") {
  const CameraPose p0(Vec3(0, 0, 0), Vec3(0.1, 0.2, 0.3), 0.6);
  const CameraPose p1(Vec3(2, 0, 0), Vec3(0.5, -0.2, 0.1), 1.0);
  CHECK(linearInterp(p0, p1, 0.0) == p0);
  CHECK(linearInterp(p0, p1, 1.0) == p1);
  const CameraPose mid = linearInterp(p0, p1, 0.5);
  CHECK((mid.position - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK(mid.fov == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("linearInterp crosses the angle wrap on the shortest path") {
  const CameraPose p0(Vec3::Zero(), Vec3(-3.0, 0, 0), 1.0);
  const CameraPose p1(Vec3::Zero(), Vec3(3.0, 0, 0), 1.0);
  const CameraPose mid = linearInterp(p0, p1, 0.5);
  CHECK(std::abs(std::abs(mid.orientation[0]) - kPi) < 1e-12);
}

TEST_CASE("subjectAwareInterp with alpha 0 reduces to the linear path") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const CameraPose p0(Vec3(rng.nextRange(-5, 5), rng.nextRange(-5, 5), rng.nextRange(-5, 5)),
                        Vec3::Zero(), 1.0);
    const CameraPose p1(Vec3(rng.nextRange(-5, 5), rng.nextRange(-5, 5), rng.nextRange(-5, 5)),
                        Vec3::Zero(), 1.0);
    const Vec3 c(rng.nextRange(-5, 5), rng.nextRange(-5, 5), rng.nextRange(-5, 5));
    const double t = rng.nextUnit();
    const CameraPose aware = subjectAwareInterp(p0, p1, c, c, 0.0, t);
    const CameraPose linear = linearInterp(p0, p1, t);
    CHECK((aware.position - linear.position).norm() < 1e-12);
  }
}

TEST_CASE("subjectAwareInterp worked example") {
  const CameraPose p0(Vec3(0, 0, 0), Vec3::Zero(), 1.0);
  const CameraPose p1(Vec3(2, 0, 0), Vec3::Zero(), 1.0);
  const Vec3 c(1, 1, 0);
  const CameraPose out = subjectAwareInterp(p0, p1, c, c, 1.0, 0.5);
  CHECK((out.position - Vec3(1.5, 0, 0)).norm() < 1e-12);
}

TEST_CASE("stationary subject collapses the curved path onto the segment") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a(rng.nextRange(-10, 10), rng.nextRange(-10, 10), rng.nextRange(-10, 10));
    const Vec3 b(rng.nextRange(-10, 10), rng.nextRange(-10, 10), rng.nextRange(-10, 10));
    const Vec3 c(rng.nextRange(-10, 10), rng.nextRange(-10, 10), rng.nextRange(-10, 10));
    const double alpha = rng.nextUnit();
    const double t = rng.nextUnit();
    const Vec3 p = subjectAwareInterp(CameraPose(a, Vec3::Zero(), 1.0),
                                      CameraPose(b, Vec3::Zero(), 1.0), c, c, alpha, t)
                       .position;
    // distance from the segment ab
    const Vec3 ab = b - a;
    const double denom = ab.squaredNorm();
    const double u = denom > 0 ? std::clamp((p - a).dot(ab) / denom, 0.0, 1.0) : 0.0;
    CHECK((p - (a + u * ab)).norm() < 1e-9);
  }
}

TEST_CASE("simulate static instruction holds every frame") {
  compiler::SimInstruction instr;
  instr.start_pose = CameraPose(Vec3(2, 0, 1), Vec3(0.1, 0, 0), 1.0);
  instr.end_pose = instr.start_pose;
  instr.frames = 30;
  const CameraTrajectory traj = simulate(instr, staticSubjectTrajectory(30));
  REQUIRE(traj.frames.size() == 30);
  for (const CameraPose& p : traj.frames) CHECK(p == instr.start_pose);
}

TEST_CASE("simulate rejects a length mismatch") {
  compiler::SimInstruction instr;
  instr.start_pose = CameraPose(Vec3(2, 0, 1), Vec3::Zero(), 1.0);
  instr.end_pose = instr.start_pose;
  instr.frames = 30;
  CHECK_THROWS_AS(simulate(instr, staticSubjectTrajectory(29)), std::invalid_argument);
}

TEST_CASE("simulate endpoint fidelity without constraints") {
  compiler::SimInstruction instr;
  instr.start_pose = CameraPose(Vec3(2, 0, 1), Vec3(0.3, 0.1, 0), 1.0);
  instr.end_pose = CameraPose(Vec3(0, 2, 1), Vec3(1.5, -0.1, 0), 0.9);
  instr.frames = 30;
  instr.easing = EasingKind::EaseInOut;
  const CameraTrajectory traj = simulate(instr, staticSubjectTrajectory(30));
  CHECK((traj.frames.front().position - instr.start_pose.position).norm() < 1e-9);
  CHECK((traj.frames.back().position - instr.end_pose.position).norm() < 1e-9);
}

TEST_CASE("orbit simulation satisfies radius, acceleration and visibility") {
  const auto scd = scl::parseScd(
      "shot=FS angle=eye_level side=front frame=center; move=orbit ease=ease_in_out dur=30 -> "
      "shot=FS angle=eye_level side=left frame=center");
  const SubjectTrajectory subject = staticSubjectTrajectory(30);
  const compiler::SimInstruction instr = compiler::compile(scd, subject, personABox(), personVBox());
  const CameraTrajectory traj = simulate(instr, subject);

  const double radius = *instr.constraints.distance_radius;
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    const double r = (traj.frames[i].position - subject.frames[i].center).norm();
    CHECK(std::abs(r - radius) <= 1e-3);
  }
  CHECK(maxSecondDiff(traj) <= *instr.constraints.max_acceleration + 1e-9);

  // visibility: aim target inside the frustum on every frame
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    const Projected p = projectPoint(traj.frames[i], subject.frames[i].center +
                                                         instr.constraints.look_offset);
    CHECK(p.depth > 0.0);
    CHECK(std::abs(p.x) <= 1.0);
    CHECK(std::abs(p.y) <= 1.0);
  }
}

TEST_CASE("orbit output starts at the constraint-projected start pose") {
  const auto scd = scl::parseScd(
      "shot=FS angle=eye_level side=front frame=center; move=orbit dur=30 -> "
      "shot=FS angle=eye_level side=left frame=center");
  const SubjectTrajectory subject = staticSubjectTrajectory(30);
  const compiler::SimInstruction instr = compiler::compile(scd, subject, personABox(), personVBox());
  const CameraTrajectory traj = simulate(instr, subject);
  // the compiled start pose already sits on the constraint sphere and frames
  // the subject, so every pass fixes it
  CHECK((traj.frames.front().position - instr.start_pose.position).norm() < 1e-9);
  CHECK((traj.frames.front().orientation - instr.start_pose.orientation).norm() < 1e-9);
}

TEST_CASE("static location pass zeroes positional variance") {
  compiler::SimInstruction instr;
  instr.start_pose = CameraPose(Vec3(2, 0, 1), Vec3(kPi, 0, 0), 1.0);
  instr.end_pose = CameraPose(Vec3(0, 2, 1), Vec3(-kPi / 2, 0, 0), 1.0);
  instr.frames = 30;
  const SubjectTrajectory subject = staticSubjectTrajectory(30);
  const CameraTrajectory raw = simulate(instr, subject);

  compiler::ConstraintSet cs;
  cs.static_location = true;
  const CameraTrajectory fixed =
      enforceConstraint(raw, subject, ConstraintPass::StaticLocation, cs);
  for (const CameraPose& p : fixed.frames)
    CHECK((p.position - raw.frames.front().position).norm() == 0.0);
}

TEST_CASE("constraint passes are idempotent and fix satisfying input") {
  const auto scd = scl::parseScd(
      "shot=MS angle=eye_level side=front frame=center; move=orbit dur=30 -> "
      "shot=MS angle=eye_level side=back_left frame=center");
  const SubjectTrajectory subject = staticSubjectTrajectory(30);
  const compiler::SimInstruction instr = compiler::compile(scd, subject, personABox(), personVBox());
  const CameraTrajectory traj = simulate(instr, subject);

  for (const ConstraintPass pass :
       {ConstraintPass::StaticDistance, ConstraintPass::Visibility,
        ConstraintPass::MaxAcceleration}) {
    const CameraTrajectory once = enforceConstraint(traj, subject, pass, instr.constraints);
    const CameraTrajectory twice = enforceConstraint(once, subject, pass, instr.constraints);
    CHECK(trajectoryDistance(once, twice) < 1e-9);
    // the simulated trajectory already satisfies every pass
    CHECK(trajectoryDistance(traj, once) < 1e-9);
  }
}

TEST_CASE("static distance pass preserves radial directions") {
  Rng rng(43);
  CameraTrajectory traj;
  const SubjectTrajectory subject = staticSubjectTrajectory(20);
  for (int i = 0; i < 20; ++i)
    traj.frames.emplace_back(
        Vec3(rng.nextRange(1, 5), rng.nextRange(-3, 3), rng.nextRange(0, 3)), Vec3::Zero(), 1.0);
  compiler::ConstraintSet cs;
  cs.static_distance = true;
  cs.distance_radius = 2.5;
  const CameraTrajectory out =
      enforceConstraint(traj, subject, ConstraintPass::StaticDistance, cs);
  for (int i = 0; i < 20; ++i) {
    const Vec3 before = (traj.frames[i].position - subject.frames[i].center).normalized();
    const Vec3 after = out.frames[i].position - subject.frames[i].center;
    CHECK(std::abs(after.norm() - 2.5) < 1e-12);
    CHECK(before.cross(after.normalized()).norm() < 1e-12);
    CHECK(out.frames[i].orientation == traj.frames[i].orientation);
  }
}

TEST_CASE("visibility pass never moves the camera and recovers a lost subject") {
  const SubjectTrajectory subject = staticSubjectTrajectory(5);
  CameraTrajectory traj;
  for (int i = 0; i < 5; ++i) {
    // looking 180 degrees away from the subject
    traj.frames.emplace_back(Vec3(3, 0, 0.85), Vec3(0.0, 0.0, 0.0), 1.0);
  }
  compiler::ConstraintSet cs;
  cs.visibility = true;
  const CameraTrajectory out = enforceConstraint(traj, subject, ConstraintPass::Visibility, cs);
  for (int i = 0; i < 5; ++i) {
    CHECK(out.frames[i].position == traj.frames[i].position);
    const Projected p = projectPoint(out.frames[i], subject.frames[i].center);
    CHECK(p.depth > 0.0);
    CHECK(std::abs(p.x) <= 1.0);
    CHECK(std::abs(p.y) <= 1.0);
  }
}

TEST_CASE("acceleration pass clamps second differences") {
  // zig-zag path with huge acceleration
  CameraTrajectory traj;
  const SubjectTrajectory subject = staticSubjectTrajectory(31);
  for (int i = 0; i <= 30; ++i)
    traj.frames.emplace_back(Vec3(0.5 * i, (i % 2) ? 1.0 : -1.0, 1.0), Vec3::Zero(), 1.0);
  compiler::ConstraintSet cs;
  cs.max_acceleration = 0.05;
  const CameraTrajectory out =
      enforceConstraint(traj, subject, ConstraintPass::MaxAcceleration, cs);
  CHECK(maxSecondDiff(out) <= 0.05 + 1e-9);
  // endpoints pinned
  CHECK(out.frames.front().position == traj.frames.front().position);
  CHECK(out.frames.back().position == traj.frames.back().position);
}

TEST_CASE("exhausted iteration budget reports infeasibility") {
  CameraTrajectory traj;
  const SubjectTrajectory subject = staticSubjectTrajectory(31);
  for (int i = 0; i <= 30; ++i)
    traj.frames.emplace_back(Vec3(0.5 * i, (i % 2) ? 1.0 : -1.0, 1.0), Vec3::Zero(), 1.0);
  compiler::ConstraintSet cs;
  cs.max_acceleration = 1e-9;
  SimConfig config;
  config.max_accel_iterations = 1;
  config.clamp_sweeps_per_iteration = 1;
  try {
    enforceConstraint(traj, subject, ConstraintPass::MaxAcceleration, cs, config);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.pass() == "max_acceleration");
    CHECK(e.residual() > 1e-9);
  }
}

TEST_CASE("orbit with an impossible acceleration limit is infeasible") {
  const auto scd = scl::parseScd(
      "shot=FS angle=eye_level side=front frame=center; move=orbit dur=30 -> "
      "shot=FS angle=eye_level side=back_left frame=center");
  const SubjectTrajectory subject = staticSubjectTrajectory(30);
  compiler::CompilerConfig cc;
  cc.max_acceleration = 1e-6;  // the sphere geodesic alone needs far more
  const compiler::SimInstruction instr =
      compiler::compile(scd, subject, personABox(), personVBox(), cc);
  CHECK_THROWS_AS(simulate(instr, subject), InfeasibleError);
}

TEST_CASE("simulate is deterministic") {
  const auto scd = scl::parseScd(
      "shot=LS angle=high side=front_right frame=top_center; move=crane ease=ease_out dur=30 -> "
      "shot=LS angle=low side=front_right frame=bottom_center");
  const SubjectTrajectory subject = staticSubjectTrajectory(30);
  const compiler::SimInstruction instr = compiler::compile(scd, subject, personABox(), personVBox());
  const CameraTrajectory a = simulate(instr, subject);
  const CameraTrajectory b = simulate(instr, subject);
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) CHECK(a.frames[i] == b.frames[i]);
}

TEST_CASE("subject motion generators") {
  SubjectMotionModel model;
  model.kind = SubjectMotionModel::Kind::Stationary;
  model.seed = 5;
  const SubjectTrajectory stationary = generateSubjectMotion(model, 30);
  REQUIRE(stationary.frames.size() == 30);
  CHECK(isStaticSubject(stationary));

  model.kind = SubjectMotionModel::Kind::LineWalk;
  model.speed = 0.04;
  const SubjectTrajectory walk = generateSubjectMotion(model, 30);
  CHECK((walk.frames.back().center - walk.frames.front().center).norm() ==
        doctest::Approx(1.16).epsilon(1e-12));
  for (std::size_t i = 1; i < walk.frames.size(); ++i)
    CHECK((walk.frames[i].center - walk.frames[i - 1].center).norm() <= model.speed + 1e-12);
  CHECK(!isStaticSubject(walk));

  const SubjectTrajectory walk2 = generateSubjectMotion(model, 30);
  for (std::size_t i = 0; i < walk.frames.size(); ++i)
    CHECK(walk.frames[i] == walk2.frames[i]);

  model.kind = SubjectMotionModel::Kind::ArcWalk;
  const SubjectTrajectory arc = generateSubjectMotion(model, 30);
  for (std::size_t i = 1; i < arc.frames.size(); ++i)
    CHECK((arc.frames[i].center - arc.frames[i - 1].center).norm() <= model.speed + 1e-12);

  model.kind = SubjectMotionModel::Kind::TurnInPlace;
  const SubjectTrajectory turn = generateSubjectMotion(model, 30);
  CHECK(!isStaticSubject(turn));
  for (const SubjectState& s : turn.frames)
    CHECK((s.center - turn.frames.front().center).norm() == 0.0);

  CHECK_THROWS_AS(generateSubjectMotion(model, 0), std::invalid_argument);
  model.speed = -1.0;
  model.kind = SubjectMotionModel::Kind::LineWalk;
  CHECK_THROWS_AS(generateSubjectMotion(model, 10), std::invalid_argument);
}
