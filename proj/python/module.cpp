#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cinetraj/compiler.hpp"
#include "cinetraj/dataset.hpp"
#include "cinetraj/metrics.hpp"
#include "cinetraj/objectives.hpp"
#include "cinetraj/pose.hpp"
#include "cinetraj/scl.hpp"
#include "cinetraj/simulator.hpp"

namespace py = pybind11;
using namespace cinetraj;

namespace {

metrics::FeatureSet asFeatureSet(const Eigen::MatrixXd& m) {
  return metrics::FeatureSet(m);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cinematography DSL compiler, camera trajectory simulator and metrics";

  // --- pose types ---
  py::class_<CameraPose>(m, "CameraPose")
      .def(py::init<>())
      .def(py::init<const Vec3&, const Vec3&, double>(), py::arg("position"),
           py::arg("orientation"), py::arg("fov"))
      .def_readonly("position", &CameraPose::position)
      .def_readonly("orientation", &CameraPose::orientation)
      .def_readonly("fov", &CameraPose::fov)
      .def("__eq__", [](const CameraPose& a, const CameraPose& b) { return a == b; })
      .def("__repr__", [](const CameraPose& p) {
        return "CameraPose(pos=[" + std::to_string(p.position.x()) + ", " +
               std::to_string(p.position.y()) + ", " + std::to_string(p.position.z()) + "])";
      });

  py::class_<CameraTrajectory>(m, "CameraTrajectory")
      .def(py::init<>())
      .def_readwrite("frames", &CameraTrajectory::frames)
      .def_readwrite("frame_rate", &CameraTrajectory::frame_rate)
      .def("__len__", [](const CameraTrajectory& t) { return t.frames.size(); });

  py::class_<SubjectState::Facing>(m, "Facing")
      .def(py::init<>())
      .def_readwrite("forward", &SubjectState::Facing::forward)
      .def_readwrite("right", &SubjectState::Facing::right)
      .def_readwrite("up", &SubjectState::Facing::up);

  py::class_<SubjectState>(m, "SubjectState")
      .def(py::init<>())
      .def_readwrite("center", &SubjectState::center)
      .def_readwrite("dims", &SubjectState::dims)
      .def_readwrite("facing", &SubjectState::facing);

  py::class_<SubjectTrajectory>(m, "SubjectTrajectory")
      .def(py::init<>())
      .def_readwrite("frames", &SubjectTrajectory::frames)
      .def("__len__", [](const SubjectTrajectory& t) { return t.frames.size(); });

  py::class_<BoundingBox>(m, "BoundingBox")
      .def(py::init<>())
      .def_readwrite("center", &BoundingBox::center)
      .def_readwrite("half_extents", &BoundingBox::half_extents)
      .def_readwrite("axes", &BoundingBox::axes);

  py::class_<DiscrepancyParams>(m, "DiscrepancyParams")
      .def(py::init<>())
      .def(py::init([](double epsilon, bool normalized) {
             return DiscrepancyParams{epsilon, normalized};
           }),
           py::arg("epsilon") = 1.0, py::arg("normalized") = true)
      .def_readwrite("epsilon", &DiscrepancyParams::epsilon)
      .def_readwrite("normalized", &DiscrepancyParams::normalized);

  m.def("is_static_subject", &isStaticSubject);
  m.def("angle_direction", &angleDirection, py::arg("theta"), py::arg("axis_index"));
  m.def("angular_term", &angularTerm, py::arg("theta_hat"), py::arg("theta"),
        py::arg("epsilon"));
  m.def(
      "pose_discrepancy",
      [](const CameraPose& c, const CameraPose& c_hat, double epsilon, bool normalized) {
        return poseDiscrepancy(c, c_hat, {epsilon, normalized});
      },
      py::arg("c"), py::arg("c_hat"), py::arg("epsilon") = 1.0, py::arg("normalized") = true);

  // --- scl ---
  py::enum_<scl::ShotType>(m, "ShotType")
      .value("ECU", scl::ShotType::ECU)
      .value("CU", scl::ShotType::CU)
      .value("MCU", scl::ShotType::MCU)
      .value("MS", scl::ShotType::MS)
      .value("FS", scl::ShotType::FS)
      .value("LS", scl::ShotType::LS)
      .value("VLS", scl::ShotType::VLS)
      .value("ELS", scl::ShotType::ELS);

  py::enum_<scl::Elevation>(m, "Elevation")
      .value("WORMS_EYE", scl::Elevation::WormsEye)
      .value("LOW", scl::Elevation::Low)
      .value("EYE_LEVEL", scl::Elevation::EyeLevel)
      .value("HIGH", scl::Elevation::High)
      .value("BIRDS_EYE", scl::Elevation::BirdsEye);

  py::enum_<scl::Side>(m, "Side")
      .value("FRONT", scl::Side::Front)
      .value("FRONT_LEFT", scl::Side::FrontLeft)
      .value("LEFT", scl::Side::Left)
      .value("BACK_LEFT", scl::Side::BackLeft)
      .value("BACK", scl::Side::Back)
      .value("BACK_RIGHT", scl::Side::BackRight)
      .value("RIGHT", scl::Side::Right)
      .value("FRONT_RIGHT", scl::Side::FrontRight);

  py::enum_<scl::FramingCell>(m, "FramingCell")
      .value("TOP_LEFT", scl::FramingCell::TopLeft)
      .value("TOP_CENTER", scl::FramingCell::TopCenter)
      .value("TOP_RIGHT", scl::FramingCell::TopRight)
      .value("MIDDLE_LEFT", scl::FramingCell::MiddleLeft)
      .value("CENTER", scl::FramingCell::Center)
      .value("MIDDLE_RIGHT", scl::FramingCell::MiddleRight)
      .value("BOTTOM_LEFT", scl::FramingCell::BottomLeft)
      .value("BOTTOM_CENTER", scl::FramingCell::BottomCenter)
      .value("BOTTOM_RIGHT", scl::FramingCell::BottomRight);

  py::enum_<scl::MovementKind>(m, "MovementKind")
      .value("STATIC", scl::MovementKind::Static)
      .value("PUSH_IN", scl::MovementKind::PushIn)
      .value("PULL_OUT", scl::MovementKind::PullOut)
      .value("PAN", scl::MovementKind::Pan)
      .value("TILT", scl::MovementKind::Tilt)
      .value("ORBIT", scl::MovementKind::Orbit)
      .value("TRACK", scl::MovementKind::Track)
      .value("CRANE", scl::MovementKind::Crane);

  py::enum_<scl::EasingKind>(m, "EasingKind")
      .value("LINEAR", scl::EasingKind::Linear)
      .value("EASE_IN", scl::EasingKind::EaseIn)
      .value("EASE_OUT", scl::EasingKind::EaseOut)
      .value("EASE_IN_OUT", scl::EasingKind::EaseInOut);

  py::class_<scl::CameraAngleSpec>(m, "CameraAngleSpec")
      .def(py::init<>())
      .def_readwrite("elevation", &scl::CameraAngleSpec::elevation)
      .def_readwrite("side", &scl::CameraAngleSpec::side);

  py::class_<scl::EndpointSpec>(m, "EndpointSpec")
      .def(py::init<>())
      .def_readwrite("shot", &scl::EndpointSpec::shot)
      .def_readwrite("angle", &scl::EndpointSpec::angle)
      .def_readwrite("framing", &scl::EndpointSpec::framing);

  py::class_<scl::MovementSpec>(m, "MovementSpec")
      .def(py::init<>())
      .def_readwrite("kind", &scl::MovementSpec::kind)
      .def_readwrite("easing", &scl::MovementSpec::easing)
      .def_readwrite("duration_frames", &scl::MovementSpec::duration_frames);

  py::class_<scl::ScdRecord>(m, "ScdRecord")
      .def(py::init<>())
      .def_readwrite("init", &scl::ScdRecord::init)
      .def_readwrite("end", &scl::ScdRecord::end)
      .def_readwrite("movement", &scl::ScdRecord::movement)
      .def("__eq__", [](const scl::ScdRecord& a, const scl::ScdRecord& b) { return a == b; })
      .def("__str__", [](const scl::ScdRecord& r) { return scl::formatScd(r); });

  py::register_exception<scl::ParseError>(m, "ScdParseError", PyExc_ValueError);

  m.def("parse_scd", &scl::parseScd, py::arg("line"));
  m.def("format_scd", &scl::formatScd, py::arg("scd"));
  m.def(
      "validate_scd",
      [](const scl::ScdRecord& scd) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : scl::validateScd(scd)) out.emplace_back(v.field, v.rule);
        return out;
      },
      py::arg("scd"));

  py::class_<scl::EnumerateOptions>(m, "EnumerateOptions")
      .def(py::init<>())
      .def_readwrite("include_end", &scl::EnumerateOptions::include_end)
      .def_readwrite("kinds", &scl::EnumerateOptions::kinds)
      .def_readwrite("easings", &scl::EnumerateOptions::easings)
      .def_readwrite("duration_frames", &scl::EnumerateOptions::duration_frames);

  py::class_<scl::ScdEnumerator>(m, "ScdEnumerator")
      .def(py::init<scl::EnumerateOptions>(), py::arg("options") = scl::EnumerateOptions{})
      .def("__len__", &scl::ScdEnumerator::count)
      .def("count", &scl::ScdEnumerator::count)
      .def("at", &scl::ScdEnumerator::at, py::arg("index"))
      .def("__getitem__", [](const scl::ScdEnumerator& e, std::uint64_t i) {
        if (i >= e.count()) throw py::index_error();
        return e.at(i);
      });

  // --- compiler ---
  py::class_<compiler::ShotParams>(m, "ShotParams")
      .def_readonly("interp_factor", &compiler::ShotParams::interp_factor)
      .def_readonly("scale", &compiler::ShotParams::scale);

  py::enum_<compiler::InterpolationMode>(m, "InterpolationMode")
      .value("LINEAR", compiler::InterpolationMode::Linear)
      .value("SUBJECT_AWARE", compiler::InterpolationMode::SubjectAware);

  py::class_<compiler::ConstraintSet>(m, "ConstraintSet")
      .def(py::init<>())
      .def_readwrite("static_location", &compiler::ConstraintSet::static_location)
      .def_readwrite("static_distance", &compiler::ConstraintSet::static_distance)
      .def_readwrite("distance_radius", &compiler::ConstraintSet::distance_radius)
      .def_readwrite("visibility", &compiler::ConstraintSet::visibility)
      .def_readwrite("max_acceleration", &compiler::ConstraintSet::max_acceleration)
      .def_readwrite("look_offset", &compiler::ConstraintSet::look_offset);

  py::class_<compiler::SimInstruction>(m, "SimInstruction")
      .def(py::init<>())
      .def_readwrite("start_pose", &compiler::SimInstruction::start_pose)
      .def_readwrite("end_pose", &compiler::SimInstruction::end_pose)
      .def_readwrite("interpolation", &compiler::SimInstruction::interpolation)
      .def_readwrite("alpha", &compiler::SimInstruction::alpha)
      .def_readwrite("easing", &compiler::SimInstruction::easing)
      .def_readwrite("constraints", &compiler::SimInstruction::constraints)
      .def_readwrite("frames", &compiler::SimInstruction::frames);

  py::class_<compiler::CompilerConfig>(m, "CompilerConfig")
      .def(py::init<>())
      .def_readwrite("azimuth_step_deg", &compiler::CompilerConfig::azimuth_step_deg)
      .def_readwrite("max_acceleration", &compiler::CompilerConfig::max_acceleration)
      .def_readwrite("curve_alpha", &compiler::CompilerConfig::curve_alpha)
      .def_readwrite("default_fov", &compiler::CompilerConfig::default_fov)
      .def_readwrite("ndc_tolerance", &compiler::CompilerConfig::ndc_tolerance)
      .def_readwrite("span_tolerance", &compiler::CompilerConfig::span_tolerance)
      .def_readwrite("orientation_budget_deg", &compiler::CompilerConfig::orientation_budget_deg)
      .def_readwrite("seed", &compiler::CompilerConfig::seed);

  py::register_exception<compiler::AlignmentError>(m, "AlignmentError", PyExc_RuntimeError);

  m.def("shot_params", &compiler::shotParams, py::arg("shot"));
  m.def("roi_from_boxes", &compiler::roiFromBoxes, py::arg("abox"), py::arg("vbox"),
        py::arg("params"));
  m.def("macro_align", &compiler::macroAlign, py::arg("angle"), py::arg("roi"),
        py::arg("subject"), py::arg("fov"), py::arg("config") = compiler::CompilerConfig{});
  m.def("micro_align", &compiler::microAlign, py::arg("pose"), py::arg("roi"), py::arg("cell"),
        py::arg("config") = compiler::CompilerConfig{});
  m.def("constraints_for_movement", &compiler::constraintsForMovement, py::arg("kind"),
        py::arg("config") = compiler::CompilerConfig{});
  m.def("compile_scd", &compiler::compile, py::arg("scd"), py::arg("subject"), py::arg("abox"),
        py::arg("vbox"), py::arg("config") = compiler::CompilerConfig{});

  // --- simulator ---
  py::register_exception<sim::InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  py::enum_<sim::ConstraintPass>(m, "ConstraintPass")
      .value("STATIC_LOCATION", sim::ConstraintPass::StaticLocation)
      .value("STATIC_DISTANCE", sim::ConstraintPass::StaticDistance)
      .value("VISIBILITY", sim::ConstraintPass::Visibility)
      .value("MAX_ACCELERATION", sim::ConstraintPass::MaxAcceleration);

  py::class_<sim::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("max_accel_iterations", &sim::SimConfig::max_accel_iterations)
      .def_readwrite("accel_slack", &sim::SimConfig::accel_slack);

  py::class_<sim::SubjectMotionModel> motion(m, "SubjectMotionModel");
  py::enum_<sim::SubjectMotionModel::Kind>(motion, "Kind")
      .value("STATIONARY", sim::SubjectMotionModel::Kind::Stationary)
      .value("LINE_WALK", sim::SubjectMotionModel::Kind::LineWalk)
      .value("TURN_IN_PLACE", sim::SubjectMotionModel::Kind::TurnInPlace)
      .value("ARC_WALK", sim::SubjectMotionModel::Kind::ArcWalk);
  motion.def(py::init<>())
      .def_readwrite("kind", &sim::SubjectMotionModel::kind)
      .def_readwrite("start_center", &sim::SubjectMotionModel::start_center)
      .def_readwrite("dims", &sim::SubjectMotionModel::dims)
      .def_readwrite("speed", &sim::SubjectMotionModel::speed)
      .def_readwrite("turn_rate", &sim::SubjectMotionModel::turn_rate)
      .def_readwrite("arc_radius", &sim::SubjectMotionModel::arc_radius)
      .def_readwrite("seed", &sim::SubjectMotionModel::seed);

  m.def("ease", &sim::ease, py::arg("t"), py::arg("kind"));
  m.def("linear_interp", &sim::linearInterp, py::arg("p0"), py::arg("p1"), py::arg("t"));
  m.def("subject_aware_interp", &sim::subjectAwareInterp, py::arg("p0"), py::arg("p1"),
        py::arg("subject_start"), py::arg("subject_end"), py::arg("alpha"), py::arg("t"));
  m.def("simulate", &sim::simulate, py::arg("instruction"), py::arg("subject"),
        py::arg("config") = sim::SimConfig{});
  m.def("enforce_constraint", &sim::enforceConstraint, py::arg("trajectory"),
        py::arg("subject"), py::arg("pass_kind"), py::arg("constraints"),
        py::arg("config") = sim::SimConfig{});
  m.def("generate_subject_motion", &sim::generateSubjectMotion, py::arg("model"),
        py::arg("frames"));

  // --- objectives ---
  py::class_<objectives::LossWeights>(m, "LossWeights")
      .def(py::init<>())
      .def(py::init([](double alpha, double beta, double gamma, double lambda) {
             return objectives::LossWeights{alpha, beta, gamma, lambda};
           }),
           py::arg("alpha") = 8.0, py::arg("beta") = 20.0, py::arg("gamma") = 50.0,
           py::arg("lambda") = 5.0)
      .def_readwrite("alpha", &objectives::LossWeights::alpha)
      .def_readwrite("beta", &objectives::LossWeights::beta)
      .def_readwrite("gamma", &objectives::LossWeights::gamma)
      .def_readwrite("lambda_", &objectives::LossWeights::lambda);

  m.def(
      "init_loss",
      [](const CameraTrajectory& c, const CameraTrajectory& c_hat, double epsilon) {
        return objectives::initLoss(c, c_hat, {epsilon, true});
      },
      py::arg("c"), py::arg("c_hat"), py::arg("epsilon") = 1.0);
  m.def(
      "rel_loss",
      [](const CameraTrajectory& c, const CameraTrajectory& c_hat, double epsilon) {
        return objectives::relLoss(c, c_hat, {epsilon, true});
      },
      py::arg("c"), py::arg("c_hat"), py::arg("epsilon") = 1.0);
  m.def(
      "speed_loss",
      [](const CameraTrajectory& c, const CameraTrajectory& c_hat, double epsilon) {
        return objectives::speedLoss(c, c_hat, {epsilon, true});
      },
      py::arg("c"), py::arg("c_hat"), py::arg("epsilon") = 1.0);
  m.def(
      "clip_loss",
      [](const Eigen::VectorXd& enc_high, const Eigen::VectorXd& enc_low,
         const Eigen::VectorXd& target_high, const Eigen::VectorXd& target_low) {
        return objectives::clipLoss({enc_high, enc_low}, {target_high, target_low});
      },
      py::arg("enc_high"), py::arg("enc_low"), py::arg("target_high"), py::arg("target_low"));
  m.def("cycle_loss", &objectives::cycleLoss, py::arg("enc_high"), py::arg("reenc_high"));
  m.def(
      "total_loss",
      [](double init, double rel, double speed, double clip, double cycle,
         const objectives::LossWeights& weights) {
        return objectives::totalLoss({init, rel, speed, clip, cycle}, weights);
      },
      py::arg("init"), py::arg("rel"), py::arg("speed"), py::arg("clip"), py::arg("cycle"),
      py::arg("weights") = objectives::LossWeights{});
  m.def(
      "schedule_value",
      [](double start, double end, int total_steps, int step) {
        return objectives::scheduleValue({start, end, total_steps}, step);
      },
      py::arg("start"), py::arg("end"), py::arg("total_steps"), py::arg("step"));
  m.def("fuse_teacher", &objectives::fuseTeacher, py::arg("enc"), py::arg("target"),
        py::arg("ratio"));
  m.def(
      "corrupt_trajectory",
      [](const CameraTrajectory& traj, double mask_ratio, double noise_ratio,
         double noise_scale, std::uint64_t seed) {
        const auto result =
            objectives::corruptTrajectory(traj, mask_ratio, noise_ratio, noise_scale, seed);
        return py::make_tuple(result.trajectory, result.mask);
      },
      py::arg("trajectory"), py::arg("mask_ratio"), py::arg("noise_ratio"),
      py::arg("noise_scale"), py::arg("seed"));

  // --- metrics (numpy arrays in/out) ---
  m.def(
      "fid",
      [](const Eigen::MatrixXd& real, const Eigen::MatrixXd& gen) {
        return metrics::fid(asFeatureSet(real), asFeatureSet(gen));
      },
      py::arg("real"), py::arg("gen"));
  m.def(
      "knn_radius",
      [](const Eigen::MatrixXd& set, int index, int k) {
        return metrics::knnRadius(asFeatureSet(set), index, k);
      },
      py::arg("set"), py::arg("index"), py::arg("k"));
  m.def(
      "precision",
      [](const Eigen::MatrixXd& real, const Eigen::MatrixXd& gen, int k) {
        return metrics::precision(asFeatureSet(real), asFeatureSet(gen), {k});
      },
      py::arg("real"), py::arg("gen"), py::arg("k") = 5);
  m.def(
      "recall",
      [](const Eigen::MatrixXd& real, const Eigen::MatrixXd& gen, int k) {
        return metrics::recall(asFeatureSet(real), asFeatureSet(gen), {k});
      },
      py::arg("real"), py::arg("gen"), py::arg("k") = 5);
  m.def(
      "density",
      [](const Eigen::MatrixXd& real, const Eigen::MatrixXd& gen, int k) {
        return metrics::density(asFeatureSet(real), asFeatureSet(gen), {k});
      },
      py::arg("real"), py::arg("gen"), py::arg("k") = 5);
  m.def(
      "coverage",
      [](const Eigen::MatrixXd& real, const Eigen::MatrixXd& gen, int k) {
        return metrics::coverage(asFeatureSet(real), asFeatureSet(gen), {k});
      },
      py::arg("real"), py::arg("gen"), py::arg("k") = 5);
  m.def(
      "clip_score",
      [](const Eigen::MatrixXd& traj_emb, const Eigen::MatrixXd& prompt_emb, double scale,
         bool mean) {
        return metrics::clipScore(asFeatureSet(traj_emb), asFeatureSet(prompt_emb), scale,
                                  mean ? metrics::ClipScoreMode::Mean
                                       : metrics::ClipScoreMode::Sum);
      },
      py::arg("traj_emb"), py::arg("prompt_emb"), py::arg("scale") = 100.0,
      py::arg("mean") = true);
  m.def(
      "trajectory_features",
      [](const std::vector<CameraTrajectory>& trajs) {
        return metrics::trajectoryFeatureMatrix(trajs);
      },
      py::arg("trajectories"));

  // --- dataset ---
  py::enum_<dataset::SubsetLabel>(m, "SubsetLabel")
      .value("STATIC", dataset::SubsetLabel::Static)
      .value("DYNAMIC", dataset::SubsetLabel::Dynamic);

  py::class_<dataset::DatasetRecord>(m, "DatasetRecord")
      .def(py::init<>())
      .def_readwrite("id", &dataset::DatasetRecord::id)
      .def_readwrite("prompt", &dataset::DatasetRecord::prompt)
      .def_readwrite("scd", &dataset::DatasetRecord::scd)
      .def_readwrite("instruction", &dataset::DatasetRecord::instruction)
      .def_readwrite("subject", &dataset::DatasetRecord::subject)
      .def_readwrite("camera", &dataset::DatasetRecord::camera)
      .def_readwrite("subset", &dataset::DatasetRecord::subset);

  m.def(
      "read_records",
      [](const std::filesystem::path& path) {
        auto result = dataset::readRecords(path);
        return py::make_tuple(result.records, result.warnings);
      },
      py::arg("path"));
  m.def("write_records", &dataset::writeRecords, py::arg("records"), py::arg("path"));
  m.def("window_sample", &dataset::windowSample, py::arg("camera"), py::arg("subject"),
        py::arg("target") = 30);
  m.def("to_json_line", &dataset::toJsonLine, py::arg("record"));
}
