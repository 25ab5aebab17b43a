#include "cinetraj/dataset.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

#include "cinetraj/rng.hpp"

namespace cinetraj::dataset {

using nlohmann::json;

namespace {

json vecToJson(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vecFromJson(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument(std::string(what) + " must be a 3-element array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json poseToJson(const CameraPose& p) {
  return json{{"pos", vecToJson(p.position)},
              {"rot", vecToJson(p.orientation)},
              {"fov", p.fov}};
}

CameraPose poseFromJson(const json& j) {
  return CameraPose(vecFromJson(j.at("pos"), "pos"), vecFromJson(j.at("rot"), "rot"),
                    j.at("fov").get<double>());
}

json subjectToJson(const SubjectState& s) {
  return json{{"center", vecToJson(s.center)},
              {"dims", vecToJson(s.dims)},
              {"facing", json::array({vecToJson(s.facing.forward), vecToJson(s.facing.right),
                                      vecToJson(s.facing.up)})}};
}

SubjectState subjectFromJson(const json& j) {
  SubjectState s;
  s.center = vecFromJson(j.at("center"), "center");
  s.dims = vecFromJson(j.at("dims"), "dims");
  const json& f = j.at("facing");
  if (!f.is_array() || f.size() != 3)
    throw std::invalid_argument("facing must hold three direction vectors");
  s.facing.forward = vecFromJson(f[0], "facing.forward");
  s.facing.right = vecFromJson(f[1], "facing.right");
  s.facing.up = vecFromJson(f[2], "facing.up");
  validateSubjectState(s);
  return s;
}

json constraintsToJson(const compiler::ConstraintSet& c) {
  json j{{"static_location", c.static_location},
         {"static_distance", c.static_distance},
         {"visibility", c.visibility},
         {"look_offset", vecToJson(c.look_offset)}};
  j["radius"] = c.distance_radius ? json(*c.distance_radius) : json(nullptr);
  j["max_acceleration"] = c.max_acceleration ? json(*c.max_acceleration) : json(nullptr);
  return j;
}

compiler::ConstraintSet constraintsFromJson(const json& j) {
  compiler::ConstraintSet c;
  c.static_location = j.at("static_location").get<bool>();
  c.static_distance = j.at("static_distance").get<bool>();
  c.visibility = j.at("visibility").get<bool>();
  c.look_offset = vecFromJson(j.at("look_offset"), "look_offset");
  if (!j.at("radius").is_null()) c.distance_radius = j.at("radius").get<double>();
  if (!j.at("max_acceleration").is_null())
    c.max_acceleration = j.at("max_acceleration").get<double>();
  return c;
}

constexpr const char* kInterpolationTokens[] = {"linear", "subject_aware"};

json instructionToJson(const compiler::SimInstruction& instr) {
  return json{{"start_pose", poseToJson(instr.start_pose)},
              {"end_pose", poseToJson(instr.end_pose)},
              {"interpolation", kInterpolationTokens[static_cast<int>(instr.interpolation)]},
              {"alpha", instr.alpha},
              {"easing", std::string(scl::token(instr.easing))},
              {"constraints", constraintsToJson(instr.constraints)},
              {"frames", instr.frames}};
}

compiler::SimInstruction instructionFromJson(const json& j) {
  compiler::SimInstruction instr;
  instr.start_pose = poseFromJson(j.at("start_pose"));
  instr.end_pose = poseFromJson(j.at("end_pose"));
  const std::string interp = j.at("interpolation").get<std::string>();
  if (interp == kInterpolationTokens[0])
    instr.interpolation = compiler::InterpolationMode::Linear;
  else if (interp == kInterpolationTokens[1])
    instr.interpolation = compiler::InterpolationMode::SubjectAware;
  else
    throw std::invalid_argument("unknown interpolation '" + interp + "'");
  instr.alpha = j.at("alpha").get<double>();
  const std::string easing = j.at("easing").get<std::string>();
  const auto parsed = scl::parseEasingKind(easing);
  if (!parsed) throw std::invalid_argument("unknown easing '" + easing + "'");
  instr.easing = *parsed;
  instr.constraints = constraintsFromJson(j.at("constraints"));
  instr.frames = j.at("frames").get<int>();
  return instr;
}

const std::set<std::string>& knownRecordKeys() {
  static const std::set<std::string> keys = {"v",       "id",     "prompt", "scd",
                                             "instruction", "subject", "camera", "subset"};
  return keys;
}

}  // namespace

SubsetLabel subsetFor(const SubjectTrajectory& subject) {
  return isStaticSubject(subject) ? SubsetLabel::Static : SubsetLabel::Dynamic;
}

void validateRecord(const DatasetRecord& record) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("record '" + record.id + "': " + why);
  };
  if (record.id.empty()) fail("empty id");
  if (record.camera.frames.empty()) fail("empty camera trajectory");
  if (record.camera.frames.size() != record.subject.frames.size())
    fail("subject and camera lengths differ");
  const auto violations = scl::validateScd(record.scd);
  if (!violations.empty()) fail("invalid scd (" + violations.front().field + ")");
  for (const SubjectState& s : record.subject.frames) validateSubjectState(s);
  if (subsetFor(record.subject) != record.subset)
    fail("subset label does not match the subject trajectory");
}

std::string toJsonLine(const DatasetRecord& record) {
  json j;
  j["v"] = 1;
  j["id"] = record.id;
  if (record.prompt) j["prompt"] = *record.prompt;
  j["scd"] = scl::formatScd(record.scd);
  j["instruction"] = instructionToJson(record.instruction);
  json subject = json::array();
  for (const SubjectState& s : record.subject.frames) subject.push_back(subjectToJson(s));
  j["subject"] = std::move(subject);
  json camera = json::array();
  for (const CameraPose& p : record.camera.frames) camera.push_back(poseToJson(p));
  j["camera"] = std::move(camera);
  j["subset"] = record.subset == SubsetLabel::Static ? "static" : "dynamic";
  return j.dump();
}

DatasetRecord fromJsonLine(const std::string& line, std::vector<std::string>* warnings) {
  const json j = json::parse(line);
  if (!j.is_object()) throw std::invalid_argument("record line is not a JSON object");
  if (warnings) {
    for (const auto& [key, value] : j.items())
      if (!knownRecordKeys().contains(key))
        warnings->push_back("ignored unknown field '" + key + "'");
  }
  const int version = j.at("v").get<int>();
  if (version != 1)
    throw std::invalid_argument("unsupported schema version " + std::to_string(version));
  DatasetRecord record;
  record.id = j.at("id").get<std::string>();
  if (j.contains("prompt")) record.prompt = j.at("prompt").get<std::string>();
  record.scd = scl::parseScd(j.at("scd").get<std::string>());
  record.instruction = instructionFromJson(j.at("instruction"));
  for (const json& s : j.at("subject")) record.subject.frames.push_back(subjectFromJson(s));
  for (const json& p : j.at("camera")) record.camera.frames.push_back(poseFromJson(p));
  const std::string subset = j.at("subset").get<std::string>();
  if (subset == "static")
    record.subset = SubsetLabel::Static;
  else if (subset == "dynamic")
    record.subset = SubsetLabel::Dynamic;
  else
    throw std::invalid_argument("unknown subset '" + subset + "'");
  validateRecord(record);
  return record;
}

std::string toInstructionJsonLine(const InstructionLine& entry) {
  json j;
  j["v"] = 1;
  j["id"] = entry.id;
  if (entry.prompt) j["prompt"] = *entry.prompt;
  j["scd"] = scl::formatScd(entry.scd);
  j["instruction"] = instructionToJson(entry.instruction);
  json subject = json::array();
  for (const SubjectState& s : entry.subject.frames) subject.push_back(subjectToJson(s));
  j["subject"] = std::move(subject);
  return j.dump();
}

InstructionLine instructionLineFromJson(const std::string& line) {
  const json j = json::parse(line);
  if (!j.is_object()) throw std::invalid_argument("instruction line is not a JSON object");
  const int version = j.at("v").get<int>();
  if (version != 1)
    throw std::invalid_argument("unsupported schema version " + std::to_string(version));
  InstructionLine entry;
  entry.id = j.at("id").get<std::string>();
  if (j.contains("prompt")) entry.prompt = j.at("prompt").get<std::string>();
  entry.scd = scl::parseScd(j.at("scd").get<std::string>());
  entry.instruction = instructionFromJson(j.at("instruction"));
  for (const json& s : j.at("subject")) entry.subject.frames.push_back(subjectFromJson(s));
  if (entry.id.empty()) throw std::invalid_argument("instruction line has an empty id");
  if (entry.subject.frames.empty())
    throw std::invalid_argument("instruction line '" + entry.id + "' has no subject frames");
  if (static_cast<int>(entry.subject.frames.size()) != entry.instruction.frames)
    throw std::invalid_argument("instruction line '" + entry.id +
                                "': subject length differs from the frame count");
  return entry;
}

RecordWriter::RecordWriter(const std::filesystem::path& path) : out_(path), path_(path) {
  if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
}

void RecordWriter::write(const DatasetRecord& record) {
  validateRecord(record);
  out_ << toJsonLine(record) << '\n';
  if (!out_) throw std::runtime_error("write failed on '" + path_.string() + "'");
  ++count_;
}

void RecordWriter::close() {
  out_.close();
  if (out_.fail()) throw std::runtime_error("close failed on '" + path_.string() + "'");
}

std::size_t writeRecords(const std::vector<DatasetRecord>& records,
                         const std::filesystem::path& path) {
  RecordWriter writer(path);
  for (const DatasetRecord& r : records) writer.write(r);
  writer.close();
  return records.size();
}

ReadResult readRecords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  ReadResult result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      result.records.push_back(fromJsonLine(line, &result.warnings));
    } catch (const std::exception& e) {
      throw DatasetError(line_number, e.what());
    }
  }
  return result;
}

namespace {

std::vector<std::size_t> windowIndices(std::size_t length, int target) {
  std::vector<std::size_t> indices(target);
  for (int i = 0; i < target; ++i) {
    const double x = static_cast<double>(i) * static_cast<double>(length - 1) /
                     static_cast<double>(target - 1);
    indices[i] = static_cast<std::size_t>(std::floor(x + 0.5));  // round half up
  }
  return indices;
}

std::pair<CameraTrajectory, SubjectTrajectory> take(const CameraTrajectory& camera,
                                                    const SubjectTrajectory& subject,
                                                    const std::vector<std::size_t>& indices) {
  CameraTrajectory c;
  c.frame_rate = camera.frame_rate;
  SubjectTrajectory s;
  for (const std::size_t i : indices) {
    c.frames.push_back(camera.frames[i]);
    s.frames.push_back(subject.frames[i]);
  }
  return {std::move(c), std::move(s)};
}

}  // namespace

std::pair<CameraTrajectory, SubjectTrajectory> windowSample(const CameraTrajectory& camera,
                                                            const SubjectTrajectory& subject,
                                                            int target) {
  if (target < 2) throw std::invalid_argument("windowSample: target must be >= 2");
  if (camera.frames.size() != subject.frames.size())
    throw std::invalid_argument("windowSample: trajectory lengths differ");
  const std::size_t length = camera.frames.size();
  if (length < static_cast<std::size_t>(target))
    throw std::invalid_argument("windowSample: input shorter than the target window");
  if (length == static_cast<std::size_t>(target)) return {camera, subject};
  return take(camera, subject, windowIndices(length, target));
}

std::pair<CameraTrajectory, SubjectTrajectory> windowSampleRandom(
    const CameraTrajectory& camera, const SubjectTrajectory& subject, int target,
    std::uint64_t seed) {
  if (target < 1) throw std::invalid_argument("windowSampleRandom: target must be >= 1");
  if (camera.frames.size() != subject.frames.size())
    throw std::invalid_argument("windowSampleRandom: trajectory lengths differ");
  const std::size_t length = camera.frames.size();
  if (length < static_cast<std::size_t>(target))
    throw std::invalid_argument("windowSampleRandom: input shorter than the target window");
  Rng rng(mixSeed(seed, 0x34d));
  const std::size_t start = rng.nextBelow(length - target + 1);
  std::vector<std::size_t> indices(target);
  for (int i = 0; i < target; ++i) indices[i] = start + i;
  return take(camera, subject, indices);
}

BalanceReport balanceReport(const std::vector<DatasetRecord>& records) {
  BalanceReport report;
  report.total = records.size();
  for (const DatasetRecord& r : records) {
    if (r.subset == SubsetLabel::Static)
      ++report.static_count;
    else
      ++report.dynamic_count;
    ++report.by_shot[std::string(scl::token(r.scd.init.shot))];
    ++report.by_movement[std::string(scl::token(r.scd.movement.kind))];
    report.total_frames += r.camera.frames.size();
  }
  if (report.total > 0) {
    report.static_share =
        static_cast<double>(report.static_count) / static_cast<double>(report.total);
    report.imbalance_flag = std::abs(report.static_share - 0.5) > 0.02;
  }
  return report;
}

}  // namespace cinetraj::dataset
