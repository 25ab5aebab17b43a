// cinetraj: parse and enumerate the cinematography description language,
// compile descriptions into camera instructions, simulate trajectories and
// evaluate trajectory sets.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "cinetraj/compiler.hpp"
#include "cinetraj/dataset.hpp"
#include "cinetraj/metrics.hpp"
#include "cinetraj/objectives.hpp"
#include "cinetraj/rng.hpp"
#include "cinetraj/scl.hpp"
#include "cinetraj/simulator.hpp"

using nlohmann::json;
using namespace cinetraj;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  compiler::CompilerConfig compiler;
  double epsilon = 1.0;
  int k = 5;
  objectives::LossWeights weights;
  int frames = 30;
  double cs_scale = 100.0;
};

void applyConfigFile(CliConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  json j;
  in >> j;
  if (j.contains("elevation_polar_deg")) {
    const json& table = j["elevation_polar_deg"];
    const char* names[] = {"worms_eye", "low", "eye_level", "high", "birds_eye"};
    for (int i = 0; i < scl::kElevationCount; ++i)
      if (table.contains(names[i]))
        config.compiler.elevation_polar_deg[i] = table[names[i]].get<double>();
  }
  if (j.contains("azimuth_step_deg"))
    config.compiler.azimuth_step_deg = j["azimuth_step_deg"].get<double>();
  if (j.contains("a_max")) config.compiler.max_acceleration = j["a_max"].get<double>();
  if (j.contains("alpha")) config.compiler.curve_alpha = j["alpha"].get<double>();
  if (j.contains("fov_deg")) config.compiler.default_fov = degToRad(j["fov_deg"].get<double>());
  if (j.contains("ndc_tolerance"))
    config.compiler.ndc_tolerance = j["ndc_tolerance"].get<double>();
  if (j.contains("span_tolerance"))
    config.compiler.span_tolerance = j["span_tolerance"].get<double>();
  if (j.contains("orientation_budget_deg"))
    config.compiler.orientation_budget_deg = j["orientation_budget_deg"].get<double>();
  if (j.contains("epsilon")) config.epsilon = j["epsilon"].get<double>();
  if (j.contains("k")) config.k = j["k"].get<int>();
  if (j.contains("frames")) config.frames = j["frames"].get<int>();
  if (j.contains("cs_scale")) config.cs_scale = j["cs_scale"].get<double>();
  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (w.contains("alpha")) config.weights.alpha = w["alpha"].get<double>();
    if (w.contains("beta")) config.weights.beta = w["beta"].get<double>();
    if (w.contains("gamma")) config.weights.gamma = w["gamma"].get<double>();
    if (w.contains("lambda")) config.weights.lambda = w["lambda"].get<double>();
  }
}

void validateConfig(const CliConfig& config) {
  if (!(config.epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (config.k < 1) throw UsageError("k must be >= 1");
  if (config.frames < 2) throw UsageError("frames must be >= 2");
  if (!(config.compiler.max_acceleration > 0.0)) throw UsageError("a_max must be positive");
  if (!(config.compiler.default_fov > 0.0 && config.compiler.default_fov < kPi))
    throw UsageError("fov must lie in (0, 180) degrees");
}

// --- default subject and boxes ---

struct SubjectSetup {
  sim::SubjectMotionModel motion;
  BoundingBox abox;
  BoundingBox vbox;
  bool has_abox = false;
  bool has_vbox = false;
};

BoundingBox vboxFor(const Vec3& center, const Vec3& dims) {
  BoundingBox b;
  b.center = center;
  b.half_extents = dims / 2.0;
  return b;
}

/// Attention box: the top 15% of the subject (the "face" slab).
BoundingBox aboxFor(const Vec3& center, const Vec3& dims) {
  BoundingBox b;
  b.half_extents = Vec3(0.22 * dims.x(), 0.37 * dims.y(), 0.075 * dims.z());
  b.center = center + Vec3(0.0, 0.0, dims.z() / 2.0 - b.half_extents.z());
  return b;
}

Vec3 vecFrom(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw UsageError(std::string(what) + " must be a 3-element array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

SubjectSetup loadSubjectSpec(const std::filesystem::path& path) {
  SubjectSetup setup;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open subject spec '" + path.string() + "'");
  json j;
  in >> j;
  if (j.contains("motion")) {
    const json& m = j["motion"];
    if (m.contains("kind")) {
      const std::string kind = m["kind"].get<std::string>();
      using Kind = sim::SubjectMotionModel::Kind;
      if (kind == "stationary") setup.motion.kind = Kind::Stationary;
      else if (kind == "line_walk") setup.motion.kind = Kind::LineWalk;
      else if (kind == "turn_in_place") setup.motion.kind = Kind::TurnInPlace;
      else if (kind == "arc_walk") setup.motion.kind = Kind::ArcWalk;
      else throw UsageError("unknown motion kind '" + kind + "'");
    }
    if (m.contains("speed")) setup.motion.speed = m["speed"].get<double>();
    if (m.contains("turn_rate")) setup.motion.turn_rate = m["turn_rate"].get<double>();
    if (m.contains("arc_radius")) setup.motion.arc_radius = m["arc_radius"].get<double>();
    if (m.contains("seed")) setup.motion.seed = m["seed"].get<std::uint64_t>();
    if (m.contains("start_center"))
      setup.motion.start_center = vecFrom(m["start_center"], "start_center");
    if (m.contains("dims")) setup.motion.dims = vecFrom(m["dims"], "dims");
  }
  auto loadBox = [&](const char* key, BoundingBox& box, bool& present) {
    if (!j.contains(key)) return;
    const json& b = j[key];
    box.center = vecFrom(b.at("center"), "box center");
    box.half_extents = vecFrom(b.at("half_extents"), "box half_extents");
    present = true;
  };
  loadBox("abox", setup.abox, setup.has_abox);
  loadBox("vbox", setup.vbox, setup.has_vbox);
  return setup;
}

void finalizeBoxes(SubjectSetup& setup) {
  if (!setup.has_vbox) setup.vbox = vboxFor(setup.motion.start_center, setup.motion.dims);
  if (!setup.has_abox) setup.abox = aboxFor(setup.motion.start_center, setup.motion.dims);
}

// --- subcommand: enumerate ---

int cmdEnumerate(const std::string& out_path, bool include_end,
                 const std::vector<std::string>& kind_tokens,
                 const std::vector<std::string>& easing_tokens, int frames,
                 std::uint64_t limit) {
  scl::EnumerateOptions opts;
  opts.include_end = include_end;
  opts.duration_frames = frames;
  if (!kind_tokens.empty()) {
    opts.kinds.clear();
    for (const std::string& tok : kind_tokens) {
      const auto kind = scl::parseMovementKind(tok);
      if (!kind) throw UsageError("unknown movement kind '" + tok + "'");
      opts.kinds.push_back(*kind);
    }
  }
  if (!easing_tokens.empty()) {
    opts.easings.clear();
    for (const std::string& tok : easing_tokens) {
      const auto easing = scl::parseEasingKind(tok);
      if (!easing) throw UsageError("unknown easing '" + tok + "'");
      opts.easings.push_back(*easing);
    }
  }
  scl::ScdEnumerator enumerator{opts};

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out = &file;
  }
  std::uint64_t n = enumerator.count();
  if (limit > 0) n = std::min(n, limit);
  for (std::uint64_t i = 0; i < n; ++i) *out << scl::formatScd(enumerator.at(i)) << '\n';
  if (!*out) throw std::runtime_error("write failed");
  std::cerr << "enumerated " << n << " of " << enumerator.count() << " descriptions\n";
  return 0;
}

// --- subcommand: compile ---

int cmdCompile(const std::string& scd_path, const std::string& out_path,
               const std::string& subject_path, const CliConfig& config,
               std::uint64_t seed) {
  std::ifstream in(scd_path);
  if (!in) throw UsageError("cannot open SCD file '" + scd_path + "'");
  SubjectSetup setup;
  if (!subject_path.empty()) setup = loadSubjectSpec(subject_path);
  finalizeBoxes(setup);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out = &file;
  }

  std::string line;
  std::size_t line_number = 0, written = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    scl::ScdRecord scd;
    try {
      scd = scl::parseScd(line);
    } catch (const scl::ParseError& e) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": " + e.what());
    }
    sim::SubjectMotionModel motion = setup.motion;
    compiler::CompilerConfig cc = config.compiler;
    cc.seed = mixSeed(seed, line_number);
    const SubjectTrajectory subject =
        sim::generateSubjectMotion(motion, scd.movement.duration_frames);
    dataset::InstructionLine entry;
    entry.scd = scd;
    entry.instruction = compiler::compile(scd, subject, setup.abox, setup.vbox, cc);
    entry.subject = subject;
    char id[32];
    std::snprintf(id, sizeof id, "scd-%06zu", line_number);
    entry.id = id;
    *out << dataset::toInstructionJsonLine(entry) << '\n';
    ++written;
  }
  if (!*out) throw std::runtime_error("write failed");
  std::cerr << "compiled " << written << " instructions\n";
  return 0;
}

// --- subcommand: simulate ---

int cmdSimulate(const std::string& instr_path, const std::string& out_path, bool check,
                int jobs) {
  std::ifstream in(instr_path);
  if (!in) throw UsageError("cannot open instruction file '" + instr_path + "'");
  if (jobs < 1) throw UsageError("--jobs must be >= 1");

  std::vector<std::pair<std::size_t, std::string>> lines;  // (line number, text)
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty()) lines.emplace_back(line_number, line);
  }

  // Shard across workers; results land in line order so output is
  // deterministic no matter the thread count.
  std::vector<dataset::DatasetRecord> results(lines.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;
  const int worker_count =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(1, lines.size()));
  std::vector<std::thread> workers;
  for (int w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= lines.size() || failed.load()) return;
        try {
          const dataset::InstructionLine entry =
              dataset::instructionLineFromJson(lines[i].second);
          dataset::DatasetRecord record;
          record.id = entry.id;
          record.prompt = entry.prompt;
          record.scd = entry.scd;
          record.instruction = entry.instruction;
          record.subject = entry.subject;
          record.camera = sim::simulate(entry.instruction, entry.subject);
          record.subset = dataset::subsetFor(entry.subject);
          results[i] = std::move(record);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          failed.store(true);
          if (failure.empty())
            failure = "line " + std::to_string(lines[i].first) + ": " + e.what();
          return;
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failed.load()) throw std::runtime_error(failure);

  std::optional<dataset::RecordWriter> writer;
  if (!out_path.empty()) writer.emplace(out_path);
  for (const dataset::DatasetRecord& record : results) {
    if (check) {
      double radius_residual = 0.0, accel = 0.0;
      const auto& cs = record.instruction.constraints;
      if (cs.static_distance && cs.distance_radius) {
        for (std::size_t i = 0; i < record.camera.frames.size(); ++i)
          radius_residual = std::max(
              radius_residual,
              std::abs((record.camera.frames[i].position - record.subject.frames[i].center).norm() -
                       *cs.distance_radius));
      }
      for (std::size_t i = 1; i + 1 < record.camera.frames.size(); ++i)
        accel = std::max(accel,
                         (record.camera.frames[i + 1].position -
                          2.0 * record.camera.frames[i].position +
                          record.camera.frames[i - 1].position)
                             .norm());
      std::cout << record.id << " radius_residual=" << radius_residual << " max_accel=" << accel
                << '\n';
    }
    if (writer) writer->write(record);
  }
  if (writer) writer->close();
  std::cerr << "simulated " << results.size() << " trajectories\n";
  return 0;
}

// --- subcommand: generate ---

scl::ScdRecord randomScd(Rng& rng, int frames) {
  scl::ScdRecord scd;
  scd.init.shot = static_cast<scl::ShotType>(rng.nextInt(0, scl::kShotCount - 1));
  scd.init.angle.elevation =
      static_cast<scl::Elevation>(rng.nextInt(0, scl::kElevationCount - 1));
  scd.init.angle.side = static_cast<scl::Side>(rng.nextInt(0, scl::kSideCount - 1));
  scd.init.framing = static_cast<scl::FramingCell>(rng.nextInt(0, scl::kFramingCount - 1));
  scd.movement.kind = static_cast<scl::MovementKind>(rng.nextInt(0, scl::kMovementCount - 1));
  scd.movement.easing = static_cast<scl::EasingKind>(rng.nextInt(0, scl::kEasingCount - 1));
  scd.movement.duration_frames = frames;
  if (scd.movement.kind != scl::MovementKind::Static && rng.nextUnit() < 0.5) {
    scl::EndpointSpec end;
    end.shot = static_cast<scl::ShotType>(rng.nextInt(0, scl::kShotCount - 1));
    end.angle.elevation = static_cast<scl::Elevation>(rng.nextInt(0, scl::kElevationCount - 1));
    end.angle.side = static_cast<scl::Side>(rng.nextInt(0, scl::kSideCount - 1));
    end.framing = static_cast<scl::FramingCell>(rng.nextInt(0, scl::kFramingCount - 1));
    scd.end = end;
  }
  return scd;
}

sim::SubjectMotionModel randomDynamicMotion(Rng& rng) {
  sim::SubjectMotionModel model;
  using Kind = sim::SubjectMotionModel::Kind;
  const Kind kinds[] = {Kind::LineWalk, Kind::TurnInPlace, Kind::ArcWalk};
  model.kind = kinds[rng.nextInt(0, 2)];
  model.speed = rng.nextRange(0.01, 0.05);
  model.turn_rate = rng.nextRange(0.02, 0.08);
  model.arc_radius = rng.nextRange(1.0, 4.0);
  model.start_center = Vec3(rng.nextRange(-1, 1), rng.nextRange(-1, 1), 0.85);
  model.seed = rng.nextU64();
  return model;
}

dataset::DatasetRecord generateOne(std::uint64_t seed, std::uint64_t index, bool make_static,
                                   const CliConfig& config) {
  // A draw occasionally compiles into an infeasible plan (e.g. an extreme
  // acceleration limit conflict); redraw deterministically.
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt >= 32)
      throw std::runtime_error("record " + std::to_string(index) +
                               ": no feasible draw after 32 attempts");
    Rng rng(mixSeed(seed, index * 64 + attempt));
    try {
      const scl::ScdRecord scd = randomScd(rng, config.frames);
      sim::SubjectMotionModel motion;
      if (make_static) {
        motion.seed = rng.nextU64();
      } else {
        motion = randomDynamicMotion(rng);
      }
      const SubjectTrajectory subject = sim::generateSubjectMotion(motion, config.frames);
      const BoundingBox vbox = vboxFor(subject.frames.front().center, motion.dims);
      const BoundingBox abox = aboxFor(subject.frames.front().center, motion.dims);
      compiler::CompilerConfig cc = config.compiler;
      cc.seed = rng.nextU64();
      const compiler::SimInstruction instr = compiler::compile(scd, subject, abox, vbox, cc);
      const CameraTrajectory camera = sim::simulate(instr, subject);

      dataset::DatasetRecord record;
      char id[32];
      std::snprintf(id, sizeof id, "rec-%06llu", static_cast<unsigned long long>(index));
      record.id = id;
      record.scd = scd;
      record.instruction = instr;
      record.subject = subject;
      record.camera = camera;
      record.subset = dataset::subsetFor(subject);
      return record;
    } catch (const sim::InfeasibleError&) {
      continue;
    } catch (const compiler::AlignmentError&) {
      continue;
    }
  }
}

json reportToJson(const dataset::BalanceReport& report) {
  json by_shot = json::object(), by_movement = json::object();
  for (const auto& [k, v] : report.by_shot) by_shot[k] = v;
  for (const auto& [k, v] : report.by_movement) by_movement[k] = v;
  return json{{"total", report.total},
              {"static", report.static_count},
              {"dynamic", report.dynamic_count},
              {"static_share", report.static_share},
              {"imbalance_flag", report.imbalance_flag},
              {"total_frames", report.total_frames},
              {"by_shot", by_shot},
              {"by_movement", by_movement}};
}

int cmdGenerate(const std::string& out_path, std::int64_t count, double split,
                std::uint64_t seed, int jobs, const CliConfig& config,
                const std::string& report_path) {
  if (count < 0) throw UsageError("--count must be non-negative");
  if (!(split >= 0.0 && split <= 1.0)) throw UsageError("--split must lie in [0, 1]");
  if (jobs < 1) throw UsageError("--jobs must be >= 1");

  const auto total = static_cast<std::uint64_t>(count);
  const auto static_count = static_cast<std::uint64_t>(std::llround(split * count));

  std::vector<dataset::DatasetRecord> records(total);
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> workers;
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;
  const int worker_count = std::min<std::int64_t>(jobs, std::max<std::int64_t>(1, count));
  for (int w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= total || failed.load()) return;
        try {
          records[i] = generateOne(seed, i, i < static_count, config);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          failed.store(true);
          failure = e.what();
          return;
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failed.load()) throw std::runtime_error(failure);

  // records are already id-sorted: ids embed the index
  dataset::writeRecords(records, out_path);
  const dataset::BalanceReport report = dataset::balanceReport(records);
  std::cout << "records: " << report.total << " (static " << report.static_count << ", dynamic "
            << report.dynamic_count << ")\n";
  std::cout << "frames: " << report.total_frames << '\n';
  std::cout << "static share: " << report.static_share
            << (report.imbalance_flag ? "  [imbalanced]" : "") << '\n';
  if (!report_path.empty()) {
    std::ofstream rout(report_path);
    if (!rout) throw std::runtime_error("cannot write report '" + report_path + "'");
    rout << reportToJson(report).dump(2) << '\n';
  }
  return 0;
}

// --- subcommand: evaluate ---

int cmdEvaluate(const std::string& real_path, const std::string& gen_path,
                const std::string& real_features_path, const std::string& gen_features_path,
                const std::string& traj_emb_path, const std::string& prompt_emb_path,
                bool want_cs, bool as_json, const CliConfig& config) {
  if (want_cs || !traj_emb_path.empty() || !prompt_emb_path.empty()) {
    if (traj_emb_path.empty() || prompt_emb_path.empty())
      throw UsageError("CLIP score needs both --traj-emb and --prompt-emb");
    if (!std::filesystem::exists(traj_emb_path))
      throw UsageError("embedding file '" + traj_emb_path + "' does not exist");
    if (!std::filesystem::exists(prompt_emb_path))
      throw UsageError("embedding file '" + prompt_emb_path + "' does not exist");
  }

  const dataset::ReadResult real = dataset::readRecords(real_path);
  const dataset::ReadResult gen = dataset::readRecords(gen_path);
  for (const std::string& w : real.warnings) std::cerr << "warning (real): " << w << '\n';
  for (const std::string& w : gen.warnings) std::cerr << "warning (gen): " << w << '\n';
  if (real.records.size() < 2 || gen.records.size() < 2)
    throw std::runtime_error("evaluate needs at least two records per file");

  metrics::FeatureSet real_features, gen_features;
  if (!real_features_path.empty() || !gen_features_path.empty()) {
    if (real_features_path.empty() || gen_features_path.empty())
      throw UsageError("provide both --real-features and --gen-features or neither");
    real_features = metrics::readFeatureSet(real_features_path);
    gen_features = metrics::readFeatureSet(gen_features_path);
  } else {
    Eigen::MatrixXd rf = metrics::trajectoryFeatureMatrix([&] {
      std::vector<CameraTrajectory> t;
      for (const auto& r : real.records) t.push_back(r.camera);
      return t;
    }());
    Eigen::MatrixXd gf = metrics::trajectoryFeatureMatrix([&] {
      std::vector<CameraTrajectory> t;
      for (const auto& r : gen.records) t.push_back(r.camera);
      return t;
    }());
    metrics::standardizeFeatures(rf, gf);
    real_features = metrics::FeatureSet(std::move(rf));
    gen_features = metrics::FeatureSet(std::move(gf));
  }

  const metrics::ManifoldParams params{config.k};
  json out;
  out["fid"] = metrics::fid(real_features, gen_features);
  out["precision"] = metrics::precision(real_features, gen_features, params);
  out["recall"] = metrics::recall(real_features, gen_features, params);
  out["density"] = metrics::density(real_features, gen_features, params);
  out["coverage"] = metrics::coverage(real_features, gen_features, params);

  if (!traj_emb_path.empty()) {
    const metrics::FeatureSet traj_emb = metrics::readFeatureSet(traj_emb_path);
    const metrics::FeatureSet prompt_emb = metrics::readFeatureSet(prompt_emb_path);
    out["clip_score"] = metrics::clipScore(traj_emb, prompt_emb, config.cs_scale);
  }

  if (real.records.size() == gen.records.size()) {
    const DiscrepancyParams dp{config.epsilon, true};
    double init_sum = 0.0, rel_sum = 0.0, speed_sum = 0.0;
    for (std::size_t i = 0; i < real.records.size(); ++i) {
      init_sum += objectives::initLoss(gen.records[i].camera, real.records[i].camera, dp);
      rel_sum += objectives::relLoss(gen.records[i].camera, real.records[i].camera, dp);
      speed_sum += objectives::speedLoss(gen.records[i].camera, real.records[i].camera, dp);
    }
    const double n = static_cast<double>(real.records.size());
    out["mean_init_loss"] = init_sum / n;
    out["mean_rel_loss"] = rel_sum / n;
    out["mean_speed_loss"] = speed_sum / n;
  } else {
    std::cerr << "warning: record counts differ; paired losses skipped\n";
  }

  if (as_json) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "FID       " << out["fid"].get<double>() << '\n';
    std::cout << "Precision " << out["precision"].get<double>() << '\n';
    std::cout << "Recall    " << out["recall"].get<double>() << '\n';
    std::cout << "Density   " << out["density"].get<double>() << '\n';
    std::cout << "Coverage  " << out["coverage"].get<double>() << '\n';
    if (out.contains("clip_score"))
      std::cout << "CLIP-S    " << out["clip_score"].get<double>() << '\n';
    if (out.contains("mean_init_loss")) {
      std::cout << "L_init    " << out["mean_init_loss"].get<double>() << '\n';
      std::cout << "L_rel     " << out["mean_rel_loss"].get<double>() << '\n';
      std::cout << "L_speed   " << out["mean_speed_loss"].get<double>() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cinematography DSL compiler, trajectory simulator and evaluator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  int frames = 0;  // 0 = config default
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "seed for all randomized steps");
  app.add_option("--jobs", jobs, "worker threads for generate and simulate");
  app.add_option("--frames", frames, "frames per trajectory");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "emit the SCD permutation universe");
  std::string enum_out;
  bool include_end = false;
  std::vector<std::string> kind_tokens, easing_tokens;
  std::uint64_t limit = 0;
  enumerate->add_option("-o,--output", enum_out, "output file (default stdout)");
  enumerate->add_flag("--include-end", include_end, "also permute the end endpoint");
  enumerate->add_option("--kinds", kind_tokens, "movement kinds subset")->delimiter(',');
  enumerate->add_option("--easings", easing_tokens, "easing subset")->delimiter(',');
  enumerate->add_option("--limit", limit, "emit at most this many lines");

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "lower SCD lines to instructions");
  std::string scd_path, compile_out, subject_path;
  compile_cmd->add_option("scd_file", scd_path, "SCD lines")->required();
  compile_cmd->add_option("-o,--output", compile_out, "instruction file (default stdout)");
  compile_cmd->add_option("--subject", subject_path, "subject spec JSON");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "run instructions into trajectories");
  std::string instr_path, sim_out;
  bool check = false;
  simulate_cmd->add_option("instruction_file", instr_path, "compiled instructions")->required();
  simulate_cmd->add_option("-o,--output", sim_out, "dataset records file");
  simulate_cmd->add_flag("--check", check, "print constraint residuals per record");

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "build a synthetic dataset");
  std::string gen_out, report_path;
  std::int64_t count = 0;
  double split = 0.5;
  generate_cmd->add_option("-o,--output", gen_out, "dataset file")->required();
  generate_cmd->add_option("--count", count, "number of records")->required();
  generate_cmd->add_option("--split", split, "static share target (default 0.5)");
  generate_cmd->add_option("--report-json", report_path, "write the balance report as JSON");

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "metrics between two record files");
  std::string real_path, gen_path, real_feat, gen_feat, traj_emb, prompt_emb;
  bool want_cs = false, as_json = false;
  evaluate_cmd->add_option("real_file", real_path, "reference records")->required();
  evaluate_cmd->add_option("gen_file", gen_path, "generated records")->required();
  evaluate_cmd->add_option("--real-features", real_feat, "feature file for the real set");
  evaluate_cmd->add_option("--gen-features", gen_feat, "feature file for the generated set");
  evaluate_cmd->add_option("--traj-emb", traj_emb, "trajectory embedding file (FSET)");
  evaluate_cmd->add_option("--prompt-emb", prompt_emb, "prompt embedding file (FSET)");
  evaluate_cmd->add_flag("--cs", want_cs, "require the CLIP score");
  evaluate_cmd->add_flag("--json", as_json, "print a JSON report");
  int k_flag = 0;
  double epsilon_flag = 0.0;
  evaluate_cmd->add_option("--k", k_flag, "manifold neighborhood size");
  evaluate_cmd->add_option("--epsilon", epsilon_flag, "discrepancy epsilon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    CliConfig config;
    if (!config_path.empty()) applyConfigFile(config, config_path);
    if (frames > 0) config.frames = frames;
    if (k_flag > 0) config.k = k_flag;
    if (epsilon_flag > 0.0) config.epsilon = epsilon_flag;
    validateConfig(config);

    if (enumerate->parsed())
      return cmdEnumerate(enum_out, include_end, kind_tokens, easing_tokens, config.frames,
                          limit);
    if (compile_cmd->parsed())
      return cmdCompile(scd_path, compile_out, subject_path, config, seed);
    if (simulate_cmd->parsed()) return cmdSimulate(instr_path, sim_out, check, jobs);
    if (generate_cmd->parsed())
      return cmdGenerate(gen_out, count, split, seed, jobs, config, report_path);
    if (evaluate_cmd->parsed())
      return cmdEvaluate(real_path, gen_path, real_feat, gen_feat, traj_emb, prompt_emb,
                         want_cs, as_json, config);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
