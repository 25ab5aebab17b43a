#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cinetraj/compiler.hpp"
#include "cinetraj/pose.hpp"
#include "cinetraj/scl.hpp"

namespace cinetraj::dataset {

enum class SubsetLabel { Static, Dynamic };

/// One paired dataset sample: description, compiled instruction, subject and
/// camera trajectories of equal length, and the static/dynamic label.
struct DatasetRecord {
  std::string id;
  std::optional<std::string> prompt;
  scl::ScdRecord scd;
  compiler::SimInstruction instruction;
  SubjectTrajectory subject;
  CameraTrajectory camera;
  SubsetLabel subset = SubsetLabel::Static;
};

/// Label consistent with the subject trajectory (static iff all frames equal).
SubsetLabel subsetFor(const SubjectTrajectory& subject);

/// Throws std::invalid_argument (message names the record id) when an
/// invariant is violated.
void validateRecord(const DatasetRecord& record);

std::string toJsonLine(const DatasetRecord& record);
DatasetRecord fromJsonLine(const std::string& line, std::vector<std::string>* warnings = nullptr);

/// Compiled-but-not-yet-simulated sample: the interchange format between the
/// compile and simulate stages (a dataset record minus the camera).
struct InstructionLine {
  std::string id;
  std::optional<std::string> prompt;
  scl::ScdRecord scd;
  compiler::SimInstruction instruction;
  SubjectTrajectory subject;
};

std::string toInstructionJsonLine(const InstructionLine& entry);
InstructionLine instructionLineFromJson(const std::string& line);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(std::size_t line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
        line_number_(line_number) {}
  std::size_t lineNumber() const { return line_number_; }

 private:
  std::size_t line_number_;
};

/// Streaming JSON-Lines writer; records are validated before writing.
class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path);
  void write(const DatasetRecord& record);
  std::size_t count() const { return count_; }
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t count_ = 0;
};

std::size_t writeRecords(const std::vector<DatasetRecord>& records,
                         const std::filesystem::path& path);

struct ReadResult {
  std::vector<DatasetRecord> records;
  std::vector<std::string> warnings;  // e.g. ignored unknown fields
};

/// Reads and validates a JSON-Lines dataset; parse or invariant failures
/// raise DatasetError carrying the line number.
ReadResult readRecords(const std::filesystem::path& path);

/// Uniformly spaced indices (first and last kept, rounding half up) applied
/// to both trajectories. Inputs shorter than `target` are an error.
std::pair<CameraTrajectory, SubjectTrajectory> windowSample(const CameraTrajectory& camera,
                                                            const SubjectTrajectory& subject,
                                                            int target = 30);

/// Seeded contiguous crop of `target` frames, for training-style sampling.
std::pair<CameraTrajectory, SubjectTrajectory> windowSampleRandom(
    const CameraTrajectory& camera, const SubjectTrajectory& subject, int target,
    std::uint64_t seed);

struct BalanceReport {
  std::size_t total = 0;
  std::size_t static_count = 0;
  std::size_t dynamic_count = 0;
  std::map<std::string, std::size_t> by_shot;
  std::map<std::string, std::size_t> by_movement;
  std::size_t total_frames = 0;
  double static_share = 0.0;  // fraction of records labeled static
  bool imbalance_flag = false;  // static share off the even split by > 2 points
};

BalanceReport balanceReport(const std::vector<DatasetRecord>& records);

}  // namespace cinetraj::dataset
