#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "cinetraj/pose.hpp"

namespace cinetraj::objectives {

using EmbeddingVector = Eigen::VectorXd;

/// High/low-level embedding pair produced by the encoder or its target.
struct EmbeddingPair {
  EmbeddingVector high;
  EmbeddingVector low;
};

struct LossWeights {
  double alpha = 8.0;
  double beta = 20.0;
  double gamma = 50.0;
  double lambda = 5.0;
};

struct LossComponents {
  double init = 0.0;
  double rel = 0.0;
  double speed = 0.0;
  double clip = 0.0;
  double cycle = 0.0;
};

/// Discrepancy of the first frame pair.
double initLoss(const CameraTrajectory& c, const CameraTrajectory& c_hat,
                const DiscrepancyParams& params = {});

/// Sum over frames of the discrepancy between first-frame-anchored
/// displacement poses; invariant under a constant offset of either input.
double relLoss(const CameraTrajectory& c, const CameraTrajectory& c_hat,
               const DiscrepancyParams& params = {});

/// Sum over consecutive-frame delta poses; requires length >= 2.
double speedLoss(const CameraTrajectory& c, const CameraTrajectory& c_hat,
                 const DiscrepancyParams& params = {});

/// Sum over {high, low} of (1 - cosine similarity); range [0, 4].
double clipLoss(const EmbeddingPair& enc, const EmbeddingPair& target);

/// 1 - cosine similarity of the high-level features; range [0, 2].
double cycleLoss(const EmbeddingVector& enc_high, const EmbeddingVector& reenc_high);

/// init + alpha*rel + beta*speed + gamma*clip + lambda*cycle.
double totalLoss(const LossComponents& components, const LossWeights& weights = {});

struct ScheduleSpec {
  double start_value = 0.0;
  double end_value = 1.0;
  int total_steps = 1;
};

/// Linear ramp: step 0 -> start_value, step total_steps-1 -> end_value.
/// A single-step schedule holds start_value.
double scheduleValue(const ScheduleSpec& spec, int step);

// Progressive-training schedules with the standard endpoints.
inline ScheduleSpec maskingSchedule(int total_steps) { return {0.1, 0.8, total_steps}; }
inline ScheduleSpec noiseSchedule(int total_steps) { return {1.0, 0.0, total_steps}; }
inline ScheduleSpec teacherForcingSchedule(int total_steps) { return {0.7, 1.0, total_steps}; }

/// Convex combination (1 - ratio) * enc + ratio * target.
EmbeddingVector fuseTeacher(const EmbeddingVector& enc, const EmbeddingVector& target,
                            double ratio);

struct CorruptionResult {
  CameraTrajectory trajectory;
  /// mask[i] is true for frames flagged masked; those frames keep their
  /// original values so corruption stays invertible.
  std::vector<bool> mask;
};

/// Flags round(mask_ratio * N) frames (seeded draw without replacement) and
/// perturbs the remaining frames' position and Euler components with
/// zero-mean uniform noise of half-width noise_ratio * noise_scale.
CorruptionResult corruptTrajectory(const CameraTrajectory& traj, double mask_ratio,
                                   double noise_ratio, double noise_scale,
                                   std::uint64_t seed);

}  // namespace cinetraj::objectives
