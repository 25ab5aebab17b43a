#include "cinetraj/objectives.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cinetraj/rng.hpp"

namespace cinetraj::objectives {

namespace {

void requireEqualLength(const CameraTrajectory& c, const CameraTrajectory& c_hat,
                        std::size_t minimum, const char* who) {
  if (c.frames.size() != c_hat.frames.size())
    throw std::invalid_argument(std::string(who) + ": trajectory lengths differ");
  if (c.frames.size() < minimum)
    throw std::invalid_argument(std::string(who) + ": trajectory too short");
}

double cosineSimilarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("embedding dimensions differ");
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0))
    throw std::invalid_argument("cosine similarity of a zero-norm vector");
  return a.dot(b) / (na * nb);
}

}  // namespace

double initLoss(const CameraTrajectory& c, const CameraTrajectory& c_hat,
                const DiscrepancyParams& params) {
  requireEqualLength(c, c_hat, 1, "initLoss");
  return poseDiscrepancy(c.frames.front(), c_hat.frames.front(), params);
}

double relLoss(const CameraTrajectory& c, const CameraTrajectory& c_hat,
               const DiscrepancyParams& params) {
  requireEqualLength(c, c_hat, 1, "relLoss");
  double total = 0.0;
  for (std::size_t i = 0; i < c.frames.size(); ++i)
    total += deltaDiscrepancy(poseDelta(c.frames[i], c.frames.front()),
                              poseDelta(c_hat.frames[i], c_hat.frames.front()), params);
  return total;
}

double speedLoss(const CameraTrajectory& c, const CameraTrajectory& c_hat,
                 const DiscrepancyParams& params) {
  requireEqualLength(c, c_hat, 2, "speedLoss");
  double total = 0.0;
  for (std::size_t i = 1; i < c.frames.size(); ++i)
    total += deltaDiscrepancy(poseDelta(c.frames[i], c.frames[i - 1]),
                              poseDelta(c_hat.frames[i], c_hat.frames[i - 1]), params);
  return total;
}

double clipLoss(const EmbeddingPair& enc, const EmbeddingPair& target) {
  return (1.0 - cosineSimilarity(enc.high, target.high)) +
         (1.0 - cosineSimilarity(enc.low, target.low));
}

double cycleLoss(const EmbeddingVector& enc_high, const EmbeddingVector& reenc_high) {
  return 1.0 - cosineSimilarity(enc_high, reenc_high);
}

double totalLoss(const LossComponents& c, const LossWeights& w) {
  for (double v : {c.init, c.rel, c.speed, c.clip, c.cycle})
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("totalLoss: components must be finite and non-negative");
  return c.init + w.alpha * c.rel + w.beta * c.speed + w.gamma * c.clip + w.lambda * c.cycle;
}

double scheduleValue(const ScheduleSpec& spec, int step) {
  if (spec.total_steps < 1)
    throw std::invalid_argument("scheduleValue: total_steps must be >= 1");
  if (step < 0 || step >= spec.total_steps)
    throw std::out_of_range("scheduleValue: step out of range");
  if (step == 0 || spec.total_steps == 1) return spec.start_value;
  if (step == spec.total_steps - 1) return spec.end_value;
  const double t = static_cast<double>(step) / (spec.total_steps - 1);
  return spec.start_value + (spec.end_value - spec.start_value) * t;
}

EmbeddingVector fuseTeacher(const EmbeddingVector& enc, const EmbeddingVector& target,
                            double ratio) {
  if (enc.size() != target.size())
    throw std::invalid_argument("fuseTeacher: embedding dimensions differ");
  return (1.0 - ratio) * enc + ratio * target;
}

CorruptionResult corruptTrajectory(const CameraTrajectory& traj, double mask_ratio,
                                   double noise_ratio, double noise_scale,
                                   std::uint64_t seed) {
  if (!(mask_ratio >= 0.0 && mask_ratio <= 1.0) ||
      !(noise_ratio >= 0.0 && noise_ratio <= 1.0))
    throw std::invalid_argument("corruptTrajectory: ratios must lie in [0, 1]");

  const std::size_t n = traj.frames.size();
  const auto masked_count =
      static_cast<std::size_t>(std::llround(mask_ratio * static_cast<double>(n)));

  CorruptionResult result;
  result.trajectory = traj;
  result.mask.assign(n, false);

  Rng rng(mixSeed(seed, 0xc0));
  // Partial Fisher-Yates: the first masked_count slots of a virtual shuffle.
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < masked_count; ++i) {
    const std::size_t j = i + rng.nextBelow(n - i);
    std::swap(indices[i], indices[j]);
    result.mask[indices[i]] = true;
  }

  const double half_width = noise_ratio * noise_scale;
  if (half_width > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (result.mask[i]) continue;
      const CameraPose& p = traj.frames[i];
      Vec3 dp, da;
      for (int j = 0; j < 3; ++j) dp[j] = rng.nextRange(-half_width, half_width);
      for (int j = 0; j < 3; ++j) da[j] = rng.nextRange(-half_width, half_width);
      result.trajectory.frames[i] = CameraPose(p.position + dp, p.orientation + da, p.fov);
    }
  }
  return result;
}

}  // namespace cinetraj::objectives
