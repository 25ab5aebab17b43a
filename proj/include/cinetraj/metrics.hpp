#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <vector>

#include "cinetraj/pose.hpp"

namespace cinetraj::metrics {

/// Matrix of feature/embedding vectors, one row per sample.
struct FeatureSet {
  Eigen::MatrixXd rows;

  FeatureSet() = default;
  explicit FeatureSet(Eigen::MatrixXd m);

  Eigen::Index count() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
};

struct ManifoldParams {
  int k = 5;
};

/// Frechet distance between Gaussian moment fits:
/// |mu_r - mu_g|^2 + Tr(S_r + S_g - 2 (S_r S_g)^(1/2)), with the matrix
/// square root taken through a symmetric eigendecomposition of
/// S_g^(1/2) S_r S_g^(1/2) (negative eigenvalues clipped at zero).
double fid(const FeatureSet& real, const FeatureSet& gen);

/// Exact k-th smallest Euclidean distance from row `index` to the other rows.
double knnRadius(const FeatureSet& set, int index, int k);

/// Fraction of generated rows inside the union of k-NN balls of the real set.
double precision(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p);

/// precision with the roles swapped (manifold built on the generated set).
double recall(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p);

/// Mean over generated rows of (number of real balls containing it) / k.
double density(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p);

/// Fraction of real rows whose k-NN ball contains at least one generated row.
double coverage(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p);

enum class ClipScoreMode { Mean, Sum };

/// scale * mean (or sum) of row-wise cosine similarities between paired sets.
double clipScore(const FeatureSet& traj_emb, const FeatureSet& prompt_emb,
                 double scale = 100.0, ClipScoreMode mode = ClipScoreMode::Mean);

// --- feature-set files ---
// Text mode: header "D N", then N whitespace-separated rows.
// Binary mode: magic "FSET1", little-endian uint32 D and N, then N*D float64.

FeatureSet readFeatureSet(const std::filesystem::path& path);
void writeFeatureSet(const FeatureSet& set, const std::filesystem::path& path,
                     bool binary = false);

/// Built-in trajectory featurizer: rows are (positions relative to frame 0,
/// Euler deltas from frame 0 along the shortest path, per-frame fov). All
/// trajectories must share one frame count.
Eigen::MatrixXd trajectoryFeatureMatrix(const std::vector<CameraTrajectory>& trajectories);

/// Z-scores both matrices with the reference set's per-dimension moments;
/// zero-variance dimensions are centered only.
void standardizeFeatures(Eigen::MatrixXd& reference, Eigen::MatrixXd& other);

}  // namespace cinetraj::metrics
