#include "cinetraj/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cinetraj::metrics {

FeatureSet::FeatureSet(Eigen::MatrixXd m) : rows(std::move(m)) {
  if (!rows.allFinite())
    throw std::invalid_argument("FeatureSet: entries must be finite");
}

namespace {

void requireSameDim(const FeatureSet& a, const FeatureSet& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("feature sets have different dimensions");
}

Eigen::VectorXd meanOf(const Eigen::MatrixXd& m) { return m.colwise().mean(); }

Eigen::MatrixXd covarianceOf(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd centered = m.rowwise() - meanOf(m).transpose();
  return centered.transpose() * centered / static_cast<double>(m.rows() - 1);
}

Eigen::MatrixXd symmetricSqrt(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

void requireK(const FeatureSet& manifold_set, int k, const char* who) {
  if (k < 1 || k >= manifold_set.count())
    throw std::invalid_argument(std::string(who) +
                                ": k must satisfy 1 <= k < N of the manifold set");
}

/// Squared radius of each row's k-NN ball (self excluded).
std::vector<double> knnSquaredRadii(const FeatureSet& set, int k) {
  const Eigen::Index n = set.count();
  std::vector<double> radii(n);
  std::vector<double> dists;
  dists.reserve(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    dists.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dists.push_back((set.rows.row(i) - set.rows.row(j)).squaredNorm());
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    radii[i] = dists[k - 1];
  }
  return radii;
}

}  // namespace

double fid(const FeatureSet& real, const FeatureSet& gen) {
  requireSameDim(real, gen);
  if (real.count() < 2 || gen.count() < 2)
    throw std::invalid_argument("fid: each set needs at least two rows");
  const Eigen::VectorXd dmu = meanOf(real.rows) - meanOf(gen.rows);
  const Eigen::MatrixXd sr = covarianceOf(real.rows);
  const Eigen::MatrixXd sg = covarianceOf(gen.rows);
  const Eigen::MatrixXd sg_half = symmetricSqrt(sg);
  Eigen::MatrixXd inner = sg_half * sr * sg_half;
  inner = (inner + inner.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner);
  const double tr_sqrt = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return dmu.squaredNorm() + sr.trace() + sg.trace() - 2.0 * tr_sqrt;
}

double knnRadius(const FeatureSet& set, int index, int k) {
  if (index < 0 || index >= set.count())
    throw std::invalid_argument("knnRadius: index out of range");
  requireK(set, k, "knnRadius");
  std::vector<double> dists;
  dists.reserve(set.count() - 1);
  for (Eigen::Index j = 0; j < set.count(); ++j) {
    if (j == index) continue;
    dists.push_back((set.rows.row(index) - set.rows.row(j)).squaredNorm());
  }
  std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
  return std::sqrt(dists[k - 1]);
}

double precision(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p) {
  requireSameDim(real, gen);
  requireK(real, p.k, "precision");
  const std::vector<double> radii = knnSquaredRadii(real, p.k);
  Eigen::Index inside = 0;
  for (Eigen::Index j = 0; j < gen.count(); ++j) {
    for (Eigen::Index i = 0; i < real.count(); ++i) {
      if ((gen.rows.row(j) - real.rows.row(i)).squaredNorm() <= radii[i]) {
        ++inside;
        break;
      }
    }
  }
  return static_cast<double>(inside) / static_cast<double>(gen.count());
}

double recall(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p) {
  requireK(gen, p.k, "recall");
  return precision(gen, real, p);
}

double density(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p) {
  requireSameDim(real, gen);
  requireK(real, p.k, "density");
  const std::vector<double> radii = knnSquaredRadii(real, p.k);
  std::uint64_t memberships = 0;
  for (Eigen::Index j = 0; j < gen.count(); ++j)
    for (Eigen::Index i = 0; i < real.count(); ++i)
      if ((gen.rows.row(j) - real.rows.row(i)).squaredNorm() <= radii[i]) ++memberships;
  return static_cast<double>(memberships) /
         (static_cast<double>(p.k) * static_cast<double>(gen.count()));
}

double coverage(const FeatureSet& real, const FeatureSet& gen, const ManifoldParams& p) {
  requireSameDim(real, gen);
  requireK(real, p.k, "coverage");
  const std::vector<double> radii = knnSquaredRadii(real, p.k);
  Eigen::Index covered = 0;
  for (Eigen::Index i = 0; i < real.count(); ++i) {
    for (Eigen::Index j = 0; j < gen.count(); ++j) {
      if ((gen.rows.row(j) - real.rows.row(i)).squaredNorm() <= radii[i]) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(real.count());
}

double clipScore(const FeatureSet& traj_emb, const FeatureSet& prompt_emb, double scale,
                 ClipScoreMode mode) {
  requireSameDim(traj_emb, prompt_emb);
  if (traj_emb.count() != prompt_emb.count())
    throw std::invalid_argument("clipScore: sets must pair row for row");
  if (traj_emb.count() == 0) throw std::invalid_argument("clipScore: empty sets");
  double total = 0.0;
  for (Eigen::Index i = 0; i < traj_emb.count(); ++i) {
    const double nc = traj_emb.rows.row(i).norm();
    const double nv = prompt_emb.rows.row(i).norm();
    if (!(nc > 0.0) || !(nv > 0.0))
      throw std::invalid_argument("clipScore: zero-norm row");
    total += traj_emb.rows.row(i).dot(prompt_emb.rows.row(i)) / (nc * nv);
  }
  if (mode == ClipScoreMode::Mean) total /= static_cast<double>(traj_emb.count());
  return scale * total;
}

namespace {

constexpr char kFsetMagic[5] = {'F', 'S', 'E', 'T', '1'};

FeatureSet readBinaryFset(std::ifstream& in, const std::filesystem::path& path) {
  std::uint32_t dim = 0, count = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in) throw std::runtime_error("feature set '" + path.string() + "': truncated header");
  Eigen::MatrixXd m(count, dim);
  std::vector<double> row(dim);
  for (std::uint32_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(dim * sizeof(double)));
    if (!in)
      throw std::runtime_error("feature set '" + path.string() + "': truncated at row " +
                               std::to_string(i));
    for (std::uint32_t j = 0; j < dim; ++j) m(i, j) = row[j];
  }
  return FeatureSet(std::move(m));
}

}  // namespace

FeatureSet readFeatureSet(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open feature set '" + path.string() + "'");
  char magic[5] = {};
  in.read(magic, 5);
  if (in && std::memcmp(magic, kFsetMagic, 5) == 0) return readBinaryFset(in, path);

  in.clear();
  in.seekg(0);
  Eigen::Index dim = 0, count = 0;
  if (!(in >> dim >> count) || dim < 1 || count < 0)
    throw std::runtime_error("feature set '" + path.string() + "': bad header, expected 'D N'");
  Eigen::MatrixXd m(count, dim);
  for (Eigen::Index i = 0; i < count; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      if (!(in >> m(i, j)))
        throw std::runtime_error("feature set '" + path.string() + "': truncated at row " +
                                 std::to_string(i));
  return FeatureSet(std::move(m));
}

void writeFeatureSet(const FeatureSet& set, const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write feature set '" + path.string() + "'");
  if (binary) {
    out.write(kFsetMagic, 5);
    const auto dim = static_cast<std::uint32_t>(set.dim());
    const auto count = static_cast<std::uint32_t>(set.count());
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    std::vector<double> row(set.dim());
    for (Eigen::Index i = 0; i < set.count(); ++i) {
      for (Eigen::Index j = 0; j < set.dim(); ++j) row[j] = set.rows(i, j);
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
  } else {
    out << set.dim() << ' ' << set.count() << '\n';
    out.precision(17);
    for (Eigen::Index i = 0; i < set.count(); ++i) {
      for (Eigen::Index j = 0; j < set.dim(); ++j) {
        if (j) out << ' ';
        out << set.rows(i, j);
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing feature set '" + path.string() + "'");
}

Eigen::MatrixXd trajectoryFeatureMatrix(const std::vector<CameraTrajectory>& trajectories) {
  if (trajectories.empty())
    throw std::invalid_argument("trajectoryFeatureMatrix: no trajectories");
  const std::size_t frames = trajectories.front().frames.size();
  if (frames == 0) throw std::invalid_argument("trajectoryFeatureMatrix: empty trajectory");
  const Eigen::Index dim = static_cast<Eigen::Index>(frames) * 7;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(trajectories.size()), dim);
  for (std::size_t r = 0; r < trajectories.size(); ++r) {
    const auto& traj = trajectories[r];
    if (traj.frames.size() != frames)
      throw std::invalid_argument("trajectoryFeatureMatrix: trajectories differ in length");
    const CameraPose& first = traj.frames.front();
    Eigen::Index c = 0;
    for (const CameraPose& p : traj.frames) {
      const Vec3 dp = p.position - first.position;
      for (int j = 0; j < 3; ++j) m(static_cast<Eigen::Index>(r), c++) = dp[j];
      for (int j = 0; j < 3; ++j)
        m(static_cast<Eigen::Index>(r), c++) = wrapAngle(p.orientation[j] - first.orientation[j]);
      m(static_cast<Eigen::Index>(r), c++) = p.fov;
    }
  }
  return m;
}

void standardizeFeatures(Eigen::MatrixXd& reference, Eigen::MatrixXd& other) {
  if (reference.cols() != other.cols())
    throw std::invalid_argument("standardizeFeatures: dimension mismatch");
  const Eigen::RowVectorXd mu = reference.colwise().mean();
  Eigen::RowVectorXd sigma =
      ((reference.rowwise() - mu).array().square().colwise().sum() /
       std::max<double>(1.0, static_cast<double>(reference.rows() - 1)))
          .sqrt();
  for (Eigen::Index j = 0; j < sigma.size(); ++j)
    if (!(sigma(j) > 0.0)) sigma(j) = 1.0;
  reference = (reference.rowwise() - mu).array().rowwise() / sigma.array();
  other = (other.rowwise() - mu).array().rowwise() / sigma.array();
}

}  // namespace cinetraj::metrics
