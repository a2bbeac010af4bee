#include "kacmix/dimreduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kacmix/parallel.hpp"

namespace kacmix {

PointCloud PointCloud::make(std::vector<Eigen::VectorXd> points, std::vector<std::string> labels) {
  if (points.empty()) throw std::invalid_argument("point cloud requires points");
  for (const auto& p : points)
    if (p.size() != points.front().size())
      throw std::invalid_argument("point cloud requires uniform dimension");
  if (!labels.empty() && labels.size() != points.size())
    throw std::invalid_argument("labels must be empty or one per point");
  return PointCloud{std::move(points), std::move(labels)};
}

int PointCloud::dim() const { return static_cast<int>(points.front().size()); }

PointCloud gaussian_cloud(int n, int count, std::uint64_t seed) {
  if (n < 1 || count < 1) throw std::invalid_argument("gaussian cloud requires n, count >= 1");
  RngStream rng(seed, 0);
  std::vector<Eigen::VectorXd> points(count);
  std::vector<std::string> labels(count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd p(n);
    for (int c = 0; c < n; ++c) p(c) = rng.next_gaussian();
    points[k] = std::move(p);
    labels[k] = "p" + std::to_string(k);
  }
  return PointCloud::make(std::move(points), std::move(labels));
}

namespace {

PointCloud project_and_scale(const PointCloud& cloud, int k, int n) {
  const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(k));
  std::vector<Eigen::VectorXd> reduced(cloud.size());
  for (std::size_t idx = 0; idx < cloud.size(); ++idx)
    reduced[idx] = scale * cloud.points[idx].head(k);
  return PointCloud::make(std::move(reduced), cloud.labels);
}

}  // namespace

PointCloud kac_jl_transform(const PointCloud& cloud, int k, std::int64_t t, std::uint64_t seed,
                            int threads) {
  const int n = cloud.dim();
  if (k < 1 || k > n) throw std::invalid_argument("target dimension must satisfy 1 <= k <= n");
  if (t < 0) throw std::invalid_argument("step count must be nonnegative");

  // one shared step sequence for the whole cloud
  std::vector<PlanarStep> steps;
  steps.reserve(static_cast<std::size_t>(t));
  RngStream rng(seed, 0);
  for (std::int64_t s = 0; s < t; ++s) steps.push_back(sample_kac_step(n, rng));

  PointCloud rotated = cloud;
  parallel_for(static_cast<std::int64_t>(cloud.size()), threads, [&](std::int64_t idx) {
    Eigen::VectorXd& v = rotated.points[idx];
    for (const PlanarStep& s : steps) apply_step_to_vector(v, s);
  });
  return project_and_scale(rotated, k, n);
}

PointCloud haar_jl_baseline(const PointCloud& cloud, int k, std::uint64_t seed) {
  const int n = cloud.dim();
  if (k < 1 || k > n) throw std::invalid_argument("target dimension must satisfy 1 <= k <= n");
  RngStream rng(seed, 0);
  const GroupElement x = haar_sample(n, Field::RealOrthogonal, rng);
  PointCloud rotated = cloud;
  for (auto& v : rotated.points) v = x.real() * v;
  return project_and_scale(rotated, k, n);
}

Eigen::MatrixXd stiefel_project(const GroupElement& x, int k) {
  if (!x.is_real()) throw std::invalid_argument("Stiefel projection is defined for SO(n) elements");
  if (k < 1 || k > x.dim()) throw std::invalid_argument("row count must satisfy 1 <= k <= n");
  return x.real().transpose().topRows(k);
}

double DistortionReport::epsilon_observed() const {
  return std::max(std::abs(max_ratio - 1.0), std::abs(1.0 - min_ratio));
}

DistortionReport distortion_report(const PointCloud& original, const PointCloud& reduced) {
  if (original.size() != reduced.size() || original.size() < 2)
    throw std::invalid_argument("distortion report requires two matching clouds with >= 2 points");
  if (original.labels != reduced.labels)
    throw std::invalid_argument("distortion report requires matching labels");
  DistortionReport report;
  report.min_ratio = std::numeric_limits<double>::infinity();
  report.max_ratio = 0.0;
  for (std::size_t a = 0; a < original.size(); ++a)
    for (std::size_t b = a + 1; b < original.size(); ++b) {
      const double denom = (original.points[a] - original.points[b]).norm();
      if (denom == 0.0) throw std::invalid_argument("duplicate original points");
      const double ratio = (reduced.points[a] - reduced.points[b]).norm() / denom;
      report.min_ratio = std::min(report.min_ratio, ratio);
      report.max_ratio = std::max(report.max_ratio, ratio);
    }
  return report;
}

}  // namespace kacmix
