#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kacmix/geometry.hpp"
#include "kacmix/walks.hpp"

namespace kacmix {

struct PointCloud {
  std::vector<Eigen::VectorXd> points;
  std::vector<std::string> labels;  // empty or one per point

  static PointCloud make(std::vector<Eigen::VectorXd> points,
                         std::vector<std::string> labels = {});
  int dim() const;
  std::size_t size() const { return points.size(); }
};

// random Gaussian cloud (test/benchmark input)
PointCloud gaussian_cloud(int n, int count, std::uint64_t seed);

// Streaming Kac-rotation dimension reduction: t shared rotation steps applied
// to every point through the O(1)-memory coordinate updates, then the first k
// coordinates scaled by sqrt(n/k). The step sequence matches
// run_walk(id, t, {kind: kac, seed}) exactly.
PointCloud kac_jl_transform(const PointCloud& cloud, int k, std::int64_t t, std::uint64_t seed,
                            int threads = 1);

// Exact-Haar rotation followed by the same projection and scaling.
PointCloud haar_jl_baseline(const PointCloud& cloud, int k, std::uint64_t seed);

// First k rows of x^dagger: a point on the Stiefel manifold V_k(R^n).
Eigen::MatrixXd stiefel_project(const GroupElement& x, int k);

struct DistortionReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int k = 0;
  std::int64_t t = 0;
  std::uint64_t seed = 0;

  // observed JL distortion level
  double epsilon_observed() const;
};

// min/max over point pairs of |reduced difference| / |original difference|
DistortionReport distortion_report(const PointCloud& original, const PointCloud& reduced);

}  // namespace kacmix
