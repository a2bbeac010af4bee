#pragma once

#include <span>
#include <vector>

#include "kacmix/geometry.hpp"

namespace kacmix {

enum class MetricKind { Hs, Geodesic };

double metric_distance(MetricKind metric, const GroupElement& a, const GroupElement& b);
const char* metric_name(MetricKind metric);

// Equal-weight finite sample standing in for a probability measure.
struct EmpiricalMeasure {
  std::vector<GroupElement> samples;

  static EmpiricalMeasure make(std::vector<GroupElement> samples);
  std::size_t size() const { return samples.size(); }
};

struct CostMatrix {
  Eigen::MatrixXd cost;  // entry (i, j) = d(a_i, b_j)^p
  MetricKind metric = MetricKind::Hs;
  double p = 1.0;
};

CostMatrix cost_matrix(const EmpiricalMeasure& a, const EmpiricalMeasure& b, MetricKind metric,
                       double p);

struct Assignment {
  std::vector<int> permutation;  // row i matched to column permutation[i]
  double total_cost = 0.0;
};

// Exact minimum-cost perfect matching (Hungarian with Dijkstra-style
// augmentation, O(N^3)), followed by a lexicographic polish over
// equal-cost transpositions so ties resolve deterministically.
Assignment solve_assignment(const Eigen::MatrixXd& cost);
Assignment solve_assignment(const CostMatrix& cost);

// Exact W_{d,p} between two equal-weight empirical measures:
// ((1/N) * minimal assignment cost)^(1/p).
double empirical_wasserstein(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                             MetricKind metric, double p);

// Certified lower bound on W_{d,1} from the 1-Lipschitz family d(., anchor):
// max over anchors of |mean_A d(., a) - mean_B d(., a)|.
double dual_lower_bound(const EmpiricalMeasure& a, const EmpiricalMeasure& b, MetricKind metric,
                        std::span<const GroupElement> anchors);

// anchors default to the union of both sample sets
double dual_lower_bound(const EmpiricalMeasure& a, const EmpiricalMeasure& b, MetricKind metric);

}  // namespace kacmix
