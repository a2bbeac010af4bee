#include "kacmix/transport.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kacmix {

double metric_distance(MetricKind metric, const GroupElement& a, const GroupElement& b) {
  return metric == MetricKind::Hs ? hs_distance(a, b) : geodesic_distance(a, b);
}

const char* metric_name(MetricKind metric) {
  return metric == MetricKind::Hs ? "hs" : "D";
}

EmpiricalMeasure EmpiricalMeasure::make(std::vector<GroupElement> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical measure requires >= 1 sample");
  for (const auto& s : samples)
    if (s.dim() != samples.front().dim() || s.field() != samples.front().field())
      throw std::invalid_argument("empirical measure samples must share dimension and field");
  return EmpiricalMeasure{std::move(samples)};
}

CostMatrix cost_matrix(const EmpiricalMeasure& a, const EmpiricalMeasure& b, MetricKind metric,
                       double p) {
  if (a.size() != b.size())
    throw std::invalid_argument("cost_matrix requires equal sample counts");
  if (a.samples.front().dim() != b.samples.front().dim() ||
      a.samples.front().field() != b.samples.front().field())
    throw std::invalid_argument("cost_matrix requires compatible samples");
  if (p < 1.0) throw std::invalid_argument("cost_matrix requires p >= 1");
  const int n = static_cast<int>(a.size());
  CostMatrix out;
  out.metric = metric;
  out.p = p;
  out.cost.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.cost(i, j) = std::pow(metric_distance(metric, a.samples[i], b.samples[j]), p);
  return out;
}

Assignment solve_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1)
    throw std::invalid_argument("assignment requires a square cost matrix");
  if (!cost.allFinite()) throw std::invalid_argument("assignment requires finite costs");
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Hungarian algorithm with potentials; columns 1..n, virtual column 0
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[col] = row (1-based), 0 = free
  std::vector<int> way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.permutation.assign(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] > 0) out.permutation[match[j] - 1] = j - 1;

  // deterministic lexicographic polish: apply equal-cost transpositions that
  // lower the permutation in lexicographic order
  bool changed = true;
  for (int sweep = 0; sweep < n && changed; ++sweep) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) {
        const int ji = out.permutation[i];
        const int jk = out.permutation[k];
        if (jk >= ji) continue;
        if (cost(i, ji) + cost(k, jk) == cost(i, jk) + cost(k, ji)) {
          out.permutation[i] = jk;
          out.permutation[k] = ji;
          changed = true;
        }
      }
  }

  out.total_cost = 0.0;
  for (int i = 0; i < n; ++i) out.total_cost += cost(i, out.permutation[i]);
  return out;
}

Assignment solve_assignment(const CostMatrix& cost) { return solve_assignment(cost.cost); }

double empirical_wasserstein(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                             MetricKind metric, double p) {
  const CostMatrix c = cost_matrix(a, b, metric, p);
  const Assignment plan = solve_assignment(c.cost);
  return std::pow(plan.total_cost / static_cast<double>(a.size()), 1.0 / p);
}

double dual_lower_bound(const EmpiricalMeasure& a, const EmpiricalMeasure& b, MetricKind metric,
                        std::span<const GroupElement> anchors) {
  if (anchors.empty()) throw std::invalid_argument("dual_lower_bound requires anchors");
  double best = 0.0;
  for (const auto& anchor : anchors) {
    double mean_a = 0.0;
    for (const auto& s : a.samples) mean_a += metric_distance(metric, s, anchor);
    mean_a /= static_cast<double>(a.size());
    double mean_b = 0.0;
    for (const auto& s : b.samples) mean_b += metric_distance(metric, s, anchor);
    mean_b /= static_cast<double>(b.size());
    best = std::max(best, std::abs(mean_a - mean_b));
  }
  return best;
}

double dual_lower_bound(const EmpiricalMeasure& a, const EmpiricalMeasure& b, MetricKind metric) {
  std::vector<GroupElement> anchors;
  anchors.reserve(a.size() + b.size());
  anchors.insert(anchors.end(), a.samples.begin(), a.samples.end());
  anchors.insert(anchors.end(), b.samples.begin(), b.samples.end());
  return dual_lower_bound(a, b, metric, anchors);
}

}  // namespace kacmix
